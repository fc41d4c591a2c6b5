#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace denaturefit {

// Physical constants used throughout the model. The gas constant is in
// kJ mol^-1 K^-1 so free energies come out in kJ/mol and m-values in
// kJ mol^-1 M^-1.
struct ModelConstants {
    double gas_constant = 8.3145e-3;
    double temperature = 298.15;

    double rt() const { return gas_constant * temperature; }

    void validate() const {
        if (!(temperature > 0.0))
            throw std::invalid_argument("temperature must be positive");
        if (!(gas_constant > 0.0))
            throw std::invalid_argument("gas constant must be positive");
    }
};

struct DataPoint {
    double denaturant = 0.0;
    double signal = 0.0;
};

// One denaturation curve: spectroscopic signal vs denaturant concentration.
// Concentrations must be non-negative; ordering is not required.
class DenaturationDataset {
public:
    DenaturationDataset() = default;
    explicit DenaturationDataset(std::vector<DataPoint> points)
        : points_(std::move(points)) {
        validate();
    }

    void add(double denaturant, double signal) {
        points_.push_back({denaturant, signal});
        if (!(denaturant >= 0.0))
            throw std::invalid_argument("denaturant concentration must be >= 0");
    }

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const DataPoint& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<DataPoint>& points() const { return points_; }

    double denaturant(std::size_t i) const { return points_[i].denaturant; }
    double signal(std::size_t i) const { return points_[i].signal; }

    void validate() const {
        for (const auto& p : points_)
            if (!(p.denaturant >= 0.0))
                throw std::invalid_argument("denaturant concentration must be >= 0");
    }

private:
    std::vector<DataPoint> points_;
};

// ---------------------------------------------------------------------------
// Error taxonomy. Hard numerical failures are exceptions; recoverable
// conditions (a Monte Carlo round that fails to converge) are counted flags.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cholesky pivot went non-positive: matrix is not positive definite.
struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(std::size_t pivot_index)
        : Error("matrix not positive definite at pivot " + std::to_string(pivot_index)),
          pivot(pivot_index) {}
    std::size_t pivot;
};

// Damped normal equations stayed indefinite even at maximum damping.
struct SingularNormalMatrix : Error {
    using Error::Error;
};

// Parameter conversion would divide by zero (m == 0 or d50 == 0).
struct DegenerateConversion : Error {
    using Error::Error;
};

// Signal carries no usable transition (constant within noise floor).
struct FlatDataError : Error {
    using Error::Error;
};

// Confidence bound search walked off its bracket without crossing.
struct BoundNotFound : Error {
    using Error::Error;
};

// Too many resampling rounds failed to converge for the result to be trusted.
struct ExcessiveFailures : Error {
    ExcessiveFailures(std::size_t failed_count, std::size_t total)
        : Error(std::to_string(failed_count) + " of " + std::to_string(total) +
                " resampling rounds failed to converge"),
          failed(failed_count), requested(total) {}
    std::size_t failed;
    std::size_t requested;
};

// A variance needed for normalisation is zero or negative.
struct ZeroVariance : Error {
    using Error::Error;
};

// Text input could not be parsed; line is 1-based.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line_number)
        : Error(what + " (line " + std::to_string(line_number) + ")"),
          line(line_number) {}
    std::size_t line;
};

// A file could not be opened, read, or written.
struct IoError : Error {
    using Error::Error;
};

}  // namespace denaturefit
