// Command-line front end: synthetic data generation, curve fitting,
// confidence intervals, profile traces, coverage calibration, and error
// propagation. Every command is deterministic given its full flag set.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "denaturefit/calibration.hpp"
#include "denaturefit/confidence.hpp"
#include "denaturefit/io.hpp"
#include "denaturefit/kernels.hpp"
#include "denaturefit/lm.hpp"
#include "denaturefit/synthdata.hpp"

using json = nlohmann::ordered_json;
using namespace denaturefit;

namespace {

constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Shared option bundles

struct SeedOpt {
    std::optional<std::uint32_t> value;

    std::uint32_t resolve() const {
        if (value) return *value;
        if (const char* env = std::getenv("DENATUREFIT_SEED")) {
            char* end = nullptr;
            const unsigned long v = std::strtoul(env, &end, 10);
            if (end && *end == '\0') return static_cast<std::uint32_t>(v);
            throw CLI::ValidationError("DENATUREFIT_SEED",
                                       "must be an unsigned integer");
        }
        return 1u;
    }
};

void add_seed(CLI::App* cmd, SeedOpt& seed) {
    cmd->add_option("--seed", seed.value,
                    "RNG master seed (default: $DENATUREFIT_SEED or 1)");
}

struct FormOpt {
    std::string name = "m-d50";
    LemForm resolve() const { return parse_lem_form(name); }
};

void add_form(CLI::App* cmd, FormOpt& form) {
    cmd->add_option("--form", form.name, "free-energy parameterization")
        ->check(CLI::IsMember({"dg0-m", "m-d50", "dg0-d50"}))
        ->capture_default_str();
}

struct NoiseOpt {
    std::string kind = "gaussian";
    double sigma = 10.0;
    std::optional<double> gamma;
    double median = 0.0;
    double cutoff = 200.0;

    NoiseSpec resolve() const {
        if (kind == "gaussian") return NoiseSpec::gaussian_noise(sigma);
        const double g = gamma ? *gamma : NoiseSpec::gamma_matching_sigma(sigma);
        return NoiseSpec::lorentzian_noise(median, g, cutoff);
    }
};

void add_noise(CLI::App* cmd, NoiseOpt& noise) {
    cmd->add_option("--noise", noise.kind, "noise family")
        ->check(CLI::IsMember({"gaussian", "lorentzian"}))
        ->capture_default_str();
    cmd->add_option("--sigma", noise.sigma,
                    "gaussian standard deviation; also sets the default "
                    "lorentzian half-width via sigma*sqrt(2 ln 2)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--gamma", noise.gamma,
                    "lorentzian half-width at half-maximum");
    cmd->add_option("--median", noise.median, "lorentzian location")
        ->capture_default_str();
    cmd->add_option("--cutoff", noise.cutoff,
                    "lorentzian draws are redrawn beyond this distance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

struct ConstantsOpt {
    double temperature = ModelConstants{}.temperature;
    ModelConstants resolve() const {
        ModelConstants c;
        c.temperature = temperature;
        c.validate();
        return c;
    }
};

void add_constants(CLI::App* cmd, ConstantsOpt& c) {
    cmd->add_option("--temperature", c.temperature, "temperature in kelvin")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

double check_level(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw CLI::ValidationError("--level", "must be strictly between 0 and 1");
    return level;
}

// ---------------------------------------------------------------------------
// Report building blocks

const char* param_label(LemForm form, std::size_t index) {
    static const char* kBaseline[] = {"a0", "a1", "b0", "b1"};
    if (index < 4) return kBaseline[index];
    return param_name(form, static_cast<int>(index - 4)).data();
}

json matrix_json(const SymMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.order(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.order(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json interval_json(LemForm form, std::size_t index, const ConfidenceInterval& ci) {
    return json{{"parameter", param_label(form, index)},
                {"index", index},
                {"lower", ci.lower},
                {"upper", ci.upper},
                {"center", ci.center},
                {"width", ci.width()}};
}

json fit_json(const FitResult& fit) {
    const LemForm form = fit.params.lem.form;
    const auto values = fit.params.as_array();
    json params;
    for (std::size_t i = 0; i < kParamCount; ++i)
        params[param_label(form, i)] = values[i];

    const LemTriple triple = to_triple(fit.params.lem);
    json out{{"form", std::string(to_string(form))},
             {"converged", fit.converged},
             {"iterations", fit.iterations},
             {"n", fit.n},
             {"dof", fit.dof},
             {"sse", fit.sse},
             {"s2", fit.s2},
             {"parameters", std::move(params)},
             {"triple", {{"dg0", triple.dg0}, {"m", triple.m}, {"d50", triple.d50}}}};
    if (fit.has_covariance) {
        out["covariance"] = matrix_json(fit.covariance);
        out["correlation"] = matrix_json(fit.correlation);
        json intervals;
        for (const auto& [label, level] :
             {std::pair<const char*, double>{"0.683", 0.683}, {"0.95", 0.95}}) {
            json list = json::array();
            for (std::size_t i = 0; i < kParamCount; ++i)
                list.push_back(interval_json(form, i, marginal_ci(fit, i, level)));
            intervals[label] = std::move(list);
        }
        out["marginal_intervals"] = std::move(intervals);
    } else {
        out["covariance"] = nullptr;
        out["correlation"] = nullptr;
    }
    return out;
}

json noise_json(const NoiseSpec& n) {
    if (n.kind == NoiseSpec::Kind::Gaussian)
        return json{{"kind", "gaussian"}, {"sigma", n.sigma}};
    return json{{"kind", "lorentzian"},
                {"median", n.median},
                {"gamma", n.gamma},
                {"cutoff", n.cutoff}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("failed writing " + path);
}

void emit_report(const json& report, const std::string& out_path, bool to_stdout,
                 const std::string& summary) {
    const std::string text = report.dump(2) + "\n";
    if (!out_path.empty()) write_text(out_path, text);
    if (to_stdout)
        std::fputs(text.c_str(), stdout);
    else
        std::fputs(summary.c_str(), stdout);
}

std::string fit_summary(const FitResult& fit) {
    const LemForm form = fit.params.lem.form;
    const auto values = fit.params.as_array();
    char buf[256];
    std::string s;
    std::snprintf(buf, sizeof buf, "form %s: %s after %d iterations, sse %.6g (dof %zu)\n",
                  std::string(to_string(form)).c_str(),
                  fit.converged ? "converged" : "NOT converged", fit.iterations,
                  fit.sse, fit.dof);
    s += buf;
    for (std::size_t i = 0; i < kParamCount; ++i) {
        if (fit.has_covariance) {
            std::snprintf(buf, sizeof buf, "  %-4s = %12.6g  +- %.4g\n",
                          param_label(form, i), values[i],
                          std::sqrt(fit.covariance(i, i)));
        } else {
            std::snprintf(buf, sizeof buf, "  %-4s = %12.6g\n",
                          param_label(form, i), values[i]);
        }
        s += buf;
    }
    const LemTriple t = to_triple(fit.params.lem);
    std::snprintf(buf, sizeof buf, "  dg0 %.6g, m %.6g, d50 %.6g\n", t.dg0, t.m,
                  t.d50);
    s += buf;
    return s;
}

// ---------------------------------------------------------------------------
// Commands

struct FitCmd {
    std::string in, out;
    bool json_stdout = false;
    FormOpt form;
    ConstantsOpt constants;

    int run() const {
        const ModelConstants c = constants.resolve();
        const DenaturationDataset data = io::read_dataset_csv(in);
        const FitResult fit = fit_dataset(data, form.resolve(), c);
        json report{{"schema_version", kSchemaVersion}, {"command", "fit"}};
        report.update(fit_json(fit));
        emit_report(report, out, json_stdout, fit_summary(fit));
        return fit.converged ? 0 : 3;
    }
};

struct SynthCmd {
    double m = 6.0, d50 = 4.0;
    int n_span = 20, n_transition = 10;
    bool no_duplicate = false;
    std::string out;
    std::string truth_out;
    SeedOpt seed;
    NoiseOpt noise;
    ConstantsOpt constants;

    void write_one(const SyntheticSpec& spec, std::uint32_t stream_seed,
                   const std::string& csv_path, const std::string& truth_path) const {
        RngStream rng(stream_seed);
        const SyntheticDataset ds = generate(spec, rng);
        io::write_dataset_csv(csv_path, ds.data,
                              "two-state denaturation curve, synthetic");
        const LemTriple t = to_triple(ds.truth.lem);
        json truth{{"schema_version", kSchemaVersion},
                   {"command", "synth"},
                   {"seed", stream_seed},
                   {"noise", noise_json(spec.noise)},
                   {"truth",
                    {{"a0", spec.a0},
                     {"a1", spec.a1},
                     {"b0", spec.b0},
                     {"b1", spec.b1},
                     {"m", t.m},
                     {"d50", t.d50},
                     {"dg0", t.dg0}}},
                   {"n_points", ds.data.size()}};
        write_text(truth_path, truth.dump(2) + "\n");
    }

    SyntheticSpec spec_for(double m_v, double d50_v) const {
        SyntheticSpec spec;
        spec.m = m_v;
        spec.d50 = d50_v;
        spec.n_span = n_span;
        spec.n_transition = n_transition;
        spec.duplicate = !no_duplicate;
        spec.noise = noise.resolve();
        spec.constants = constants.resolve();
        return spec;
    }

    int run() const {
        const std::string truth_path =
            truth_out.empty() ? out + ".truth.json" : truth_out;
        write_one(spec_for(m, d50), seed.resolve(), out, truth_path);
        std::printf("wrote %s (truth: %s)\n", out.c_str(), truth_path.c_str());
        return 0;
    }
};

struct SynthGridCmd {
    std::string outdir;
    SeedOpt seed;
    NoiseOpt noise;
    ConstantsOpt constants;

    int run() const {
        SynthCmd base;
        base.noise = noise;
        base.constants = constants;
        const std::uint32_t master = seed.resolve();
        const auto grid = standard_grid();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            char name[64];
            std::snprintf(name, sizeof name, "grid_m%g_d50_%g.csv", grid[i].m,
                          grid[i].d50);
            const std::string csv = outdir + "/" + name;
            base.write_one(base.spec_for(grid[i].m, grid[i].d50),
                           substream_seed(master, static_cast<std::uint32_t>(i)),
                           csv, csv + ".truth.json");
            std::printf("wrote %s\n", csv.c_str());
        }
        return 0;
    }
};

struct CiCmd {
    std::string in, out, ensemble_out;
    bool json_stdout = false;
    std::string method = "marginal";
    double level = 0.683;
    std::size_t rounds = 500;
    FormOpt form;
    SeedOpt seed;
    ConstantsOpt constants;

    int run() const {
        check_level(level);
        const CiMethod m = parse_ci_method(method);
        const ModelConstants c = constants.resolve();
        const DenaturationDataset data = io::read_dataset_csv(in);
        const LemForm f = form.resolve();
        const FitResult fit = fit_dataset(data, f, c);
        if (!fit.converged) throw Error("base fit did not converge");

        json report{{"schema_version", kSchemaVersion},
                    {"command", "ci"},
                    {"form", std::string(to_string(f))},
                    {"method", method},
                    {"level", level}};
        json list = json::array();
        std::string summary;
        char buf[160];

        if (m == CiMethod::Marginal || m == CiMethod::Search) {
            for (std::size_t i = 0; i < kParamCount; ++i) {
                const ConfidenceInterval ci =
                    m == CiMethod::Marginal ? marginal_ci(fit, i, level)
                                            : search_ci(data, fit, i, level, c);
                list.push_back(interval_json(f, i, ci));
                std::snprintf(buf, sizeof buf, "  %-4s in [%.6g, %.6g]\n",
                              param_label(f, i), ci.lower, ci.upper);
                summary += buf;
            }
        } else {
            const McMode mode = m == CiMethod::MonteCarlo ? McMode::GaussianNoise
                                                          : McMode::Bootstrap;
            const std::uint32_t s = seed.resolve();
            RngStream rng(s);
            const McResult r = monte_carlo_ci(data, fit, level, mode, rounds, rng, c);
            report["rounds"] = rounds;
            report["seed"] = s;
            report["failed_rounds"] = r.ensemble.n_failed;
            for (std::size_t i = 0; i < kParamCount; ++i) {
                list.push_back(interval_json(f, i, r.intervals[i]));
                std::snprintf(buf, sizeof buf, "  %-4s in [%.6g, %.6g]\n",
                              param_label(f, i), r.intervals[i].lower,
                              r.intervals[i].upper);
                summary += buf;
            }
            if (!ensemble_out.empty()) {
                std::string csv = "a0,a1,b0,b1,p1,p2,dg0,m,d50\n";
                for (std::size_t k = 0; k < r.ensemble.rounds.size(); ++k) {
                    const auto& p = r.ensemble.rounds[k];
                    const LemTriple& t = r.ensemble.triples[k];
                    for (double v : p) {
                        csv += io::format_double(v);
                        csv += ',';
                    }
                    csv += io::format_double(t.dg0);
                    csv += ',';
                    csv += io::format_double(t.m);
                    csv += ',';
                    csv += io::format_double(t.d50);
                    csv += '\n';
                }
                write_text(ensemble_out, csv);
            }
        }
        report["intervals"] = std::move(list);
        char head[120];
        std::snprintf(head, sizeof head, "%s intervals at level %g (form %s):\n",
                      method.c_str(), level, std::string(to_string(f)).c_str());
        emit_report(report, out, json_stdout, std::string(head) + summary);
        return 0;
    }
};

struct ProfileCmd {
    std::string in, out;
    std::string param = "p1";
    double lo = 0.0, hi = 0.0;
    std::size_t steps = 11;
    FormOpt form;
    ConstantsOpt constants;

    int run() const {
        if (!(lo < hi)) throw CLI::ValidationError("--lo/--hi", "need lo < hi");
        if (steps < 2) throw CLI::ValidationError("--steps", "need at least 2");
        const ModelConstants c = constants.resolve();
        const DenaturationDataset data = io::read_dataset_csv(in);
        const LemForm f = form.resolve();
        const std::size_t index = param == "p1" ? 4 : 5;

        std::vector<double> grid(steps);
        for (std::size_t i = 0; i < steps; ++i)
            grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                               static_cast<double>(steps - 1);

        const FitResult fit = fit_dataset(data, f, c);
        if (!fit.converged) throw Error("base fit did not converge");
        const ProfileTrace trace = profile_trace(data, fit, index, grid, c);

        std::string csv = "# form ";
        csv += to_string(f);
        csv += ", fixed ";
        csv += param_name(f, static_cast<int>(index - 4));
        csv += ", partner ";
        csv += param_name(f, static_cast<int>(5 - index));
        csv += "\nfixed,partner,sse,converged\n";
        for (const ProfilePoint& pt : trace.points) {
            csv += io::format_double(pt.value);
            csv += ',';
            csv += io::format_double(pt.partner);
            csv += ',';
            csv += io::format_double(pt.sse);
            csv += ',';
            csv += pt.converged ? '1' : '0';
            csv += '\n';
        }
        if (out.empty())
            std::fputs(csv.c_str(), stdout);
        else
            write_text(out, csv);
        return 0;
    }
};

struct CalibrateCmd {
    std::string out, csv_out;
    bool json_stdout = false;
    std::string method = "marginal";
    double level = 0.683;
    std::size_t trials = 100;
    std::size_t mc_rounds = 100;
    double true_m = 6.0, true_d50 = 4.0;
    SeedOpt seed;
    NoiseOpt noise;
    ConstantsOpt constants;

    int run() const {
        check_level(level);
        const CiMethod m = parse_ci_method(method);
        CoverageOptions opts;
        opts.n_trials = trials;
        opts.mc_rounds = mc_rounds;
        opts.true_m = true_m;
        opts.true_d50 = true_d50;
        opts.constants = constants.resolve();
        const std::uint32_t s = seed.resolve();
        const CoverageReport r =
            coverage_experiment(m, level, noise.resolve(), s, opts);

        json cells = json::array();
        std::string csv = "form,parameter,true_value,hits,counted,fraction\n";
        std::string summary;
        char buf[160];
        for (std::size_t i = 0; i < r.cells.size(); ++i) {
            const CoverageCell& cell = r.cells[i];
            const char* label =
                param_name(cell.form, static_cast<int>(cell.param_index - 4)).data();
            cells.push_back(json{{"form", std::string(to_string(cell.form))},
                                 {"parameter", label},
                                 {"true_value", cell.true_value},
                                 {"hits", cell.hits},
                                 {"fraction", r.fraction(i)}});
            csv += std::string(to_string(cell.form)) + "," + label + "," +
                   io::format_double(cell.true_value) + "," +
                   std::to_string(cell.hits) + "," + std::to_string(r.counted()) +
                   "," + io::format_double(r.fraction(i)) + "\n";
            std::snprintf(buf, sizeof buf, "  %-8s %-4s: %zu/%zu = %.3f\n",
                          std::string(to_string(cell.form)).c_str(), label,
                          cell.hits, r.counted(), r.fraction(i));
            summary += buf;
        }
        json report{{"schema_version", kSchemaVersion},
                    {"command", "calibrate"},
                    {"method", method},
                    {"noise", noise_json(noise.resolve())},
                    {"level", level},
                    {"trials", trials},
                    {"mc_rounds", mc_rounds},
                    {"seed", s},
                    {"excluded", r.excluded},
                    {"flagged", r.flagged},
                    {"cells", std::move(cells)}};
        if (!csv_out.empty()) write_text(csv_out, csv);
        char head[120];
        std::snprintf(head, sizeof head,
                      "coverage of %s at level %g over %zu trials (%zu excluded):\n",
                      method.c_str(), level, trials, r.excluded);
        emit_report(report, out, json_stdout, std::string(head) + summary);
        return 0;
    }
};

struct PropagateCmd {
    double x1 = 0.0, x2 = 0.0, s1 = 0.0, s2 = 0.0, cov = 0.0;
    std::string relation = "product";
    std::string weight = "doubled";
    std::string out;
    bool json_stdout = false;

    int run() const {
        const Relation rel =
            relation == "product" ? Relation::Product : Relation::Ratio;
        const CovTermWeight w = weight == "doubled" ? CovTermWeight::Doubled
                                : weight == "single" ? CovTermWeight::Single
                                                     : CovTermWeight::Omitted;
        const double sigma = propagate_error(x1, x2, s1, s2, cov, rel, w);
        json report{{"schema_version", kSchemaVersion},
                    {"command", "propagate"},
                    {"relation", relation},
                    {"cov_weight", weight},
                    {"inputs",
                     {{"x1", x1}, {"s1", s1}, {"x2", x2}, {"s2", s2}, {"cov", cov}}},
                    {"sigma", sigma}};
        char buf[64];
        std::snprintf(buf, sizeof buf, "sigma = %.17g\n", sigma);
        emit_report(report, out, json_stdout, buf);
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-state denaturation curve fitting and interval calibration"};
    app.require_subcommand(1);

    std::string kernel = "auto";
    app.add_option("--kernel", kernel, "compute backend")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    FitCmd fit;
    {
        CLI::App* cmd = app.add_subcommand("fit", "fit one dataset");
        cmd->add_option("--in", fit.in, "input CSV")->required();
        cmd->add_option("--out", fit.out, "write JSON report here");
        cmd->add_flag("--json", fit.json_stdout, "print the JSON report to stdout");
        add_form(cmd, fit.form);
        add_constants(cmd, fit.constants);
    }

    SynthCmd synth;
    {
        CLI::App* cmd = app.add_subcommand("synth", "generate one synthetic dataset");
        cmd->add_option("--m", synth.m, "slope of the free-energy line")
            ->capture_default_str();
        cmd->add_option("--d50", synth.d50, "transition midpoint")
            ->capture_default_str();
        cmd->add_option("--n-span", synth.n_span, "points across the window")
            ->capture_default_str();
        cmd->add_option("--n-transition", synth.n_transition,
                        "points across the transition")
            ->capture_default_str();
        cmd->add_flag("--no-duplicate", synth.no_duplicate,
                      "measure each design point once instead of twice");
        cmd->add_option("--out", synth.out, "output CSV")->required();
        cmd->add_option("--truth-out", synth.truth_out,
                        "truth sidecar path (default: <out>.truth.json)");
        add_seed(cmd, synth.seed);
        add_noise(cmd, synth.noise);
        add_constants(cmd, synth.constants);
    }

    SynthGridCmd grid;
    {
        CLI::App* cmd =
            app.add_subcommand("synth-grid", "generate the nine standard datasets");
        cmd->add_option("--outdir", grid.outdir, "output directory")->required();
        add_seed(cmd, grid.seed);
        add_noise(cmd, grid.noise);
        add_constants(cmd, grid.constants);
    }

    CiCmd ci;
    {
        CLI::App* cmd = app.add_subcommand("ci", "confidence intervals for a fit");
        cmd->add_option("--in", ci.in, "input CSV")->required();
        cmd->add_option("--out", ci.out, "write JSON report here");
        cmd->add_flag("--json", ci.json_stdout, "print the JSON report to stdout");
        cmd->add_option("--method", ci.method, "marginal, search, mc or bootstrap")
            ->capture_default_str();
        cmd->add_option("--level", ci.level, "confidence level")
            ->capture_default_str();
        cmd->add_option("--rounds", ci.rounds, "resampling rounds for mc/bootstrap")
            ->capture_default_str();
        cmd->add_option("--ensemble-out", ci.ensemble_out,
                        "write the resampling ensemble CSV here");
        add_form(cmd, ci.form);
        add_seed(cmd, ci.seed);
        add_constants(cmd, ci.constants);
    }

    ProfileCmd profile;
    {
        CLI::App* cmd = app.add_subcommand("profile", "SSE profile trace");
        cmd->add_option("--in", profile.in, "input CSV")->required();
        cmd->add_option("--out", profile.out, "output CSV (default stdout)");
        cmd->add_option("--param", profile.param, "which line parameter to fix")
            ->check(CLI::IsMember({"p1", "p2"}))
            ->capture_default_str();
        cmd->add_option("--lo", profile.lo, "grid start")->required();
        cmd->add_option("--hi", profile.hi, "grid end")->required();
        cmd->add_option("--steps", profile.steps, "grid size")
            ->capture_default_str();
        add_form(cmd, profile.form);
        add_constants(cmd, profile.constants);
    }

    CalibrateCmd calibrate;
    {
        CLI::App* cmd =
            app.add_subcommand("calibrate", "empirical coverage experiment");
        cmd->add_option("--method", calibrate.method,
                        "marginal, search, mc or bootstrap")
            ->capture_default_str();
        cmd->add_option("--level", calibrate.level, "confidence level")
            ->capture_default_str();
        cmd->add_option("--trials", calibrate.trials, "number of synthetic trials")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--mc-rounds", calibrate.mc_rounds,
                        "rounds per interval for mc/bootstrap")
            ->capture_default_str();
        cmd->add_option("--true-m", calibrate.true_m, "generating slope")
            ->capture_default_str();
        cmd->add_option("--true-d50", calibrate.true_d50, "generating midpoint")
            ->capture_default_str();
        cmd->add_option("--out", calibrate.out, "write JSON report here");
        cmd->add_option("--csv", calibrate.csv_out, "write CSV report here");
        cmd->add_flag("--json", calibrate.json_stdout,
                      "print the JSON report to stdout");
        add_seed(cmd, calibrate.seed);
        add_noise(cmd, calibrate.noise);
        add_constants(cmd, calibrate.constants);
    }

    PropagateCmd propagate;
    {
        CLI::App* cmd = app.add_subcommand(
            "propagate", "first-order uncertainty of a product or ratio");
        cmd->add_option("--x1", propagate.x1, "first value")->required();
        cmd->add_option("--s1", propagate.s1, "sd of the first value")->required();
        cmd->add_option("--x2", propagate.x2, "second value")->required();
        cmd->add_option("--s2", propagate.s2, "sd of the second value")->required();
        cmd->add_option("--cov", propagate.cov, "covariance of the two")
            ->capture_default_str();
        cmd->add_option("--relation", propagate.relation, "product or ratio")
            ->check(CLI::IsMember({"product", "ratio"}))
            ->capture_default_str();
        cmd->add_option("--cov-weight", propagate.weight,
                        "doubled, single or omitted cross term")
            ->check(CLI::IsMember({"doubled", "single", "omitted"}))
            ->capture_default_str();
        cmd->add_option("--out", propagate.out, "write JSON report here");
        cmd->add_flag("--json", propagate.json_stdout,
                      "print the JSON report to stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (kernel != "auto") kernels::set_backend(kernels::parse_backend(kernel));
        if (app.got_subcommand("fit")) return fit.run();
        if (app.got_subcommand("synth")) return synth.run();
        if (app.got_subcommand("synth-grid")) return grid.run();
        if (app.got_subcommand("ci")) return ci.run();
        if (app.got_subcommand("profile")) return profile.run();
        if (app.got_subcommand("calibrate")) return calibrate.run();
        if (app.got_subcommand("propagate")) return propagate.run();
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
