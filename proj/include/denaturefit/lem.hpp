#pragma once

#include <string>
#include <string_view>

#include "denaturefit/types.hpp"

namespace denaturefit {

// ============================================================================
// Linear extrapolation of the unfolding free energy.
//
// All three forms describe the same line DG(d) = dg0 - m*d and are
// interconvertible through dg0 = m * d50:
//
//   Dg0M   : DG = p1 - p2*d          p1 = dg0 [kJ/mol], p2 = m [kJ/mol/M]
//   MD50   : DG = -p1*(d - p2)       p1 = m,            p2 = d50 [M]
//   Dg0D50 : DG = p1*(1 - d/p2)      p1 = dg0,          p2 = d50
// ============================================================================

enum class LemForm { Dg0M, MD50, Dg0D50 };

struct LemParams {
    LemForm form = LemForm::Dg0M;
    double p1 = 0.0;
    double p2 = 0.0;
};

// The three line constants together, independent of parameterization.
struct LemTriple {
    double dg0 = 0.0;
    double m = 0.0;
    double d50 = 0.0;
};

// Free energy of unfolding at denaturant concentration d.
double lem_delta_g(const LemParams& p, double d);

// Recover (dg0, m, d50) from any form. Throws DegenerateConversion when the
// missing constant would require dividing by zero (m == 0 or d50 == 0).
LemTriple to_triple(const LemParams& p);

// Express a triple in the requested form.
LemParams from_triple(const LemTriple& t, LemForm form);

// Re-parameterize. The parameter shared between source and target form is
// carried over bit-exactly; the other picks up at most one rounding.
LemParams convert(const LemParams& p, LemForm target);

std::string_view to_string(LemForm form);

// Accepts the command-line spellings "dg0-m", "m-d50", "dg0-d50".
LemForm parse_lem_form(std::string_view name);

// Human-readable names of (p1, p2) for a form, e.g. ("dg0", "m").
std::string_view param_name(LemForm form, int which);

}  // namespace denaturefit
