#include "denaturefit/lem.hpp"

namespace denaturefit {

double lem_delta_g(const LemParams& p, double d) {
    switch (p.form) {
        case LemForm::Dg0M:
            return p.p1 - p.p2 * d;
        case LemForm::MD50:
            return -p.p1 * (d - p.p2);
        case LemForm::Dg0D50:
            return p.p1 * (1.0 - d / p.p2);
    }
    return 0.0;
}

LemTriple to_triple(const LemParams& p) {
    switch (p.form) {
        case LemForm::Dg0M:
            if (p.p2 == 0.0)
                throw DegenerateConversion("cannot derive d50 when m == 0");
            return {p.p1, p.p2, p.p1 / p.p2};
        case LemForm::MD50:
            return {p.p1 * p.p2, p.p1, p.p2};
        case LemForm::Dg0D50:
            if (p.p2 == 0.0)
                throw DegenerateConversion("cannot derive m when d50 == 0");
            return {p.p1, p.p1 / p.p2, p.p2};
    }
    return {};
}

LemParams from_triple(const LemTriple& t, LemForm form) {
    switch (form) {
        case LemForm::Dg0M:
            return {form, t.dg0, t.m};
        case LemForm::MD50:
            return {form, t.m, t.d50};
        case LemForm::Dg0D50:
            return {form, t.dg0, t.d50};
    }
    return {};
}

LemParams convert(const LemParams& p, LemForm target) {
    if (p.form == target) return p;
    return from_triple(to_triple(p), target);
}

std::string_view to_string(LemForm form) {
    switch (form) {
        case LemForm::Dg0M: return "dg0-m";
        case LemForm::MD50: return "m-d50";
        case LemForm::Dg0D50: return "dg0-d50";
    }
    return "?";
}

LemForm parse_lem_form(std::string_view name) {
    if (name == "dg0-m") return LemForm::Dg0M;
    if (name == "m-d50") return LemForm::MD50;
    if (name == "dg0-d50") return LemForm::Dg0D50;
    throw std::invalid_argument("unknown parameterization: " + std::string(name) +
                                " (expected dg0-m, m-d50 or dg0-d50)");
}

std::string_view param_name(LemForm form, int which) {
    switch (form) {
        case LemForm::Dg0M: return which == 0 ? "dg0" : "m";
        case LemForm::MD50: return which == 0 ? "m" : "d50";
        case LemForm::Dg0D50: return which == 0 ? "dg0" : "d50";
    }
    return "?";
}

}  // namespace denaturefit
