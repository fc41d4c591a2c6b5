#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "denaturefit/lem.hpp"
#include "denaturefit/rng.hpp"
#include "support.hpp"

using namespace denaturefit;

TEST_CASE("free energy of each form at simple points") {
    CHECK(lem_delta_g({LemForm::Dg0M, 24.0, 6.0}, 0.0) == 24.0);
    CHECK(lem_delta_g({LemForm::Dg0M, 24.0, 6.0}, 4.0) == 0.0);
    CHECK(lem_delta_g({LemForm::MD50, 6.0, 4.0}, 4.0) == 0.0);
    CHECK(lem_delta_g({LemForm::MD50, 6.0, 4.0}, 0.0) == 24.0);
    CHECK(lem_delta_g({LemForm::Dg0D50, 24.0, 4.0}, 0.0) == 24.0);
    CHECK(lem_delta_g({LemForm::Dg0D50, 24.0, 4.0}, 4.0) == 0.0);
    CHECK(lem_delta_g({LemForm::Dg0D50, 24.0, 4.0}, 8.0) == -24.0);
}

TEST_CASE("conversion recovers the shared constants") {
    const LemParams base{LemForm::Dg0M, 24.0, 6.0};
    const LemTriple t = to_triple(base);
    CHECK(t.dg0 == 24.0);
    CHECK(t.m == 6.0);
    CHECK(t.d50 == 4.0);

    const LemParams md50 = convert(base, LemForm::MD50);
    CHECK(md50.form == LemForm::MD50);
    CHECK(md50.p1 == 6.0);  // m carried over bit-exactly
    CHECK(md50.p2 == 4.0);

    const LemParams dgd = convert(md50, LemForm::Dg0D50);
    CHECK(dgd.p1 == 24.0);
    CHECK(dgd.p2 == 4.0);
}

TEST_CASE("conversion round trips are tight") {
    RngStream rng(77);
    for (int i = 0; i < 2000; ++i) {
        const double m = 0.25 + 12.0 * rng.uniform01();
        const double d50 = 0.25 + 9.0 * rng.uniform01();
        const LemParams a{LemForm::MD50, m, d50};
        const LemParams b = convert(convert(convert(a, LemForm::Dg0M),
                                            LemForm::Dg0D50),
                                    LemForm::MD50);
        CHECK(oracle::rel_close(a.p1, b.p1, 1e-12));
        CHECK(oracle::rel_close(a.p2, b.p2, 1e-12));
        // The line invariant dg0 = m * d50 holds in every representation.
        const LemTriple t = to_triple(convert(a, LemForm::Dg0D50));
        CHECK(oracle::rel_close(t.dg0, t.m * t.d50, 1e-12));
    }
}

TEST_CASE("free energy agrees across forms") {
    RngStream rng(78);
    for (int i = 0; i < 500; ++i) {
        const double m = 0.25 + 12.0 * rng.uniform01();
        const double d50 = 0.25 + 9.0 * rng.uniform01();
        const double d = 10.0 * rng.uniform01();
        const LemParams a{LemForm::MD50, m, d50};
        const double want = lem_delta_g(a, d);
        CHECK(oracle::rel_close(lem_delta_g(convert(a, LemForm::Dg0M), d), want,
                                1e-12, 1e-12));
        CHECK(oracle::rel_close(lem_delta_g(convert(a, LemForm::Dg0D50), d), want,
                                1e-12, 1e-12));
    }
}

TEST_CASE("degenerate conversions throw") {
    CHECK_THROWS_AS(to_triple({LemForm::Dg0M, 24.0, 0.0}), DegenerateConversion);
    CHECK_THROWS_AS(to_triple({LemForm::Dg0D50, 24.0, 0.0}), DegenerateConversion);
    CHECK_NOTHROW(to_triple({LemForm::MD50, 0.0, 4.0}));
}

TEST_CASE("form names round trip") {
    for (LemForm f : {LemForm::Dg0M, LemForm::MD50, LemForm::Dg0D50})
        CHECK(parse_lem_form(to_string(f)) == f);
    CHECK_THROWS_AS(parse_lem_form("dg0m"), std::invalid_argument);
    CHECK(param_name(LemForm::MD50, 0) == "m");
    CHECK(param_name(LemForm::MD50, 1) == "d50");
    CHECK(param_name(LemForm::Dg0D50, 0) == "dg0");
}
