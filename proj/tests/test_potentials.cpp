#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "p4spectra/potentials.hpp"

using namespace p4spectra;

namespace {
std::vector<double> offset_grid() {
    std::vector<double> g;
    for (int i = 0; i < 50; ++i) g.push_back(-4.0 + 8.0 * i / 49.0 + 0.013);
    return g;
}
} // namespace

TEST_CASE("g2 is the plain oscillator") {
    CHECK(g2(ModelParams(0, 0, 1, 1, 1), 0.0) == 0.0);
    CHECK(g2(ModelParams(0, 0, 1, 1, 1), 2.0) == Catch::Approx(2.0));
    CHECK(g2(ModelParams(0, 0, 1, 1, 3), 1.0) == Catch::Approx(4.5));
}

TEST_CASE("case B collapses to the omega/3 oscillator") {
    PotentialSpec s = PotentialSpec::case_from_p4(PotentialCase::Case43);
    for (double x : {-2.7, 0.0, 0.4, 1.9})
        CHECK(g1(s, x) == Catch::Approx(x * x / 18.0).margin(1e-14));
}

TEST_CASE("erfc family at t = 0 is harmonic with offset") {
    PotentialSpec s = PotentialSpec::case_from_p4(PotentialCase::Case45, 1.0, 1.0, 0.0);
    for (double x : {-1.3, 0.0, 2.1})
        CHECK(g1(s, x) == Catch::Approx(0.5 * x * x - 2.0 / 3.0).margin(1e-13));
}

TEST_CASE("erfc family with epsilon = -1 is harmonic for every t") {
    // the Psi-dependence cancels identically in g1
    for (double t : {0.0, 0.3, -1.0}) {
        ModelParams mp(0.0, -2.0, -1);
        PotentialSpec s = PotentialSpec::from_p4(mp, P4Solution::catalogue(CatalogueId::E, t));
        for (double x : {-2.2, -0.5, 1.4})
            CHECK(g1(s, x) == Catch::Approx(0.5 * x * x + 2.0 / 3.0).margin(1e-12));
    }
}

TEST_CASE("case A tends to the oscillator plus 2/3") {
    // the residual decays as 2/x^2
    PotentialSpec s = PotentialSpec::case_from_p4(PotentialCase::Case41);
    const double d8 = g1(s, 8.0) - (0.5 * 64.0 + 2.0 / 3.0);
    const double d11 = g1(s, 11.0) - (0.5 * 121.0 + 2.0 / 3.0);
    CHECK(d8 * 64.0 == Catch::Approx(2.0).margin(0.1));
    CHECK(d11 * 121.0 == Catch::Approx(2.0).margin(0.05));
    CHECK(std::abs(d11) < std::abs(d8));
}

TEST_CASE("closed-form values at the origin") {
    CHECK(closed_form(PotentialCase::Case41, case_params(PotentialCase::Case41), 0, 0) ==
          Catch::Approx(-10.0 / 3.0));
    CHECK(closed_form(PotentialCase::Case42, case_params(PotentialCase::Case42), 0, 0) ==
          Catch::Approx(0.0).margin(1e-15));
    CHECK(closed_form(PotentialCase::Case44, case_params(PotentialCase::Case44), 0, 0) ==
          Catch::Approx(-4.0 / 3.0));
}

TEST_CASE("closed form rejects mismatched parameters") {
    ModelParams wrong(1.0, -8.0, 1);
    CHECK_THROWS_AS(closed_form(PotentialCase::Case41, wrong, 0, 0), ConfigError);
}

TEST_CASE("consistency offsets vanish for the catalogue") {
    for (auto c : {PotentialCase::Case41, PotentialCase::Case42, PotentialCase::Case43,
                   PotentialCase::Case44}) {
        PotentialSpec s = PotentialSpec::case_from_p4(c);
        INFO("case " << potential_case_name(c));
        CHECK(std::abs(consistency_offset(s, c, offset_grid())) < 1e-9);
    }
    PotentialSpec s45 = PotentialSpec::case_from_p4(PotentialCase::Case45, 1.0, 1.0, 0.0);
    CHECK(std::abs(consistency_offset(s45, PotentialCase::Case45, offset_grid())) < 1e-9);
}

TEST_CASE("constant_offset rejects non-constant differences") {
    CHECK_THROWS_AS(constant_offset([](double x) { return x * x; },
                                    [](double x) { return 2.0 * x; }, offset_grid()),
                    InconsistentError);
}

TEST_CASE("g1 is smooth away from poles") {
    PotentialSpec s = PotentialSpec::case_from_p4(PotentialCase::Case41);
    const double h = 1e-3;
    for (double x : {-1.7, 0.2, 1.4}) {
        const double d2 = (g1(s, x + h) - 2.0 * g1(s, x) + g1(s, x - h)) / (h * h);
        CHECK(std::isfinite(d2));
        CHECK(std::abs(d2) < 1e3);
    }
}

TEST_CASE("scaling covariance in omega") {
    // g1 at omega = s equals s * g1 at omega = 1 evaluated at sqrt(s) x
    const double s = 4.0;
    for (auto c : {PotentialCase::Case41, PotentialCase::Case43}) {
        ModelParams mp1 = case_params(c, 1.0, 1.0);
        ModelParams mps = case_params(c, 1.0, s);
        PotentialSpec p1 = PotentialSpec::from_p4(mp1, P4Solution::catalogue(case_catalogue(c)));
        PotentialSpec ps = PotentialSpec::from_p4(mps, P4Solution::catalogue(case_catalogue(c)));
        for (double x : {0.3, 1.1}) {
            INFO("case " << potential_case_name(c) << " x=" << x);
            CHECK(g1(ps, x) == Catch::Approx(s * g1(p1, std::sqrt(s) * x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("pole propagation from the P4 route") {
    PotentialSpec s = PotentialSpec::case_from_p4(PotentialCase::Case44);
    CHECK_THROWS_AS(g1(s, 0.0), PoleError);
    // the closed form is smooth there
    CHECK(std::isfinite(closed_form_x(PotentialCase::Case44,
                                      case_params(PotentialCase::Case44), 0.0)));
}
