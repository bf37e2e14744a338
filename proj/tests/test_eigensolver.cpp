#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "p4spectra/eigensolver.hpp"
#include "p4spectra/potentials.hpp"

using namespace p4spectra;

TEST_CASE("particle in a box") {
    // V = 0 on [-pi/2, pi/2]: E_k = k^2 / 2
    const Discretization d = discretize([](double) { return 0.0; }, M_PI / 2.0, 4000, 1.0);
    const EigenResult r = eigen_lowest(d, 3);
    CHECK(r.levels[0].energy == Catch::Approx(0.5).margin(2e-6));
    CHECK(r.levels[1].energy == Catch::Approx(2.0).margin(1e-5));
    CHECK(r.levels[2].energy == Catch::Approx(4.5).margin(5e-5));
}

TEST_CASE("harmonic oscillator and convergence order") {
    auto V = [](double x) { return 0.5 * x * x; };
    auto err = [&](int n) {
        const EigenResult r = eigen_lowest(discretize(V, 12.0, n, 1.0), 1);
        return std::abs(r.levels[0].energy - 0.5);
    };
    const double e1 = err(1000), e2 = err(2000);
    const double ratio = e1 / e2;
    CHECK(ratio > 3.2);
    CHECK(ratio < 4.8);
}

TEST_CASE("refined oscillator levels") {
    const EigenResult r = refine([](double x) { return 0.5 * x * x; }, 3, 12.0, 1e-8);
    CHECK(r.levels[0].energy == Catch::Approx(0.5).margin(1e-6));
    CHECK(r.levels[1].energy == Catch::Approx(1.5).margin(1e-6));
    CHECK(r.levels[2].energy == Catch::Approx(2.5).margin(1e-6));
    for (const auto& l : r.levels) CHECK(l.error_estimate < 1e-6);
}

TEST_CASE("case B x-part is the omega/3 oscillator") {
    const ModelParams mp = case_params(PotentialCase::Case43);
    auto V = [&](double x) { return closed_form_x(PotentialCase::Case43, mp, x); };
    const EigenResult r = refine(V, 3, 12.0, 1e-7);
    for (int k = 0; k < 3; ++k)
        CHECK(r.levels[k].energy == Catch::Approx((k + 0.5) / 3.0).margin(1e-6));
}

TEST_CASE("case A x-part levels") {
    const ModelParams mp = case_params(PotentialCase::Case41);
    auto V = [&](double x) { return closed_form_x(PotentialCase::Case41, mp, x); };
    const EigenResult r = refine(V, 4, 12.0, 1e-7);
    const double want[] = {-5.0 / 6.0, 13.0 / 6.0, 19.0 / 6.0, 25.0 / 6.0};
    for (int k = 0; k < 4; ++k) CHECK(r.levels[k].energy == Catch::Approx(want[k]).margin(1e-5));
}

TEST_CASE("strictly increasing spectrum and orthonormal eigenvectors") {
    auto V = [](double x) { return 0.5 * x * x; };
    const EigenResult r = eigen_lowest(discretize(V, 10.0, 2000, 1.0), 6);
    for (size_t i = 1; i < r.levels.size(); ++i)
        CHECK(r.levels[i].energy > r.levels[i - 1].energy);
    for (size_t i = 0; i < r.levels.size(); ++i) {
        CHECK(grid_inner(r.levels[i].psi, r.levels[i].psi) == Catch::Approx(1.0).margin(1e-10));
        for (size_t j = 0; j < i; ++j)
            CHECK(std::abs(grid_inner(r.levels[i].psi, r.levels[j].psi)) < 1e-8);
    }
}

TEST_CASE("domain-size robustness") {
    const ModelParams mp = case_params(PotentialCase::Case41);
    auto V = [&](double x) { return closed_form_x(PotentialCase::Case41, mp, x); };
    const EigenResult a = refine(V, 3, 12.0, 1e-7);
    const EigenResult b = refine(V, 3, 16.0, 1e-7);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(a.levels[k].energy - b.levels[k].energy) < 1e-6);
}

TEST_CASE("guards") {
    CHECK_THROWS_AS(discretize([](double) { return 0.0; }, 1.0, 32, 1.0), GridTooCoarseError);
    CHECK_THROWS_AS(discretize([](double x) { return 1e13 / (std::abs(x) + 1e-9); }, 1.0, 128, 1.0),
                    SingularPotentialError);
    const Discretization d = discretize([](double) { return 0.0; }, 1.0, 128, 1.0);
    CHECK_THROWS_AS(eigen_lowest(d, 64), DomainError);
    CHECK_THROWS_AS(refine([](double x) { return 0.5 * x * x; }, 1, 8.0, 1e-12), DomainError);
}

TEST_CASE("threaded bisection matches sequential bit for bit") {
    auto V = [](double x) { return 0.5 * x * x + 0.1 * x * x * x * x; };
    const Discretization d = discretize(V, 10.0, 3000, 1.0);
    const EigenResult seq = eigen_lowest(d, 6, 1);
    const EigenResult par = eigen_lowest(d, 6, 4);
    for (int k = 0; k < 6; ++k) CHECK(seq.levels[k].energy == par.levels[k].energy);
}
