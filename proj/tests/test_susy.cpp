#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "p4spectra/ladder_sequence.hpp"
#include "p4spectra/susy.hpp"
#include "p4spectra/verify.hpp"

using namespace p4spectra;

TEST_CASE("parameter map") {
    {
        const SusyParams sp = map_params(ModelParams(5.0, -8.0, +1));
        CHECK(sp.lambda == Catch::Approx(1.0));
        CHECK(sp.gamma == Catch::Approx(4.0));
        CHECK(sp.d == Catch::Approx(-4.0));
        CHECK(sp.sqrt_minus_d() == Catch::Approx(2.0));
    }
    {
        const SusyParams sp = map_params(ModelParams(1.0, 0.0, +1));
        CHECK(sp.gamma == Catch::Approx(0.0).margin(1e-15));
        CHECK(sp.d == Catch::Approx(0.0).margin(1e-15));
    }
    {
        const SusyParams sp = map_params(ModelParams(0.0, -2.0 / 9.0, +1));
        CHECK(sp.lambda == Catch::Approx(1.0));
        CHECK(sp.gamma == Catch::Approx(-1.0));
        CHECK(sp.d == Catch::Approx(-1.0 / 9.0));
    }
    CHECK(map_params(ModelParams(0.0, 2.0, +1)).reducible() == false);
}

TEST_CASE("case B superpotentials in closed form") {
    Superpotentials W(map_params(case_params(PotentialCase::Case43)),
                      P4Solution::catalogue(CatalogueId::B));
    for (double x : {0.31, 0.9, 1.7, 2.9}) {
        CHECK(W.V(SusyVariant::V1, x) == Catch::Approx(x * x / 9.0 - 1.0 / 3.0).margin(1e-13));
        CHECK(W.W1(x) == Catch::Approx(1.0 / x + x / 3.0).margin(1e-13));
        CHECK(W.W2(x) == Catch::Approx(-1.0 / x + x / 3.0).margin(1e-13));
        CHECK(W.W3(x) == Catch::Approx(-x / 3.0).margin(1e-13));
    }
}

TEST_CASE("W identities hold pointwise") {
    for (auto c : {PotentialCase::Case41, PotentialCase::Case44, PotentialCase::Case45}) {
        const double t = c == PotentialCase::Case45 ? 0.3 : 0.0;
        Superpotentials W(map_params(case_params(c)),
                          P4Solution::catalogue(case_catalogue(c), t));
        for (double x : {0.31, 0.77, 1.23, 2.5}) {
            const double h = W.h(x);
            if (std::abs(h) < 1e-3) continue;
            INFO("case " << potential_case_name(c) << " x=" << x);
            CHECK(std::abs(W.W1(x) + W.W2(x) + 2.0 * h) < 1e-10);
            CHECK(std::abs(W.W3(x) + 2.0 * h + W.sp.lambda * x) < 1e-10);
            CHECK(std::abs(W.V(SusyVariant::V2, x) - W.V(SusyVariant::V1, x) -
                           4.0 * W.hprime(x)) < 1e-10);
        }
    }
}

TEST_CASE("printed superpotentials for case 4.1") {
    Superpotentials W(map_params(case_params(PotentialCase::Case41)),
                      P4Solution::catalogue(CatalogueId::A));
    auto W1p = [](double x) {
        const double x2 = x * x;
        return -(-1 + 2 * x2) * (9 + 27 * x2 + 12 * x2 * x2 + 4 * x2 * x2 * x2) /
               (x * (3 + 2 * x2) * (3 + 4 * x2 * x2));
    };
    auto W2p = [](double x) {
        const double x2 = x * x;
        return -(1 - 2 * x2) * (3 + 3 * x2 + 2 * x2 * x2) / (x * (3 + 8 * x2 + 4 * x2 * x2));
    };
    auto W3p = [](double x) {
        const double x2 = x * x;
        return -x * (-9 + 22 * x2 + 20 * x2 * x2 + 8 * x2 * x2 * x2) /
               ((1 + 2 * x2) * (3 + 4 * x2 * x2));
    };
    for (double x : {0.31, 0.9, 1.7, 2.9}) {
        CHECK(W.W1(x) == Catch::Approx(W1p(x)).margin(1e-8));
        CHECK(W.W2(x) == Catch::Approx(W2p(x)).margin(1e-8));
        CHECK(W.W3(x) == Catch::Approx(W3p(x)).margin(1e-8));
    }
}

TEST_CASE("physical calibration offsets") {
    // (hbar^2/2) V_variant differs from g1 by a constant
    for (const auto& cs : verify_detail::acceptance_cases()) {
        const ModelParams mp = case_params(cs.c);
        Superpotentials W(map_params(mp), P4Solution::catalogue(case_catalogue(cs.c), cs.t));
        INFO("case " << potential_case_name(cs.c));
        CHECK_NOTHROW(susy_physical_offset(mp, W, variant_for_epsilon(mp.epsilon)));
    }
    // the case A offset places the singlet at -5/6
    const ModelParams mp = case_params(PotentialCase::Case41);
    Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
    const double c = susy_physical_offset(mp, W, SusyVariant::V2);
    CHECK(c == Catch::Approx(-5.0 / 6.0).margin(1e-9));
}

TEST_CASE("zero modes of case A") {
    const ModelParams mp = case_params(PotentialCase::Case41);
    Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
    const auto hook = catalogue_closed_forms(PotentialCase::Case41, 1.0, 1.0, 0.0);
    const ZeroModeSet ann = zero_modes(W, SusyVariant::V2, LadderOp::Annihilation, {}, hook);
    REQUIRE(ann.candidates.size() == 3);
    int n_norm = 0;
    for (const auto& c : ann.candidates) n_norm += c.normalizable;
    CHECK(n_norm == 2); // the singlet and the ladder seed
    const ZeroModeSet cre = zero_modes(W, SusyVariant::V2, LadderOp::Creation, {}, hook);
    CHECK(count_distinct_zero_modes({&ann, &cre}) == 2);
}

TEST_CASE("zero-mode counts stay within three distinct states") {
    for (const auto& cs : verify_detail::acceptance_cases()) {
        const ModelParams mp = case_params(cs.c);
        Superpotentials W(map_params(mp), P4Solution::catalogue(case_catalogue(cs.c), cs.t));
        const SusyVariant v = variant_for_epsilon(mp.epsilon);
        const auto hook = catalogue_closed_forms(cs.c, 1.0, 1.0, cs.t);
        const ZeroModeSet ann = zero_modes(W, v, LadderOp::Annihilation, {}, hook);
        const ZeroModeSet cre = zero_modes(W, v, LadderOp::Creation, {}, hook);
        INFO("case " << potential_case_name(cs.c));
        CHECK(count_distinct_zero_modes({&ann, &cre}) <= 3);
    }
}

TEST_CASE("numeric zero-mode route reproduces the case B seeds") {
    // W3 is regular for case B, so the quadrature route works for psi_1
    const ModelParams mp = case_params(PotentialCase::Case43);
    Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::B));
    const ZeroModeSet ann = zero_modes(W, SusyVariant::V2, LadderOp::Annihilation, {});
    REQUIRE(ann.candidates.size() == 3);
    // E = 0 candidate: prefactor * exp(int W3) with W3 = -x/3
    const auto& c0 = ann.candidates[0];
    REQUIRE(c0.normalizable);
    const auto want = *catalogue_zero_mode(PotentialCase::Case43, 1.0, 1.0, 0.0, 0.0);
    const GridFunction ref = GridFunction::sample(c0.psi->L, c0.psi->n, want);
    const double ov = std::abs(grid_inner(*c0.psi, ref)) / (grid_norm(*c0.psi) * grid_norm(ref));
    CHECK(ov == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("annihilation zero modes are annihilated on the grid") {
    const ModelParams mp = case_params(PotentialCase::Case41);
    Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
    for (double e : {0.0, 6.0}) {
        const auto fn = *catalogue_zero_mode(PotentialCase::Case41, 1.0, 1.0, 0.0, e);
        GridFunction psi = GridFunction::sample(12.0, 2000, fn);
        GridFunction apsi = apply_ladder(W, LadderDirection::Lower, SusyVariant::V2, psi);
        INFO("candidate at susy energy " << e);
        CHECK(grid_norm(apsi, 8) / grid_norm(psi, 8) < 1e-4);
    }
    // and the residual decreases ~4x per grid doubling
    const auto fn = *catalogue_zero_mode(PotentialCase::Case41, 1.0, 1.0, 0.0, 6.0);
    auto res = [&](int n) {
        GridFunction psi = GridFunction::sample(12.0, n, fn);
        GridFunction apsi = apply_ladder(W, LadderDirection::Lower, SusyVariant::V2, psi);
        return grid_norm(apsi, 8) / grid_norm(psi, 8);
    };
    const double ratio = res(2000) / res(4000);
    CHECK(ratio > 3.5);
}

TEST_CASE("case A singlet is killed by both operators") {
    const ModelParams mp = case_params(PotentialCase::Case41);
    Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
    const auto chi_fn = *catalogue_zero_mode(PotentialCase::Case41, 1.0, 1.0, 0.0, 0.0);
    GridFunction chi = GridFunction::sample(12.0, 8000, chi_fn);
    const double down = grid_norm(apply_ladder(W, LadderDirection::Lower, SusyVariant::V2, chi), 8);
    const double up = grid_norm(apply_ladder(W, LadderDirection::Raise, SusyVariant::V2, chi), 8);
    const double nrm = grid_norm(chi, 8);
    CHECK(down / nrm < 1e-3);
    CHECK(up / nrm < 1e-3);
}

TEST_CASE("case 4.2 doublet structure") {
    const ModelParams mp = case_params(PotentialCase::Case42);
    Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
    const auto chi1_fn = *catalogue_zero_mode(PotentialCase::Case42, 1.0, 1.0, 0.0, 0.0);
    const auto chi2_fn = *catalogue_zero_mode(PotentialCase::Case42, 1.0, 1.0, 0.0, 2.0);
    GridFunction chi1 = GridFunction::sample(12.0, 4000, chi1_fn);
    GridFunction chi2 = GridFunction::sample(12.0, 4000, chi2_fn);
    // a chi1 = 0, a^dagger chi1 ~ chi2, a^dagger chi2 = 0
    CHECK(grid_norm(apply_ladder(W, LadderDirection::Lower, SusyVariant::V1, chi1), 8) /
              grid_norm(chi1, 8) <
          1e-3);
    GridFunction up1 = apply_ladder(W, LadderDirection::Raise, SusyVariant::V1, chi1);
    const double ov =
        std::abs(grid_inner(up1, chi2, 8)) / (grid_norm(up1, 8) * grid_norm(chi2, 8));
    CHECK(ov == Catch::Approx(1.0).margin(1e-4));
    CHECK(grid_norm(apply_ladder(W, LadderDirection::Raise, SusyVariant::V1, chi2), 8) /
              grid_norm(chi2, 8) <
          1e-2);
}

TEST_CASE("ladder linearity on the zero grid") {
    const ModelParams mp = case_params(PotentialCase::Case41);
    Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
    GridFunction zero(12.0, 256);
    const GridFunction out = apply_ladder(W, LadderDirection::Raise, SusyVariant::V2, zero);
    for (double v : out.values) CHECK(v == 0.0);
    GridFunction tiny(12.0, 32);
    CHECK_THROWS_AS(apply_ladder(W, LadderDirection::Raise, SusyVariant::V2, tiny),
                    GridTooCoarseError);
}

TEST_CASE("intertwining residual and its order") {
    for (auto c : {PotentialCase::Case41, PotentialCase::Case43}) {
        const ModelParams mp = case_params(c);
        Superpotentials W(map_params(mp), P4Solution::catalogue(case_catalogue(c)));
        const SusyVariant v = variant_for_epsilon(mp.epsilon);
        auto res = [&](int n) {
            GridFunction psi =
                GridFunction::sample(12.0, n, [](double x) { return std::exp(-x * x); });
            return intertwining_residual(W, v, psi);
        };
        const double r2000 = res(2000), r4000 = res(4000);
        INFO("case " << potential_case_name(c));
        CHECK(r2000 < 1e-3);
        CHECK(r2000 / r4000 >= 3.5);
    }
    // degenerate input returns zero by convention
    const ModelParams mp = case_params(PotentialCase::Case41);
    Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
    GridFunction zero(12.0, 512);
    CHECK(intertwining_residual(W, SusyVariant::V2, zero) == 0.0);
    GridFunction tiny(12.0, 128);
    CHECK_THROWS_AS(intertwining_residual(W, SusyVariant::V2, tiny), GridTooCoarseError);
}

TEST_CASE("product identity residuals") {
    const ModelParams mp = case_params(PotentialCase::Case41);
    Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
    const auto chi_fn = *catalogue_zero_mode(PotentialCase::Case41, 1.0, 1.0, 0.0, 0.0);
    GridFunction chi = GridFunction::sample(12.0, 4000, chi_fn);
    CHECK(product_identity_residual(W, SusyVariant::V2, chi, 0.0) < 1e-3);
    const auto seed_fn = *catalogue_zero_mode(PotentialCase::Case41, 1.0, 1.0, 0.0, 6.0);
    GridFunction seed = GridFunction::sample(12.0, 4000, seed_fn);
    CHECK(product_identity_residual(W, SusyVariant::V2, seed, 6.0) < 1e-3);
}

TEST_CASE("ladder Rayleigh quotients climb by 2 lambda") {
    const ModelParams mp = case_params(PotentialCase::Case41);
    Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
    const auto seed_fn = *catalogue_zero_mode(PotentialCase::Case41, 1.0, 1.0, 0.0, 6.0);
    GridFunction seed = GridFunction::sample(12.0, 2000, seed_fn);
    const auto seq = ladder_rayleigh_sequence(W, SusyVariant::V2, seed, 4);
    REQUIRE(seq.size() == 5);
    CHECK(seq[0] == Catch::Approx(6.0).margin(1e-3));
    for (size_t i = 1; i < seq.size(); ++i)
        CHECK(seq[i] - seq[i - 1] == Catch::Approx(2.0).epsilon(2e-3));
}

TEST_CASE("irreducible regime exposes only the E = 0 candidates") {
    const ModelParams mp(1.0, 2.0, +1); // d = 1 > 0
    const SusyParams sp = map_params(mp);
    REQUIRE_FALSE(sp.reducible());
    // a generic integrated solution pins h; use the erfc family at beta = -2
    // only for shape: here we simply check the candidate bookkeeping
    Superpotentials W(sp, P4Solution::catalogue(CatalogueId::D, 0.0));
    const ZeroModeSet ann = zero_modes(W, SusyVariant::V2, LadderOp::Annihilation, {});
    CHECK(ann.candidates.size() == 1);
    CHECK(ann.candidates[0].energy_susy == 0.0);
    const ZeroModeSet cre = zero_modes(W, SusyVariant::V2, LadderOp::Creation, {});
    CHECK(cre.candidates.empty());
    CHECK_THROWS_AS(W.W1(0.5), DomainError);
}

TEST_CASE("susy x-levels match the algebra conversion for every case") {
    for (const auto& cs : verify_detail::acceptance_cases()) {
        const ModelParams mp = case_params(cs.c);
        P4Solution f = P4Solution::catalogue(case_catalogue(cs.c), cs.t);
        const auto xs =
            susy_x_levels(mp, f, 6.0, catalogue_closed_forms(cs.c, 1.0, 1.0, cs.t));
        const auto xa = to_x_levels(derive_spectra(mp, 10), 6.0, mp);
        std::string note;
        const double worst = verify_detail::match_levels(xs, xa, 5.75, note);
        INFO("case " << potential_case_name(cs.c) << " " << note);
        CHECK(worst < 1e-6);
    }
}
