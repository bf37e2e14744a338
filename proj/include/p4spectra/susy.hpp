#pragma once

// Third-order shape invariance: parameter map, superpotentials, zero modes
// of the third-order ladder operators, grid application of the operators,
// and the product/intertwining residual checks.
//
// Unit convention: the SUSY Hamiltonian is H = -d^2/dx^2 + V(x); physical
// energies are (hbar^2/2) * E_susy plus a measured constant offset.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "p4spectra/errors.hpp"
#include "p4spectra/grid.hpp"
#include "p4spectra/potentials.hpp"
#include "p4spectra/special_functions.hpp"

namespace p4spectra {

struct SusyParams {
    double lambda = 1.0; // omega / hbar, > 0
    double gamma = 0.0;  // lambda (alpha - 1)
    double d = 0.0;      // beta lambda^2 / 2; reducible regime iff d <= 0

    bool reducible() const { return d <= 0.0; }
    double sqrt_minus_d() const {
        if (d > 0.0) throw DomainError("sqrt(-d) requested in the irreducible regime");
        return std::sqrt(-d);
    }
};

inline SusyParams map_params(const ModelParams& mp) {
    SusyParams sp;
    sp.lambda = mp.omega / mp.hbar;
    sp.gamma = sp.lambda * (mp.alpha - 1.0);
    sp.d = mp.beta * sp.lambda * sp.lambda / 2.0;
    return sp;
}

enum class SusyVariant { V1, V2 }; // V1 pairs with epsilon = -1, V2 with +1
enum class LadderOp { Annihilation, Creation };
enum class LadderDirection { Lower, Raise };

inline SusyVariant variant_for_epsilon(int epsilon) {
    return epsilon == -1 ? SusyVariant::V1 : SusyVariant::V2;
}

/// Superpotentials W1, W2, W3 and the second-order factor data built from
/// h(x) = (sqrt(lambda)/2) f(sqrt(lambda) x).
struct Superpotentials {
    SusyParams sp;
    P4Solution f;

    Superpotentials(SusyParams s, P4Solution sol) : sp(s), f(std::move(sol)) {}

    void h_pair(double x, double& hv, double& hp) const {
        const double rl = std::sqrt(sp.lambda);
        const auto [fv, fp] = f.eval(rl * x);
        hv = 0.5 * rl * fv;
        hp = 0.5 * sp.lambda * fp;
    }
    void h_triple(double x, double& hv, double& hp, double& hpp) const {
        const double rl = std::sqrt(sp.lambda);
        const P4Triple t = f.eval_on_solution(rl * x);
        hv = 0.5 * rl * t.f;
        hp = 0.5 * sp.lambda * t.fp;
        hpp = 0.5 * sp.lambda * rl * t.fpp;
    }
    double h(double x) const {
        double hv, hp;
        h_pair(x, hv, hp);
        return hv;
    }
    double hprime(double x) const {
        double hv, hp;
        h_pair(x, hv, hp);
        return hp;
    }

    double W3(double x) const { return -2.0 * h(x) - sp.lambda * x; }

    // W1,2 = -h +- (h' - sqrt(-d)) / (2h); reducible regime only. Singular
    // at nodes of h; callers must treat non-finite values.
    double W1(double x) const {
        double hv, hp;
        h_pair(x, hv, hp);
        return -hv + (hp - sp.sqrt_minus_d()) / (2.0 * hv);
    }
    double W2(double x) const {
        double hv, hp;
        h_pair(x, hv, hp);
        return -hv - (hp - sp.sqrt_minus_d()) / (2.0 * hv);
    }

    // Second-order factor coefficient, reduced with the h-equation so it
    // stays finite at nodes of h.
    double b(double x) const {
        double hv, hp;
        h_pair(x, hv, hp);
        const double lx = sp.lambda * x;
        return -hp - 2.0 * hv * hv - 4.0 * lx * hv - lx * lx + sp.lambda + sp.gamma;
    }

    double V(SusyVariant variant, double x) const {
        double hv, hp;
        h_pair(x, hv, hp);
        const double sgn = (variant == SusyVariant::V1) ? -1.0 : +1.0;
        return sgn * 2.0 * hp + 4.0 * hv * hv + 4.0 * sp.lambda * x * hv +
               sp.lambda * sp.lambda * x * x - sp.lambda;
    }
};

/// V1 or V2 on demand (verbatim printed forms). Captures a copy of W.
inline std::function<double(double)> susy_potential(const Superpotentials& W, SusyVariant v) {
    return [W, v](double x) { return W.V(v, x); };
}

/// Constant c with g1(x) = (hbar^2/2) V_variant(x) + c, measured on a fixed
/// pole-free sample set. This is the calibration between SUSY and physical
/// energies: E_phys = (hbar^2/2) E_susy + c.
inline double susy_physical_offset(const ModelParams& mp, const Superpotentials& W,
                                   SusyVariant variant) {
    std::vector<double> grid;
    for (double q : {0.31, 0.77, 1.23, 1.91, 2.47, 3.11})
        grid.push_back(q * std::sqrt(mp.hbar / mp.omega));
    PotentialSpec spec = PotentialSpec::from_p4(mp, W.f);
    return constant_offset(
        [&](double x) { return g1(spec, x); },
        [&](double x) { return 0.5 * mp.hbar * mp.hbar * W.V(variant, x); }, grid, 1e-8);
}

// ---------------------------------------------------------------------------
// Grid application of the ladder operators
// ---------------------------------------------------------------------------

namespace detail {

// Expanded coefficients of the third-order operators. With the first-order
// factor built on W = W3 = -2h - lambda x and the second-order factors
// M^dagger = d^2 - 2h d + b, M = (M^dagger)^adj = d^2 + 2h d + (b + 2h'),
// every composition collapses to
//     s psi''' - lambda x psi'' + C1(x) psi' + C0(x) psi ,
// with smooth C0, C1 whenever h solves its equation. Direct stencils on psi
// keep the truncation constant small; staged application would difference
// the coefficient products too.
struct LadderCoeffs {
    double s = 1.0;  // sign of psi'''
    double c2 = 0.0; // always -lambda x
    double c1 = 0.0;
    double c0 = 0.0;
};

inline LadderCoeffs ladder_coeffs(const Superpotentials& Wp, LadderDirection dir,
                                  SusyVariant variant, double x) {
    double h, hp, hpp;
    Wp.h_triple(x, h, hp, hpp);
    const double lam = Wp.sp.lambda, gam = Wp.sp.gamma;
    const double W = -2.0 * h - lam * x;
    const double Wprime = -2.0 * hp - lam;
    const double Wsecond = -2.0 * hpp;
    const double b = -hp - 2.0 * h * h - 4.0 * lam * x * h - lam * lam * x * x + lam + gam;
    const double bprime =
        -hpp - 4.0 * h * hp - 4.0 * lam * h - 4.0 * lam * x * hp - 2.0 * lam * lam * x;
    const double B = b + 2.0 * hp;
    const double Bprime = bprime + 2.0 * hpp;

    LadderCoeffs c;
    c.c2 = -lam * x; // = W + 2h in every composition
    const bool raise = dir == LadderDirection::Raise;
    if (variant == SusyVariant::V2) {
        if (raise) { // a^dagger = M q^dagger
            c.s = +1.0;
            c.c1 = 2.0 * Wprime + 2.0 * h * W + B;
            c.c0 = Wsecond + 2.0 * h * Wprime + B * W;
        } else { // a = q M^dagger
            c.s = -1.0;
            c.c1 = 2.0 * hp - b - 2.0 * h * W;
            c.c0 = b * W - bprime;
        }
    } else {
        if (raise) { // a^dagger = q^dagger M
            c.s = +1.0;
            c.c1 = 2.0 * hp + B + 2.0 * h * W;
            c.c0 = Bprime + B * W;
        } else { // a = M^dagger q
            c.s = -1.0;
            c.c1 = 2.0 * Wprime - 2.0 * h * W - b;
            c.c0 = Wsecond - 2.0 * h * Wprime + b * W;
        }
    }
    return c;
}

} // namespace detail

// cells per end where apply_ladder falls back to one-sided stencils
inline constexpr int kLadderBoundaryCells = 3;

/// Apply the third-order ladder operator on a grid with fourth-order
/// centered stencils. The sharply varying coefficients of the rational
/// catalogue cases make second-order truncation constants of order 10^2;
/// the acceptance tolerances need the extra order. The outer
/// kLadderBoundaryCells at each end carry one-sided stencils and are only
/// approximate.
inline GridFunction apply_ladder(const Superpotentials& W, LadderDirection dir, SusyVariant variant,
                                 const GridFunction& psi) {
    if (psi.n < 64) throw GridTooCoarseError("apply_ladder: need n >= 64");
    GridFunction d1 = grid_derivative4(psi);
    GridFunction d2 = grid_second_derivative4(psi);
    GridFunction d3 = grid_third_derivative4(psi);
    GridFunction out(psi.L, psi.n);
    for (int i = 0; i < psi.n; ++i) {
        const detail::LadderCoeffs c = detail::ladder_coeffs(W, dir, variant, psi.x(i));
        out.values[i] = c.s * d3.values[i] + c.c2 * d2.values[i] + c.c1 * d1.values[i] +
                        c.c0 * psi.values[i];
    }
    return out;
}

/// H psi = -psi'' + V psi in SUSY units.
inline GridFunction apply_susy_hamiltonian(const Superpotentials& W, SusyVariant variant,
                                           const GridFunction& psi) {
    GridFunction d2 = grid_second_derivative4(psi);
    GridFunction out(psi.L, psi.n);
    for (int i = 0; i < psi.n; ++i)
        out.values[i] = -d2.values[i] + W.V(variant, psi.x(i)) * psi.values[i];
    return out;
}

inline double rayleigh_quotient(const Superpotentials& W, SusyVariant variant,
                                const GridFunction& psi, int skip = 8) {
    GridFunction hpsi = apply_susy_hamiltonian(W, variant, psi);
    const double den = grid_inner(psi, psi, skip);
    if (den == 0.0) return 0.0;
    return grid_inner(psi, hpsi, skip) / den;
}

/// Rayleigh quotients along k successive raisings of a seed state. Each
/// raised state is projected onto the low-lying eigenspace of the
/// discretized SUSY Hamiltonian before the next raise: the third-order
/// difference operator amplifies components near the top of the discrete
/// spectrum by ~E^{3/2} per application, so bare iteration drowns in
/// grid-scale noise after two rungs. The projection keeps the check honest:
/// a wrong ladder operator still lands on wrong eigendirections.
/// Defined in ladder_sequence.hpp (it needs the eigensolver).
std::vector<double> ladder_rayleigh_sequence(const Superpotentials& W, SusyVariant variant,
                                             GridFunction psi, int k_rungs, int subspace = 10);

/// | <psi| a^dagger a |psi> / <psi|psi> - P(E) | with P the printed cubic:
/// V1: P(E) = E ((E - gamma - 2 lambda)^2 + d);  V2: P(E) = E ((E - gamma)^2 + d).
inline double product_identity_residual(const Superpotentials& W, SusyVariant variant,
                                        const GridFunction& psi, double E) {
    GridFunction a_psi = apply_ladder(W, LadderDirection::Lower, variant, psi);
    GridFunction ada_psi = apply_ladder(W, LadderDirection::Raise, variant, a_psi);
    const int skip = 8;
    const double den = grid_inner(psi, psi, skip);
    if (den == 0.0) return 0.0;
    const double lhs = grid_inner(psi, ada_psi, skip) / den;
    const double g = W.sp.gamma, l = W.sp.lambda, d = W.sp.d;
    const double P = (variant == SusyVariant::V1)
                         ? E * ((E - g - 2.0 * l) * (E - g - 2.0 * l) + d)
                         : E * ((E - g) * (E - g) + d);
    return std::abs(lhs - P);
}

/// || (H a^dagger - a^dagger (H + 2 lambda)) psi || / || a^dagger psi ||
/// on interior points. The commutator stacks five difference orders, so the
/// cancellation is carried out in extended precision; in plain doubles the
/// roundoff floor (~eps/h^5) swamps the truncation on fine grids.
inline double intertwining_residual(const Superpotentials& W, SusyVariant variant,
                                    const GridFunction& psi) {
    if (psi.n < 256) throw GridTooCoarseError("intertwining_residual: need n >= 256");
    using real = long double;
    const int n = psi.n;
    const real h = static_cast<real>(psi.h());

    std::vector<real> p(psi.values.begin(), psi.values.end());
    std::vector<double> cs(n), c2(n), c1(n), c0(n), V(n);
    for (int i = 0; i < n; ++i) {
        const detail::LadderCoeffs c =
            detail::ladder_coeffs(W, LadderDirection::Raise, variant, psi.x(i));
        cs[i] = c.s;
        c2[i] = c.c2;
        c1[i] = c.c1;
        c0[i] = c.c0;
        V[i] = W.V(variant, psi.x(i));
    }

    auto d1 = [&](const std::vector<real>& v) {
        std::vector<real> d(n);
        for (int i = 2; i + 2 < n; ++i)
            d[i] = (v[i - 2] - 8.0L * v[i - 1] + 8.0L * v[i + 1] - v[i + 2]) / (12.0L * h);
        d[0] = (-3.0L * v[0] + 4.0L * v[1] - v[2]) / (2.0L * h);
        d[1] = (v[2] - v[0]) / (2.0L * h);
        d[n - 1] = (3.0L * v[n - 1] - 4.0L * v[n - 2] + v[n - 3]) / (2.0L * h);
        d[n - 2] = (v[n - 1] - v[n - 3]) / (2.0L * h);
        return d;
    };
    auto d2f = [&](const std::vector<real>& v) {
        std::vector<real> d(n);
        const real h2 = h * h;
        for (int i = 2; i + 2 < n; ++i)
            d[i] = (-v[i - 2] + 16.0L * v[i - 1] - 30.0L * v[i] + 16.0L * v[i + 1] - v[i + 2]) /
                   (12.0L * h2);
        d[0] = (2.0L * v[0] - 5.0L * v[1] + 4.0L * v[2] - v[3]) / h2;
        d[1] = (v[0] - 2.0L * v[1] + v[2]) / h2;
        d[n - 1] = (2.0L * v[n - 1] - 5.0L * v[n - 2] + 4.0L * v[n - 3] - v[n - 4]) / h2;
        d[n - 2] = (v[n - 1] - 2.0L * v[n - 2] + v[n - 3]) / h2;
        return d;
    };
    auto d3f = [&](const std::vector<real>& v) {
        std::vector<real> d(n);
        const real h3 = h * h * h;
        for (int i = 3; i + 3 < n; ++i)
            d[i] = (v[i - 3] - 8.0L * v[i - 2] + 13.0L * v[i - 1] - 13.0L * v[i + 1] +
                    8.0L * v[i + 2] - v[i + 3]) / (8.0L * h3);
        for (int i : {0, 1, 2})
            d[i] = (-2.5L * v[i] + 9.0L * v[i + 1] - 12.0L * v[i + 2] + 7.0L * v[i + 3] -
                    1.5L * v[i + 4]) / h3;
        for (int i : {n - 3, n - 2, n - 1})
            d[i] = (2.5L * v[i] - 9.0L * v[i - 1] + 12.0L * v[i - 2] - 7.0L * v[i - 3] +
                    1.5L * v[i - 4]) / h3;
        return d;
    };
    auto ladder = [&](const std::vector<real>& v) {
        const auto a = d1(v);
        const auto b = d2f(v);
        const auto c = d3f(v);
        std::vector<real> out(n);
        for (int i = 0; i < n; ++i)
            out[i] = static_cast<real>(cs[i]) * c[i] + static_cast<real>(c2[i]) * b[i] +
                     static_cast<real>(c1[i]) * a[i] + static_cast<real>(c0[i]) * v[i];
        return out;
    };
    auto hamiltonian = [&](const std::vector<real>& v) {
        const auto b = d2f(v);
        std::vector<real> out(n);
        for (int i = 0; i < n; ++i) out[i] = -b[i] + static_cast<real>(V[i]) * v[i];
        return out;
    };

    const auto up = ladder(p);
    const auto h_up = hamiltonian(up);
    auto h_psi = hamiltonian(p);
    for (int i = 0; i < n; ++i) h_psi[i] += 2.0L * static_cast<real>(W.sp.lambda) * p[i];
    const auto up_h = ladder(h_psi);

    const int skip = 8;
    real num = 0.0L, den = 0.0L;
    for (int i = skip; i < n - skip; ++i) {
        const real d = h_up[i] - up_h[i];
        num += d * d;
        den += up[i] * up[i];
    }
    if (den == 0.0L) return 0.0;
    return static_cast<double>(std::sqrt(num / den));
}

// ---------------------------------------------------------------------------
// Zero modes
// ---------------------------------------------------------------------------

struct ZeroModeCandidate {
    int index = 0;                    // 1..3, the printed slot
    double energy_susy = 0.0;
    double energy_physical = 0.0;     // filled when a calibration offset is known
    bool normalizable = false;
    bool singular = false;            // prefactor or W-integral diverged
    std::string note;
    std::optional<GridFunction> psi;  // normalized when normalizable
};

struct ZeroModeSet {
    SusyVariant variant{};
    LadderOp op{};
    std::vector<ZeroModeCandidate> candidates;
};

/// Closed-form wavefunction hook: energy (SUSY units) -> optional evaluable.
using ZeroModeClosedForms = std::function<std::optional<std::function<double(double)>>(double)>;

namespace detail {

enum class ExpKind { W1, W2, W3 };

struct ZeroModeRecipe {
    double energy;
    ExpKind exp_kind;
    double exp_sign; // psi = prefactor * exp(exp_sign * int W)
    std::function<double(const Superpotentials&, double)> prefactor;
};

// (W1+W2)(W2-W3) and its mirrors reduce to -2h^2 - 2 lambda x h +- (h' - s);
// written in h so the sqrt(-d) pieces cancel where the printed forms allow.
inline std::vector<ZeroModeRecipe> recipes(const SusyParams& sp, SusyVariant variant, LadderOp op) {
    const double g = sp.gamma, l = sp.lambda;
    auto one = [](const Superpotentials&, double) { return 1.0; };
    auto core = [](const Superpotentials& W, double x) {
        double hv, hp;
        W.h_pair(x, hv, hp);
        return -2.0 * hv * hv - 2.0 * W.sp.lambda * x * hv;
    };
    if (!sp.reducible()) {
        if (op == LadderOp::Annihilation) {
            if (variant == SusyVariant::V1)
                return {{0.0, ExpKind::W3, +1.0, one}};
            return {{0.0, ExpKind::W3, +1.0, [g, core](const Superpotentials& W, double x) {
                         return g + core(W, x) - W.hprime(x);
                     }}};
        }
        return {};
    }
    const double s = sp.sqrt_minus_d();
    std::vector<ZeroModeRecipe> out;
    if (variant == SusyVariant::V1) {
        if (op == LadderOp::Annihilation) {
            out.push_back({0.0, ExpKind::W3, +1.0, one});
            out.push_back({g + 2.0 * l + s, ExpKind::W2, -1.0,
                           [](const Superpotentials& W, double x) { return W.W2(x) - W.W3(x); }});
            out.push_back({g + 2.0 * l - s, ExpKind::W1, -1.0,
                           [s, core](const Superpotentials& W, double x) {
                               return s + core(W, x) + W.hprime(x);
                           }});
        } else {
            out.push_back({g - s, ExpKind::W1, +1.0, one});
            out.push_back({g + s, ExpKind::W2, +1.0,
                           [](const Superpotentials& W, double x) { return -2.0 * W.h(x); }});
            out.push_back({-2.0 * l, ExpKind::W3, -1.0,
                           [g, l, core](const Superpotentials& W, double x) {
                               return g + 2.0 * l + core(W, x) + W.hprime(x);
                           }});
        }
    } else {
        if (op == LadderOp::Annihilation) {
            out.push_back({0.0, ExpKind::W3, +1.0, [g, core](const Superpotentials& W, double x) {
                               return g + core(W, x) - W.hprime(x);
                           }});
            out.push_back({g - s, ExpKind::W1, -1.0,
                           [](const Superpotentials& W, double x) { return -2.0 * W.h(x); }});
            out.push_back({g + s, ExpKind::W2, -1.0, one});
        } else {
            out.push_back({-2.0 * l, ExpKind::W3, -1.0, one});
            out.push_back({g - 2.0 * l - s, ExpKind::W1, +1.0,
                           [](const Superpotentials& W, double x) { return W.W1(x) - W.W3(x); }});
            out.push_back({g - 2.0 * l + s, ExpKind::W2, +1.0,
                           [s, core](const Superpotentials& W, double x) {
                               return -s + core(W, x) - W.hprime(x);
                           }});
        }
    }
    return out;
}

} // namespace detail

struct ZeroModeOptions {
    double L = 0.0; // 0: use 16 / sqrt(lambda)
    int n = 4001;
    double conv_tol = 1e-6;
};

/// Catalogue closed-form x-part wavefunctions keyed by SUSY energy. Returns
/// nullopt for candidates the paper prints no closed form for (typically the
/// non-normalizable ones).
inline std::optional<std::function<double(double)>>
catalogue_zero_mode(PotentialCase c, double hbar, double omega, double t, double energy_susy) {
    const double hb = hbar, om = omega;
    const SusyParams sp = map_params(case_params(c, hbar, omega));
    const double g = sp.gamma;
    const double l = sp.lambda;
    const double s = sp.d <= 0 ? std::sqrt(-sp.d) : 0.0;
    auto near = [&](double a, double b) { return std::abs(a - b) < 1e-9 * std::max(1.0, l); };
    switch (c) {
        case PotentialCase::Case41: // V2 side; singlet chi and the ladder seed
            if (near(energy_susy, 0.0))
                return [hb, om](double x) {
                    return std::exp(-om * x * x / (2.0 * hb)) / (hb + 2.0 * om * x * x);
                };
            if (near(energy_susy, g + s))
                return [hb, om](double x) {
                    return std::exp(-om * x * x / (2.0 * hb)) * x * (3.0 * hb + 2.0 * om * x * x) /
                           (hb + 2.0 * om * x * x);
                };
            return std::nullopt;
        case PotentialCase::Case42: // V1 side; doublet chi1, chi2 and the seed
            if (near(energy_susy, 0.0))
                return [hb, om](double x) {
                    return std::exp(-om * x * x / (2.0 * hb)) * (hb + 2.0 * om * x * x) /
                           (3.0 * hb * hb + 4.0 * om * om * std::pow(x, 4));
                };
            if (near(energy_susy, g + 2.0 * l + s))
                return [hb, om](double x) {
                    const double x2 = x * x;
                    return std::exp(-om * x2 / (2.0 * hb)) *
                           (-9.0 * std::pow(hb, 3) + 18.0 * hb * hb * om * x2 +
                            12.0 * hb * om * om * x2 * x2 + 8.0 * std::pow(om, 3) * x2 * x2 * x2) /
                           (3.0 * hb * hb + 4.0 * om * om * x2 * x2);
                };
            if (near(energy_susy, g - s))
                return [hb, om](double x) {
                    return std::exp(-om * x * x / (2.0 * hb)) * x * (3.0 * hb + 2.0 * om * x * x) /
                           (3.0 * hb * hb + 4.0 * om * om * std::pow(x, 4));
                };
            return std::nullopt;
        case PotentialCase::Case43: // three harmonic sub-ladder seeds
            if (near(energy_susy, 0.0))
                return [hb, om](double x) {
                    return std::exp(-om * x * x / (6.0 * hb)) * (-3.0 * hb + 2.0 * om * x * x);
                };
            if (near(energy_susy, g + s))
                return [hb, om](double x) { return std::exp(-om * x * x / (6.0 * hb)) * x; };
            if (near(energy_susy, g - s))
                return [hb, om](double x) { return std::exp(-om * x * x / (6.0 * hb)); };
            return std::nullopt;
        case PotentialCase::Case44:
            if (near(energy_susy, 0.0))
                return [hb, om](double x) {
                    const double x2 = x * x;
                    return std::exp(-om * x2 / (6.0 * hb)) * x *
                           (-45.0 * hb * hb + 4.0 * om * om * x2 * x2) / (3.0 * hb + 2.0 * om * x2);
                };
            if (near(energy_susy, g + s))
                return [hb, om](double x) {
                    const double x2 = x * x;
                    return std::exp(-om * x2 / (6.0 * hb)) *
                           (9.0 * hb * hb - 12.0 * hb * om * x2 - 4.0 * om * om * x2 * x2) /
                           (3.0 * hb + 2.0 * om * x2);
                };
            if (near(energy_susy, g - s))
                return [hb, om](double x) {
                    return std::exp(-om * x * x / (6.0 * hb)) / (3.0 * hb + 2.0 * om * x * x);
                };
            return std::nullopt;
        case PotentialCase::Case45: // singlet chi and the deformed first level
            if (near(energy_susy, g - s))
                return [hb, om, t](double x) {
                    const double z = std::sqrt(om / hb) * x;
                    return std::exp(-om * x * x / (2.0 * hb)) / (1.0 - t * p4spectra::erfc(z));
                };
            if (near(energy_susy, 0.0))
                return [hb, om, t](double x) {
                    const double z = std::sqrt(om / hb) * x;
                    return kSqrtPi * z * std::exp(-z * z / 2.0) +
                           t * std::exp(-3.0 * z * z / 2.0) / (1.0 - t * p4spectra::erfc(z));
                };
            return std::nullopt;
    }
    return std::nullopt;
}

/// Zero modes of the annihilation or creation operator: candidate energies
/// from the printed tables, wavefunctions from cumulative quadrature of the
/// W-exponents (or a supplied closed form), normalizability decided by
/// convergence of the norm over nested intervals L, 3L/4, L/2.
inline ZeroModeSet zero_modes(const Superpotentials& W, SusyVariant variant, LadderOp op,
                              ZeroModeOptions opt = {},
                              const ZeroModeClosedForms& closed_form = nullptr) {
    const SusyParams& sp = W.sp;
    ZeroModeSet out;
    out.variant = variant;
    out.op = op;
    const double Lmax = (opt.L > 0.0 ? opt.L : 16.0 / std::sqrt(sp.lambda));
    const std::array<double, 3> Ls{0.5 * Lmax, 0.75 * Lmax, Lmax};

    int idx = 0;
    for (const auto& rec : detail::recipes(sp, variant, op)) {
        ++idx;
        ZeroModeCandidate cand;
        cand.index = idx;
        cand.energy_susy = rec.energy;

        std::function<double(double)> psi_fn;
        if (closed_form) {
            if (auto cf = closed_form(rec.energy)) psi_fn = *cf;
        }

        GridFunction psi(Lmax, opt.n);
        bool singular = false;
        try {
            if (psi_fn) {
                for (int i = 0; i < psi.n && !singular; ++i) {
                    const double v = psi_fn(psi.x(i));
                    if (!std::isfinite(v)) singular = true;
                    psi.values[i] = v;
                }
            } else {
                GridFunction wgrid(Lmax, opt.n);
                bool w_singular = false;
                for (int i = 0; i < psi.n; ++i) {
                    double wv = 0.0;
                    switch (rec.exp_kind) {
                        case detail::ExpKind::W1: wv = W.W1(psi.x(i)); break;
                        case detail::ExpKind::W2: wv = W.W2(psi.x(i)); break;
                        case detail::ExpKind::W3: wv = W.W3(psi.x(i)); break;
                    }
                    wgrid.values[i] = wv;
                    if (!std::isfinite(wv) || std::abs(wv) > 1e12) w_singular = true;
                }
                if (w_singular) {
                    cand.singular = true;
                    cand.note = "W-integral diverges at an interior point";
                    out.candidates.push_back(std::move(cand));
                    continue;
                }
                GridFunction iw = grid_cumulative(wgrid, 0.0);
                double emax = 0.0;
                for (int i = 0; i < psi.n; ++i)
                    emax = std::max(emax, rec.exp_sign * iw.values[i]);
                for (int i = 0; i < psi.n && !singular; ++i) {
                    const double pre = rec.prefactor(W, psi.x(i));
                    const double v = pre * std::exp(rec.exp_sign * iw.values[i] - emax);
                    if (!std::isfinite(v)) singular = true;
                    psi.values[i] = v;
                }
            }
        } catch (const Error& e) {
            cand.singular = true;
            cand.note = e.what();
            out.candidates.push_back(std::move(cand));
            continue;
        }
        if (singular) {
            cand.singular = true;
            if (cand.note.empty()) cand.note = "prefactor or wavefunction diverges";
            out.candidates.push_back(std::move(cand));
            continue;
        }

        std::array<double, 3> norms{};
        const double h = psi.h();
        for (size_t k = 0; k < Ls.size(); ++k) {
            double acc = 0.0;
            for (int i = 0; i < psi.n; ++i)
                if (std::abs(psi.x(i)) <= Ls[k]) acc += psi.values[i] * psi.values[i] * h;
            norms[k] = acc;
        }
        cand.normalizable = norms[2] > 0.0 && std::isfinite(norms[2]) &&
                            std::abs(norms[2] - norms[1]) <= opt.conv_tol * norms[2] &&
                            std::abs(norms[1] - norms[0]) <= std::sqrt(opt.conv_tol) * norms[2];
        if (cand.normalizable) {
            const double nrm = std::sqrt(norms[2]);
            for (double& v : psi.values) v /= nrm;
            cand.psi = std::move(psi);
        }
        out.candidates.push_back(std::move(cand));
    }
    return out;
}

/// Catalogue-aware closed-form hook for zero_modes.
inline ZeroModeClosedForms catalogue_closed_forms(PotentialCase c, double hbar, double omega,
                                                  double t = 0.0) {
    return [c, hbar, omega, t](double e) { return catalogue_zero_mode(c, hbar, omega, t, e); };
}

/// Distinct normalizable zero-mode states across both operators. The same
/// state can appear in several candidate slots (a singlet is a zero mode of
/// both a and a^dagger); duplicates are identified by energy and overlap.
inline int count_distinct_zero_modes(const std::vector<const ZeroModeSet*>& sets,
                                     double energy_tol = 1e-6) {
    struct State {
        double e;
        const GridFunction* psi;
    };
    std::vector<State> states;
    for (const auto* zs : sets) {
        for (const auto& c : zs->candidates) {
            if (!c.normalizable || !c.psi) continue;
            bool dup = false;
            for (const auto& st : states) {
                if (std::abs(st.e - c.energy_susy) > energy_tol) continue;
                if (st.psi->n == c.psi->n) {
                    const double ov = std::abs(grid_inner(*st.psi, *c.psi)) /
                                      (grid_norm(*st.psi) * grid_norm(*c.psi));
                    if (ov > 1.0 - 1e-4) dup = true;
                } else {
                    dup = true; // same energy, assume same state
                }
                if (dup) break;
            }
            if (!dup) states.push_back({c.energy_susy, &*c.psi});
        }
    }
    return static_cast<int>(states.size());
}

/// 1D x-part spectrum from the SUSY route: every distinct normalizable
/// annihilation zero mode seeds a ladder with physical spacing hbar*omega;
/// a ladder stops when it lands on a normalizable creation zero mode (that
/// state is annihilated by a^dagger).
inline std::vector<double> susy_x_levels(const ModelParams& mp, const P4Solution& f, double e_max,
                                         const ZeroModeClosedForms& closed_form = nullptr,
                                         ZeroModeOptions opt = {}) {
    const SusyVariant variant = variant_for_epsilon(mp.epsilon);
    const SusyParams sp = map_params(mp);
    Superpotentials W(sp, f);
    const double c = susy_physical_offset(mp, W, variant);
    const double half_h2 = 0.5 * mp.hbar * mp.hbar;

    ZeroModeSet ann = zero_modes(W, variant, LadderOp::Annihilation, opt, closed_form);
    ZeroModeSet cre = zero_modes(W, variant, LadderOp::Creation, opt, closed_form);

    const double tol = 1e-6 * std::max(1.0, mp.hbar * mp.omega);
    std::vector<double> seeds, stops;
    auto add_unique = [&](std::vector<double>& v, double e) {
        for (double q : v)
            if (std::abs(q - e) < tol) return;
        v.push_back(e);
    };
    for (const auto& cd : ann.candidates)
        if (cd.normalizable) add_unique(seeds, half_h2 * cd.energy_susy + c);
    for (const auto& cd : cre.candidates)
        if (cd.normalizable) add_unique(stops, half_h2 * cd.energy_susy + c);

    std::vector<double> levels;
    const double step = mp.hbar * mp.omega;
    for (double seed : seeds) {
        for (double e = seed; e <= e_max + tol; e += step) {
            add_unique(levels, e);
            bool stop = false;
            for (double q : stops)
                if (std::abs(q - e) < tol) stop = true;
            if (stop) break;
        }
    }
    std::sort(levels.begin(), levels.end());
    return levels;
}

} // namespace p4spectra
