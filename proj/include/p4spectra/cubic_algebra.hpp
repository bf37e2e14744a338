#pragma once

// Cubic-algebra representation theory: structure function, Casimir,
// unitarity constraints, and the complete catalogue of energy-spectrum
// series for both signs of epsilon and beta.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "p4spectra/errors.hpp"
#include "p4spectra/potentials.hpp"

namespace p4spectra {

// ---------------------------------------------------------------------------
// Algebra coefficients and Casimir
// ---------------------------------------------------------------------------

// [A,C] = delta B, [B,C] = mu A^3 + nu A^2 + xi A + zeta, coefficients
// polynomial in H with the entries below.
struct CubicAlgebraCoeffs {
    double delta0 = 0.0, delta1 = 0.0;
    double mu0 = 0.0;
    double nu0 = 0.0, nu1 = 0.0;
    double xi0 = 0.0, xi1 = 0.0, xi2 = 0.0;
    double zeta0 = 0.0, zeta1 = 0.0, zeta2 = 0.0, zeta3 = 0.0;

    static CubicAlgebraCoeffs from_params(const ModelParams& mp) {
        const double hb = mp.hbar, om = mp.omega, al = mp.alpha, be = mp.beta;
        const double eps = mp.epsilon;
        CubicAlgebraCoeffs c;
        c.delta0 = 16.0 * om * om * hb * hb;
        c.delta1 = 0.0;
        c.mu0 = -2.0 * hb * hb;
        c.nu0 = 0.0;
        c.nu1 = -6.0 * hb * hb;
        c.xi2 = 0.0;
        c.xi1 = 0.0;
        c.xi0 = om * om * std::pow(hb, 4) / 3.0 * (4.0 * al * al - 20.0 - 6.0 * be - 8.0 * eps * al);
        c.zeta3 = 8.0 * hb * hb;
        c.zeta2 = 0.0;
        c.zeta1 = -8.0 * om * om * std::pow(hb, 4);
        c.zeta0 = std::pow(hb, 5) * std::pow(om, 3) / 27.0 *
                  (-8.0 * al * al * al - 24.0 * al - 36.0 * al * be + 24.0 * eps * al * al +
                   8.0 * eps + 36.0 * eps * be);
        return c;
    }

    double delta(double E) const { return delta0 + delta1 * E; }
    double mu(double) const { return mu0; }
    double nu(double E) const { return nu0 + nu1 * E; }
    double xi(double E) const { return xi0 + xi1 * E + xi2 * E * E; }
    double zeta(double E) const { return zeta0 + zeta1 * E + zeta2 * E * E + zeta3 * E * E * E; }
};

struct CasimirValue {
    double value = 0.0;
};

/// Casimir as printed: a quartic polynomial in the energy.
inline CasimirValue casimir_value(const ModelParams& mp, double E) {
    const double hb = mp.hbar, om = mp.omega, al = mp.alpha, be = mp.beta;
    const double eps = mp.epsilon;
    const double v = -16.0 * hb * hb * std::pow(E, 4) +
                     4.0 * std::pow(hb, 4) * om * om / 3.0 *
                         (4.0 * al * al - 8.0 * al + 4.0 - al * be) * E * E -
                     4.0 * std::pow(hb, 5) * std::pow(om, 3) / 27.0 *
                         (8.0 * al * al * al - 24.0 * eps * al * al + 24.0 * al + 36.0 * al * be -
                          8.0 * eps - 36.0 * eps * be) * E -
                     4.0 * std::pow(hb, 6) * std::pow(om, 4) / 3.0 *
                         (4.0 * al - 8.0 * eps * al - 8.0 - 6.0 * be);
    return {v};
}

/// Casimir value consistent with the factored structure function (the value
/// that makes the general quartic reproduce the factored one exactly). The
/// printed polynomial differs; the verify suite reports the deltas.
inline CasimirValue casimir_value_consistent(const ModelParams& mp, double E) {
    const double hb = mp.hbar, om = mp.omega, al = mp.alpha, be = mp.beta;
    const double eps = mp.epsilon;
    const double v = -16.0 * hb * hb * std::pow(E, 4) +
                     4.0 * std::pow(hb, 4) * om * om / 3.0 *
                         (4.0 * al * al - 8.0 * eps * al + 4.0 - 6.0 * be) * E * E -
                     4.0 * std::pow(hb, 5) * std::pow(om, 3) / 27.0 *
                         (8.0 * al * al * al - 24.0 * eps * al * al + 24.0 * al + 36.0 * al * be -
                          8.0 * eps - 36.0 * eps * be) * E -
                     4.0 * std::pow(hb, 6) * std::pow(om, 4) / 3.0 *
                         (4.0 * al * al - 8.0 * eps * al - 8.0 - 6.0 * be);
    return {v};
}

/// General structure function: the quartic in (x+u) with coefficients built
/// from the algebra constants, H -> E and Casimir -> K.
inline double structure_function_general(const CubicAlgebraCoeffs& c, double K, double E, double u,
                                         double x) {
    const double delta = c.delta(E);
    if (!(delta > 0.0)) throw DomainError("structure_function_general: need delta > 0");
    const double sq = std::sqrt(delta);
    const double mu = c.mu(E), nu = c.nu(E), xi = c.xi(E), zeta = c.zeta(E);
    const double y = x + u;
    const double c0 = K / (-4.0 * delta) - zeta / (4.0 * sq);
    const double c1 = -xi / 4.0 + zeta / (2.0 * sq) + nu * sq / 12.0;
    const double c2 = -nu * sq / 4.0 + xi / 4.0 + mu * delta / 8.0;
    const double c3 = nu * sq / 6.0 - mu * delta / 4.0;
    const double c4 = mu * delta / 8.0;
    return c0 + y * (c1 + y * (c2 + y * (c3 + y * c4)));
}

// ---------------------------------------------------------------------------
// Factored structure function
// ---------------------------------------------------------------------------

/// Quartic in factored-root form: Phi(x) = leading * prod_i (x + u - r_i),
/// with the roots r_i in the (x+u) variable; complex roots come in
/// conjugate pairs.
struct StructureFunction {
    double leading = 0.0; // -4 omega^2 hbar^4
    std::array<std::complex<double>, 4> roots{};
    double u = 0.0;
    double E = 0.0;
    int p = -1; // truncation level, -1 if not tied to one

    double eval(double x) const {
        std::complex<double> acc(leading, 0.0);
        for (const auto& r : roots) acc *= (std::complex<double>(x + u, 0.0) - r);
        return acc.real();
    }

    // magnitude scale of |Phi| near the occupied window, for tolerances
    double scale(double x) const {
        double m = std::abs(leading);
        for (const auto& r : roots) m *= std::max(1.0, std::abs(std::complex<double>(x + u) - r));
        return m;
    }
};

/// The four u with Phi(0) = 0 (beta < 0); for beta > 0 only the two real
/// candidates survive (the complex pair is excluded).
inline std::vector<double> u_candidates(const ModelParams& mp, double E) {
    const double hw = mp.hbar * mp.omega;
    const double al = mp.alpha, be = mp.beta;
    const double shift = (mp.epsilon == 1) ? 2.0 : 4.0;
    std::vector<double> us;
    // u1 and u4 are real for either sign of beta
    const double u1 = -E / (2.0 * hw) + ((mp.epsilon == 1) ? (5.0 / 6.0 - al / 3.0)
                                                           : (1.0 / 6.0 - al / 3.0));
    const double u4 = E / (2.0 * hw) + 0.5;
    if (be < 0.0) {
        const double s2 = std::sqrt(-be / 2.0);
        const double u2 = -E / (2.0 * hw) + (al + shift + 3.0 * s2) / 6.0;
        const double u3 = -E / (2.0 * hw) + (al + shift - 3.0 * s2) / 6.0;
        us = {u1, u2, u3, u4};
    } else {
        us = {u1, u4};
    }
    return us;
}

namespace detail {

// Factored roots in the (x+u) variable for given u and E: always
// {u (the x = 0 root), and the three partners}.
inline StructureFunction factored_phi(const ModelParams& mp, double E, double u) {
    using C = std::complex<double>;
    const double hw = mp.hbar * mp.omega;
    const double al = mp.alpha, be = mp.beta;
    const double shift = (mp.epsilon == 1) ? 2.0 : 4.0;
    const double r2c = (mp.epsilon == 1) ? (5.0 / 6.0 - al / 3.0) : (1.0 / 6.0 - al / 3.0);
    StructureFunction phi;
    phi.leading = -4.0 * mp.omega * mp.omega * std::pow(mp.hbar, 4);
    phi.u = u;
    phi.E = E;
    const C r1(E / (2.0 * hw) + 0.5, 0.0);
    const C r2(-E / (2.0 * hw) + r2c, 0.0);
    C r3, r4;
    if (be < 0.0) {
        const double s2 = std::sqrt(-be / 2.0);
        r3 = C(-E / (2.0 * hw) + (al + shift + 3.0 * s2) / 6.0, 0.0);
        r4 = C(-E / (2.0 * hw) + (al + shift - 3.0 * s2) / 6.0, 0.0);
    } else {
        const double s = std::sqrt(be / 2.0);
        r3 = C(-E / (2.0 * hw) + (al + shift) / 6.0, -0.5 * s);
        r4 = std::conj(r3);
    }
    phi.roots = {r1, r2, r3, r4};
    return phi;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Spectrum series
// ---------------------------------------------------------------------------

enum class SeriesCase {
    Eps1Case1, Eps1Case2, Eps1Case3, Eps1Case4a, Eps1Case4b, Eps1Case4c,
    Eps1BetaPosA, Eps1BetaPosB,
    EpsM1Case1, EpsM1Case2, EpsM1Case3, EpsM1Case4a, EpsM1Case4b, EpsM1Case4c,
    EpsM1BetaPosA, EpsM1BetaPosB,
};

inline const char* series_case_name(SeriesCase c) {
    switch (c) {
        case SeriesCase::Eps1Case1: return "eps+1/case1";
        case SeriesCase::Eps1Case2: return "eps+1/case2";
        case SeriesCase::Eps1Case3: return "eps+1/case3";
        case SeriesCase::Eps1Case4a: return "eps+1/case4a";
        case SeriesCase::Eps1Case4b: return "eps+1/case4b";
        case SeriesCase::Eps1Case4c: return "eps+1/case4c";
        case SeriesCase::Eps1BetaPosA: return "eps+1/betapos-a";
        case SeriesCase::Eps1BetaPosB: return "eps+1/betapos-b";
        case SeriesCase::EpsM1Case1: return "eps-1/case1";
        case SeriesCase::EpsM1Case2: return "eps-1/case2";
        case SeriesCase::EpsM1Case3: return "eps-1/case3";
        case SeriesCase::EpsM1Case4a: return "eps-1/case4a";
        case SeriesCase::EpsM1Case4b: return "eps-1/case4b";
        case SeriesCase::EpsM1Case4c: return "eps-1/case4c";
        case SeriesCase::EpsM1BetaPosA: return "eps-1/betapos-a";
        case SeriesCase::EpsM1BetaPosB: return "eps-1/betapos-b";
    }
    return "?";
}

/// One predicted energy ladder E(p) = base + slope * p with its validity
/// window and the factored structure function behind each member.
struct SpectrumSeries {
    SeriesCase case_id{};
    ModelParams params;
    double base = 0.0;   // E(0)
    double slope = 0.0;  // +-hbar*omega
    bool finite = true;
    std::vector<int> valid_p;
    std::vector<SeriesCase> coincident_with; // merged duplicates

    double energy_at(int p) const { return base + slope * p; }
    double min_energy() const {
        double m = energy_at(valid_p.front());
        for (int p : valid_p) m = std::min(m, energy_at(p));
        return m;
    }
    StructureFunction structure_function(int p) const {
        return make_structure_function(params, case_id, p);
    }

    static StructureFunction make_structure_function(const ModelParams& mp, SeriesCase c, int p);
    static double case_energy(const ModelParams& mp, SeriesCase c, int p);
};

namespace detail {

struct CaseDef {
    SeriesCase id;
    int u_index; // which u candidate (0..3 for beta<0: u1,u2,u3,u4; beta>0: 0=u1, 3=u4)
};

inline std::vector<CaseDef> cases_for(const ModelParams& mp) {
    if (mp.beta < 0.0) {
        if (mp.epsilon == 1)
            return {{SeriesCase::Eps1Case1, 0},  {SeriesCase::Eps1Case2, 1},
                    {SeriesCase::Eps1Case3, 2},  {SeriesCase::Eps1Case4a, 3},
                    {SeriesCase::Eps1Case4b, 3}, {SeriesCase::Eps1Case4c, 3}};
        return {{SeriesCase::EpsM1Case1, 0},  {SeriesCase::EpsM1Case2, 1},
                {SeriesCase::EpsM1Case3, 2},  {SeriesCase::EpsM1Case4a, 3},
                {SeriesCase::EpsM1Case4b, 3}, {SeriesCase::EpsM1Case4c, 3}};
    }
    if (mp.epsilon == 1)
        return {{SeriesCase::Eps1BetaPosA, 0}, {SeriesCase::Eps1BetaPosB, 3}};
    return {{SeriesCase::EpsM1BetaPosA, 0}, {SeriesCase::EpsM1BetaPosB, 3}};
}

} // namespace detail

/// Printed closed-form energy of each truncation case.
inline double SpectrumSeries::case_energy(const ModelParams& mp, SeriesCase c, int p) {
    const double hw = mp.hbar * mp.omega;
    const double al = mp.alpha;
    const double s8 = (mp.beta < 0.0) ? std::sqrt(-mp.beta / 8.0) : 0.0;
    switch (c) {
        case SeriesCase::Eps1Case1:    return hw * (p + 4.0 / 3.0 - al / 3.0);
        case SeriesCase::Eps1Case2:    return hw * (p + 5.0 / 6.0 + al / 6.0 + s8);
        case SeriesCase::Eps1Case3:    return hw * (p + 5.0 / 6.0 + al / 6.0 - s8);
        case SeriesCase::Eps1Case4a:   return -hw * (p + 2.0 / 3.0 + al / 3.0);
        case SeriesCase::Eps1Case4b:   return -hw * (p + 7.0 / 6.0 - al / 6.0 - s8);
        case SeriesCase::Eps1Case4c:   return -hw * (p + 7.0 / 6.0 - al / 6.0 + s8);
        case SeriesCase::Eps1BetaPosA: return hw * (p + 4.0 / 3.0 - al / 3.0);
        case SeriesCase::Eps1BetaPosB: return -hw * (p + 2.0 / 3.0 + al / 3.0);
        case SeriesCase::EpsM1Case1:    return hw * (p + 2.0 / 3.0 - al / 3.0);
        case SeriesCase::EpsM1Case2:    return hw * (p + 7.0 / 6.0 + al / 6.0 + s8);
        case SeriesCase::EpsM1Case3:    return hw * (p + 7.0 / 6.0 + al / 6.0 - s8);
        case SeriesCase::EpsM1Case4a:   return -hw * (p + 4.0 / 3.0 + al / 3.0);
        case SeriesCase::EpsM1Case4b:   return -hw * (p + 5.0 / 6.0 - al / 6.0 - s8);
        case SeriesCase::EpsM1Case4c:   return -hw * (p + 5.0 / 6.0 - al / 6.0 + s8);
        case SeriesCase::EpsM1BetaPosA: return hw * (p + 2.0 / 3.0 - al / 3.0);
        case SeriesCase::EpsM1BetaPosB: return -hw * (p + 4.0 / 3.0 + al / 3.0);
    }
    throw ConfigError("case_energy: unknown case");
}

/// Factored structure function of a case at truncation level p, built from
/// the master factored form with u the case's root and E = E(p). The x = 0
/// and x = p+1 roots are exact by construction.
inline StructureFunction SpectrumSeries::make_structure_function(const ModelParams& mp,
                                                                 SeriesCase c, int p) {
    const double E = case_energy(mp, c, p);
    const std::vector<double> us = u_candidates(mp, E);
    int ui = 0;
    for (const auto& cd : detail::cases_for(mp))
        if (cd.id == c) ui = cd.u_index;
    double u;
    if (mp.beta < 0.0) {
        u = us[static_cast<size_t>(ui)];
    } else {
        u = (ui == 0) ? us[0] : us[1];
    }
    StructureFunction phi = detail::factored_phi(mp, E, u);
    phi.p = p;
    return phi;
}

// ---------------------------------------------------------------------------
// Unitarity validation and series derivation
// ---------------------------------------------------------------------------

struct ValidationReport {
    bool ok = false;
    double phi0 = 0.0;
    double phi_p1 = 0.0;
    double min_interior = 0.0; // smallest Phi(k), k = 1..p (0 if no interior)
    std::string reason;
};

/// Unitary-representation test for a (p+1)-dimensional module: boundary
/// zeros at 0 and p+1, strictly positive Phi at the interior integers.
/// p = 0 has no interior points and passes vacuously.
inline ValidationReport validate_representation(const StructureFunction& phi, int p) {
    if (p < 0) throw DomainError("validate_representation: p >= 0");
    ValidationReport rep;
    rep.phi0 = phi.eval(0.0);
    rep.phi_p1 = phi.eval(p + 1.0);
    const double s0 = phi.scale(0.0);
    const double s1 = phi.scale(p + 1.0);
    if (std::abs(rep.phi0) > 1e-9 * s0) {
        rep.reason = "Phi(0) != 0";
        return rep;
    }
    if (std::abs(rep.phi_p1) > 1e-9 * s1) {
        rep.reason = "Phi(p+1) != 0";
        return rep;
    }
    rep.min_interior = 0.0;
    bool first = true;
    for (int k = 1; k <= p; ++k) {
        const double v = phi.eval(static_cast<double>(k));
        if (first || v < rep.min_interior) rep.min_interior = v, first = false;
        if (!(v > 1e-9 * phi.scale(static_cast<double>(k)))) {
            rep.reason = "Phi(" + std::to_string(k) + ") not strictly positive";
            return rep;
        }
    }
    rep.ok = true;
    return rep;
}

namespace detail {

// Phi > 0 on the open interval (0, p+1): exact sign analysis by sampling
// midpoints between consecutive real roots inside the interval.
inline bool positive_on_open_interval(const StructureFunction& phi, int p) {
    std::vector<double> breaks{0.0, p + 1.0};
    for (const auto& r : phi.roots) {
        if (std::abs(r.imag()) > 1e-12) continue;
        const double xr = r.real() - phi.u; // root in the x variable
        if (xr > 1e-12 && xr < p + 1.0 - 1e-12) breaks.push_back(xr);
    }
    std::sort(breaks.begin(), breaks.end());
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double m = 0.5 * (breaks[i] + breaks[i + 1]);
        if (!(phi.eval(m) > 0.0)) return false;
    }
    return true;
}

} // namespace detail

struct DeriveDiagnostics {
    std::vector<SeriesCase> pruned_descending;   // valid through p_max but unbounded below
    std::vector<SeriesCase> pruned_nonpositive;  // finite window, Phi not positive on (0, P+1)
};

/// Instantiate every printed case for the parameter regime, validate each
/// truncation level p = 0..p_max, and emit the physically meaningful series:
///  - ascending series valid through the whole budget are infinite ladders;
///  - descending series valid through the whole budget would be unbounded
///    below and are pruned;
///  - finite-window series must also have Phi > 0 on the continuum
///    (0, P+1) at their largest valid P;
///  - duplicate series (same levels) are merged and flagged coincident.
inline std::vector<SpectrumSeries> derive_spectra(const ModelParams& mp, int p_max,
                                                  DeriveDiagnostics* diag = nullptr) {
    if (p_max < 0) throw DomainError("derive_spectra: p_max >= 0");
    std::vector<SpectrumSeries> out;
    for (const auto& cd : detail::cases_for(mp)) {
        SpectrumSeries s;
        s.case_id = cd.id;
        s.params = mp;
        s.base = SpectrumSeries::case_energy(mp, cd.id, 0);
        s.slope = SpectrumSeries::case_energy(mp, cd.id, 1) - s.base;
        for (int p = 0; p <= p_max; ++p) {
            const StructureFunction phi = SpectrumSeries::make_structure_function(mp, cd.id, p);
            if (validate_representation(phi, p).ok) s.valid_p.push_back(p);
        }
        if (s.valid_p.empty()) continue;
        const bool full = static_cast<int>(s.valid_p.size()) == p_max + 1;
        s.finite = !full;
        if (full) {
            if (s.slope < 0.0) {
                if (diag) diag->pruned_descending.push_back(cd.id);
                continue; // no bounded-below spectrum can contain it
            }
        } else {
            const int P = *std::max_element(s.valid_p.begin(), s.valid_p.end());
            const StructureFunction phi = SpectrumSeries::make_structure_function(mp, cd.id, P);
            if (!detail::positive_on_open_interval(phi, P)) {
                if (diag) diag->pruned_nonpositive.push_back(cd.id);
                continue;
            }
        }
        out.push_back(std::move(s));
    }
    // merge coincident series: same level multiset within tolerance
    std::vector<SpectrumSeries> merged;
    for (auto& s : out) {
        bool dup = false;
        for (auto& m : merged) {
            if (m.finite != s.finite || m.valid_p.size() != s.valid_p.size()) continue;
            bool same = std::abs(m.slope - s.slope) < 1e-9 * mp.hbar * mp.omega;
            for (size_t i = 0; same && i < m.valid_p.size(); ++i)
                same = std::abs(m.energy_at(m.valid_p[i]) - s.energy_at(s.valid_p[i])) <
                       1e-9 * std::max(1.0, mp.hbar * mp.omega);
            if (same) {
                m.coincident_with.push_back(s.case_id);
                dup = true;
                break;
            }
        }
        if (!dup) merged.push_back(std::move(s));
    }
    return merged;
}

/// 1D x-part levels implied by the 2D series (the y zero point is removed):
/// an infinite series maps rung by rung, a finite series contributes the
/// x-ground of its lowest member only (its higher members are y-excitations
/// of lower x-states).
inline std::vector<double> to_x_levels(const std::vector<SpectrumSeries>& series, double e_max,
                                       const ModelParams& mp) {
    const double y0 = 0.5 * mp.hbar * mp.omega;
    std::vector<double> levels;
    for (const auto& s : series) {
        if (!s.finite) {
            for (int p = s.valid_p.front();; ++p) {
                const double e = s.energy_at(p) - y0;
                if (e > e_max) break;
                levels.push_back(e);
            }
        } else {
            const double e = s.min_energy() - y0;
            if (e <= e_max) levels.push_back(e);
        }
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end(),
                             [&](double a, double b) {
                                 return std::abs(a - b) < 1e-9 * std::max(1.0, mp.hbar * mp.omega);
                             }),
                 levels.end());
    return levels;
}

} // namespace p4spectra
