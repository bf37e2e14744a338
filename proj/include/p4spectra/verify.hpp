#pragma once

// Verification suites behind `p4spec verify` and the acceptance tests.
// Every check returns its measured value next to the tolerance it was held
// to, so reports stay meaningful when something drifts.

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "p4spectra/cubic_algebra.hpp"
#include "p4spectra/eigensolver.hpp"
#include "p4spectra/ladder_sequence.hpp"
#include "p4spectra/potentials.hpp"
#include "p4spectra/special_functions.hpp"
#include "p4spectra/susy.hpp"

namespace p4spectra {

struct Check {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string note;
};

inline bool all_pass(const std::vector<Check>& cs) {
    for (const auto& c : cs)
        if (!c.pass) return false;
    return true;
}

namespace verify_detail {

inline Check bounded(std::string name, double measured, double tol, std::string note = "") {
    Check c;
    c.name = std::move(name);
    c.measured = measured;
    c.tolerance = tol;
    c.pass = std::isfinite(measured) && measured < tol;
    c.note = std::move(note);
    return c;
}

inline Check flag(std::string name, bool ok, std::string note = "") {
    Check c;
    c.name = std::move(name);
    c.pass = ok;
    c.measured = ok ? 1.0 : 0.0;
    c.tolerance = 1.0;
    c.note = std::move(note);
    return c;
}

// ---- independent quadrature oracle for erfc (Gauss-Kronrod 15 point) ----

inline void gk15(const std::function<double(double)>& f, double a, double b, double& val,
                 double& err) {
    static const double xg[8] = {0.0, 0.2077849550078985, 0.4058451513773972,
                                 0.5860872354676911, 0.7415311855993945, 0.8648644233597691,
                                 0.9491079123427585, 0.9914553711208126};
    static const double wk[8] = {0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
                                 0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
                                 0.0630920926299786, 0.0229353220105292};
    static const double wg[4] = {0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
                                 0.1294849661688697};
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double sk = wk[0] * f(c);
    double sg = wg[0] * f(c);
    for (int i = 1; i < 8; ++i) {
        const double fv = f(c - hw * xg[i]) + f(c + hw * xg[i]);
        sk += wk[i] * fv;
        if (i % 2 == 0) sg += wg[i / 2] * fv;
    }
    val = sk * hw;
    err = std::abs((sk - sg) * hw);
}

inline double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                            double tol, int depth = 0) {
    double v, e;
    gk15(f, a, b, v, e);
    if (e < tol || depth > 40) return v;
    const double m = 0.5 * (a + b);
    return adaptive_quad(f, a, m, tol / 2, depth + 1) +
           adaptive_quad(f, m, b, tol / 2, depth + 1);
}

/// erfc by adaptive quadrature of the defining integral; never calls the
/// implementation under test.
inline double erfc_oracle(double z) {
    const auto gauss = [](double t) { return std::exp(-t * t); };
    const double upper = std::max(z, 0.0) + 9.0; // integrand < 1e-35 beyond
    return 2.0 / kSqrtPi * adaptive_quad(gauss, z, upper, 1e-16);
}

// ---- shared case tables ----

struct CaseSetup {
    PotentialCase c;
    double t;
    std::vector<double> x_levels; // paper-derived 1D x-part values
    double L = 12.0;              // box half-width; omega/3 cases need more room
};

inline std::vector<CaseSetup> acceptance_cases() {
    auto ladder = [](std::initializer_list<double> bases, int count) {
        std::vector<double> lv;
        for (double b : bases)
            for (int n = 0; n < count; ++n) lv.push_back(b + n);
        std::sort(lv.begin(), lv.end());
        return lv;
    };
    std::vector<CaseSetup> out;
    {
        std::vector<double> lv{-5.0 / 6.0};
        for (int n = 0; n < 8; ++n) lv.push_back(13.0 / 6.0 + n);
        out.push_back({PotentialCase::Case41, 0.0, lv});
    }
    {
        std::vector<double> lv{-1.5, -0.5};
        for (int n = 0; n < 8; ++n) lv.push_back(2.5 + n);
        out.push_back({PotentialCase::Case42, 0.0, lv});
    }
    {
        std::vector<double> lv;
        for (int n = 0; n < 20; ++n) lv.push_back((n + 0.5) / 3.0);
        out.push_back({PotentialCase::Case43, 0.0, lv, 18.0});
    }
    out.push_back({PotentialCase::Case44, 0.0, ladder({-0.5, 5.0 / 6.0, 7.0 / 6.0}, 8), 18.0});
    {
        std::vector<double> lv;
        for (int n = 0; n < 9; ++n) lv.push_back(n - 1.0 / 6.0);
        out.push_back({PotentialCase::Case45, 0.3, lv});
    }
    return out;
}

inline Potential1D case_x_potential(PotentialCase c, double t) {
    if (c == PotentialCase::Case45 && t != 0.0) {
        PotentialSpec spec = PotentialSpec::case_from_p4(c, 1.0, 1.0, t);
        return [spec](double x) { return g1(spec, x); };
    }
    const ModelParams mp = case_params(c);
    return [c, mp, t](double x) { return closed_form_x(c, mp, x, t); };
}

// Compare two sorted level lists below a cutoff; returns the worst pairwise
// deviation, or +inf on a count mismatch.
inline double match_levels(const std::vector<double>& got, const std::vector<double>& want,
                           double cutoff, std::string& note) {
    std::vector<double> a, b;
    for (double e : got)
        if (e < cutoff) a.push_back(e);
    for (double e : want)
        if (e < cutoff) b.push_back(e);
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << "count mismatch: got " << a.size() << ", want " << b.size();
        note = os.str();
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace verify_detail

// ---------------------------------------------------------------------------
// painleve suite
// ---------------------------------------------------------------------------

inline std::vector<Check> verify_painleve() {
    using namespace verify_detail;
    std::vector<Check> out;

    struct Entry {
        CatalogueId id;
        double t;
        P4Params prm;
    };
    const Entry entries[] = {
        {CatalogueId::A, 0.0, {5.0, -8.0}},      {CatalogueId::B, 0.0, {0.0, -2.0 / 9.0}},
        {CatalogueId::C, 0.0, {-1.0, -32.0 / 9.0}}, {CatalogueId::D, 0.0, {0.0, -2.0}},
        {CatalogueId::D, 0.3, {0.0, -2.0}},      {CatalogueId::D, -1.0, {0.0, -2.0}},
        {CatalogueId::E, 0.3, {0.0, -2.0}},
    };
    for (const auto& e : entries) {
        P4Solution s = P4Solution::catalogue(e.id, e.t);
        double worst = 0.0;
        int used = 0;
        for (int i = 0; i <= 400; ++i) {
            const double z = -5.0 + 10.0 * i / 400.0;
            try {
                const P4Triple tr = s.eval_with_second(z);
                if (std::abs(tr.f) < 1e-9 || std::abs(tr.f) > 10.0) continue;
                worst = std::max(worst, std::abs(p4_residual(tr.f, tr.fp, tr.fpp, z, e.prm)));
                ++used;
            } catch (const Error&) {
            }
        }
        std::ostringstream name;
        name << "painleve/residual-" << catalogue_name(e.id);
        if (e.id == CatalogueId::D || e.id == CatalogueId::E) name << "(t=" << e.t << ")";
        out.push_back(bounded(name.str(), worst, 1e-8,
                              std::to_string(used) + " sample points"));
    }

    // integrator reproduces A and B from their initial data on [1, 4]
    {
        P4Solution a = P4Solution::catalogue(CatalogueId::A);
        const auto [f0, fp0] = a.eval(1.0);
        std::vector<double> targets;
        for (int i = 0; i <= 60; ++i) targets.push_back(1.0 + 3.0 * i / 60.0);
        const IntegrationResult r = p4_integrate({5.0, -8.0}, 1.0, f0, fp0, targets, 1e-14);
        double worst = std::numeric_limits<double>::infinity();
        if (r.status == IntegrationStatus::Ok && r.at_targets.size() == targets.size()) {
            worst = 0.0;
            for (const auto& smp : r.at_targets)
                worst = std::max(worst, std::abs(smp.f - a.eval(smp.z).first));
        }
        out.push_back(bounded("painleve/integrate-A", worst, 1e-8));
    }
    {
        std::vector<double> targets;
        for (int i = 0; i <= 60; ++i) targets.push_back(1.0 + 3.0 * i / 60.0);
        const IntegrationResult r =
            p4_integrate({0.0, -2.0 / 9.0}, 1.0, -2.0 / 3.0, -2.0 / 3.0, targets, 1e-14);
        double worst = std::numeric_limits<double>::infinity();
        if (r.status == IntegrationStatus::Ok && r.at_targets.size() == targets.size()) {
            worst = 0.0;
            for (const auto& smp : r.at_targets)
                worst = std::max(worst, std::abs(smp.f + 2.0 * smp.z / 3.0));
        }
        out.push_back(bounded("painleve/integrate-B", worst, 1e-8));
    }

    // dense trace stays on the equation between nodes (Hermite mid-step)
    {
        const double tol = 1e-10;
        P4Solution a = P4Solution::catalogue(CatalogueId::A);
        const auto [f0, fp0] = a.eval(1.0);
        const IntegrationResult r = p4_integrate({5.0, -8.0}, 1.0, f0, fp0, {4.0}, tol);
        const auto& tr = r.solution.trace();
        double worst = 0.0;
        for (size_t i = 0; i + 1 < tr.size(); ++i) {
            const double zm = 0.5 * (tr[i].z + tr[i + 1].z);
            const auto [fm, fpm] = r.solution.eval(zm);
            // f'' of the f'-Hermite interpolant, nodes carry f'' = rhs
            const double hseg = tr[i + 1].z - tr[i].z;
            if (hseg <= 0) continue;
            const double k0 = p4_rhs(tr[i].f, tr[i].fp, tr[i].z, {5.0, -8.0});
            const double k1 = p4_rhs(tr[i + 1].f, tr[i + 1].fp, tr[i + 1].z, {5.0, -8.0});
            // midpoint derivative of the cubic Hermite interpolant of f'
            const double fpp_mid = 1.5 * (tr[i + 1].fp - tr[i].fp) / hseg - 0.25 * (k0 + k1);
            const double res = std::abs(p4_residual(fm, fpm, fpp_mid, zm, {5.0, -8.0})) /
                               std::max(1.0, std::abs(k0));
            worst = std::max(worst, res);
        }
        out.push_back(bounded("painleve/dense-residual", worst, 10.0 * 1e-6,
                              "relative to the local f'' scale"));
    }

    // derivative consistency: halving h cuts the central-difference error >= 3.8x
    {
        double worst_ratio = std::numeric_limits<double>::infinity();
        for (const auto& pr : {std::pair<CatalogueId, double>{CatalogueId::A, 0.0},
                               {CatalogueId::D, 0.3}}) {
            P4Solution s = P4Solution::catalogue(pr.first, pr.second);
            for (double z : {-2.3, -0.9, 0.4, 1.7, 3.2}) {
                auto cd = [&](double hh) {
                    return std::abs((s.eval(z + hh).first - s.eval(z - hh).first) / (2.0 * hh) -
                                    s.eval(z).second);
                };
                const double e1 = cd(1e-3), e2 = cd(5e-4);
                if (e2 > 0.0) worst_ratio = std::min(worst_ratio, e1 / e2);
            }
        }
        out.push_back(flag("painleve/derivative-order", worst_ratio >= 3.8,
                           "worst halving ratio " + std::to_string(worst_ratio)));
    }

    // erfc against the quadrature oracle, plus structure
    {
        double worst = 0.0;
        for (double z : {-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 4.0})
            worst = std::max(worst, std::abs(p4spectra::erfc(z) - erfc_oracle(z)));
        out.push_back(bounded("painleve/erfc-oracle", worst, 1e-12));
        bool monotone = true;
        double prev = p4spectra::erfc(-5.2);
        for (int i = 1; i < 1000; ++i) {
            const double v = p4spectra::erfc(-5.2 + 10.4 * i / 999.0);
            if (v >= prev) monotone = false;
            prev = v;
        }
        out.push_back(flag("painleve/erfc-monotone", monotone));
        out.push_back(bounded("painleve/erfc-reflection",
                              std::abs(p4spectra::erfc(-0.7) - (2.0 - p4spectra::erfc(0.7))),
                              1e-14));
    }
    return out;
}

// ---------------------------------------------------------------------------
// algebra suite
// ---------------------------------------------------------------------------

inline std::vector<Check> verify_algebra() {
    using namespace verify_detail;
    std::vector<Check> out;

    // factored vs general structure function; a disagreement must be an
    // x-independent shift traceable to the printed Casimir polynomial
    {
        uint64_t state = 0x2545f4914f6cdd1dull;
        auto rnd = [&state]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return static_cast<double>(state >> 11) / 9007199254740992.0;
        };
        double worst_agree = 0.0, worst_const = 0.0, worst_implicate = 0.0;
        for (int eps : {+1, -1}) {
            for (int trial = 0; trial < 20; ++trial) {
                const double al = -3.0 + 9.0 * rnd();
                const double be = -9.0 + 8.9 * rnd(); // beta < 0
                const double E = -5.0 + 10.0 * rnd();
                const ModelParams mp(al, be, eps);
                const CubicAlgebraCoeffs coeffs = CubicAlgebraCoeffs::from_params(mp);
                const double Kp = casimir_value(mp, E).value;
                const double Kc = casimir_value_consistent(mp, E).value;
                for (double u : u_candidates(mp, E)) {
                    const StructureFunction phi = detail::factored_phi(mp, E, u);
                    double diff0 = 0.0;
                    for (int x = 0; x <= 4; ++x) {
                        const double gen = structure_function_general(coeffs, Kp, E, u, x);
                        const double fac = phi.eval(x);
                        const double scale = std::max({1.0, std::abs(gen), std::abs(fac)});
                        const double diff = gen - fac;
                        worst_agree = std::max(worst_agree, std::abs(diff) / scale);
                        if (x == 0)
                            diff0 = diff;
                        else
                            worst_const =
                                std::max(worst_const, std::abs(diff - diff0) / scale);
                    }
                    // the shift must equal (Kp - Kc)/(-4 delta)
                    const double implied = (Kp - Kc) / (-4.0 * coeffs.delta(E));
                    worst_implicate = std::max(
                        worst_implicate,
                        std::abs(diff0 - implied) / std::max(1.0, std::abs(implied)));
                }
            }
        }
        if (worst_agree < 1e-8) {
            out.push_back(bounded("algebra/factored-general-agreement", worst_agree, 1e-8));
        } else {
            out.push_back(flag(
                "algebra/factored-general-agreement",
                worst_const < 1e-8 && worst_implicate < 1e-8,
                "disagreement is x-independent and equals the printed-Casimir defect: "
                "H^2 coefficient should read (4a^2-8ea+4-6b), constant term (4a^2-8ea-8-6b); "
                "shift residual " + std::to_string(worst_implicate)));
        }
        // with the consistent Casimir the general form must match exactly
        double worst_fixed = 0.0;
        for (int eps : {+1, -1}) {
            const ModelParams mp(1.7, -3.1, eps);
            const CubicAlgebraCoeffs coeffs = CubicAlgebraCoeffs::from_params(mp);
            for (double E : {0.7, 1.3, 2.0}) {
                const double Kc = casimir_value_consistent(mp, E).value;
                for (double u : u_candidates(mp, E))
                    for (int x = 0; x <= 4; ++x) {
                        const StructureFunction phi = detail::factored_phi(mp, E, u);
                        const double gen = structure_function_general(coeffs, Kc, E, u, x);
                        const double fac = phi.eval(x);
                        worst_fixed = std::max(worst_fixed, std::abs(gen - fac) /
                                                                std::max({1.0, std::abs(gen)}));
                    }
            }
        }
        out.push_back(bounded("algebra/consistent-casimir-agreement", worst_fixed, 1e-10));
    }

    // root identity: Phi(0) vanishes identically for every u candidate
    {
        bool exact = true;
        for (int eps : {+1, -1}) {
            const ModelParams mp(2.3, -1.7, eps);
            for (double E : {-1.0, 0.4, 3.7})
                for (double u : u_candidates(mp, E))
                    if (detail::factored_phi(mp, E, u).eval(0.0) != 0.0) exact = false;
        }
        out.push_back(flag("algebra/root-identity", exact, "Phi(0) == 0 exactly by root matching"));
    }

    // closure: Phi(p+1) = 0 for every emitted series, p = 0..5
    {
        double worst = 0.0;
        std::vector<ModelParams> params;
        for (const auto& cs : acceptance_cases()) params.push_back(case_params(cs.c));
        params.emplace_back(1.3, -2.7, +1);
        params.emplace_back(1.3, -2.7, -1);
        for (const auto& mp : params) {
            for (const auto& s : derive_spectra(mp, 8)) {
                for (int p = 0; p <= 5; ++p) {
                    const StructureFunction phi = s.structure_function(p);
                    const double scale = phi.scale(p + 1.0);
                    worst = std::max(worst, std::abs(phi.eval(p + 1.0)) / scale);
                }
            }
        }
        out.push_back(bounded("algebra/closure-phi-p1", worst, 1e-10));
    }

    // 4.3 emits exactly three infinite series with bases {2/3, 1, 4/3}
    {
        const ModelParams mp = case_params(PotentialCase::Case43);
        const auto series = derive_spectra(mp, 8);
        int infinite = 0;
        std::vector<double> bases;
        for (const auto& s : series)
            if (!s.finite) {
                ++infinite;
                bases.push_back(s.base);
            }
        std::sort(bases.begin(), bases.end());
        bool ok = infinite == 3 && static_cast<int>(series.size()) == 3 &&
                  std::abs(bases[0] - 2.0 / 3.0) < 1e-12 && std::abs(bases[1] - 1.0) < 1e-12 &&
                  std::abs(bases[2] - 4.0 / 3.0) < 1e-12;
        // 1D conversions interleave into the (n+1/2)/3 ladder
        const auto xl = to_x_levels(series, 6.0, mp);
        for (size_t i = 0; i < xl.size(); ++i)
            if (std::abs(xl[i] - (i + 0.5) / 3.0) > 1e-9) ok = false;
        out.push_back(flag("algebra/case43-three-series", ok));
    }

    // validity windows: 4.1 second series only p=0; 4.2 finite series p={0,1}
    {
        const auto s41 = derive_spectra(case_params(PotentialCase::Case41), 8);
        bool ok = false;
        for (const auto& s : s41)
            if (s.case_id == SeriesCase::Eps1Case1)
                ok = s.finite && s.valid_p == std::vector<int>{0};
        out.push_back(flag("algebra/case41-window", ok, "E = p - 1/3 valid only for p = 0"));
    }
    {
        const auto s42 = derive_spectra(case_params(PotentialCase::Case42), 8);
        bool ok1 = false, ok2 = false;
        for (const auto& s : s42) {
            if (s.case_id == SeriesCase::EpsM1Case1)
                ok1 = s.finite && s.valid_p == std::vector<int>{0, 1};
            if (s.case_id == SeriesCase::EpsM1Case4b)
                ok2 = s.finite && s.valid_p == std::vector<int>{0, 1};
        }
        out.push_back(flag("algebra/case42-windows", ok1 && ok2,
                           "both finite series valid only for p = 0, 1"));
    }

    // 4.5: the two coincident series merge into one flagged entry
    {
        const auto s45 = derive_spectra(case_params(PotentialCase::Case45), 8);
        bool ok = false;
        for (const auto& s : s45)
            if (!s.finite && std::abs(s.base - 4.0 / 3.0) < 1e-12)
                ok = !s.coincident_with.empty();
        out.push_back(flag("algebra/case45-coincident-merge", ok));
    }
    return out;
}

// ---------------------------------------------------------------------------
// susy suite
// ---------------------------------------------------------------------------

inline std::vector<Check> verify_susy() {
    using namespace verify_detail;
    std::vector<Check> out;

    // W identities on pole-free samples, all catalogue cases
    {
        double worst = 0.0;
        for (const auto& cs : acceptance_cases()) {
            const ModelParams mp = case_params(cs.c);
            Superpotentials W(map_params(mp), P4Solution::catalogue(case_catalogue(cs.c), cs.t));
            for (int i = 0; i < 40; ++i) {
                const double x = 0.11 + 3.4 * i / 39.0;
                try {
                    const double h = W.h(x);
                    if (std::abs(h) < 1e-3) continue; // W1, W2 pole
                    worst = std::max(worst, std::abs(W.W1(x) + W.W2(x) + 2.0 * h));
                    worst = std::max(worst,
                                     std::abs(W.W3(x) + 2.0 * h + W.sp.lambda * x));
                    worst = std::max(worst, std::abs(W.V(SusyVariant::V2, x) -
                                                     W.V(SusyVariant::V1, x) -
                                                     4.0 * W.hprime(x)));
                } catch (const Error&) {
                }
            }
        }
        out.push_back(bounded("susy/w-identities", worst, 1e-10));
    }

    // physical mapping: g1 = (hbar^2/2) V_variant + const for every case
    {
        bool ok = true;
        std::string note;
        for (const auto& cs : acceptance_cases()) {
            const ModelParams mp = case_params(cs.c);
            Superpotentials W(map_params(mp), P4Solution::catalogue(case_catalogue(cs.c), cs.t));
            try {
                const double c = susy_physical_offset(mp, W, variant_for_epsilon(mp.epsilon));
                note += std::string(potential_case_name(cs.c)) + ": " + std::to_string(c) + "  ";
            } catch (const Error& e) {
                ok = false;
                note += std::string(potential_case_name(cs.c)) + ": " + e.what();
            }
        }
        out.push_back(flag("susy/physical-offset", ok, note));
    }

    // zero-mode counts and the distinct-state bound
    {
        bool ok = true;
        std::string note;
        for (const auto& cs : acceptance_cases()) {
            const ModelParams mp = case_params(cs.c);
            Superpotentials W(map_params(mp), P4Solution::catalogue(case_catalogue(cs.c), cs.t));
            const SusyVariant v = variant_for_epsilon(mp.epsilon);
            const auto hook = catalogue_closed_forms(cs.c, 1.0, 1.0, cs.t);
            const ZeroModeSet ann = zero_modes(W, v, LadderOp::Annihilation, {}, hook);
            const ZeroModeSet cre = zero_modes(W, v, LadderOp::Creation, {}, hook);
            const int distinct = count_distinct_zero_modes({&ann, &cre});
            if (distinct > 3) ok = false;
            note += std::string(potential_case_name(cs.c)) + ":" + std::to_string(distinct) + " ";
        }
        out.push_back(flag("susy/zero-mode-count", ok, "distinct normalizable states " + note));
    }

    // annihilation zero-mode residual at the reference grid
    {
        const ModelParams mp = case_params(PotentialCase::Case41);
        Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
        double worst = 0.0;
        for (double e : {6.0, 0.0}) {
            const auto fn = *catalogue_zero_mode(PotentialCase::Case41, 1.0, 1.0, 0.0, e);
            GridFunction psi = GridFunction::sample(12.0, 2000, fn);
            GridFunction apsi = apply_ladder(W, LadderDirection::Lower, SusyVariant::V2, psi);
            worst = std::max(worst, grid_norm(apsi, 8) / grid_norm(psi, 8));
        }
        out.push_back(bounded("susy/zero-mode-residual", worst, 1e-4,
                              "case A seed and singlet, n = 2000, L = 12"));
    }

    // residual keeps dropping by well over 3.5x per grid doubling
    {
        const ModelParams mp = case_params(PotentialCase::Case41);
        Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
        const auto fn = *catalogue_zero_mode(PotentialCase::Case41, 1.0, 1.0, 0.0, 6.0);
        auto res = [&](int n) {
            GridFunction psi = GridFunction::sample(12.0, n, fn);
            GridFunction apsi = apply_ladder(W, LadderDirection::Lower, SusyVariant::V2, psi);
            return grid_norm(apsi, 8) / grid_norm(psi, 8);
        };
        const double ratio = res(2000) / res(4000);
        out.push_back(flag("susy/zero-mode-order", ratio > 3.5,
                           "halving ratio " + std::to_string(ratio)));
    }

    // intertwining residuals for cases A and B
    for (const auto c : {PotentialCase::Case41, PotentialCase::Case43}) {
        const ModelParams mp = case_params(c);
        Superpotentials W(map_params(mp), P4Solution::catalogue(case_catalogue(c)));
        const SusyVariant v = variant_for_epsilon(mp.epsilon);
        auto res = [&](int n) {
            GridFunction psi =
                GridFunction::sample(12.0, n, [](double x) { return std::exp(-x * x); });
            return intertwining_residual(W, v, psi);
        };
        const double r2000 = res(2000);
        const double r4000 = res(4000);
        out.push_back(bounded(std::string("susy/intertwining-") + potential_case_name(c), r2000,
                              1e-3, "n=4000 gives " + std::to_string(r4000)));
        out.push_back(flag(std::string("susy/intertwining-order-") + potential_case_name(c),
                           r2000 / r4000 >= 3.5,
                           "ratio " + std::to_string(r2000 / r4000)));
    }

    // ladder Rayleigh quotients, 4 rungs at 2 lambda
    {
        const ModelParams mp = case_params(PotentialCase::Case41);
        Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
        const auto fn = *catalogue_zero_mode(PotentialCase::Case41, 1.0, 1.0, 0.0, 6.0);
        GridFunction seed = GridFunction::sample(12.0, 2000, fn);
        const auto seq = ladder_rayleigh_sequence(W, SusyVariant::V2, seed, 4);
        double worst = std::numeric_limits<double>::infinity();
        if (seq.size() == 5) {
            worst = 0.0;
            for (size_t i = 1; i < seq.size(); ++i)
                worst = std::max(worst, std::abs(seq[i] - seq[i - 1] - 2.0) / 2.0);
        }
        out.push_back(bounded("susy/ladder-spacing", worst, 2e-3, "relative to 2 lambda"));
    }

    // product identities
    {
        double worst = 0.0;
        const ModelParams mp = case_params(PotentialCase::Case41);
        Superpotentials W(map_params(mp), P4Solution::catalogue(CatalogueId::A));
        const auto chi = *catalogue_zero_mode(PotentialCase::Case41, 1.0, 1.0, 0.0, 0.0);
        GridFunction psi = GridFunction::sample(12.0, 4000, chi);
        worst = std::max(worst, product_identity_residual(W, SusyVariant::V2, psi, 0.0));
        const auto seed = *catalogue_zero_mode(PotentialCase::Case41, 1.0, 1.0, 0.0, 6.0);
        GridFunction ps2 = GridFunction::sample(12.0, 4000, seed);
        worst = std::max(worst, product_identity_residual(W, SusyVariant::V2, ps2, 6.0));
        // harmonic case: first excited state of V1 from the eigensolver
        const ModelParams mb = case_params(PotentialCase::Case43);
        Superpotentials Wb(map_params(mb), P4Solution::catalogue(CatalogueId::B));
        auto Vb = [&](double x) { return Wb.V(SusyVariant::V1, x); };
        const EigenResult er = eigen_lowest(discretize(Vb, 12.0, 3998, std::sqrt(2.0)), 2);
        worst = std::max(worst, product_identity_residual(Wb, SusyVariant::V1,
                                                          er.levels[1].psi, er.levels[1].energy));
        out.push_back(bounded("susy/product-identity", worst, 1e-3));
    }

    // spectra agreement: SUSY ladders match the 1D-converted algebra levels
    {
        double worst = 0.0;
        std::string note;
        for (const auto& cs : acceptance_cases()) {
            const ModelParams mp = case_params(cs.c);
            P4Solution f = P4Solution::catalogue(case_catalogue(cs.c), cs.t);
            const auto xs = susy_x_levels(mp, f, 6.0, catalogue_closed_forms(cs.c, 1.0, 1.0, cs.t));
            const auto xa = to_x_levels(derive_spectra(mp, 10), 6.0, mp);
            std::string n2;
            const double w = match_levels(xs, xa, 5.75, n2);
            worst = std::max(worst, w);
            if (!n2.empty()) note += std::string(potential_case_name(cs.c)) + ": " + n2 + "  ";
        }
        out.push_back(bounded("susy/spectra-agreement", worst, 1e-6, note));
    }
    return out;
}

// ---------------------------------------------------------------------------
// spectra suite (the eigensolver oracle)
// ---------------------------------------------------------------------------

inline std::vector<Check> verify_spectra(int threads = 0) {
    using namespace verify_detail;
    std::vector<Check> out;
    for (const auto& cs : acceptance_cases()) {
        const ModelParams mp = case_params(cs.c);
        const double cutoff = 5.75; // clear of any level at 1e-3, below E_max = 6
        const auto xa = to_x_levels(derive_spectra(mp, 14), 6.5, mp);
        int k = 0;
        for (double e : cs.x_levels)
            if (e < cutoff + 0.5) ++k;
        const EigenResult er = refine(case_x_potential(cs.c, cs.t), k, cs.L, 1e-6, 1.0, 2000,
                                      threads);
        std::vector<double> xe;
        for (const auto& l : er.levels) xe.push_back(l.energy);
        std::string note;
        const double worst = match_levels(xe, xa, cutoff, note);
        out.push_back(bounded(std::string("spectra/oracle-") + potential_case_name(cs.c), worst,
                              1e-4, note.empty() ? "level-by-level below 6 hbar omega" : note));
    }
    return out;
}

inline std::vector<Check> verify_all(int threads = 0) {
    std::vector<Check> out;
    for (auto&& suite : {verify_painleve(), verify_algebra(), verify_susy(),
                         verify_spectra(threads)})
        out.insert(out.end(), suite.begin(), suite.end());
    return out;
}

} // namespace p4spectra
