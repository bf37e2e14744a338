#pragma once

// Fourth Painleve transcendent: closed-form special solutions, generic
// adaptive Runge-Kutta integration of the defining ODE, and the
// complementary error function feeding the erfc solution family.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "p4spectra/errors.hpp"

namespace p4spectra {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kPoleDenomThreshold = 1e-12;
inline constexpr double kPoleEscapeThreshold = 1e6;

// ---------------------------------------------------------------------------
// erfc
// ---------------------------------------------------------------------------

namespace detail {

// Maclaurin series of erf, good to ~1e-15 relative for |z| <= 2.
inline double erf_series(double z) {
    const double z2 = z * z;
    double term = z;
    double sum = z;
    for (int k = 1; k < 200; ++k) {
        term *= -z2 / k;
        const double add = term / (2 * k + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return 2.0 / kSqrtPi * sum;
}

// Continued fraction for erfc(z)*sqrt(pi)*exp(z^2), z > 2 (A&S 7.1.14),
// evaluated with the modified Lentz algorithm.
inline double erfc_cf(double z) {
    const double tiny = 1e-300;
    double f = z != 0.0 ? z : tiny;
    double C = f;
    double D = 0.0;
    for (int n = 1; n < 300; ++n) {
        const double a = 0.5 * n;
        const double b = z; // partial denominators are all z
        D = b + a * D;
        if (D == 0.0) D = tiny;
        C = b + a / C;
        if (C == 0.0) C = tiny;
        D = 1.0 / D;
        const double delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-z * z) / (kSqrtPi * f);
}

} // namespace detail

/// Complementary error function, (2/sqrt(pi)) * integral of exp(-t^2) from z
/// to infinity. Series for |z| <= 2, continued fraction beyond.
inline double erfc(double z) {
    if (std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
    const double az = std::abs(z);
    double pos; // erfc(|z|)
    if (az <= 2.0)
        pos = 1.0 - detail::erf_series(az);
    else
        pos = detail::erfc_cf(az);
    return z >= 0.0 ? pos : 2.0 - pos;
}

// ---------------------------------------------------------------------------
// P4 parameters and solutions
// ---------------------------------------------------------------------------

struct P4Params {
    double alpha = 0.0;
    double beta = 0.0;
};

// f''(z) = f'^2/(2f) + (3/2) f^3 + 4 z f^2 + 2 (z^2 - alpha) f + beta/f
inline double p4_rhs(double f, double fp, double z, const P4Params& prm) {
    return fp * fp / (2.0 * f) + 1.5 * f * f * f + 4.0 * z * f * f +
           2.0 * (z * z - prm.alpha) * f + prm.beta / f;
}

/// Defect of (f, f', f'') against the P4 equation; zero for exact solutions.
inline double p4_residual(double f, double fp, double fpp, double z, const P4Params& prm) {
    if (std::abs(f) < kPoleDenomThreshold)
        throw DomainError("p4_residual: |f| below pole threshold");
    return fpp - p4_rhs(f, fp, z, prm);
}

enum class CatalogueId { A, B, C, D, E };

inline const char* catalogue_name(CatalogueId id) {
    switch (id) {
        case CatalogueId::A: return "A";
        case CatalogueId::B: return "B";
        case CatalogueId::C: return "C";
        case CatalogueId::D: return "D";
        case CatalogueId::E: return "E";
    }
    return "?";
}

struct CatalogueEntry {
    CatalogueId id;
    P4Params params;
    int epsilon; // sign used by the potential built on this solution
};

inline CatalogueEntry catalogue_entry(CatalogueId id) {
    switch (id) {
        case CatalogueId::A: return {id, {5.0, -8.0}, +1};
        case CatalogueId::B: return {id, {0.0, -2.0 / 9.0}, +1};
        case CatalogueId::C: return {id, {-1.0, -32.0 / 9.0}, +1};
        case CatalogueId::D: return {id, {0.0, -2.0}, +1};
        case CatalogueId::E: return {id, {0.0, -2.0}, -1};
    }
    throw ConfigError("catalogue_entry: unknown id");
}

struct P4Triple {
    double f = 0.0;
    double fp = 0.0;
    double fpp = 0.0;
};

namespace detail {

// f = N/D with polynomial N, D: returns f, f', f''.
inline P4Triple rational_triple(double n, double dn, double ddn, double d, double dd, double ddd) {
    P4Triple t;
    t.f = n / d;
    t.fp = (dn * d - n * dd) / (d * d);
    t.fpp = (ddn * d - n * ddd) / (d * d) - 2.0 * dd * (dn * d - n * dd) / (d * d * d);
    return t;
}

inline P4Triple eval_rational_A(double z) {
    const double z2 = z * z;
    // f = 4 z (2z^2-1)(2z^2+3) / ((2z^2+1)(4z^4+3)); pole-free on the real line
    const double num = 4.0 * z * (2.0 * z2 - 1.0) * (2.0 * z2 + 3.0);
    const double den = (2.0 * z2 + 1.0) * (4.0 * z2 * z2 + 3.0);
    const double dnum = 80.0 * z2 * z2 + 48.0 * z2 - 12.0;
    const double dden = z * (48.0 * z2 * z2 + 16.0 * z2 + 12.0);
    const double ddnum = z * (320.0 * z2 + 96.0);
    const double ddden = 240.0 * z2 * z2 + 48.0 * z2 + 12.0;
    return rational_triple(num, dnum, ddnum, den, dden, ddden);
}

inline P4Triple eval_rational_B(double z) {
    return {-2.0 * z / 3.0, -2.0 / 3.0, 0.0};
}

inline P4Triple eval_rational_C(double z) {
    const double z2 = z * z;
    // f = (-4z^4 - 12z^2 + 9) / (3z (2z^2+3)); simple pole at z = 0
    const double den = 3.0 * z * (2.0 * z2 + 3.0);
    if (std::abs(den) < kPoleDenomThreshold)
        throw PoleError("catalogue C: pole at z = 0");
    const double num = -4.0 * z2 * z2 - 12.0 * z2 + 9.0;
    const double dnum = z * (-16.0 * z2 - 24.0);
    const double ddnum = -48.0 * z2 - 24.0;
    const double dden = 18.0 * z2 + 9.0;
    const double ddden = 36.0 * z;
    return rational_triple(num, dnum, ddnum, den, dden, ddden);
}

// Erfc family: f = -2z - Psi, Psi = psi'/psi with psi = 1 - t*erfc(z).
// Psi' = -2z Psi - Psi^2, so f' and f'' close in (z, Psi).
inline P4Triple eval_erfc_family(double z, double t) {
    const double psi = 1.0 - t * p4spectra::erfc(z);
    if (psi <= 0.0)
        throw DomainError("erfc family: 1 - t*erfc(z) <= 0");
    const double Psi = (2.0 * t / kSqrtPi) * std::exp(-z * z) / psi;
    P4Triple r;
    r.f = -2.0 * z - Psi;
    r.fp = -2.0 + 2.0 * z * Psi + Psi * Psi;
    const double dPsi = -2.0 * z * Psi - Psi * Psi;
    r.fpp = 2.0 * Psi + 2.0 * z * dPsi + 2.0 * Psi * dPsi;
    return r;
}

} // namespace detail

struct P4Sample {
    double z = 0.0;
    double f = 0.0;
    double fp = 0.0;
};

/// An evaluable P4 solution: a closed-form catalogue entry, an erfc-family
/// member, or a dense trace produced by the ODE integrator.
class P4Solution {
public:
    enum class Kind { RationalCatalogue, ErfcFamily, Integrated };

    static P4Solution catalogue(CatalogueId id, double t = 0.0) {
        P4Solution s;
        const CatalogueEntry e = catalogue_entry(id);
        s.params_ = e.params;
        s.id_ = id;
        if (id == CatalogueId::D || id == CatalogueId::E) {
            s.kind_ = Kind::ErfcFamily;
            if (t >= 0.5)
                throw DomainError("erfc family: need t < 1/2 for a nonsingular solution");
            s.t_ = t;
        } else {
            s.kind_ = Kind::RationalCatalogue;
        }
        return s;
    }

    static P4Solution integrated(P4Params prm, std::vector<P4Sample> trace) {
        P4Solution s;
        s.kind_ = Kind::Integrated;
        s.params_ = prm;
        s.trace_ = std::move(trace);
        std::sort(s.trace_.begin(), s.trace_.end(),
                  [](const P4Sample& a, const P4Sample& b) { return a.z < b.z; });
        return s;
    }

    Kind kind() const { return kind_; }
    const P4Params& params() const { return params_; }
    CatalogueId catalogue_id() const { return id_; }
    double t() const { return t_; }
    const std::vector<P4Sample>& trace() const { return trace_; }

    std::pair<double, double> eval(double z) const {
        if (kind_ == Kind::Integrated) return eval_trace(z);
        const P4Triple t = eval_closed(z);
        return {t.f, t.fp};
    }

    /// (f, f', f'') for the closed-form kinds; the second derivative is
    /// analytic, not a finite difference.
    P4Triple eval_with_second(double z) const {
        if (kind_ == Kind::Integrated)
            throw DomainError("eval_with_second: integrated solutions carry (f, f') only");
        return eval_closed(z);
    }

    /// (f, f', f'') where integrated traces close f'' through the equation
    /// itself (valid on a solution; 0/0 at regular zero crossings of f).
    P4Triple eval_on_solution(double z) const {
        if (kind_ != Kind::Integrated) return eval_closed(z);
        const auto [f, fp] = eval_trace(z);
        return {f, fp, p4_rhs(f, fp, z, params_)};
    }

private:
    P4Triple eval_closed(double z) const {
        switch (kind_) {
            case Kind::RationalCatalogue:
                switch (id_) {
                    case CatalogueId::A: return detail::eval_rational_A(z);
                    case CatalogueId::B: return detail::eval_rational_B(z);
                    case CatalogueId::C: return detail::eval_rational_C(z);
                    default: break;
                }
                throw ConfigError("P4Solution: bad catalogue id");
            case Kind::ErfcFamily:
                return detail::eval_erfc_family(z, t_);
            default:
                throw ConfigError("P4Solution: bad kind");
        }
    }

    std::pair<double, double> eval_trace(double z) const {
        if (trace_.empty()) throw DomainError("integrated solution: empty trace");
        if (z < trace_.front().z - 1e-12 || z > trace_.back().z + 1e-12)
            throw DomainError("integrated solution: z outside covered range");
        auto it = std::lower_bound(trace_.begin(), trace_.end(), z,
                                   [](const P4Sample& s, double v) { return s.z < v; });
        if (it == trace_.end()) --it;
        if (it != trace_.begin() && std::abs((it - 1)->z - z) < std::abs(it->z - z)) --it;
        if (std::abs(it->z - z) < 1e-13) return {it->f, it->fp};
        // cubic Hermite between the bracketing trace points
        const P4Sample* lo = &*it;
        const P4Sample* hi = lo;
        if (it->z > z && it != trace_.begin()) lo = &*(it - 1), hi = &*it;
        else if (it + 1 != trace_.end()) lo = &*it, hi = &*(it + 1);
        const double hseg = hi->z - lo->z;
        if (hseg <= 0.0) return {lo->f, lo->fp};
        const double s = (z - lo->z) / hseg;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        const double f = h00 * lo->f + h10 * hseg * lo->fp + h01 * hi->f + h11 * hseg * hi->fp;
        // derivative of the Hermite interpolant
        const double d00 = 6 * s * (s - 1) / hseg;
        const double d10 = (1 - s) * (1 - 3 * s);
        const double d01 = -d00;
        const double d11 = s * (3 * s - 2);
        const double fp = d00 * lo->f + d10 * lo->fp + d01 * hi->f + d11 * hi->fp;
        return {f, fp};
    }

    Kind kind_ = Kind::RationalCatalogue;
    P4Params params_;
    CatalogueId id_ = CatalogueId::A;
    double t_ = 0.0;
    std::vector<P4Sample> trace_;
};

/// Evaluate a P4 solution: returns (f, f').
inline std::pair<double, double> p4_eval(const P4Solution& sol, double z) {
    return sol.eval(z);
}

// ---------------------------------------------------------------------------
// Adaptive Runge-Kutta integration of the P4 equation
// ---------------------------------------------------------------------------

enum class IntegrationStatus { Ok, PoleEscape, ZeroCrossing };

struct IntegrationResult {
    P4Solution solution;            // dense trace (valid up to halt point)
    IntegrationStatus status = IntegrationStatus::Ok;
    double halt_z = 0.0;            // where a pole escape / zero crossing was detected
    std::vector<P4Sample> at_targets; // samples at the requested targets that were reached
};

namespace detail {

// Dormand-Prince 5(4) coefficients.
struct Dopri5 {
    static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr std::array<std::array<double, 6>, 7> a{{
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    }};
    static constexpr std::array<double, 7> b5{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                              -2187.0 / 6784, 11.0 / 84, 0.0};
    static constexpr std::array<double, 7> b4{5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640,
                                              -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

} // namespace detail

/// Integrate the P4 equation from (z0, f0, f0') with dense output at
/// z_targets (which may lie on either side of z0). Halts with partial
/// results on pole escape (|f| > 1e6) or a zero crossing of f.
inline IntegrationResult p4_integrate(const P4Params& prm, double z0, double f0, double f0prime,
                                      std::vector<double> z_targets, double tol) {
    if (f0 == 0.0) throw DomainError("p4_integrate: f0 must be nonzero");
    if (!(tol > 0.0)) throw DomainError("p4_integrate: tol must be positive");

    std::sort(z_targets.begin(), z_targets.end());
    std::vector<double> fwd, bwd;
    for (double zt : z_targets)
        (zt >= z0 ? fwd : bwd).push_back(zt);
    std::sort(bwd.begin(), bwd.end(), std::greater<double>()); // walk away from z0

    IntegrationResult out;
    out.status = IntegrationStatus::Ok;
    std::vector<P4Sample> trace;
    trace.push_back({z0, f0, f0prime});

    // The P4 flow is exponentially unstable for large |z| and the vector
    // field cancels catastrophically near regular zero crossings of f, so
    // the stepper works in extended precision internally.
    using real = long double;
    const real alpha_l = static_cast<real>(prm.alpha);
    const real beta_l = static_cast<real>(prm.beta);
    auto rhs_l = [&](real z, real f, real fp) -> real {
        return fp * fp / (2.0L * f) + 1.5L * f * f * f + 4.0L * z * f * f +
               2.0L * (z * z - alpha_l) * f + beta_l / f;
    };

    auto run_direction = [&](const std::vector<double>& targets, double dir) {
        if (targets.empty()) return;
        real z = z0, f = f0, fp = f0prime;
        real h = static_cast<real>(dir) * 1e-4L;
        size_t ti = 0;
        while (ti < targets.size() && std::abs(targets[ti] - z0) < 1e-15) {
            out.at_targets.push_back({z0, f0, f0prime});
            ++ti;
        }
        int rejected_in_row = 0;
        while (ti < targets.size()) {
            const real zt = targets[ti];
            if (dir * static_cast<double>(z + h - zt) > 0.0) h = zt - z;
            // one Dormand-Prince step
            using T = detail::Dopri5;
            std::array<real, 7> kf{}, kp{};
            for (int s = 0; s < 7; ++s) {
                real fs = f, ps = fp;
                for (int j = 0; j < s; ++j) {
                    fs += h * static_cast<real>(T::a[s][j]) * kf[j];
                    ps += h * static_cast<real>(T::a[s][j]) * kp[j];
                }
                if (std::abs(static_cast<double>(fs)) < 1e-300) fs = fs < 0 ? -1e-300L : 1e-300L;
                kf[s] = ps;
                kp[s] = rhs_l(z + static_cast<real>(T::c[s]) * h, fs, ps);
                if (!std::isfinite(static_cast<double>(kf[s])) ||
                    !std::isfinite(static_cast<double>(kp[s]))) {
                    out.status = IntegrationStatus::PoleEscape;
                    out.halt_z = static_cast<double>(z + static_cast<real>(T::c[s]) * h);
                    return;
                }
            }
            real f5 = f, p5 = fp, f4 = f, p4v = fp;
            for (int s = 0; s < 7; ++s) {
                f5 += h * static_cast<real>(T::b5[s]) * kf[s];
                p5 += h * static_cast<real>(T::b5[s]) * kp[s];
                f4 += h * static_cast<real>(T::b4[s]) * kf[s];
                p4v += h * static_cast<real>(T::b4[s]) * kp[s];
            }
            const double scf = std::max({1.0, std::abs(static_cast<double>(f)),
                                         std::abs(static_cast<double>(f5))});
            const double scp = std::max({1.0, std::abs(static_cast<double>(fp)),
                                         std::abs(static_cast<double>(p5))});
            const double err = std::max(std::abs(static_cast<double>(f5 - f4)) / scf,
                                        std::abs(static_cast<double>(p5 - p4v)) / scp) / tol;
            if (err <= 1.0 || std::abs(static_cast<double>(h)) < 1e-14) {
                rejected_in_row = 0;
                // event checks on the accepted step
                if (std::abs(static_cast<double>(f5)) > kPoleEscapeThreshold) {
                    out.status = IntegrationStatus::PoleEscape;
                    out.halt_z = static_cast<double>(z + h);
                    return;
                }
                if (f5 == 0.0L || (f > 0.0L) != (f5 > 0.0L) ||
                    std::abs(static_cast<double>(f5)) < 1e-13) {
                    // A crossing with f'^2 + 2 beta = 0 is a removable
                    // singularity the solution passes through; anything else
                    // ends the trajectory at the 1/f blowup.
                    const real wsum = std::abs(f) + std::abs(f5);
                    const real frac = wsum > 0.0L ? std::abs(f) / wsum : 0.5L;
                    const real fp_cross = fp + frac * (p5 - fp);
                    const double defect = static_cast<double>(fp_cross * fp_cross + 2.0L * beta_l);
                    const double scale =
                        static_cast<double>(fp_cross * fp_cross) + 2.0 * std::abs(prm.beta) + 1.0;
                    if (std::abs(defect) > 0.05 * scale) {
                        out.status = IntegrationStatus::ZeroCrossing;
                        out.halt_z = static_cast<double>(z + h);
                        return;
                    }
                }
                z += h;
                f = f5;
                fp = p5;
                trace.push_back({static_cast<double>(z), static_cast<double>(f),
                                 static_cast<double>(fp)});
                while (ti < targets.size() &&
                       std::abs(static_cast<double>(z) - targets[ti]) < 1e-12) {
                    out.at_targets.push_back({static_cast<double>(z), static_cast<double>(f),
                                              static_cast<double>(fp)});
                    ++ti;
                }
            } else if (++rejected_in_row > 60) {
                out.status = IntegrationStatus::ZeroCrossing; // step collapse near 1/f singularity
                out.halt_z = static_cast<double>(z);
                return;
            }
            const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
            h *= static_cast<real>(fac);
            if (std::abs(static_cast<double>(h)) < 1e-15) h = dir < 0 ? -1e-15L : 1e-15L;
        }
    };

    run_direction(bwd, -1.0);
    if (out.status == IntegrationStatus::Ok) run_direction(fwd, +1.0);

    std::sort(out.at_targets.begin(), out.at_targets.end(),
              [](const P4Sample& a, const P4Sample& b) { return a.z < b.z; });
    out.solution = P4Solution::integrated(prm, std::move(trace));
    return out;
}

} // namespace p4spectra
