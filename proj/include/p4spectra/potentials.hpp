#pragma once

// The 2D superintegrable potential built from a P4 solution, its closed-form
// special cases, and the constant-offset consistency check between the two
// routes.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "p4spectra/errors.hpp"
#include "p4spectra/special_functions.hpp"

namespace p4spectra {

struct ModelParams {
    double alpha = 0.0;
    double beta = 0.0;
    int epsilon = +1;   // +1 or -1
    double hbar = 1.0;  // > 0
    double omega = 1.0; // > 0

    ModelParams() = default;
    ModelParams(double a, double b, int eps, double hb = 1.0, double om = 1.0)
        : alpha(a), beta(b), epsilon(eps), hbar(hb), omega(om) {
        if (epsilon != 1 && epsilon != -1) throw ConfigError("ModelParams: epsilon must be +-1");
        if (!(hbar > 0.0) || !(omega > 0.0)) throw ConfigError("ModelParams: hbar, omega must be > 0");
    }
};

// The five closed-form potential cases. Case45 carries the erfc-family
// parameter t; its closed form is normative only at t = 0, the t != 0
// potential is always built from the P4 route.
enum class PotentialCase { Case41, Case42, Case43, Case44, Case45 };

inline const char* potential_case_name(PotentialCase c) {
    switch (c) {
        case PotentialCase::Case41: return "4.1";
        case PotentialCase::Case42: return "4.2";
        case PotentialCase::Case43: return "4.3";
        case PotentialCase::Case44: return "4.4";
        case PotentialCase::Case45: return "4.5";
    }
    return "?";
}

inline ModelParams case_params(PotentialCase c, double hbar = 1.0, double omega = 1.0) {
    switch (c) {
        case PotentialCase::Case41: return {5.0, -8.0, +1, hbar, omega};
        case PotentialCase::Case42: return {5.0, -8.0, -1, hbar, omega};
        case PotentialCase::Case43: return {0.0, -2.0 / 9.0, +1, hbar, omega};
        case PotentialCase::Case44: return {-1.0, -32.0 / 9.0, +1, hbar, omega};
        case PotentialCase::Case45: return {0.0, -2.0, +1, hbar, omega};
    }
    throw ConfigError("case_params: unknown case");
}

inline CatalogueId case_catalogue(PotentialCase c) {
    switch (c) {
        case PotentialCase::Case41: return CatalogueId::A;
        case PotentialCase::Case42: return CatalogueId::A;
        case PotentialCase::Case43: return CatalogueId::B;
        case PotentialCase::Case44: return CatalogueId::C;
        case PotentialCase::Case45: return CatalogueId::D;
    }
    throw ConfigError("case_catalogue: unknown case");
}

struct PotentialSpec {
    enum class Kind { FromP4, ClosedForm };
    Kind kind = Kind::FromP4;
    ModelParams params;
    P4Solution solution;          // FromP4
    PotentialCase closed_case{};  // ClosedForm
    double t = 0.0;               // erfc-family parameter where applicable

    static PotentialSpec from_p4(ModelParams prm, P4Solution sol) {
        PotentialSpec s;
        s.kind = Kind::FromP4;
        s.params = prm;
        s.solution = std::move(sol);
        return s;
    }
    static PotentialSpec closed_form(PotentialCase c, double hbar = 1.0, double omega = 1.0,
                                     double t = 0.0) {
        PotentialSpec s;
        s.kind = Kind::ClosedForm;
        s.closed_case = c;
        s.params = case_params(c, hbar, omega);
        s.t = t;
        s.solution = P4Solution::catalogue(case_catalogue(c), t);
        return s;
    }

    /// Spec for a catalogue case evaluated through the P4 route.
    static PotentialSpec case_from_p4(PotentialCase c, double hbar = 1.0, double omega = 1.0,
                                      double t = 0.0) {
        PotentialSpec s = closed_form(c, hbar, omega, t);
        s.kind = Kind::FromP4;
        return s;
    }
};

/// x-part of the potential built from a P4 solution.
inline double g1(const PotentialSpec& spec, double x) {
    const ModelParams& mp = spec.params;
    const double z = std::sqrt(mp.omega / mp.hbar) * x;
    const auto [f, fp] = p4_eval(spec.solution, z);
    const double hw = mp.hbar * mp.omega;
    return 0.5 * mp.omega * mp.omega * x * x + mp.epsilon * 0.5 * hw * fp + 0.5 * hw * f * f +
           mp.omega * std::sqrt(hw) * x * f + hw / 3.0 * (-mp.alpha + mp.epsilon);
}

/// y-part: a plain harmonic oscillator.
inline double g2(const ModelParams& mp, double y) {
    return 0.5 * mp.omega * mp.omega * y * y;
}

namespace detail {

inline void check_case_params(PotentialCase c, const ModelParams& mp) {
    const ModelParams ref = case_params(c, mp.hbar, mp.omega);
    if (std::abs(mp.alpha - ref.alpha) > 1e-12 || std::abs(mp.beta - ref.beta) > 1e-12 ||
        mp.epsilon != ref.epsilon)
        throw ConfigError(std::string("closed_form: params disagree with case ") +
                          potential_case_name(c));
}

} // namespace detail

/// x-part of the closed-form potential for a catalogue case.
inline double closed_form_x(PotentialCase c, const ModelParams& mp, double x, double t = 0.0) {
    detail::check_case_params(c, mp);
    const double hb = mp.hbar, om = mp.omega;
    const double x2 = x * x;
    switch (c) {
        case PotentialCase::Case41:
            return 0.5 * om * om * x2 - 8.0 * hb * hb * hb * om / std::pow(2.0 * om * x2 + hb, 2) +
                   4.0 * hb * hb * om / (2.0 * om * x2 + hb) + 2.0 * hb * om / 3.0;
        case PotentialCase::Case42: {
            const double den = 4.0 * om * om * x2 * x2 + 3.0 * hb * hb;
            return 0.5 * om * om * x2 - 192.0 * std::pow(hb, 4) * om * om * x2 / (den * den) +
                   16.0 * hb * hb * om * om * x2 / den;
        }
        case PotentialCase::Case43:
            return 0.5 * om * om * x2 / 9.0;
        case PotentialCase::Case44: {
            const double den = 2.0 * om * x2 + 3.0 * hb;
            return 0.5 * om * om * x2 / 9.0 - 24.0 * hb * hb * hb * om / (den * den) +
                   4.0 * hb * hb * om / den;
        }
        case PotentialCase::Case45:
            if (t == 0.0) return 0.5 * om * om * x2 - 2.0 * hb * om / 3.0;
            // the printed t != 0 form is unreliable; build from the P4 route
            return g1(PotentialSpec::case_from_p4(c, hb, om, t), x);
    }
    throw ConfigError("closed_form_x: unknown case");
}

/// Full 2D closed-form potential value.
inline double closed_form(PotentialCase c, const ModelParams& mp, double x, double y,
                          double t = 0.0) {
    return closed_form_x(c, mp, x, t) + g2(mp, y);
}

/// Constant c with f1(x) - f2(x) = c on the whole grid; throws
/// InconsistentError if the difference is not x-independent.
inline double constant_offset(const std::function<double(double)>& f1,
                              const std::function<double(double)>& f2,
                              const std::vector<double>& grid, double rel_tol = 1e-9) {
    if (grid.empty()) throw DomainError("constant_offset: empty grid");
    double c = f1(grid.front()) - f2(grid.front());
    double worst = 0.0;
    for (double x : grid) {
        const double d = f1(x) - f2(x);
        worst = std::max(worst, std::abs(d - c));
    }
    if (worst > rel_tol * std::max(1.0, std::abs(c)))
        throw InconsistentError("constant_offset: difference is not constant (spread " +
                                std::to_string(worst) + ")");
    return c;
}

/// Offset between the P4-built x-potential and the closed form of `c`.
/// The constant is reported, never silently absorbed.
inline double consistency_offset(const PotentialSpec& spec_from_p4, PotentialCase c,
                                 const std::vector<double>& grid) {
    const ModelParams mp = spec_from_p4.params;
    detail::check_case_params(c, mp);
    const double t = spec_from_p4.t;
    return constant_offset([&](double x) { return g1(spec_from_p4, x); },
                           [&](double x) { return closed_form_x(c, mp, x, t); }, grid);
}

} // namespace p4spectra
