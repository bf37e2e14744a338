#pragma once

// ladder_rayleigh_sequence lives apart from susy.hpp because it leans on
// the eigensolver for the stabilizing subspace projection.

#include <vector>

#include "p4spectra/eigensolver.hpp"
#include "p4spectra/susy.hpp"

namespace p4spectra {

inline std::vector<double> ladder_rayleigh_sequence(const Superpotentials& W, SusyVariant variant,
                                                    GridFunction psi, int k_rungs, int subspace) {
    const auto Vf = [&](double x) { return W.V(variant, x); };
    // -psi'' + V psi matches the eigensolver convention at hbar = sqrt(2)
    Discretization disc = discretize(Vf, psi.L, psi.n - 2, std::sqrt(2.0));
    // the basis must reach past the top rung; the spectrum may be denser
    // than the 2*lambda ladder if several sub-ladders interleave
    const double target =
        rayleigh_quotient(W, variant, psi) + 2.0 * W.sp.lambda * (k_rungs + 1);
    EigenResult basis = eigen_lowest(disc, subspace);
    while (basis.levels.back().energy < target && subspace < 48) {
        subspace += 8;
        basis = eigen_lowest(disc, subspace);
    }

    auto project = [&](const GridFunction& f) {
        GridFunction out(f.L, f.n);
        for (const auto& lvl : basis.levels) {
            const double c = grid_inner(lvl.psi, f) / grid_inner(lvl.psi, lvl.psi);
            for (int i = 0; i < f.n; ++i) out.values[i] += c * lvl.psi.values[i];
        }
        return out;
    };

    std::vector<double> out;
    out.push_back(rayleigh_quotient(W, variant, psi));
    for (int k = 0; k < k_rungs; ++k) {
        psi = apply_ladder(W, LadderDirection::Raise, variant, psi);
        psi = project(psi);
        const double nrm = grid_norm(psi, 8);
        if (!(nrm > 0.0)) break;
        for (double& v : psi.values) v /= nrm;
        out.push_back(rayleigh_quotient(W, variant, psi));
    }
    return out;
}

} // namespace p4spectra
