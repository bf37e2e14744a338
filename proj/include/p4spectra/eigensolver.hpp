#pragma once

// Independent 1D Schrodinger bound-state solver: 3-point finite differences
// on a uniform grid with Dirichlet ends, eigenvalues of the symmetric
// tridiagonal operator by Sturm-sequence bisection, eigenvectors by shifted
// inverse iteration, Richardson refinement across grid doublings.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "p4spectra/errors.hpp"
#include "p4spectra/grid.hpp"

namespace p4spectra {

using Potential1D = std::function<double(double)>;

struct Discretization {
    double L = 0.0;
    int n = 0;       // interior nodes
    double hbar = 1.0;
    double h = 0.0;  // spacing, 2L/(n+1)
    std::vector<double> diag;
    double offdiag = 0.0; // constant, -hbar^2/(2 h^2)

    double x(int i) const { return -L + (i + 1) * h; }
};

/// Discretize -(hbar^2/2) d^2/dx^2 + V on [-L, L] with Dirichlet ends.
inline Discretization discretize(const Potential1D& V, double L, int n, double hbar) {
    if (n < 64) throw GridTooCoarseError("discretize: need n >= 64");
    Discretization d;
    d.L = L;
    d.n = n;
    d.hbar = hbar;
    d.h = 2.0 * L / (n + 1);
    d.offdiag = -hbar * hbar / (2.0 * d.h * d.h);
    d.diag.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double v = V(d.x(i));
        if (!std::isfinite(v) || std::abs(v) > 1e12)
            throw SingularPotentialError("discretize: |V| > 1e12 at x = " + std::to_string(d.x(i)));
        d.diag[static_cast<size_t>(i)] = hbar * hbar / (d.h * d.h) + v;
    }
    return d;
}

struct EigenLevel {
    double energy = 0.0;
    GridFunction psi;            // on the full closed grid incl. boundary zeros
    double error_estimate = 0.0;
};

struct EigenResult {
    std::vector<EigenLevel> levels;
};

namespace detail {

// Number of eigenvalues of the tridiagonal operator strictly below lambda.
inline int sturm_count(const Discretization& d, double lambda) {
    const double b2 = d.offdiag * d.offdiag;
    int count = 0;
    double q = d.diag[0] - lambda;
    if (q < 0.0) ++count;
    for (int i = 1; i < d.n; ++i) {
        if (q == 0.0) q = 1e-300;
        q = (d.diag[static_cast<size_t>(i)] - lambda) - b2 / q;
        if (q < 0.0) ++count;
    }
    return count;
}

// k-th eigenvalue (0-based) by bisection to 1e-12 absolute.
inline double bisect_eigenvalue(const Discretization& d, int k, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(d, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Solve (T - sigma I) x = rhs with partial pivoting (two superdiagonals).
struct TridiagShiftedSolver {
    std::vector<double> dl, dm, du, du2;
    std::vector<int> piv;
    int n = 0;

    TridiagShiftedSolver(const Discretization& d, double sigma) : n(d.n) {
        dl.assign(static_cast<size_t>(n), d.offdiag);
        du.assign(static_cast<size_t>(n), d.offdiag);
        du2.assign(static_cast<size_t>(n), 0.0);
        piv.assign(static_cast<size_t>(n), 0);
        dm.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) dm[static_cast<size_t>(i)] = d.diag[static_cast<size_t>(i)] - sigma;
        factor();
    }

    void factor() {
        for (int i = 0; i < n - 1; ++i) {
            if (std::abs(dm[i]) >= std::abs(dl[i + 1])) {
                piv[i] = 0;
                if (dm[i] == 0.0) dm[i] = 1e-300;
                const double m = dl[i + 1] / dm[i];
                dl[i + 1] = m; // store multiplier
                dm[i + 1] -= m * du[i];
                du2[i] = 0.0;
            } else {
                piv[i] = 1; // swap rows i, i+1
                const double m = dm[i] / dl[i + 1];
                dm[i] = dl[i + 1];
                const double tmp = dm[i + 1];
                dm[i + 1] = du[i] - m * tmp;
                du2[i] = (i + 2 < n) ? du[i + 1] : 0.0;
                du[i] = tmp;
                if (i + 2 < n) du[i + 1] = -m * du2[i];
                dl[i + 1] = m;
            }
        }
        if (dm[n - 1] == 0.0) dm[n - 1] = 1e-300;
    }

    void solve(std::vector<double>& x) const {
        for (int i = 0; i < n - 1; ++i) {
            if (piv[i]) std::swap(x[i], x[i + 1]);
            x[i + 1] -= dl[i + 1] * x[i];
        }
        x[n - 1] /= dm[n - 1];
        for (int i = n - 2; i >= 0; --i) {
            double s = x[i] - du[i] * x[i + 1];
            if (i + 2 < n) s -= du2[i] * x[i + 2];
            x[i] = s / dm[i];
        }
    }
};

inline void tridiag_apply(const Discretization& d, const std::vector<double>& x,
                          std::vector<double>& y) {
    const int n = d.n;
    y.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double s = d.diag[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
        if (i > 0) s += d.offdiag * x[static_cast<size_t>(i - 1)];
        if (i + 1 < n) s += d.offdiag * x[static_cast<size_t>(i + 1)];
        y[static_cast<size_t>(i)] = s;
    }
}

inline double vec_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Deterministic start vector.
inline void fill_start(std::vector<double>& v, uint64_t seed) {
    uint64_t s = 0x9e3779b97f4a7c15ull + seed;
    for (double& x : v) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        x = static_cast<double>((s >> 11) & 0xfffffffull) / double(0xfffffff) - 0.5;
    }
}

inline std::vector<double> inverse_iteration(const Discretization& d, double lambda, int index,
                                             const std::vector<std::vector<double>>& lower) {
    // shift slightly off the eigenvalue to keep the solve well posed
    const double scale = std::max(1.0, std::abs(lambda));
    const double sigma = lambda + 1e-11 * scale;
    TridiagShiftedSolver solver(d, sigma);
    // residual tolerance relative to the operator norm; the roundoff floor
    // of one matrix application sits near eps * ||T||
    double tnorm = 2.0 * std::abs(d.offdiag);
    for (double a : d.diag) tnorm = std::max(tnorm, std::abs(a) + 2.0 * std::abs(d.offdiag));
    std::vector<double> v(static_cast<size_t>(d.n));
    fill_start(v, static_cast<uint64_t>(index));
    std::vector<double> tv;
    for (int it = 0; it < 50; ++it) {
        solver.solve(v);
        for (const auto& w : lower) { // guard near-degenerate pairs
            double dot = 0.0;
            for (int i = 0; i < d.n; ++i) dot += v[i] * w[i];
            for (int i = 0; i < d.n; ++i) v[i] -= dot * w[i];
        }
        const double nv = vec_norm(v);
        if (!(nv > 0.0) || !std::isfinite(nv)) {
            fill_start(v, static_cast<uint64_t>(index) + 1000 + it);
            continue;
        }
        for (double& x : v) x /= nv;
        tridiag_apply(d, v, tv);
        double res = 0.0;
        for (int i = 0; i < d.n; ++i) res += (tv[i] - lambda * v[i]) * (tv[i] - lambda * v[i]);
        res = std::sqrt(res) / tnorm;
        if (res < 1e-10) return v;
    }
    throw ConvergenceError("inverse_iteration: no convergence", index);
}

inline int env_thread_cap() {
    if (const char* s = std::getenv("PAINLEVE_SPECTRA_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    return 1;
}

} // namespace detail

/// k lowest eigenpairs of the discrete operator. Eigenvalue bisections are
/// independent, so they may run on several threads with identical results.
inline EigenResult eigen_lowest(const Discretization& d, int k, int threads = 0) {
    if (k < 1) throw DomainError("eigen_lowest: k >= 1");
    if (k > d.n / 4) throw DomainError("eigen_lowest: need k <= n/4");
    if (threads <= 0) threads = detail::env_thread_cap();

    double lo = d.diag[0], hi = d.diag[0];
    for (double a : d.diag) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    lo -= 2.0 * std::abs(d.offdiag) + 1.0;
    hi += 2.0 * std::abs(d.offdiag) + 1.0;

    std::vector<double> eval(static_cast<size_t>(k));
    auto work = [&](int begin, int end) {
        for (int j = begin; j < end; ++j)
            eval[static_cast<size_t>(j)] = detail::bisect_eigenvalue(d, j, lo, hi);
    };
    if (threads <= 1 || k == 1) {
        work(0, k);
    } else {
        const int nt = std::min(threads, k);
        std::vector<std::thread> pool;
        const int chunk = (k + nt - 1) / nt;
        for (int t = 0; t < nt; ++t)
            pool.emplace_back(work, t * chunk, std::min(k, (t + 1) * chunk));
        for (auto& th : pool) th.join();
    }

    EigenResult out;
    std::vector<std::vector<double>> computed;
    for (int j = 0; j < k; ++j) {
        std::vector<std::vector<double>> guards;
        if (j > 0 && eval[j] - eval[j - 1] < 1e-9)
            guards.push_back(computed.back());
        std::vector<double> v = detail::inverse_iteration(d, eval[j], j, guards);
        computed.push_back(v);

        EigenLevel lvl;
        lvl.energy = eval[j];
        lvl.error_estimate = 1e-12; // bisection tolerance on the discrete operator
        lvl.psi = GridFunction(d.L, d.n + 2);
        for (int i = 0; i < d.n; ++i) lvl.psi.values[static_cast<size_t>(i + 1)] = v[static_cast<size_t>(i)];
        const double nrm = grid_norm(lvl.psi);
        if (nrm > 0.0)
            for (double& x : lvl.psi.values) x /= nrm;
        // sign convention: first significant lobe positive
        for (double x : lvl.psi.values) {
            if (std::abs(x) > 1e-8) {
                if (x < 0.0)
                    for (double& y : lvl.psi.values) y = -y;
                break;
            }
        }
        out.levels.push_back(std::move(lvl));
    }
    for (size_t j = 1; j < out.levels.size(); ++j)
        if (!(out.levels[j].energy > out.levels[j - 1].energy))
            throw ConvergenceError("eigen_lowest: spectrum not strictly increasing", static_cast<int>(j));
    return out;
}

/// Richardson-refined eigenvalues: solve at n and 2n, extrapolate the O(h^2)
/// error, and keep doubling until successive extrapolations settle below tol.
inline EigenResult refine(const Potential1D& V, int k, double L, double tol, double hbar = 1.0,
                          int n0 = 2000, int threads = 0) {
    if (!(tol >= 1e-10)) throw DomainError("refine: need tol >= 1e-10");
    int n = n0;
    std::vector<double> prev_extrap;
    EigenResult fine;
    std::vector<double> e1(static_cast<size_t>(k));
    {
        const EigenResult r1 = eigen_lowest(discretize(V, L, n, hbar), k, threads);
        for (int j = 0; j < k; ++j) e1[static_cast<size_t>(j)] = r1.levels[static_cast<size_t>(j)].energy;
    }
    for (;;) {
        if (2 * n > (1 << 20)) throw BudgetExceededError("refine: grid budget exceeded");
        fine = eigen_lowest(discretize(V, L, 2 * n, hbar), k, threads);
        std::vector<double> extrap(static_cast<size_t>(k));
        for (int j = 0; j < k; ++j) {
            const double e2 = fine.levels[static_cast<size_t>(j)].energy;
            extrap[static_cast<size_t>(j)] = (4.0 * e2 - e1[static_cast<size_t>(j)]) / 3.0;
        }
        if (!prev_extrap.empty()) {
            double worst = 0.0;
            for (int j = 0; j < k; ++j)
                worst = std::max(worst, std::abs(extrap[static_cast<size_t>(j)] - prev_extrap[static_cast<size_t>(j)]));
            if (worst < tol) {
                EigenResult out;
                for (int j = 0; j < k; ++j) {
                    EigenLevel lvl = fine.levels[static_cast<size_t>(j)];
                    lvl.energy = extrap[static_cast<size_t>(j)];
                    lvl.error_estimate = std::abs(extrap[static_cast<size_t>(j)] - prev_extrap[static_cast<size_t>(j)]);
                    out.levels.push_back(std::move(lvl));
                }
                return out;
            }
        }
        prev_extrap = extrap;
        for (int j = 0; j < k; ++j) e1[static_cast<size_t>(j)] = fine.levels[static_cast<size_t>(j)].energy;
        n *= 2;
    }
}

} // namespace p4spectra
