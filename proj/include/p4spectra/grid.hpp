#pragma once

// Real-valued functions sampled on a uniform symmetric 1D grid, plus the
// finite-difference and quadrature helpers shared by the SUSY operator
// machinery and the eigensolver.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "p4spectra/errors.hpp"

namespace p4spectra {

struct GridFunction {
    double L = 0.0;               // half-width; nodes span [-L, L] inclusive
    int n = 0;                    // number of nodes, >= 16
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(double half_width, int points)
        : L(half_width), n(points), values(static_cast<size_t>(points), 0.0) {
        if (n < 16) throw GridTooCoarseError("GridFunction: need n >= 16");
        if (!(L > 0.0)) throw DomainError("GridFunction: need L > 0");
    }

    double h() const { return 2.0 * L / (n - 1); }
    double x(int i) const { return -L + i * h(); }

    static GridFunction sample(double half_width, int points,
                               const std::function<double(double)>& f) {
        GridFunction g(half_width, points);
        for (int i = 0; i < g.n; ++i) g.values[static_cast<size_t>(i)] = f(g.x(i));
        return g;
    }
};

// Centered first derivative, second-order one-sided stencils at the ends.
inline GridFunction grid_derivative(const GridFunction& g) {
    GridFunction d(g.L, g.n);
    const double h = g.h();
    const auto& v = g.values;
    const int n = g.n;
    for (int i = 1; i + 1 < n; ++i)
        d.values[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d.values[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d.values[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return d;
}

// Centered second derivative, second-order one-sided stencils at the ends.
inline GridFunction grid_second_derivative(const GridFunction& g) {
    GridFunction d(g.L, g.n);
    const double h2 = g.h() * g.h();
    const auto& v = g.values;
    const int n = g.n;
    for (int i = 1; i + 1 < n; ++i)
        d.values[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
    d.values[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
    d.values[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
    return d;
}

// Fourth-order centered first derivative; the outer cells fall back to the
// second-order one-sided forms.
inline GridFunction grid_derivative4(const GridFunction& g) {
    GridFunction d(g.L, g.n);
    const double h = g.h();
    const auto& v = g.values;
    const int n = g.n;
    for (int i = 2; i + 2 < n; ++i)
        d.values[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
    d.values[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d.values[1] = (v[2] - v[0]) / (2.0 * h);
    d.values[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    d.values[n - 2] = (v[n - 1] - v[n - 3]) / (2.0 * h);
    return d;
}

// Fourth-order centered second derivative with the same edge treatment.
inline GridFunction grid_second_derivative4(const GridFunction& g) {
    GridFunction d(g.L, g.n);
    const double h2 = g.h() * g.h();
    const auto& v = g.values;
    const int n = g.n;
    for (int i = 2; i + 2 < n; ++i)
        d.values[i] = (-v[i - 2] + 16.0 * v[i - 1] - 30.0 * v[i] + 16.0 * v[i + 1] - v[i + 2]) /
                      (12.0 * h2);
    d.values[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
    d.values[1] = (v[0] - 2.0 * v[1] + v[2]) / h2;
    d.values[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
    d.values[n - 2] = (v[n - 1] - 2.0 * v[n - 2] + v[n - 3]) / h2;
    return d;
}

// Fourth-order centered third derivative (7-point); the outer three cells
// per end fall back to low-order one-sided forms and are only approximate.
inline GridFunction grid_third_derivative4(const GridFunction& g) {
    GridFunction d(g.L, g.n);
    const double h3 = std::pow(g.h(), 3);
    const auto& v = g.values;
    const int n = g.n;
    for (int i = 3; i + 3 < n; ++i)
        d.values[i] = (v[i - 3] - 8.0 * v[i - 2] + 13.0 * v[i - 1] - 13.0 * v[i + 1] +
                       8.0 * v[i + 2] - v[i + 3]) / (8.0 * h3);
    auto fwd = [&](int i) {
        return (-2.5 * v[i] + 9.0 * v[i + 1] - 12.0 * v[i + 2] + 7.0 * v[i + 3] -
                1.5 * v[i + 4]) / h3;
    };
    auto bwd = [&](int i) {
        return (2.5 * v[i] - 9.0 * v[i - 1] + 12.0 * v[i - 2] - 7.0 * v[i - 3] +
                1.5 * v[i - 4]) / h3;
    };
    for (int i : {0, 1, 2}) d.values[i] = fwd(i);
    for (int i : {n - 3, n - 2, n - 1}) d.values[i] = bwd(i);
    return d;
}

// Trapezoidal integral of f over the grid.
inline double grid_trapz(const GridFunction& g) {
    double s = 0.5 * (g.values.front() + g.values.back());
    for (int i = 1; i + 1 < g.n; ++i) s += g.values[i];
    return s * g.h();
}

// Trapezoidal inner product <f, g>, optionally ignoring `skip` cells per end.
inline double grid_inner(const GridFunction& a, const GridFunction& b, int skip = 0) {
    if (a.n != b.n) throw DomainError("grid_inner: size mismatch");
    double s = 0.0;
    for (int i = skip; i < a.n - skip; ++i) {
        const double w = (i == skip || i == a.n - 1 - skip) ? 0.5 : 1.0;
        s += w * a.values[i] * b.values[i];
    }
    return s * a.h();
}

inline double grid_norm(const GridFunction& a, int skip = 0) {
    return std::sqrt(grid_inner(a, a, skip));
}

// Cumulative trapezoidal antiderivative anchored at the node closest to x0.
inline GridFunction grid_cumulative(const GridFunction& g, double x0 = 0.0) {
    GridFunction c(g.L, g.n);
    const double h = g.h();
    int anchor = static_cast<int>(std::lround((x0 + g.L) / h));
    anchor = std::max(0, std::min(g.n - 1, anchor));
    c.values[anchor] = 0.0;
    for (int i = anchor + 1; i < g.n; ++i)
        c.values[i] = c.values[i - 1] + 0.5 * h * (g.values[i - 1] + g.values[i]);
    for (int i = anchor - 1; i >= 0; --i)
        c.values[i] = c.values[i + 1] - 0.5 * h * (g.values[i] + g.values[i + 1]);
    return c;
}

inline GridFunction grid_scale(GridFunction g, double c) {
    for (double& v : g.values) v *= c;
    return g;
}

} // namespace p4spectra
