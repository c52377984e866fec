#ifndef GRAPHON_BUILTIN_HPP
#define GRAPHON_BUILTIN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "graphon/core.hpp"

namespace graphon {

/// Normalized circular distance min(|x-y|, 1-|x-y|).
inline double circular_distance(double x, double y) {
    const double d = std::abs(x - y);
    return std::min(d, 1.0 - d);
}

/// Cell averages of a symmetric kernel, estimated with `sub` x `sub`
/// midpoint samples per cell.
template <class Kernel>
GridGraphon render_kernel(Kernel&& kernel, std::size_t n, std::size_t sub = 4) {
    if (n == 0 || sub == 0) throw ValidationError("grid resolution and subsampling must be positive");
    const double h = 1.0 / static_cast<double>(n);
    const double hs = h / static_cast<double>(sub);
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t a = 0; a < sub; ++a) {
                const double x = static_cast<double>(i) * h + (static_cast<double>(a) + 0.5) * hs;
                for (std::size_t b = 0; b < sub; ++b) {
                    const double y = static_cast<double>(j) * h + (static_cast<double>(b) + 0.5) * hs;
                    s += kernel(x, y);
                }
            }
            v(i, j) = v(j, i) = s / static_cast<double>(sub * sub);
        }
    return GridGraphon(std::move(v));
}

/// 1 on I_1 x I_2 and I_2 x I_1 with I_1 = [0,1/2), I_2 = [1/2,1].
inline StepGraphon bipartite() { return lift(Matrix{{0.0, 1.0}, {1.0, 0.0}}); }

/// Constant kernel p.
inline StepGraphon erdos_renyi(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("Erdos-Renyi parameter must lie in [0,1]");
    return lift(Matrix{{p}});
}

inline StepGraphon zero_graphon(std::size_t n = 1) { return lift(Matrix(n, n, 0.0)); }

/// Adjacency matrix of the cycle on n vertices in cyclic order.
inline Matrix cycle_adjacency(std::size_t n) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, (i + 1) % n) = 1.0;
        a((i + 1) % n, i) = 1.0;
    }
    return a;
}

/// 1 where the circular distance is at most tau.
inline GridGraphon circular_band(double tau, std::size_t n, std::size_t sub = 4) {
    if (!(tau > 0.0 && tau <= 0.5)) throw ValidationError("circular band width must lie in (0, 1/2]");
    return render_kernel([tau](double x, double y) { return circular_distance(x, y) <= tau ? 1.0 : 0.0; }, n, sub);
}

/// W(x,y) = 1 - max(x,y).
inline GridGraphon one_minus_max(std::size_t n, std::size_t sub = 4) {
    return render_kernel([](double x, double y) { return 1.0 - std::max(x, y); }, n, sub);
}

}  // namespace graphon

#endif  // GRAPHON_BUILTIN_HPP
