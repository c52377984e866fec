#ifndef GRAPHON_VARADHAN_HPP
#define GRAPHON_VARADHAN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "graphon/connectivity.hpp"
#include "graphon/core.hpp"
#include "graphon/linalg.hpp"

namespace graphon {

enum class Representation { step, grid };

inline const char* to_string(Representation r) { return r == Representation::step ? "step" : "grid"; }

/// Pointwise shortest-path distance of a graphon at block (or cell)
/// resolution. The level sets of `distances` are the layers B_n; the
/// diagonal entries double as the distance between distinct points of the
/// same block. d(x,x) = 0 is handled by `distance`, not stored.
struct DistanceField {
    Representation representation = Representation::step;
    Partition partition;
    HopMatrix distances;
    std::vector<std::optional<int>> within_block;
    int layers = 0;             ///< number of nonempty layers B_1..B_layers (= diameter when connected)
    bool disconnected = false;  ///< some pair is unreachable

    std::optional<int> distance(double x, double y) const {
        if (x == y) {
            partition.locate(x);
            return 0;
        }
        return distances.at(partition.locate(x), partition.locate(y));
    }

    /// Lebesgue measure of each layer B_n in [0,1]^2, indexed by n
    /// (index 0 is the diagonal, of measure zero). Unreachable mass is not counted.
    std::vector<double> layer_measures() const {
        std::vector<double> out(static_cast<std::size_t>(layers) + 1, 0.0);
        for (std::size_t i = 0; i < partition.size(); ++i)
            for (std::size_t j = 0; j < partition.size(); ++j)
                if (auto d = distances.at(i, j)) out[static_cast<std::size_t>(*d)] += partition.measure(i) * partition.measure(j);
        return out;
    }
};

/// Layers come from breadth-first reachability on the support graph; they
/// depend only on the support of W and its composition powers.
inline DistanceField distance_field(const StepGraphon& w, double epsilon = kStepEpsilon,
                                    Representation tag = Representation::step) {
    DistanceField f;
    f.representation = tag;
    f.partition = w.partition();
    f.distances = block_distance_matrix(support_graph(w, epsilon));
    f.within_block.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) f.within_block[i] = f.distances.at(i, i);
    f.layers = f.distances.max_reachable();
    f.disconnected = !f.distances.all_reachable();
    return f;
}

inline DistanceField distance_field(const GridGraphon& w, double epsilon = kGridEpsilon) {
    return distance_field(as_step(w), epsilon, Representation::grid);
}

inline DistanceField distance_field(const AnyGraphon& w, std::optional<double> epsilon = std::nullopt) {
    return std::visit([&](const auto& g) { return distance_field(g, epsilon.value_or(default_epsilon(g))); }, w);
}

template <class G>
std::optional<int> varadhan_distance(const G& w, double x, double y) {
    return distance_field(w).distance(x, y);
}

namespace detail {

inline void require_nonempty(const IntervalSet& s, const char* name) {
    if (s.measure() <= kMeasureTol) throw ValidationError(std::string("set ") + name + " has zero measure");
}

}  // namespace detail

/// inf{m : <1_U, W^m 1_V> > 0}, decided combinatorially: 0 when U and V
/// overlap, otherwise the smallest d'(i,j) over blocks i touched by U and
/// j touched by V.
inline std::optional<int> delta_sets(const DistanceField& field, const IntervalSet& u, const IntervalSet& v) {
    detail::require_nonempty(u, "U");
    detail::require_nonempty(v, "V");
    if (u.intersect(v).measure() > kMeasureTol) return 0;
    const Vector mu = u.masses(field.partition);
    const Vector mv = v.masses(field.partition);
    std::optional<int> best;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (mu[i] <= kMeasureTol) continue;
        for (std::size_t j = 0; j < mv.size(); ++j) {
            if (mv[j] <= kMeasureTol) continue;
            if (auto d = field.distances.at(i, j); d && (!best || *d < *best)) best = d;
        }
    }
    return best;
}

template <class G>
std::optional<int> delta_sets(const G& w, const IntervalSet& u, const IntervalSet& v) {
    return delta_sets(distance_field(w), u, v);
}

enum class Generator { adjacency, laplacian };

/// <1_V, e^{Wt} 1_U> (adjacency) or <1_V, e^{-Lt} 1_U> (Laplacian), exact for
/// step graphons. 1_U splits into its block averages u plus a part with zero
/// block means; the adjacency operator kills the latter and acts as M on u,
/// the Laplacian acts as diag(k) - M on u and as multiplication by k on the rest.
inline double heat_expectation(const StepGraphon& w, const IntervalSet& u, const IntervalSet& v, double t,
                               Generator gen = Generator::adjacency) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("heat_expectation: t must be a finite nonnegative number");
    const Partition& p = w.partition();
    const std::size_t n = w.size();
    const Vector mass_u = u.masses(p);
    const Vector mass_v = v.masses(p);
    Vector avg_u(n);
    for (std::size_t i = 0; i < n; ++i) avg_u[i] = mass_u[i] / p.interval(i).length();
    const Matrix op = w.operator_matrix();

    if (gen == Generator::adjacency) {
        // μ(U∩V) + Σ_{k>=1} t^k/k! <V-mass, M^k u>; every term is nonnegative,
        // so small values at small t carry full relative precision.
        double total = u.intersect(v).measure();
        Vector walk = avg_u;
        double coeff = 1.0;
        const double bound = t * op.norm1();
        int quiet = 0;
        for (int k = 1; k < 100000; ++k) {
            walk = op * std::span<const double>(walk);
            coeff *= t / static_cast<double>(k);
            const double term = coeff * dot(mass_v, walk);
            total += term;
            if (!std::isfinite(total)) throw DomainError("heat_expectation: overflow at t = " + std::to_string(t));
            quiet = (term <= 1e-17 * total) ? quiet + 1 : 0;
            if (quiet >= 3 && k >= static_cast<int>(n) && static_cast<double>(k) > 2.0 * bound) break;
        }
        return total;
    }

    const BlockFunction deg = degree(w);
    // -t (diag(k) - M)
    Matrix gen_step = op * t;
    for (std::size_t i = 0; i < n; ++i) gen_step(i, i) -= t * deg.values[i];
    const Matrix e = expm(gen_step);
    const Vector stepped = e * std::span<const double>(avg_u);
    const Vector mass_uv = u.intersect(v).masses(p);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += mass_v[i] * stepped[i];
        total += std::exp(-deg.values[i] * t) * (mass_uv[i] - mass_v[i] * avg_u[i]);
    }
    return total;
}

inline double heat_expectation(const GridGraphon& w, const IntervalSet& u, const IntervalSet& v, double t,
                               Generator gen = Generator::adjacency) {
    return heat_expectation(as_step(w), u, v, t, gen);
}

/// Least-squares fit of log value against log t.
struct SlopeEstimate {
    Vector t_grid;
    Vector log_values;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  ///< root-mean-square fit residual
    long estimate = 0;      ///< slope rounded to the nearest integer

    /// |slope - round(slope)| < tol and residual below `max_residual`.
    bool integral(double tol = 0.1, double max_residual = 1e-3) const {
        return std::abs(slope - static_cast<double>(estimate)) < tol && residual < max_residual;
    }
};

/// Eight points log-spaced from 1e-3 down to 1e-5.
inline Vector default_t_grid() {
    Vector g(8);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(10.0, -3.0 - 2.0 * static_cast<double>(i) / 7.0);
    return g;
}

namespace detail {

inline void validate_t_grid(const Vector& grid) {
    if (grid.size() < 2) throw ValidationError("t-grid needs at least two points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw ValidationError("t-grid values must be positive");
        if (i > 0 && !(grid[i] < grid[i - 1])) throw ValidationError("t-grid must be strictly decreasing");
    }
    if (grid.back() < 1e-8) throw ValidationError("t-grid minimum is below 1e-8");
}

inline SlopeEstimate fit_log_log(const Vector& grid, const Vector& values) {
    SlopeEstimate est;
    est.t_grid = grid;
    est.log_values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(values[i] > 0.0)) {
            std::ostringstream msg;
            msg << "value is " << values[i] << " (not positive) at t = " << grid[i];
            throw DomainError(msg.str());
        }
        est.log_values[i] = std::log(values[i]);
    }
    const double n = static_cast<double>(grid.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        mx += std::log(grid[i]);
        my += est.log_values[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double dx = std::log(grid[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (est.log_values[i] - my);
    }
    est.slope = sxy / sxx;
    est.intercept = my - est.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = est.log_values[i] - (est.intercept + est.slope * std::log(grid[i]));
        ss += r * r;
    }
    est.residual = std::sqrt(ss / n);
    est.estimate = std::lround(est.slope);
    return est;
}

}  // namespace detail

/// Slope of log p_t(U,V) against log t on a small-t grid. This is the
/// numerical check of delta_sets, never its source.
inline SlopeEstimate varadhan_slope(const StepGraphon& w, const IntervalSet& u, const IntervalSet& v,
                                    const Vector& t_grid = default_t_grid()) {
    detail::validate_t_grid(t_grid);
    detail::require_nonempty(u, "U");
    detail::require_nonempty(v, "V");
    Vector values(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) values[i] = heat_expectation(w, u, v, t_grid[i]);
    try {
        return detail::fit_log_log(t_grid, values);
    } catch (const DomainError& e) {
        throw DomainError(std::string("varadhan_slope: p_t ") + e.what());
    }
}

inline SlopeEstimate varadhan_slope(const GridGraphon& w, const IntervalSet& u, const IntervalSet& v,
                                    const Vector& t_grid = default_t_grid()) {
    return varadhan_slope(as_step(w), u, v, t_grid);
}

/// Slope of log |f(Lt)_ij| against log t with L = weights + diag(diagonal).
/// `weights` must vanish exactly where the 0/1 `adjacency` does.
inline SlopeEstimate general_varadhan_slope(const Matrix& adjacency, const Matrix& weights, const Vector& diagonal,
                                            const TaylorFamily& f, std::size_t i, std::size_t j,
                                            const Vector& t_grid = default_t_grid()) {
    const std::size_t n = adjacency.rows();
    if (!adjacency.square() || weights.rows() != n || weights.cols() != n || diagonal.size() != n)
        throw ValidationError("general_varadhan_slope: dimension mismatch");
    if (i >= n || j >= n) throw ValidationError("general_varadhan_slope: index out of range");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const double aij = adjacency(a, b);
            if (aij != 0.0 && aij != 1.0) throw ValidationError("adjacency must be a 0/1 matrix");
            if (weights(a, b) < 0.0) throw ValidationError("weights must be nonnegative");
            if ((weights(a, b) == 0.0) != (aij == 0.0)) {
                std::ostringstream msg;
                msg << "weights violate the zero pattern of the adjacency at (" << a << "," << b << ")";
                throw ValidationError(msg.str());
            }
        }
    detail::validate_t_grid(t_grid);
    Matrix l = weights;
    for (std::size_t a = 0; a < n; ++a) l(a, a) += diagonal[a];
    Vector values(t_grid.size());
    for (std::size_t k = 0; k < t_grid.size(); ++k) values[k] = std::abs(analytic_transform(f, l, t_grid[k]).value(i, j));
    try {
        return detail::fit_log_log(t_grid, values);
    } catch (const DomainError& e) {
        throw DomainError(std::string("general_varadhan_slope: |f(Lt)_ij| ") + e.what());
    }
}

}  // namespace graphon

#endif  // GRAPHON_VARADHAN_HPP
