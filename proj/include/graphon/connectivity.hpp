#ifndef GRAPHON_CONNECTIVITY_HPP
#define GRAPHON_CONNECTIVITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "graphon/bitmatrix.hpp"
#include "graphon/core.hpp"
#include "graphon/linalg.hpp"

namespace graphon {

/// Default support thresholds: step graphons carry exact zeros, grid
/// graphons carry quadrature noise.
inline constexpr double kStepEpsilon = 1e-12;
inline constexpr double kGridEpsilon = 1e-9;

inline double default_epsilon(const StepGraphon&) { return kStepEpsilon; }
inline double default_epsilon(const GridGraphon&) { return kGridEpsilon; }
inline double default_epsilon(const AnyGraphon& w) {
    return std::visit([](const auto& g) { return default_epsilon(g); }, w);
}

/// S_ij = (block or cell value > epsilon).
struct SupportGraph {
    BitMatrix adjacency;
    double epsilon = kStepEpsilon;

    std::size_t size() const { return adjacency.size(); }
    bool edge(std::size_t i, std::size_t j) const { return adjacency.test(i, j); }
};

inline SupportGraph support_graph(const Matrix& values, double epsilon) {
    if (epsilon < 0.0) throw ValidationError("support threshold must be nonnegative");
    SupportGraph s{BitMatrix(values.rows()), epsilon};
    for (std::size_t i = 0; i < values.rows(); ++i)
        for (std::size_t j = 0; j < values.cols(); ++j)
            if (values(i, j) > epsilon) s.adjacency.set(i, j);
    return s;
}

inline SupportGraph support_graph(const StepGraphon& w, double epsilon = kStepEpsilon) {
    return support_graph(w.blocks(), epsilon);
}
inline SupportGraph support_graph(const GridGraphon& w, double epsilon = kGridEpsilon) {
    return support_graph(w.values(), epsilon);
}

/// Square matrix of walk lengths with an explicit unreachable state.
class HopMatrix {
public:
    HopMatrix() = default;
    explicit HopMatrix(std::size_t n) : n_(n), hops_(n * n, kUnreachable) {}

    std::size_t size() const { return n_; }

    std::optional<int> at(std::size_t i, std::size_t j) const {
        const int h = hops_[i * n_ + j];
        if (h == kUnreachable) return std::nullopt;
        return h;
    }
    bool reachable(std::size_t i, std::size_t j) const { return hops_[i * n_ + j] != kUnreachable; }
    void set(std::size_t i, std::size_t j, std::optional<int> h) { hops_[i * n_ + j] = h.value_or(kUnreachable); }

    bool all_reachable() const {
        return std::none_of(hops_.begin(), hops_.end(), [](int h) { return h == kUnreachable; });
    }

    /// Largest entry, or nullopt when some pair is unreachable.
    std::optional<int> max() const {
        if (n_ == 0 || !all_reachable()) return std::nullopt;
        return *std::max_element(hops_.begin(), hops_.end());
    }

    /// Largest reachable entry (0 when nothing is reachable).
    int max_reachable() const {
        int m = 0;
        for (int h : hops_)
            if (h != kUnreachable) m = std::max(m, h);
        return m;
    }

    friend bool operator==(const HopMatrix&, const HopMatrix&) = default;

private:
    static constexpr int kUnreachable = -1;
    std::size_t n_ = 0;
    std::vector<int> hops_;
};

/// d'(i,j) = min{m >= 1 : (S^m)_ij != 0}, diagonal included: 1 with a
/// self-loop, 2 when the node has any neighbour, unreachable otherwise.
inline HopMatrix block_distance_matrix(const SupportGraph& s) {
    const std::size_t n = s.size();
    HopMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto hops = bfs_hops(s.adjacency, i);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && hops[j] >= 0) out.set(i, j, hops[j]);
        if (s.edge(i, i))
            out.set(i, i, 1);
        else if (s.adjacency.row_count(i) > 0)
            out.set(i, i, 2);
    }
    return out;
}

/// Connected in the sense that no positive-measure set has zero edge mass to
/// its complement. At block level: the support graph without self-loops is a
/// single component, and no block is isolated (for one block, it needs a
/// self-loop).
inline bool is_connected(const SupportGraph& s) {
    const std::size_t n = s.size();
    if (n == 0) return false;
    if (n == 1) return s.edge(0, 0);
    BitMatrix loopless = s.adjacency;
    for (std::size_t i = 0; i < n; ++i) loopless.set(i, i, false);
    const auto hops = bfs_hops(loopless, 0);
    return std::all_of(hops.begin(), hops.end(), [](int h) { return h >= 0; });
}

/// Every pair of blocks (diagonal included) is joined by a walk of some
/// length m <= n, decided by boolean matrix powers of S.
inline bool is_finitely_connected(const SupportGraph& s) {
    const std::size_t n = s.size();
    if (n == 0) return false;
    const BitMatrix& adj = s.adjacency;
    BitMatrix seen = adj;
    BitMatrix power = adj;
    for (std::size_t m = 2; m <= n; ++m) {
        BitMatrix next(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto out = next.row(i);
            for (std::size_t k = 0; k < n; ++k)
                if (power.test(i, k)) {
                    auto r = adj.row(k);
                    for (std::size_t w = 0; w < out.size(); ++w) out[w] |= r[w];
                }
            auto acc = seen.row(i);
            for (std::size_t w = 0; w < out.size(); ++w) acc[w] |= out[w];
        }
        power = std::move(next);
    }
    return seen.count() == n * n;
}

/// Dimension of ker(L) for the Laplacian of a step graphon. On step
/// functions L acts as diag(k) - M (symmetrized: diag(k) - D^{1/2} A D^{1/2});
/// on their orthogonal complement it multiplies by k, which contributes an
/// infinite-dimensional kernel as soon as some block has zero degree.
struct LaplacianKernel {
    std::size_t step_dimension = 0;
    bool infinite = false;

    bool simple() const { return !infinite && step_dimension == 1; }
};

inline LaplacianKernel laplacian_kernel(const StepGraphon& w, double tol = 1e-9) {
    const std::size_t n = w.size();
    const BlockFunction k = degree(w);
    Matrix ls(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            ls(i, j) = (i == j ? k.values[i] : 0.0) -
                       std::sqrt(w.measure(i)) * w.blocks()(i, j) * std::sqrt(w.measure(j));
    const SpectralData spec = sym_eig(ls);
    const double thresh = tol * std::max(1.0, ls.frobenius());
    LaplacianKernel out;
    for (double lambda : spec.eigenvalues)
        if (std::abs(lambda) <= thresh) ++out.step_dimension;
    out.infinite = std::any_of(k.values.begin(), k.values.end(), [](double v) { return v <= 0.0; });
    return out;
}

inline bool is_connected(const StepGraphon& w) { return is_connected(support_graph(w)); }
/// Decided on the cell support graph: a discretization, not exact.
inline bool is_connected(const GridGraphon& w) { return is_connected(support_graph(w)); }
inline bool is_connected(const AnyGraphon& w) {
    return std::visit([](const auto& g) { return is_connected(g); }, w);
}

/// Largest d'(i,j) over all block pairs, or nullopt when unbounded.
template <class G>
std::optional<int> diameter(const G& w) {
    return block_distance_matrix(support_graph(w)).max();
}
inline std::optional<int> diameter(const AnyGraphon& w) {
    return std::visit([](const auto& g) { return diameter(g); }, w);
}

}  // namespace graphon

#endif  // GRAPHON_CONNECTIVITY_HPP
