#ifndef GRAPHON_CORE_HPP
#define GRAPHON_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "graphon/error.hpp"
#include "graphon/matrix.hpp"

namespace graphon {

/// Measures below this are treated as null when deciding whether a set
/// touches a block. Interval endpoints typed by hand rarely agree with
/// cumulative breakpoints to the last ulp.
inline constexpr double kMeasureTol = 1e-12;

/// Tolerance on the symmetry and [0,1]-range checks of in-memory graphons.
inline constexpr double kSymmetryTol = 1e-12;

/// Half-open interval [lo, hi).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

inline double overlap(const Interval& a, const Interval& b) {
    return std::max(0.0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
}

/// Ordered partition of [0,1] into consecutive half-open intervals
/// [b_{i-1}, b_i); the last interval is closed at 1.
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<double> measures) : measures_(std::move(measures)) {
        if (measures_.empty()) throw ValidationError("partition needs at least one block");
        double total = 0.0;
        for (std::size_t i = 0; i < measures_.size(); ++i) {
            if (!(measures_[i] > 0.0) || !std::isfinite(measures_[i]))
                throw ValidationError("partition block " + std::to_string(i) + " has non-positive measure");
            total += measures_[i];
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw ValidationError("partition measures sum to " + std::to_string(total) + ", expected 1");
        breakpoints_.resize(measures_.size() + 1);
        breakpoints_[0] = 0.0;
        std::partial_sum(measures_.begin(), measures_.end(), breakpoints_.begin() + 1);
        breakpoints_.back() = 1.0;
        for (std::size_t i = 1; i < breakpoints_.size(); ++i)
            if (!(breakpoints_[i] > breakpoints_[i - 1]))
                throw ValidationError("partition breakpoints are not strictly increasing");
    }

    /// n blocks of measure 1/n with breakpoints exactly i/n.
    static Partition uniform(std::size_t n) {
        if (n == 0) throw ValidationError("partition needs at least one block");
        Partition p(std::vector<double>(n, 1.0 / static_cast<double>(n)));
        for (std::size_t i = 0; i <= n; ++i) p.breakpoints_[i] = static_cast<double>(i) / static_cast<double>(n);
        return p;
    }

    std::size_t size() const { return measures_.size(); }
    double measure(std::size_t i) const { return measures_[i]; }
    const std::vector<double>& measures() const { return measures_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    Interval interval(std::size_t i) const { return {breakpoints_[i], breakpoints_[i + 1]}; }

    /// Index of the block containing x.
    std::size_t locate(double x) const {
        if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("coordinate " + std::to_string(x) + " outside [0,1]");
        auto it = std::upper_bound(breakpoints_.begin() + 1, breakpoints_.end() - 1, x);
        return static_cast<std::size_t>(it - (breakpoints_.begin() + 1));
    }

    bool is_homogeneous(double tol = 1e-12) const {
        const double target = 1.0 / static_cast<double>(size());
        return std::all_of(measures_.begin(), measures_.end(), [&](double m) { return std::abs(m - target) <= tol; });
    }

    bool same_as(const Partition& o, double tol = 1e-12) const {
        if (size() != o.size()) return false;
        for (std::size_t i = 0; i < breakpoints_.size(); ++i)
            if (std::abs(breakpoints_[i] - o.breakpoints_[i]) > tol) return false;
        return true;
    }

private:
    std::vector<double> measures_;
    std::vector<double> breakpoints_;
};

/// Finite union of disjoint half-open intervals in [0,1], kept sorted and
/// merged. This is the computable stand-in for a measurable set.
class IntervalSet {
public:
    IntervalSet() = default;

    explicit IntervalSet(std::vector<Interval> parts) {
        for (const auto& iv : parts) {
            if (!(iv.lo >= 0.0 && iv.hi <= 1.0 && iv.lo < iv.hi))
                throw ValidationError("interval [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) +
                                      ") is not a nonempty subinterval of [0,1]");
        }
        std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        for (const auto& iv : parts) {
            if (!parts_.empty() && iv.lo <= parts_.back().hi)
                parts_.back().hi = std::max(parts_.back().hi, iv.hi);
            else
                parts_.push_back(iv);
        }
    }

    IntervalSet(std::initializer_list<Interval> parts) : IntervalSet(std::vector<Interval>(parts)) {}

    static IntervalSet block(const Partition& p, std::size_t i) { return IntervalSet({p.interval(i)}); }

    static IntervalSet blocks(const Partition& p, const std::vector<std::size_t>& idx) {
        std::vector<Interval> parts;
        for (std::size_t i : idx) parts.push_back(p.interval(i));
        return IntervalSet(std::move(parts));
    }

    const std::vector<Interval>& intervals() const { return parts_; }
    bool empty() const { return parts_.empty(); }

    double measure() const {
        double s = 0.0;
        for (const auto& iv : parts_) s += iv.length();
        return s;
    }

    double overlap(const Interval& iv) const {
        double s = 0.0;
        for (const auto& p : parts_) s += graphon::overlap(p, iv);
        return s;
    }

    bool contains(double x) const {
        return std::any_of(parts_.begin(), parts_.end(), [&](const Interval& iv) { return x >= iv.lo && x < iv.hi; });
    }

    IntervalSet intersect(const IntervalSet& o) const {
        std::vector<Interval> out;
        std::size_t i = 0, j = 0;
        while (i < parts_.size() && j < o.parts_.size()) {
            const double lo = std::max(parts_[i].lo, o.parts_[j].lo);
            const double hi = std::min(parts_[i].hi, o.parts_[j].hi);
            if (lo < hi) out.push_back({lo, hi});
            if (parts_[i].hi < o.parts_[j].hi) ++i; else ++j;
        }
        IntervalSet r;
        r.parts_ = std::move(out);
        return r;
    }

    /// μ(X ∩ P_i) for every block of `p`.
    Vector masses(const Partition& p) const {
        Vector out(p.size(), 0.0);
        for (const auto& iv : parts_) {
            std::size_t b = p.locate(iv.lo);
            for (; b < p.size() && p.breakpoints()[b] < iv.hi; ++b) out[b] += graphon::overlap(iv, p.interval(b));
        }
        return out;
    }

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<Interval> parts_;
};

/// Block-constant function: value `values[i]` on block i of `partition`.
struct BlockFunction {
    Partition partition;
    Vector values;

    BlockFunction(Partition p, Vector v) : partition(std::move(p)), values(std::move(v)) {
        if (values.size() != partition.size()) throw ValidationError("block function length does not match partition");
    }

    double eval(double x) const { return values[partition.locate(x)]; }
};

namespace detail {

inline void validate_kernel_matrix(Matrix& a, const char* what) {
    if (!a.square()) throw ValidationError(std::string(what) + " must be square");
    if (!a.all_finite()) throw ValidationError(std::string(what) + " has non-finite entries");
    if (!a.is_symmetric(kSymmetryTol)) throw ValidationError(std::string(what) + " is not symmetric");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double& v = a(i, j);
            if (v < -kSymmetryTol || v > 1.0 + kSymmetryTol)
                throw ValidationError(std::string(what) + " entry (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") = " + std::to_string(v) + " outside [0,1]");
            v = std::clamp(v, 0.0, 1.0);
        }
    a.symmetrize();
}

}  // namespace detail

/// Graphon that is constant on the products P_i x P_j of a partition.
class StepGraphon {
public:
    StepGraphon(Partition partition, Matrix blocks) : partition_(std::move(partition)), blocks_(std::move(blocks)) {
        detail::validate_kernel_matrix(blocks_, "block matrix");
        if (blocks_.rows() != partition_.size())
            throw ValidationError("block matrix is " + std::to_string(blocks_.rows()) + "x" +
                                  std::to_string(blocks_.cols()) + " but partition has " +
                                  std::to_string(partition_.size()) + " blocks");
    }

    const Partition& partition() const { return partition_; }
    const Matrix& blocks() const { return blocks_; }
    std::size_t size() const { return partition_.size(); }
    double measure(std::size_t i) const { return partition_.measure(i); }

    /// M_ij = A_ij μ_j: the action of the adjacency operator on block values.
    Matrix operator_matrix() const {
        Matrix m = blocks_;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j) m(i, j) *= partition_.measure(j);
        return m;
    }

    double eval(double x, double y) const { return blocks_(partition_.locate(x), partition_.locate(y)); }

private:
    Partition partition_;
    Matrix blocks_;
};

/// n x n uniform sampling of a graphon; cell (i,j) covers [i/n,(i+1)/n) x [j/n,(j+1)/n).
class GridGraphon {
public:
    explicit GridGraphon(Matrix values) : values_(std::move(values)) {
        detail::validate_kernel_matrix(values_, "grid values");
        if (values_.rows() == 0) throw ValidationError("grid resolution must be positive");
        cells_ = Partition::uniform(values_.rows());
    }

    std::size_t resolution() const { return values_.rows(); }
    const Matrix& values() const { return values_; }
    const Partition& cells() const { return cells_; }
    std::size_t cell(double x) const { return cells_.locate(x); }
    double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) / static_cast<double>(resolution()); }

    double eval(double x, double y) const { return values_(cell(x), cell(y)); }

private:
    Matrix values_;
    Partition cells_;
};

using AnyGraphon = std::variant<StepGraphon, GridGraphon>;

/// The grid graphon read as a step graphon on the uniform partition. Exact:
/// a grid graphon is piecewise constant on its cells.
inline StepGraphon as_step(const GridGraphon& g) { return StepGraphon(g.cells(), g.values()); }
inline const StepGraphon& as_step(const StepGraphon& w) { return w; }
inline StepGraphon as_step(const AnyGraphon& w) {
    return std::visit([](const auto& g) { return StepGraphon(as_step(g)); }, w);
}

// ---------------------------------------------------------------------------
// Constructors

inline StepGraphon step(Partition p, Matrix a) { return StepGraphon(std::move(p), std::move(a)); }

/// Step graphon of an adjacency matrix on the uniform partition.
inline StepGraphon lift(Matrix a) {
    if (!a.square()) throw ValidationError("adjacency matrix must be square");
    const std::size_t n = a.rows();
    return StepGraphon(Partition::uniform(n), std::move(a));
}

// ---------------------------------------------------------------------------
// Block averaging

namespace detail {

struct Overlap {
    std::size_t source;
    double length;
};

/// For each block of `target`, the blocks of `source` it meets and the
/// lengths of the intersections.
inline std::vector<std::vector<Overlap>> overlap_table(const Partition& target, const Partition& source) {
    std::vector<std::vector<Overlap>> table(target.size());
    for (std::size_t i = 0; i < target.size(); ++i) {
        const Interval ti = target.interval(i);
        for (std::size_t s = source.locate(ti.lo); s < source.size() && source.breakpoints()[s] < ti.hi; ++s) {
            const double len = overlap(ti, source.interval(s));
            if (len > 0.0) table[i].push_back({s, len});
        }
    }
    return table;
}

}  // namespace detail

/// Block averages w_ij = (1/μ_iμ_j) ∫_{P_i x P_j} W, by exact intersection of
/// `p` with the graphon's own partition.
inline Matrix mat(const Partition& p, const StepGraphon& w) {
    if (p.same_as(w.partition(), 0.0)) return w.blocks();
    const auto table = detail::overlap_table(p, w.partition());
    const std::size_t n = p.size(), src = w.size();
    // R = O A with O_ia = |P_i ∩ Q_a|.
    Matrix r(n, src);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& o : table[i]) {
            auto arow = w.blocks().row(o.source);
            auto rrow = r.row(i);
            for (std::size_t b = 0; b < src; ++b) rrow[b] += o.length * arow[b];
        }
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double li = p.interval(i).length();
        for (std::size_t j = i; j < n; ++j) {
            const double lj = p.interval(j).length();
            double s = 0.0;
            for (const auto& o : table[j]) s += r(i, o.source) * o.length;
            out(i, j) = out(j, i) = s / (li * lj);
        }
    }
    return out;
}

inline Matrix mat(const Partition& p, const GridGraphon& w) { return mat(p, as_step(w)); }

/// Orthogonal projection onto P-step graphons.
template <class G>
StepGraphon coarsen(const Partition& p, const G& w) {
    return StepGraphon(p, mat(p, w));
}

/// Cell averages of a step graphon on an n x n grid.
inline GridGraphon render(const StepGraphon& w, std::size_t n) { return GridGraphon(mat(Partition::uniform(n), w)); }

// ---------------------------------------------------------------------------
// Operator algebra

/// Kernel of the m-th power of the adjacency operator: step_P(M^{m-1} A).
inline StepGraphon comp_power(const StepGraphon& w, int m) {
    if (m < 1) throw ValidationError("composition power requires m >= 1 (m = " + std::to_string(m) + ")");
    const Matrix op = w.operator_matrix();
    Matrix acc = w.blocks();
    for (int k = 1; k < m; ++k) acc = op * acc;
    acc.symmetrize();
    return StepGraphon(w.partition(), std::move(acc));
}

/// Iterated midpoint quadrature W^{∘m}(x_a, x_b) = Σ_c W^{∘(m-1)}(x_a, z_c) W(z_c, x_b) / n.
inline GridGraphon comp_power(const GridGraphon& w, int m) {
    if (m < 1) throw ValidationError("composition power requires m >= 1 (m = " + std::to_string(m) + ")");
    const double h = 1.0 / static_cast<double>(w.resolution());
    Matrix acc = w.values();
    for (int k = 1; k < m; ++k) {
        acc = acc * w.values();
        acc *= h;
    }
    acc.symmetrize();
    return GridGraphon(std::move(acc));
}

/// k_i = Σ_j A_ij μ_j.
inline BlockFunction degree(const StepGraphon& w) {
    Vector k(w.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) k[i] += w.blocks()(i, j) * w.measure(j);
    return BlockFunction(w.partition(), std::move(k));
}

/// Row cell-averages.
inline Vector degree(const GridGraphon& w) {
    const std::size_t n = w.resolution();
    Vector k(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (double v : w.values().row(i)) k[i] += v;
        k[i] /= static_cast<double>(n);
    }
    return k;
}

inline BlockFunction apply_adjacency(const StepGraphon& w, const BlockFunction& f) {
    if (!f.partition.same_as(w.partition()))
        throw ValidationError("block function is not defined on the graphon's partition");
    return BlockFunction(w.partition(), w.operator_matrix() * std::span<const double>(f.values));
}

inline Vector apply_adjacency(const GridGraphon& w, std::span<const double> f) {
    if (f.size() != w.resolution()) throw ValidationError("grid vector length does not match resolution");
    Vector out = w.values() * f;
    for (double& v : out) v /= static_cast<double>(w.resolution());
    return out;
}

inline double eval(const StepGraphon& w, double x, double y) { return w.eval(x, y); }
inline double eval(const GridGraphon& w, double x, double y) { return w.eval(x, y); }
inline double eval(const AnyGraphon& w, double x, double y) {
    return std::visit([&](const auto& g) { return g.eval(x, y); }, w);
}

inline bool is_permutation(const std::vector<std::size_t>& sigma) {
    std::vector<bool> seen(sigma.size(), false);
    for (std::size_t s : sigma) {
        if (s >= sigma.size() || seen[s]) return false;
        seen[s] = true;
    }
    return true;
}

/// Block k of the result is block sigma[k] of `w`: the rearrangement of [0,1]
/// that moves the blocks into the order sigma.
inline StepGraphon permute_blocks(const StepGraphon& w, const std::vector<std::size_t>& sigma) {
    if (sigma.size() != w.size() || !is_permutation(sigma))
        throw ValidationError("invalid block permutation of size " + std::to_string(sigma.size()));
    const std::size_t n = w.size();
    std::vector<double> mu(n);
    Matrix a(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        mu[k] = w.measure(sigma[k]);
        for (std::size_t l = 0; l < n; ++l) a(k, l) = w.blocks()(sigma[k], sigma[l]);
    }
    Partition p = w.partition().is_homogeneous(0.0) ? Partition::uniform(n) : Partition(std::move(mu));
    return StepGraphon(std::move(p), std::move(a));
}

}  // namespace graphon

#endif  // GRAPHON_CORE_HPP
