#ifndef GRAPHON_METRICS_HPP
#define GRAPHON_METRICS_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "graphon/core.hpp"
#include "graphon/linalg.hpp"

namespace graphon {

// ---------------------------------------------------------------------------
// Communicability

namespace detail {

/// Decomposition of 1_X - 1_Y against a partition: block averages and the
/// squared norm of the part with zero block means.
struct SetDifference {
    Vector averages;
    double orthogonal_sq = 0.0;
};

inline SetDifference set_difference(const Partition& p, const IntervalSet& x, const IntervalSet& y) {
    const Vector mx = x.masses(p);
    const Vector my = y.masses(p);
    const Vector mxy = x.intersect(y).masses(p);
    SetDifference d{Vector(p.size()), 0.0};
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double len = p.interval(i).length();
        const double a = std::max(0.0, mx[i] - mxy[i]);  // μ((X\Y) ∩ P_i)
        const double b = std::max(0.0, my[i] - mxy[i]);  // μ((Y\X) ∩ P_i)
        d.averages[i] = (a - b) / len;
        d.orthogonal_sq += (a + b) - (a - b) * (a - b) / len;
    }
    d.orthogonal_sq = std::max(0.0, d.orthogonal_sq);
    return d;
}

}  // namespace detail

/// d_C(X,Y) = ||e^{W/2}(1_X - 1_Y)||_2 for a fixed step graphon. On step
/// functions e^{W/2} is D^{-1/2} expm(B/2) D^{1/2} with B = D^{1/2} A D^{1/2};
/// on their orthogonal complement it is the identity.
class CommunicabilityMetric {
public:
    explicit CommunicabilityMetric(StepGraphon w) : w_(std::move(w)) {
        const std::size_t n = w_.size();
        sqrt_mu_.resize(n);
        for (std::size_t i = 0; i < n; ++i) sqrt_mu_[i] = std::sqrt(w_.partition().interval(i).length());
        Matrix half(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) half(i, j) = 0.5 * sqrt_mu_[i] * w_.blocks()(i, j) * sqrt_mu_[j];
        exp_half_ = expm(half);
    }

    const StepGraphon& graphon() const { return w_; }

    double operator()(const IntervalSet& x, const IntervalSet& y) const {
        const auto d = detail::set_difference(w_.partition(), x, y);
        Vector g(d.averages.size());
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = sqrt_mu_[i] * d.averages[i];
        const Vector h = exp_half_ * std::span<const double>(g);
        return std::sqrt(dot(h, h) + d.orthogonal_sq);
    }

private:
    StepGraphon w_;
    Vector sqrt_mu_;
    Matrix exp_half_;
};

inline double communicability_distance(const StepGraphon& w, const IntervalSet& x, const IntervalSet& y) {
    return CommunicabilityMetric(w)(x, y);
}

/// Spectral coordinates c_k = e^{λ_k/2} <1_X, φ_k> of a set, k < K, where
/// φ_k has block values (v_k)_i / sqrt(μ_i) for the eigenpairs (λ_k, v_k) of B.
struct Embedding {
    std::size_t truncation = 0;
    Vector eigenvalues;
    Vector coordinates;
    double kernel_norm = 0.0;  ///< ||(1_X)_⊥||, the part of 1_X outside the step functions
};

inline Embedding communicability_embedding(const StepGraphon& w, const SpectralData& spec, const IntervalSet& x,
                                           std::size_t k) {
    const std::size_t n = w.size();
    if (k == 0 || k > n) throw ValidationError("embedding truncation K = " + std::to_string(k) + " outside [1, " +
                                               std::to_string(n) + "]");
    const Vector mass = x.masses(w.partition());
    Embedding e;
    e.truncation = k;
    e.eigenvalues.assign(spec.eigenvalues.begin(), spec.eigenvalues.begin() + static_cast<std::ptrdiff_t>(k));
    e.coordinates.assign(k, 0.0);
    double orth = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double len = w.partition().interval(i).length();
        orth += mass[i] - mass[i] * mass[i] / len;
    }
    e.kernel_norm = std::sqrt(std::max(0.0, orth));
    for (std::size_t c = 0; c < k; ++c) {
        double inner = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inner += mass[i] * spec.eigenvectors(i, c) / std::sqrt(w.partition().interval(i).length());
        e.coordinates[c] = std::exp(0.5 * spec.eigenvalues[c]) * inner;
    }
    return e;
}

/// Spectral data of B = D^{1/2} A D^{1/2}.
inline SpectralData communicability_spectrum(const StepGraphon& w) {
    const std::size_t n = w.size();
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b(i, j) = std::sqrt(w.measure(i)) * w.blocks()(i, j) * std::sqrt(w.measure(j));
    return sym_eig(b);
}

inline Embedding communicability_embedding(const StepGraphon& w, const IntervalSet& x, std::size_t k) {
    return communicability_embedding(w, communicability_spectrum(w), x, k);
}

/// ||(1_X - 1_Y)_⊥||: with K = n,
/// ||embed(X) - embed(Y)||^2 + kernel_residual^2 = d_C(X,Y)^2.
inline double kernel_residual(const StepGraphon& w, const IntervalSet& x, const IntervalSet& y) {
    return std::sqrt(detail::set_difference(w.partition(), x, y).orthogonal_sq);
}

// ---------------------------------------------------------------------------
// Neighbourhood and similarity distances

/// r_W between blocks i and j: Σ_k |A_ik - A_jk| μ_k.
inline double row_distance(const StepGraphon& w, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += std::abs(w.blocks()(i, k) - w.blocks()(j, k)) * w.measure(k);
    return s;
}

/// r_W(x,y) = ||W(x,.) - W(y,.)||_1.
inline double neighbourhood_distance(const StepGraphon& w, double x, double y) {
    return row_distance(w, w.partition().locate(x), w.partition().locate(y));
}

inline double neighbourhood_distance(const GridGraphon& w, double x, double y) {
    const std::size_t i = w.cell(x), j = w.cell(y);
    double s = 0.0;
    for (std::size_t k = 0; k < w.resolution(); ++k) s += std::abs(w.values()(i, k) - w.values()(j, k));
    return s / static_cast<double>(w.resolution());
}

inline double neighbourhood_distance(const AnyGraphon& w, double x, double y) {
    return std::visit([&](const auto& g) { return neighbourhood_distance(g, x, y); }, w);
}

/// Block-level r_W.
inline Matrix neighbourhood_matrix(const StepGraphon& w) {
    const std::size_t n = w.size();
    Matrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) r(i, j) = r(j, i) = row_distance(w, i, j);
    return r;
}

/// r_{W∘W}.
template <class G>
double similarity_distance(const G& w, double x, double y) {
    return neighbourhood_distance(comp_power(w, 2), x, y);
}

inline double similarity_distance(const AnyGraphon& w, double x, double y) {
    return std::visit([&](const auto& g) { return similarity_distance(g, x, y); }, w);
}

/// Repeatedly merges the first pair of blocks with r_W <= tol into one block
/// (measures added, values averaged by measure) until all rows are distinct.
/// The merged block takes the position of its first member.
inline StepGraphon merge_twins(const StepGraphon& w, double tol = 1e-9) {
    if (!(tol >= 0.0)) throw ValidationError("twin tolerance must be nonnegative");
    std::vector<double> mu = w.partition().measures();
    Matrix a = w.blocks();
    bool merged_any = false;
    for (;;) {
        const std::size_t n = mu.size();
        std::size_t pi = n, pj = n;
        for (std::size_t i = 0; i < n && pi == n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double r = 0.0;
                for (std::size_t k = 0; k < n; ++k) r += std::abs(a(i, k) - a(j, k)) * mu[k];
                if (r <= tol) {
                    pi = i;
                    pj = j;
                    break;
                }
            }
        if (pi == n) break;
        merged_any = true;
        const double mi = mu[pi], mj = mu[pj], m = mi + mj;
        std::vector<std::size_t> keep;
        for (std::size_t k = 0; k < n; ++k)
            if (k != pj) keep.push_back(k);
        Matrix next(n - 1, n - 1);
        auto merged_row = [&](std::size_t k) { return (mi * a(pi, k) + mj * a(pj, k)) / m; };
        for (std::size_t r = 0; r < keep.size(); ++r)
            for (std::size_t c = 0; c < keep.size(); ++c) {
                const std::size_t kr = keep[r], kc = keep[c];
                if (kr == pi && kc == pi)
                    next(r, c) = (mi * mi * a(pi, pi) + 2.0 * mi * mj * a(pi, pj) + mj * mj * a(pj, pj)) / (m * m);
                else if (kr == pi)
                    next(r, c) = merged_row(kc);
                else if (kc == pi)
                    next(r, c) = merged_row(kr);
                else
                    next(r, c) = a(kr, kc);
            }
        mu[pi] = m;
        mu.erase(mu.begin() + static_cast<std::ptrdiff_t>(pj));
        a = std::move(next);
    }
    if (!merged_any) return w;
    Partition p(mu);
    if (p.is_homogeneous(1e-15)) p = Partition::uniform(mu.size());
    return StepGraphon(std::move(p), std::move(a));
}

// ---------------------------------------------------------------------------
// Cut norm

inline constexpr std::size_t kMaxCutNormBlocks = 24;

/// sup_{S,T} |∫_{S×T} W| for a signed block kernel W on partition p.
///
/// The objective Σ W_ij μ(S∩P_i) μ(T∩P_j) is bilinear in the block masses,
/// so the supremum is attained with every block fully in or out of S and of
/// T. All 2^n choices of S are visited in Gray-code order; for each, the best
/// T takes every column with positive (or every column with negative)
/// coefficient.
inline double cut_norm(const Partition& p, const Matrix& w) {
    const std::size_t n = p.size();
    if (!w.square() || w.rows() != n) throw ValidationError("cut_norm: kernel does not match the partition");
    if (n > kMaxCutNormBlocks)
        throw ValidationError("cut_norm: exact enumeration is limited to " + std::to_string(kMaxCutNormBlocks) +
                              " blocks (got " + std::to_string(n) + "); coarsen the graphon first");
    Matrix rows(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rows(i, j) = p.measure(i) * w(i, j) * p.measure(j);

    Vector coeff(n, 0.0);
    std::uint32_t mask = 0;
    double best = 0.0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(k));
        mask ^= (std::uint32_t{1} << bit);
        const double sign = (mask >> bit) & 1u ? 1.0 : -1.0;
        double pos = 0.0, neg = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            coeff[j] += sign * rows(bit, j);
            if (coeff[j] > 0.0) pos += coeff[j]; else neg -= coeff[j];
        }
        best = std::max({best, pos, neg});
    }
    return best;
}

inline double cut_norm(const StepGraphon& w) { return cut_norm(w.partition(), w.blocks()); }
inline double cut_norm(const GridGraphon& w) { return cut_norm(w.cells(), w.values()); }

struct CutDistance {
    double value = 0.0;
    bool upper_bound = true;  ///< minimized over block permutations only
    std::vector<std::size_t> permutation;
};

/// min over block permutations σ of ||W1 - W2^σ||_□ for two step graphons
/// on the same homogeneous partition (n <= 8). An upper bound on δ_□.
inline CutDistance cut_distance_homogeneous(const StepGraphon& w1, const StepGraphon& w2) {
    const std::size_t n = w1.size();
    if (w2.size() != n) throw ValidationError("cut distance: graphons have different numbers of blocks");
    if (!w1.partition().is_homogeneous() || !w2.partition().is_homogeneous())
        throw ValidationError("cut distance: both partitions must be homogeneous");
    if (n > 8) throw ValidationError("cut distance: permutation search is limited to 8 blocks");
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    CutDistance out;
    out.value = std::numeric_limits<double>::infinity();
    Matrix diff(n, n);
    do {
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) diff(k, l) = w1.blocks()(k, l) - w2.blocks()(sigma[k], sigma[l]);
        const double v = cut_norm(w1.partition(), diff);
        if (v < out.value) {
            out.value = v;
            out.permutation = sigma;
        }
    } while (out.value > 0.0 && std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

}  // namespace graphon

#endif  // GRAPHON_METRICS_HPP
