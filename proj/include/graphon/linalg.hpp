#ifndef GRAPHON_LINALG_HPP
#define GRAPHON_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "graphon/error.hpp"
#include "graphon/matrix.hpp"

namespace graphon {

/// Eigenpairs of a symmetric matrix, eigenvalues in descending order.
/// Column k of `eigenvectors` belongs to `eigenvalues[k]`.
struct SpectralData {
    Vector eigenvalues;
    Matrix eigenvectors;

    std::size_t size() const { return eigenvalues.size(); }

    Vector eigenvector(std::size_t k) const {
        Vector v(eigenvectors.rows());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
        return v;
    }
};

/// Cyclic Jacobi rotations. Sweeps until the off-diagonal Frobenius norm
/// drops below 1e-12 ||B||_F. Each eigenvector is signed so that its
/// largest-magnitude component is positive.
inline SpectralData sym_eig(const Matrix& b) {
    if (!b.square()) throw ValidationError("sym_eig: matrix is not square");
    if (!b.all_finite()) throw ValidationError("sym_eig: non-finite entries");
    if (!b.is_symmetric(1e-9)) throw ValidationError("sym_eig: matrix is not symmetric");
    const std::size_t n = b.rows();
    Matrix a = b;
    a.symmetrize();
    Matrix v = Matrix::identity(n);
    const double scale = a.frobenius();

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() > 1e-12 * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    if (off_norm() > 1e-12 * scale) throw DomainError("sym_eig: Jacobi sweeps did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SpectralData out{Vector(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.eigenvalues[k] = a(src, src);
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(v(i, src)) > std::abs(v(arg, src))) arg = i;
        const double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = sign * v(i, src);
    }
    return out;
}

/// Matrix exponential by scaling and squaring around a Taylor core: X is
/// scaled by 2^-s so that ||X/2^s||_1 <= 1/2, the series is summed to
/// machine precision, and the result squared s times.
inline Matrix expm(const Matrix& x) {
    if (!x.square()) throw ValidationError("expm: matrix is not square");
    if (!x.all_finite()) throw ValidationError("expm: non-finite entries");
    const std::size_t n = x.rows();
    const double norm = x.norm1();
    int s = 0;
    if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    Matrix y = x * std::ldexp(1.0, -s);

    Matrix sum = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k < 64; ++k) {
        term = term * y;
        term *= 1.0 / static_cast<double>(k);
        sum += term;
        if (term.norm1() <= std::numeric_limits<double>::epsilon() * 1e-2 * sum.norm1()) break;
    }
    for (int i = 0; i < s; ++i) {
        sum = sum * sum;
        if (!sum.all_finite()) break;
    }
    if (!sum.all_finite()) {
        std::ostringstream msg;
        msg << "expm: overflow (||X||_1 = " << norm << ")";
        throw DomainError(msg.str());
    }
    return sum;
}

/// Power series f(t) = Σ α_k t^k, described by α_0 and the ratios
/// α_k / α_{k-1}. All coefficients must be nonzero.
struct TaylorFamily {
    std::string name;
    double alpha0 = 1.0;
    std::function<double(int)> ratio;
    double radius = std::numeric_limits<double>::infinity();

    double coefficient(int k) const {
        double a = alpha0;
        for (int i = 1; i <= k; ++i) a *= ratio(i);
        return a;
    }
};

/// α_k = 1/k!.
inline TaylorFamily exp_family() {
    return {"exp", 1.0, [](int k) { return 1.0 / static_cast<double>(k); },
            std::numeric_limits<double>::infinity()};
}

/// α_k = 1, i.e. f(Lt) = (I - tL)^{-1}.
inline TaylorFamily resolvent_family() {
    return {"resolvent", 1.0, [](int) { return 1.0; }, 1.0};
}

struct TransformResult {
    Matrix value;
    int order = 0;         ///< highest power of L retained
    bool converged = false;
};

/// Truncated series Σ_k α_k t^k L^k.
///
/// Terms are added at least up to power n (every walk distance in an n-node
/// graph is below n, so no entry is still identically zero after that).
/// Summation stops once three consecutive terms are, entry by entry, below
/// 1e-16 of the accumulated value, or at 200 terms. The convergence guard
/// |t| K n < radius with K = max |L_ij| bounds |(L^k)_ij| <= K^k n^{k-1}.
inline TransformResult analytic_transform(const TaylorFamily& f, const Matrix& l, double t) {
    if (!l.square()) throw ValidationError("analytic_transform: matrix is not square");
    const std::size_t n = l.rows();
    const double k_max = l.max_abs();
    const double guard = std::abs(t) * k_max * static_cast<double>(n);
    if (!(guard < f.radius)) {
        std::ostringstream msg;
        msg << "analytic_transform: |t| K n = " << guard << " is outside the convergence radius " << f.radius
            << " of family '" << f.name << "'";
        throw DomainError(msg.str());
    }

    constexpr int kMaxTerms = 200;
    constexpr double kRelTol = 1e-16;
    TransformResult out{Matrix::identity(n) * f.alpha0, 0, false};
    if (f.alpha0 == 0.0) throw ValidationError("Taylor family '" + f.name + "' has alpha_0 = 0");
    Matrix power = Matrix::identity(n);
    double coeff = f.alpha0;
    int quiet = 0;
    for (int k = 1; k < kMaxTerms; ++k) {
        const double r = f.ratio(k);
        if (r == 0.0 || !std::isfinite(r))
            throw ValidationError("Taylor family '" + f.name + "' has a zero coefficient at order " + std::to_string(k));
        coeff *= r * t;
        power = power * l;
        Matrix term = power * coeff;
        out.value += term;
        out.order = k;
        bool small = true;
        for (std::size_t e = 0; e < term.data().size() && small; ++e)
            small = std::abs(term.data()[e]) <= kRelTol * std::abs(out.value.data()[e]);
        quiet = small ? quiet + 1 : 0;
        if (quiet >= 3 && k >= static_cast<int>(n)) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace graphon

#endif  // GRAPHON_LINALG_HPP
