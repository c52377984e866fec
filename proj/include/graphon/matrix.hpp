#ifndef GRAPHON_MATRIX_HPP
#define GRAPHON_MATRIX_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "graphon/error.hpp"

namespace graphon {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. Sizes here are small (blocks of a step
/// graphon) or moderate (grid resolutions of a few hundred cells).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> init) {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw ValidationError("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix out(n, n);
        for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
        return out;
    }

    static Matrix diagonal(std::span<const double> d) {
        Matrix out(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
        return out;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw ValidationError("matrix product: inner dimensions differ");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            auto dst = out.row(i);
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                auto src = b.row(k);
                for (std::size_t j = 0; j < b.cols_; ++j) dst[j] += aik * src[j];
            }
        }
        return out;
    }

    friend Vector operator*(const Matrix& a, std::span<const double> x) {
        if (a.cols_ != x.size()) throw ValidationError("matrix-vector product: dimension mismatch");
        Vector out(a.rows_, 0.0);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            double s = 0.0;
            auto r = a.row(i);
            for (std::size_t j = 0; j < a.cols_; ++j) s += r[j] * x[j];
            out[i] = s;
        }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

    /// Maximum absolute column sum.
    double norm1() const {
        double best = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double trace() const {
        double s = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
        return s;
    }

    bool is_symmetric(double tol) const {
        if (!square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }

    /// Replaces each off-diagonal pair by its mean.
    void symmetrize() {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j) {
                const double m = 0.5 * ((*this)(i, j) + (*this)(j, i));
                (*this)(i, j) = m;
                (*this)(j, i) = m;
            }
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw ValidationError("matrix shapes differ");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ValidationError("matrix shapes differ");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace graphon

#endif  // GRAPHON_MATRIX_HPP
