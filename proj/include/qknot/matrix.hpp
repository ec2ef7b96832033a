#pragma once

#include <vector>

#include "qknot/qseries.hpp"
#include "qknot/upoly.hpp"

namespace qknot {

template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), d_(rows * cols) {}
    Matrix(int rows, int cols, std::vector<T> data)
        : rows_(rows), cols_(cols), d_(std::move(data)) {
        assert((int)d_.size() == rows * cols);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& at(int i, int j) { return d_[i * cols_ + j]; }
    const T& at(int i, int j) const { return d_[i * cols_ + j]; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
    }

private:
    int rows_, cols_;
    std::vector<T> d_;
};

using SeriesMatrix = Matrix<Series>;
using RatMatrix = Matrix<RatFun>;

inline SeriesMatrix mat_mul(const SeriesMatrix& a, const SeriesMatrix& b) {
    assert(a.cols() == b.rows());
    SeriesMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            Series s = a.at(i, 0) * b.at(0, j);
            for (int k = 1; k < a.cols(); ++k) s = s + a.at(i, k) * b.at(k, j);
            c.at(i, j) = s;
        }
    return c;
}

namespace detail {

/// Gauss-Jordan over the Laurent-series field with valuation-aware pivoting:
/// the pivot with the smallest valuation keeps the most precision.
/// aug has r rows and r + w columns; eliminates the left r x r block.
inline void series_gauss_jordan(std::vector<std::vector<Series>>& aug, int r) {
    for (int col = 0; col < r; ++col) {
        int best = -1;
        long best_val = 0;
        for (int i = col; i < r; ++i) {
            const Series& p = aug[i][col];
            if (p.is_zero_series()) continue;
            if (best < 0 || p.valuation() < best_val) {
                best = i;
                best_val = p.valuation();
            }
        }
        if (best < 0) throw SingularMatrix();
        std::swap(aug[col], aug[best]);
        Series inv = aug[col][col].invert();
        for (auto& x : aug[col]) x = x * inv;
        for (int i = 0; i < r; ++i) {
            if (i == col || aug[i][col].is_zero_series()) continue;
            Series f = aug[i][col];
            for (size_t j = col; j < aug[i].size(); ++j)
                aug[i][j] = aug[i][j] - f * aug[col][j];
        }
    }
}

}  // namespace detail

/// Inverse over the Laurent-series field; the result satisfies
/// M * inv = I + O(u^N) at the tightest N the operand precisions allow.
inline SeriesMatrix mat_invert_series(const SeriesMatrix& m) {
    assert(m.rows() == m.cols());
    const int r = m.rows();
    long t = m.at(0, 0).trunc();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) t = std::min(t, m.at(i, j).trunc());
    std::vector<std::vector<Series>> aug(r, std::vector<Series>(2 * r, Series::zero(t)));
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) aug[i][j] = m.at(i, j).truncated(t);
        aug[i][r + i] = Series::one(t);
    }
    detail::series_gauss_jordan(aug, r);
    SeriesMatrix inv(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) inv.at(i, j) = aug[i][r + j];
    return inv;
}

/// Exact determinant by elimination over the series field.
inline Series mat_det(const SeriesMatrix& m) {
    assert(m.rows() == m.cols());
    const int r = m.rows();
    long t = m.at(0, 0).trunc();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) t = std::min(t, m.at(i, j).trunc());
    std::vector<std::vector<Series>> a(r, std::vector<Series>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) a[i][j] = m.at(i, j).truncated(t);
    int sign = 1;
    Series det = Series::one(t);
    for (int col = 0; col < r; ++col) {
        int best = -1;
        long best_val = 0;
        for (int i = col; i < r; ++i) {
            if (a[i][col].is_zero_series()) continue;
            if (best < 0 || a[i][col].valuation() < best_val) {
                best = i;
                best_val = a[i][col].valuation();
            }
        }
        if (best < 0) return Series::zero(t);  // determinant vanishes to truncation
        if (best != col) {
            std::swap(a[col], a[best]);
            sign = -sign;
        }
        det = det * a[col][col];
        Series inv = a[col][col].invert();
        for (int i = col + 1; i < r; ++i) {
            if (a[i][col].is_zero_series()) continue;
            Series f = a[i][col] * inv;
            for (int j = col; j < r; ++j) a[i][j] = a[i][j] - f * a[col][j];
        }
    }
    if (sign < 0) det = -det;
    return det;
}

}  // namespace qknot
