#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "g2gauge/errors.hpp"

namespace g2gauge {

// Dense matrix over an exact field (Rational or GaussianRational).
template <class F>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = F(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    F& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const F& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw Error("matrix shape mismatch");
        Matrix out(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const F& v = at(i, k);
                if (v.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    out.at(i, j) += v * o.at(k, j);
            }
        return out;
    }

    Matrix operator+(const Matrix& o) const {
        Matrix out = *this;
        for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] += o.a_[k];
        return out;
    }

    Matrix operator-(const Matrix& o) const {
        Matrix out = *this;
        for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] -= o.a_[k];
        return out;
    }

    Matrix operator*(const F& c) const {
        Matrix out = *this;
        for (auto& v : out.a_) v *= c;
        return out;
    }

    bool is_zero() const {
        for (const auto& v : a_)
            if (!v.is_zero()) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
        return out;
    }

    // In-place reduced row echelon form; returns pivot columns.
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t row = 0;
        for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
            std::size_t sel = row;
            while (sel < rows_ && at(sel, col).is_zero()) ++sel;
            if (sel == rows_) continue;
            if (sel != row)
                for (std::size_t j = 0; j < cols_; ++j)
                    std::swap(at(sel, j), at(row, j));
            F inv = F(1) / at(row, col);
            for (std::size_t j = col; j < cols_; ++j) at(row, j) *= inv;
            for (std::size_t r = 0; r < rows_; ++r) {
                if (r == row || at(r, col).is_zero()) continue;
                F factor = at(r, col);
                for (std::size_t j = col; j < cols_; ++j)
                    at(r, j) -= factor * at(row, j);
            }
            pivots.push_back(col);
            ++row;
        }
        return pivots;
    }

    std::size_t rank() const {
        Matrix copy = *this;
        return copy.rref().size();
    }

    // Basis of the right nullspace.
    std::vector<std::vector<F>> nullspace() const {
        Matrix copy = *this;
        std::vector<std::size_t> pivots = copy.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (std::size_t c : pivots) is_pivot[c] = true;
        std::vector<std::vector<F>> basis;
        for (std::size_t free = 0; free < cols_; ++free) {
            if (is_pivot[free]) continue;
            std::vector<F> v(cols_);
            v[free] = F(1);
            for (std::size_t p = 0; p < pivots.size(); ++p)
                v[pivots[p]] = -copy.at(p, free);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    std::optional<Matrix> inverse() const {
        if (rows_ != cols_) throw Error("inverse of non-square matrix");
        Matrix aug(rows_, 2 * cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_ + i) = F(1);
        }
        if (aug.rref().size() != rows_) return std::nullopt;
        Matrix out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = aug.at(i, cols_ + j);
        return out;
    }

    // Least structure needed for A x = b with unique-solution check left to
    // the caller via rank comparisons.
    std::optional<std::vector<F>> solve(const std::vector<F>& b) const {
        if (b.size() != rows_) throw Error("solve dimension mismatch");
        Matrix aug(rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_) = b[i];
        }
        std::vector<std::size_t> pivots = aug.rref();
        for (std::size_t p : pivots)
            if (p == cols_) return std::nullopt;  // inconsistent
        std::vector<F> x(cols_);
        for (std::size_t p = 0; p < pivots.size(); ++p)
            x[pivots[p]] = aug.at(p, cols_);
        return x;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<F> a_;
};

}  // namespace g2gauge
