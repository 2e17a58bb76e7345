#pragma once

#include <cassert>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pmw/field.hpp"

namespace pmw {

// Dense row-major matrix over the active prime field.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<Fp> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Fp& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Fp& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Fp(1);
        return m;
    }
    static Mat zero(int r, int c) { return Mat(r, c); }

    bool is_zero() const {
        for (const Fp& x : a) if (!x.is_zero()) return false;
        return true;
    }

    friend bool operator==(const Mat& x, const Mat& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
    friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }
};

inline Mat transpose(const Mat& m) {
    Mat t(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
    return t;
}

inline Mat mul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch in mul");
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            Fp xv = x.at(i, k);
            if (xv.is_zero()) continue;
            for (int j = 0; j < y.cols; ++j) z.at(i, j) += xv * y.at(k, j);
        }
    return z;
}

inline std::vector<Fp> mul_vec(const Mat& m, const std::vector<Fp>& v) {
    if (static_cast<int>(v.size()) != m.cols) throw std::invalid_argument("shape mismatch in mul_vec");
    std::vector<Fp> r(m.rows);
    for (int i = 0; i < m.rows; ++i) {
        Fp s(0);
        for (int j = 0; j < m.cols; ++j) s += m.at(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

// Columns of x followed by columns of y.
inline Mat hcat(const Mat& x, const Mat& y) {
    if (x.rows != y.rows) throw std::invalid_argument("shape mismatch in hcat");
    Mat z(x.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) z.at(i, j) = x.at(i, j);
        for (int j = 0; j < y.cols; ++j) z.at(i, x.cols + j) = y.at(i, j);
    }
    return z;
}

// In-place reduction to row echelon form; returns pivot column indices.
inline std::vector<int> row_echelon(Mat& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int sel = -1;
        for (int i = r; i < m.rows; ++i)
            if (!m.at(i, c).is_zero()) { sel = i; break; }
        if (sel < 0) continue;
        if (sel != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(r, j));
        Fp inv = m.at(r, c).inv();
        for (int j = c; j < m.cols; ++j) m.at(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r) continue;
            Fp f = m.at(i, c);
            if (f.is_zero()) continue;
            for (int j = c; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline int rank(Mat m) { return static_cast<int>(row_echelon(m).size()); }

// Basis of the null space, one column per basis vector; m * result == 0.
inline Mat kernel_basis(const Mat& m) {
    Mat e = m;
    std::vector<int> piv = row_echelon(e);
    std::vector<int> pivot_row(m.cols, -1);
    for (size_t r = 0; r < piv.size(); ++r) pivot_row[piv[r]] = static_cast<int>(r);
    int nfree = m.cols - static_cast<int>(piv.size());
    Mat k(m.cols, nfree);
    int idx = 0;
    for (int c = 0; c < m.cols; ++c) {
        if (pivot_row[c] >= 0) continue;
        k.at(c, idx) = Fp(1);
        for (int pc = 0; pc < m.cols; ++pc)
            if (pivot_row[pc] >= 0) k.at(pc, idx) = -e.at(pivot_row[pc], c);
        ++idx;
    }
    return k;
}

// Solves m*x = b; nullopt when inconsistent.
inline std::optional<std::vector<Fp>> solve(const Mat& m, const std::vector<Fp>& b) {
    if (static_cast<int>(b.size()) != m.rows) throw std::invalid_argument("rhs length mismatch in solve");
    Mat aug(m.rows, m.cols + 1);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[i];
    }
    std::vector<int> piv = row_echelon(aug);
    for (int c : piv)
        if (c == m.cols) return std::nullopt;
    std::vector<Fp> x(m.cols);
    for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug.at(static_cast<int>(r), m.cols);
    return x;
}

// Solves m*X = B columnwise; nullopt when any column is inconsistent.
inline std::optional<Mat> solve_mat(const Mat& m, const Mat& b) {
    if (m.rows != b.rows) throw std::invalid_argument("shape mismatch in solve_mat");
    Mat x(m.cols, b.cols);
    for (int j = 0; j < b.cols; ++j) {
        std::vector<Fp> col(b.rows);
        for (int i = 0; i < b.rows; ++i) col[i] = b.at(i, j);
        auto s = solve(m, col);
        if (!s) return std::nullopt;
        for (int i = 0; i < m.cols; ++i) x.at(i, j) = (*s)[i];
    }
    return x;
}

inline Mat invert(const Mat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("invert needs a square matrix");
    auto inv = solve_mat(m, Mat::identity(m.rows));
    if (!inv) throw std::domain_error("matrix is singular");
    return *inv;
}

}  // namespace pmw
