#include "polyimage/linalg.hpp"

namespace polyimage {

Matrix identity_matrix(std::size_t n) {
    Matrix m = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

Matrix zero_matrix(std::size_t rows, std::size_t cols) { return Matrix(rows, Vec(cols, Scalar(0))); }

Matrix transpose(const Matrix& m) {
    if (m.empty()) return {};
    Matrix t = zero_matrix(m[0].size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    std::size_t inner = b.size();
    std::size_t cols = inner ? b[0].size() : 0;
    Matrix c = zero_matrix(a.size(), cols);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

Vec apply(const Matrix& m, const Vec& x) {
    Vec y(m.size(), Scalar(0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (m[i][j] != 0) y[i] += m[i][j] * x[j];
    return y;
}

RowEchelon rref(Matrix m, std::size_t cols) {
    RowEchelon out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t piv = row;
        while (piv < m.size() && m[piv][col] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[row], m[piv]);
        Scalar lead = m[row][col];
        for (auto& v : m[row]) v /= lead;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) continue;
            Scalar f = m[r][col];
            for (std::size_t c = 0; c < cols; ++c) m[r][c] -= f * m[row][c];
        }
        out.pivots.push_back(col);
        ++row;
    }
    m.resize(row);
    out.reduced = std::move(m);
    return out;
}

std::size_t rank(const Matrix& m, std::size_t cols) { return rref(m, cols).pivots.size(); }

std::vector<Vec> nullspace(const Matrix& m, std::size_t cols) {
    RowEchelon e = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vec v(cols, Scalar(0));
        v[free] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Matrix> inverse(const Matrix& m) {
    std::size_t n = m.size();
    Matrix aug = zero_matrix(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    RowEchelon e = rref(aug, 2 * n);
    if (e.pivots.size() < n || e.pivots[n - 1] >= n) return std::nullopt;
    Matrix inv = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.reduced[i][n + j];
    return inv;
}

Scalar determinant(Matrix m) {
    std::size_t n = m.size();
    Scalar det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            Scalar f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

std::optional<Vec> solve(const Matrix& m, const Vec& b, std::size_t cols) {
    Matrix aug = m;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    RowEchelon e = rref(aug, cols + 1);
    Vec x(cols, Scalar(0));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == cols) return std::nullopt;  // 0 = nonzero row
        x[e.pivots[r]] = e.reduced[r][cols];
    }
    return x;
}

}  // namespace polyimage
