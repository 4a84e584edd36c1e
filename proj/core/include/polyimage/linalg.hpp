#pragma once

#include "polyimage/scalar.hpp"

#include <optional>
#include <vector>

namespace polyimage {

// Dense row-major matrix over the rationals. Sizes in this project are tiny
// (dimension at most a handful), so no attempt is made at blocking.
using Matrix = std::vector<Vec>;

Matrix identity_matrix(std::size_t n);
Matrix zero_matrix(std::size_t rows, std::size_t cols);
Matrix transpose(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);
Vec apply(const Matrix& m, const Vec& x);

struct RowEchelon {
    Matrix reduced;                   // reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots;  // pivot column of each kept row
};

RowEchelon rref(Matrix m, std::size_t cols);
std::size_t rank(const Matrix& m, std::size_t cols);

// Basis of {x : m x = 0}, one vector per free column, in column order.
std::vector<Vec> nullspace(const Matrix& m, std::size_t cols);

std::optional<Matrix> inverse(const Matrix& m);
Scalar determinant(Matrix m);

// Some solution of m x = b, if one exists.
std::optional<Vec> solve(const Matrix& m, const Vec& b, std::size_t cols);

}  // namespace polyimage
