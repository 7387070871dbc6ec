#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace descente {

// Dense integer matrix, row-major, arbitrary precision.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<long>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    mpz_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const mpz_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const;
    bool operator==(const Matrix& o) const;
    Matrix transpose() const;
    // Rows [r0, r1) and columns [c0, c1).
    Matrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
    Matrix scaled(long s) const;
    std::string str() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<mpz_class> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
// [a b] and [a; b].
Matrix hconcat(const Matrix& a, const Matrix& b);
Matrix vconcat(const Matrix& a, const Matrix& b);

mpz_class determinant(const Matrix& a);

// U A V = D with D diagonal, d_1 | d_2 | ..., all d_i > 0 for i < rank.
struct SmithForm {
    Matrix d;
    std::vector<mpz_class> diagonal;  // the nonzero entries
    std::size_t rank = 0;
    std::optional<Matrix> u, uinv, v, vinv;
};

SmithForm smith_normal_form(const Matrix& a, bool transforms = true);

// Integer solution of A x = b, if one exists.
std::optional<Matrix> solve_integer(const Matrix& a, const Matrix& b);

}  // namespace descente
