#include "descente/matrix.hpp"

#include <sstream>
#include <utility>

#include "descente/errors.hpp"

namespace descente {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<long>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw InvalidInput("ragged matrix rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

bool Matrix::is_zero() const {
    for (const auto& x : data_)
        if (x != 0) return false;
    return true;
}

bool Matrix::operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
    Matrix b(r1 - r0, c1 - c0);
    for (std::size_t i = r0; i < r1; ++i)
        for (std::size_t j = c0; j < c1; ++j) b(i - r0, j - c0) = (*this)(i, j);
    return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::scaled(long s) const {
    Matrix m = *this;
    for (auto& x : m.data_) x *= s;
    return m;
}

std::string Matrix::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
        os << "]";
    }
    os << "]";
    return os.str();
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InvalidInput("matrix shape mismatch in product");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const mpz_class& x = a(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (b(k, j) != 0) c(i, j) += x * b(k, j);
        }
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("matrix shape mismatch in sum");
    Matrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + b.scaled(-1); }

Matrix hconcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw InvalidInput("matrix shape mismatch in concatenation");
    Matrix c(a.rows(), a.cols() + b.cols());
    c.set_block(0, 0, a);
    c.set_block(0, a.cols(), b);
    return c;
}

Matrix vconcat(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw InvalidInput("matrix shape mismatch in concatenation");
    Matrix c(a.rows() + b.rows(), a.cols());
    c.set_block(0, 0, a);
    c.set_block(a.rows(), 0, b);
    return c;
}

mpz_class determinant(const Matrix& a) {
    // Bareiss fraction-free elimination.
    if (a.rows() != a.cols()) throw InvalidInput("determinant of a non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    Matrix m = a;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && m(r, k) == 0) ++r;
            if (r == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(r, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

namespace {

struct Reducer {
    Matrix a;
    bool track;
    Matrix u, uinv, v, vinv;

    // row i -= q * row t
    void row_sub(std::size_t i, std::size_t t, const mpz_class& q) {
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(t, j) != 0) a(i, j) -= q * a(t, j);
        if (!track) return;
        for (std::size_t j = 0; j < u.cols(); ++j)
            if (u(t, j) != 0) u(i, j) -= q * u(t, j);
        for (std::size_t r = 0; r < uinv.rows(); ++r)
            if (uinv(r, i) != 0) uinv(r, t) += q * uinv(r, i);
    }
    // col j -= q * col t
    void col_sub(std::size_t j, std::size_t t, const mpz_class& q) {
        for (std::size_t i = 0; i < a.rows(); ++i)
            if (a(i, t) != 0) a(i, j) -= q * a(i, t);
        if (!track) return;
        for (std::size_t i = 0; i < v.rows(); ++i)
            if (v(i, t) != 0) v(i, j) -= q * v(i, t);
        for (std::size_t c = 0; c < vinv.cols(); ++c)
            if (vinv(j, c) != 0) vinv(t, c) += q * vinv(j, c);
    }
    void row_swap(std::size_t i, std::size_t t) {
        if (i == t) return;
        for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(i, j), a(t, j));
        if (!track) return;
        for (std::size_t j = 0; j < u.cols(); ++j) std::swap(u(i, j), u(t, j));
        for (std::size_t r = 0; r < uinv.rows(); ++r) std::swap(uinv(r, i), uinv(r, t));
    }
    void col_swap(std::size_t j, std::size_t t) {
        if (j == t) return;
        for (std::size_t i = 0; i < a.rows(); ++i) std::swap(a(i, j), a(i, t));
        if (!track) return;
        for (std::size_t i = 0; i < v.rows(); ++i) std::swap(v(i, j), v(i, t));
        for (std::size_t c = 0; c < vinv.cols(); ++c) std::swap(vinv(j, c), vinv(t, c));
    }
    void row_negate(std::size_t i) {
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = -a(i, j);
        if (!track) return;
        for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) = -u(i, j);
        for (std::size_t r = 0; r < uinv.rows(); ++r) uinv(r, i) = -uinv(r, i);
    }
};

void nearest_quotient(mpz_class& q, const mpz_class& x, const mpz_class& p) {
    mpz_class r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
    if (2 * abs(r) > abs(p)) ++q;
}

}  // namespace

SmithForm smith_normal_form(const Matrix& input, bool transforms) {
    const std::size_t m = input.rows(), n = input.cols();
    Reducer r{input, transforms, {}, {}, {}, {}};
    if (transforms) {
        r.u = r.uinv = Matrix::identity(m);
        r.v = r.vinv = Matrix::identity(n);
    }
    Matrix& a = r.a;
    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        for (;;) {
            // Pivot: smallest nonzero absolute value in the trailing block, re-chosen every pass.
            bool found = false;
            std::size_t pi = t, pj = t;
            mpz_class best;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (a(i, j) != 0 && (!found || abs(a(i, j)) < best)) {
                        found = true;
                        best = abs(a(i, j));
                        pi = i;
                        pj = j;
                    }
            if (!found) goto done;
            r.row_swap(t, pi);
            r.col_swap(t, pj);
            // Nearest-integer quotients keep remainders within half the pivot.
            bool clear = true;
            mpz_class q;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a(i, t) == 0) continue;
                nearest_quotient(q, a(i, t), a(t, t));
                r.row_sub(i, t, q);
                if (a(i, t) != 0) clear = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a(t, j) == 0) continue;
                nearest_quotient(q, a(t, j), a(t, t));
                r.col_sub(j, t, q);
                if (a(t, j) != 0) clear = false;
            }
            if (!clear) continue;
            // Divisibility: fold in a row holding an entry the pivot does not divide.
            bool fixed = false;
            for (std::size_t i = t + 1; i < m && !fixed; ++i)
                for (std::size_t j = t + 1; j < n && !fixed; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        r.row_sub(t, i, -1);
                        fixed = true;
                    }
            if (!fixed) break;
        }
        if (a(t, t) < 0) r.row_negate(t);
    }
done:
    SmithForm s;
    s.rank = t;
    for (std::size_t i = 0; i < t; ++i) s.diagonal.push_back(a(i, i));
    s.d = std::move(r.a);
    if (transforms) {
        s.u = std::move(r.u);
        s.uinv = std::move(r.uinv);
        s.v = std::move(r.v);
        s.vinv = std::move(r.vinv);
    }
    return s;
}

std::optional<Matrix> solve_integer(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw InvalidInput("matrix shape mismatch in solve");
    SmithForm s = smith_normal_form(a, true);
    Matrix ub = *s.u * b;
    Matrix y(a.cols(), b.cols());
    for (std::size_t i = 0; i < ub.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            if (i < s.rank) {
                if (ub(i, j) % s.diagonal[i] != 0) return std::nullopt;
                y(i, j) = ub(i, j) / s.diagonal[i];
            } else if (ub(i, j) != 0) {
                return std::nullopt;
            }
        }
    return *s.v * y;
}

}  // namespace descente
