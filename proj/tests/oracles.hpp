#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "descente/homalg.hpp"
#include "descente/simplicial.hpp"

// Independent reference computations for the homological tests.
namespace oracles {

using namespace descente;

inline Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int range) {
    std::uniform_int_distribution<int> d(-range, range);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

// Low rank: product of two random factors.
inline Matrix random_low_rank(std::mt19937& rng, std::size_t r, std::size_t c, std::size_t k) {
    return random_matrix(rng, r, k, 3) * random_matrix(rng, k, c, 3);
}

inline std::size_t rational_rank(const Matrix& a) {
    std::vector<std::vector<mpq_class>> m(a.rows(), std::vector<mpq_class>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
    std::size_t rank = 0;
    for (std::size_t j = 0; j < a.cols() && rank < a.rows(); ++j) {
        std::size_t p = rank;
        while (p < a.rows() && m[p][j] == 0) ++p;
        if (p == a.rows()) continue;
        std::swap(m[p], m[rank]);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == rank || m[i][j] == 0) continue;
            mpq_class f = m[i][j] / m[rank][j];
            for (std::size_t k = j; k < a.cols(); ++k) m[i][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

inline mpz_class gcd_all(const std::vector<mpz_class>& v) {
    mpz_class g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

inline std::vector<mpz_class> minors2(const Matrix& a) {
    std::vector<mpz_class> out;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = i + 1; k < a.rows(); ++k)
            for (std::size_t j = 0; j < a.cols(); ++j)
                for (std::size_t l = j + 1; l < a.cols(); ++l) out.push_back(a(i, j) * a(k, l) - a(i, l) * a(k, j));
    return out;
}

// Simplicial chains of a subset complex with the alternating-sign boundary.
inline ChainComplex simplicial_chains(const SubsetComplex& s, int top) {
    ChainComplex c;
    c.lo = 0;
    c.hi = top;
    std::vector<std::vector<Idx>> by_dim(top + 1);
    for (int k = 0; k <= top; ++k) by_dim[k] = s.sset().nondeg_of_dim(k);
    for (int k = 0; k <= top; ++k) c.ranks.push_back(by_dim[k].size());
    for (int k = 1; k <= top; ++k) {
        Matrix d(by_dim[k - 1].size(), by_dim[k].size());
        for (std::size_t j = 0; j < by_dim[k].size(); ++j) {
            const auto& v = s.subset_of(by_dim[k][j]);
            for (int i = 0; i <= k; ++i) {
                auto f = v;
                f.erase(f.begin() + i);
                Idx face = *s.find(f);
                auto pos = std::find(by_dim[k - 1].begin(), by_dim[k - 1].end(), face) - by_dim[k - 1].begin();
                d(pos, j) += (i % 2 == 0) ? 1 : -1;
            }
        }
        c.diffs[k] = d;
    }
    return c;
}

inline ChainComplex sphere(int n) { return simplicial_chains(boundary_shape(n + 1), n); }

// A random complex in degrees 0..3, in a scrambled basis.
inline ChainComplex random_complex(std::mt19937& rng) {
    std::uniform_int_distribution<int> rk(0, 3);
    ChainComplex c;
    c.lo = 0;
    c.hi = 3;
    // C_k = Z^a + Z^z + Z^b; d_k scales the a-part of C_k onto the b-part of C_{k-1}.
    std::vector<std::size_t> a(4), b(4), z(4);
    for (int k = 0; k < 4; ++k) {
        a[k] = k == 0 ? 0 : rk(rng);
        z[k] = rk(rng);
    }
    for (int k = 0; k < 4; ++k) b[k] = k < 3 ? a[k + 1] : 0;
    std::uniform_int_distribution<int> sc(1, 3);
    std::vector<Matrix> change;
    for (int k = 0; k < 4; ++k) {
        c.ranks.push_back(a[k] + z[k] + b[k]);
        // unimodular change of basis: upper unitriangular
        Matrix u = Matrix::identity(c.ranks[k]);
        std::uniform_int_distribution<int> e(-2, 2);
        for (std::size_t i = 0; i < c.ranks[k]; ++i)
            for (std::size_t j = i + 1; j < c.ranks[k]; ++j) u(i, j) = e(rng);
        change.push_back(u);
    }
    std::vector<Matrix> inv;
    for (int k = 0; k < 4; ++k) {
        SmithForm s = smith_normal_form(change[k]);
        inv.push_back(*s.v * *s.u);  // U A V = I gives A^{-1} = V U
    }
    for (int k = 1; k < 4; ++k) {
        Matrix d(c.ranks[k - 1], c.ranks[k]);
        for (std::size_t i = 0; i < a[k]; ++i) d(a[k - 1] + z[k - 1] + i, i) = sc(rng);
        c.diffs[k] = change[k - 1] * d * inv[k];
    }
    return c;
}

inline long euler_ranks(const ChainComplex& c) {
    long e = 0;
    for (int k = c.lo; k <= c.hi; ++k) e += (k % 2 == 0 ? 1 : -1) * static_cast<long>(c.rank(k));
    return e;
}

inline long euler_homology(const ChainComplex& c) {
    long e = 0;
    for (int k = c.lo; k <= c.hi; ++k) e += (k % 2 == 0 ? 1 : -1) * static_cast<long>(homology_at(c, k).betti);
    return e;
}

// Constant cosimplicial Z: every coface and codegeneracy the identity.
inline CosimplicialComplex constant_cosimplicial(int top) {
    ChainComplex z;
    z.lo = 0;
    z.hi = 0;
    z.ranks = {1};
    ChainMap id;
    id.maps[0] = Matrix::identity(1);
    CosimplicialComplex c;
    c.levels.assign(top + 1, z);
    c.cofaces.resize(top + 1);
    c.codegens.resize(top + 1);
    for (int p = 1; p <= top; ++p) c.cofaces[p].assign(p + 1, id);
    for (int p = 0; p < top; ++p) c.codegens[p].assign(p + 1, id);
    return c;
}

// Empty when U A V = D is a valid Smith form of a, otherwise the first defect.
inline std::string snf_defect(const Matrix& a) {
    SmithForm s = smith_normal_form(a);
    if (!s.u || !s.v) return "no transforms";
    if (!(*s.u * a * *s.v == s.d)) return "UAV != D";
    if (abs(determinant(*s.u)) != 1 || abs(determinant(*s.v)) != 1) return "transform not unimodular";
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j && s.d(i, j) != 0) return "D not diagonal";
    for (std::size_t i = 0; i < s.diagonal.size(); ++i) {
        if (s.diagonal[i] <= 0) return "nonpositive diagonal";
        if (i + 1 < s.diagonal.size() && s.diagonal[i + 1] % s.diagonal[i] != 0) return "divisibility chain broken";
    }
    if (s.rank != rational_rank(a)) return "rank differs from rational elimination";
    std::vector<mpz_class> entries;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) entries.push_back(a(i, j));
    if (s.rank >= 1 && s.diagonal[0] != abs(gcd_all(entries))) return "d1 differs from the gcd of entries";
    if (s.rank >= 2 && s.diagonal[0] * s.diagonal[1] != abs(gcd_all(minors2(a)))) return "d1 d2 differs from the gcd of minors";
    return "";
}

}  // namespace oracles
