#include "doctest.h"
#include "fixtures.hpp"

#include "descente/errors.hpp"

using namespace descente;

namespace {

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Basal fixtures used for the matching-object cross-check.
std::vector<std::pair<VerdierSite, AugSimplicialCoR>> basal_fixtures() {
    std::vector<std::pair<VerdierSite, AugSimplicialCoR>> out;
    VerdierSite t = fixtures::twocover();
    out.emplace_back(t, fixtures::twocover_cech(t, 3));
    out.emplace_back(t, trivial_hypercover(t.cat(), t.cat().object("X"), 3));
    VerdierSite c = fixtures::chain();
    for (const auto& f : c.closed_families(c.cat().object("X"))) out.emplace_back(c, cech_complex(c, f, 3));
    CounterexampleBundle b = build_counterexample(5, 3);
    out.emplace_back(b.site, b.omega);
    return out;
}

}  // namespace

TEST_CASE("monotone surjections are counted by binomials") {
    for (int k = 0; k <= 5; ++k)
        for (int m = 0; m <= k; ++m) CHECK(static_cast<long>(surjections(k, m).size()) == binomial(k, m));
    CHECK(surjections(2, 1) == std::vector<std::vector<int>>{{0, 0, 1}, {0, 1, 1}});
}

TEST_CASE("simplex shapes have the expected face counts") {
    for (int n = 0; n <= 4; ++n) {
        SubsetComplex s = simplex_shape(n);
        SubsetComplex b = boundary_shape(n);
        CHECK(s.sset().validate(n + 1).ok());
        for (int k = 0; k <= n; ++k) {
            CHECK(static_cast<long>(s.sset().nondeg_of_dim(k).size()) == binomial(n + 1, k + 1));
            CHECK(static_cast<long>(b.sset().nondeg_of_dim(k).size()) == (k < n ? binomial(n + 1, k + 1) : 0));
        }
    }
    SubsetComplex sk = skeleton_shape(1, 3);
    CHECK(sk.sset().nondeg_of_dim(1).size() == 6);
    CHECK(sk.sset().nondeg_of_dim(2).empty());
}

TEST_CASE("simplicial identities hold on all simplices") {
    std::vector<FiniteSimplicialSet> sets{simplex_shape(3).sset(), boundary_shape(3).sset(), doubled_simplex(2)};
    for (const auto& x : sets) {
        for (int k = 0; k <= 3; ++k)
            for (const auto& s : x.simplices(k)) {
                for (int i = 0; i <= k; ++i) {
                    // d_i s_i = d_{i+1} s_i = id
                    CHECK(x.face(x.degen(s, i), i) == s);
                    CHECK(x.face(x.degen(s, i), i + 1) == s);
                }
                if (k < 2) continue;
                for (int j = 1; j <= k; ++j)
                    for (int i = 0; i < j; ++i) CHECK(x.face(x.face(s, j), i) == x.face(x.face(s, i), j - 1));
            }
    }
}

TEST_CASE("doubled simplex has two top cells sharing a boundary") {
    FiniteSimplicialSet d = doubled_simplex(2);
    CHECK(d.nondeg_of_dim(2).size() == 2);
    CHECK(d.nondeg_of_dim(1).size() == 3);
    auto tops = d.nondeg_of_dim(2);
    CHECK(d.nondeg_faces(tops[0]) == d.nondeg_faces(tops[1]));
    CHECK(d.validate(3).ok());
}

TEST_CASE("trivial hypercover realizes to constant representables") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    auto t = trivial_hypercover(cat, cat.object("X"), 2);
    CHECK(validate_simplicial(cat, t).ok());
    auto r = realize_simplicial(cat, t);
    for (int n = 0; n <= 2; ++n)
        for (Idx y = 0; y < cat.num_objects(); ++y) CHECK(r.levels[n].card[y] == cat.hom(y, cat.object("X")).size());
}

TEST_CASE("Cech complexes are split with nondegenerate tuples") {
    VerdierSite s = fixtures::twocover();
    auto c = fixtures::twocover_cech(s, 3);
    SplitReport r = is_split(s.cat(), c);
    CHECK(r.split);
    // Nondegenerate (n+1)-tuples over two letters: no two adjacent repeats.
    for (int n = 0; n <= 3; ++n) CHECK(r.nondegenerate[n].size() == 2);
    auto k = indexing_simplicial_set(c);
    CHECK(validate_indexing(k).ok());
}

TEST_CASE("matching objects agree with their CoR decompositions") {
    for (const auto& [site, u] : basal_fixtures()) {
        const auto& cat = site.cat();
        RealizedSimplicial ru(cat, u);
        for (int n = 0; n <= std::min(3, u.trunc); ++n) {
            CAPTURE(n);
            MatchingObject mo = matching_object(cat, ru, n);
            CoRDecomposition dec = matching_object_cor(site, u, n);
            PresheafMap cmp = realization_comparison(cat, boundary_shape(n).sset(), dec, ru, mo.m);
            SetPresheaf rd = realize_cor(cat, dec.cor);
            CHECK(is_natural(cat, rd, mo.m.presheaf, cmp));
            CHECK(is_pointwise_bijective(rd, mo.m.presheaf, cmp));
            // The matching map factors through the decomposition.
            REQUIRE(mo.map.has_value());
            CoRMap mm = matching_map_cor(site, u, n, dec);
            PresheafMap via = compose(cmp, realize_map(cat, u.levels[n], dec.cor, mm));
            CHECK(via.at == mo.map->at);
        }
    }
}

TEST_CASE("matching object of the Cech complex above level 1 is the level itself") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    auto c = fixtures::twocover_cech(s, 3);
    for (int n = 2; n <= 3; ++n) {
        auto mo = matching_object(cat, c, n);
        auto rl = realize_cor(cat, c.levels[n]);
        CHECK(is_pointwise_bijective(rl, mo.m.presheaf, *mo.map));
    }
    // M_1 is U_0 x_X U_0: all four ordered pairs over W.
    auto m1 = matching_object(cat, c, 1);
    CHECK(m1.m.presheaf.card[cat.object("W")] == 4);
}

TEST_CASE("coskeleton of a Cech complex reproduces it") {
    VerdierSite s = fixtures::twocover();
    auto c = fixtures::twocover_cech(s, 3);
    auto k = coskeleton_cor(s, truncate(c, 0), 0, 3);
    CHECK(validate_simplicial(s.cat(), k).ok());
    CHECK(is_isomorphic(s, k, c));
}

TEST_CASE("degenerations relabel inside S_n") {
    CounterexampleBundle b = build_counterexample(4, 2);
    const auto& cat = b.site.cat();
    CHECK(validate_simplicial(cat, b.omega).ok());
    for (int n = 0; n <= 2; ++n)
        for (Idx j = 0; j < b.omega.levels[n].size(); ++j)
            CHECK(b.omega.levels[n].summands[j] == b.labels[n][j].back());
}

TEST_CASE("apply_surjection on the identity is the identity") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    auto c = fixtures::twocover_cech(s, 2);
    for (int m = 0; m <= 2; ++m)
        for (Idx j = 0; j < c.levels[m].size(); ++j) {
            auto [jj, via] = apply_surjection(cat, c, identity_surjection(m), j);
            CHECK(jj == j);
            CHECK(cat.is_identity(via));
        }
}
