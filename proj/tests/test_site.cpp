#include <set>

#include "doctest.h"
#include "fixtures.hpp"

#include "descente/errors.hpp"

using namespace descente;

TEST_CASE("poset closure adds identities and composites") {
    FiniteCategory c = make_poset({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    CHECK(validate_category(c).ok());
    CHECK(c.num_objects() == 3);
    // three identities and a->b, b->c, a->c
    CHECK(c.num_morphisms() == 6);
    Idx ab = c.morphism("a->b"), bc = c.morphism("b->c");
    CHECK(c.compose(bc, ab) == c.morphism("a->c"));
    CHECK(c.hom(c.object("c"), c.object("a")).empty());
    CHECK_THROWS_AS(make_poset({"a", "b"}, {{"a", "b"}, {"b", "a"}}), InvalidInput);
}

TEST_CASE("category validation reports a missing composite") {
    CategorySpec s;
    s.objects = {"a", "b", "c"};
    s.morphisms = {{"ia", "a", "a"}, {"ib", "b", "b"}, {"ic", "c", "c"},
                   {"f", "a", "b"}, {"g", "b", "c"}, {"h", "a", "c"}};
    s.identities = {{"a", "ia"}, {"b", "ib"}, {"c", "ic"}};
    // g o f is missing
    CHECK_FALSE(validate_category(FiniteCategory(s)).ok());
    s.composition.push_back({"g", "f", "h"});
    CHECK(validate_category(FiniteCategory(s)).ok());
    s.composition.push_back({"g", "f", "g"});
    CHECK_FALSE(validate_category(FiniteCategory(s)).ok());
}

TEST_CASE("TwoCover site is valid") {
    VerdierSite s = fixtures::twocover();
    CHECK(validate_verdier_site(s).ok());
    const auto& cat = s.cat();
    CHECK(s.is_basal(cat.morphism("U->X")));
    CHECK_FALSE(s.is_basal(cat.morphism("W->X")));
    // {id_X} and {U, V}
    CHECK(s.closed_families(cat.object("X")).size() == 2);
}

TEST_CASE("meet squares agree with intersections of point sets") {
    // Oracle: X = {1,2,3}, U = {1,2}, V = {2,3}, W = {2}.
    std::map<std::string, std::set<int>> pts{{"X", {1, 2, 3}}, {"U", {1, 2}}, {"V", {2, 3}}, {"W", {2}}};
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    for (Idx f = 0; f < cat.num_morphisms(); ++f)
        for (Idx g : cat.into(cat.dst(f))) {
            auto sq = s.pullback(f, g);
            REQUIRE(sq.has_value());
            std::set<int> meet;
            const auto& a = pts[cat.object_id(cat.src(f))];
            const auto& b = pts[cat.object_id(cat.src(g))];
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(meet, meet.begin()));
            CHECK(pts[cat.object_id(sq->apex)] == meet);
        }
}

TEST_CASE("closed families on a chain compose covers") {
    VerdierSite s = fixtures::chain();
    CHECK(validate_verdier_site(s).ok());
    const auto& cat = s.cat();
    // Hand count: {id_X}, {U->X}, {A->X}.
    const auto& fx = s.closed_families(cat.object("X"));
    REQUIRE(fx.size() == 3);
    std::set<std::vector<Idx>> got;
    for (const auto& f : fx) got.insert(f.members);
    CHECK(got.count({cat.morphism("A->X")}) == 1);
    CHECK(got.count({cat.morphism("U->X")}) == 1);
    CHECK(got.count({cat.identity(cat.object("X"))}) == 1);
}

TEST_CASE("sieves and covering witnesses") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    Idx x = cat.object("X");
    Sieve r = generate_sieve(s, {cat.morphism("U->X"), cat.morphism("V->X")});
    // U->X, V->X, W->X
    CHECK(r.members.size() == 3);
    CHECK(is_covering_sieve(s, r));
    CHECK(is_covering_sieve(s, maximal_sieve(s, x)));
    CHECK_FALSE(is_covering_sieve(s, generate_sieve(s, {cat.morphism("U->X")})));
    CHECK_FALSE(is_covering_sieve(s, generate_sieve(s, {cat.morphism("W->X")})));
}

TEST_CASE("factor through a designated pullback") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    PullbackSquare sq = s.require_pullback(cat.morphism("U->X"), cat.morphism("V->X"));
    CHECK(sq.apex == cat.object("W"));
    auto u = s.factor(sq, cat.morphism("W->U"), cat.morphism("W->V"));
    REQUIRE(u.has_value());
    CHECK(*u == cat.identity(cat.object("W")));
}

TEST_CASE("site rejects families with foreign targets") {
    FiniteCategory cat = make_poset({"X", "U"}, {{"U", "X"}});
    CHECK_THROWS_AS(VerdierSite(cat, {CoveringFamily{cat.object("U"), {cat.morphism("U->X")}}}, {}), InvalidInput);
}

TEST_CASE("missing pullbacks are reported") {
    FiniteCategory cat = make_poset({"X", "U", "V", "W"}, {{"W", "U"}, {"W", "V"}, {"U", "X"}, {"V", "X"}});
    CoveringFamily f = fixtures::family(fixtures::twocover(), "X", {"U->X", "V->X"});
    VerdierSite s(cat, {f}, {});
    CHECK_FALSE(validate_verdier_site(s).ok());
}
