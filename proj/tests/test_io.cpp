#include "doctest.h"
#include "fixtures.hpp"

#include "descente/errors.hpp"
#include "descente/io.hpp"

using namespace descente;

TEST_CASE("site round trip") {
    VerdierSite s = fixtures::twocover();
    json j = to_json(s.spec());
    VerdierSite t = site_from_json(j);
    CHECK(to_json(t.spec()) == j);
    CHECK(t.cat().num_morphisms() == s.cat().num_morphisms());
    CHECK(t.closed_families(t.cat().object("X")).size() == 2);
    CHECK(validate_verdier_site(t).ok());
}

TEST_CASE("site parse errors name the field") {
    json j = to_json(fixtures::twocover().spec());
    j.erase("morphisms");
    try {
        site_from_json(j);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("morphisms") != std::string::npos);
    }
}

TEST_CASE("set presheaf round trip keeps names") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    SetPresheaf f = fixtures::st_collapse(cat);
    json j = presheaf_to_json(cat, f);
    SetPresheaf g = presheaf_from_json(cat, j);
    CHECK(g.card == f.card);
    CHECK(g.restrict == f.restrict);
    CHECK(g.name(cat.object("X"), 1) == "t");
}

TEST_CASE("identity restrictions may be omitted") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    json j = presheaf_to_json(cat, fixtures::constant_set(cat, 2));
    for (Idx o = 0; o < cat.num_objects(); ++o) j["restrictions"].erase(cat.morphism_id(cat.identity(o)));
    CHECK(presheaf_from_json(cat, j).restrict == fixtures::constant_set(cat, 2).restrict);
}

TEST_CASE("hypercover round trip") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    auto c = fixtures::twocover_cech(s, 3);
    json j = hypercover_to_json(cat, c);
    AugSimplicialCoR d = hypercover_from_json(cat, j);
    CHECK(d.base == c.base);
    CHECK(d.trunc == c.trunc);
    CHECK(d.levels == c.levels);
    CHECK(d.faces == c.faces);
    CHECK(d.degens == truncate(c, c.trunc).degens);
    CHECK(d.aug == c.aug);
    json bad = j;
    bad["faces"][1][0][0]["via"] = "U->X";
    CHECK_THROWS_AS(hypercover_from_json(cat, bad), InvalidInput);
}

TEST_CASE("matrices keep large entries exact") {
    Matrix m(1, 2);
    m(0, 0) = mpz_class("123456789012345678901234567890");
    m(0, 1) = -3;
    json j = matrix_to_json(m);
    CHECK(j[0][1].is_number());
    CHECK(j[0][0].is_string());
    CHECK(matrix_from_json(j, 1, 2) == m);
    CHECK_THROWS_AS(matrix_from_json(j, 2, 2), InvalidInput);
}

TEST_CASE("abelian presheaf and map round trip") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    AbPresheaf z = constant_ab_presheaf(cat), p = fixtures::perturbed_constant(cat);
    AbPresheaf f = fixtures::with_acyclic_summand(cat, p);
    AbPresheaf g = ab_presheaf_from_json(cat, ab_presheaf_to_json(cat, f));
    CHECK(ab_presheaf_to_json(cat, g) == ab_presheaf_to_json(cat, f));
    CHECK(validate_ab_presheaf(cat, g).ok());
    AbPresheaf sum = direct_sum(cat, z, p);
    AbPresheafMap pr = projection_second(cat, z, p);
    AbPresheafMap q = ab_map_from_json(cat, ab_map_to_json(cat, pr), sum, p);
    CHECK(validate_ab_map(cat, sum, p, q).ok());
    CHECK(ab_map_to_json(cat, q) == ab_map_to_json(cat, pr));
}

TEST_CASE("chain complex round trip") {
    ChainComplex c;
    c.lo = -1;
    c.hi = 1;
    c.ranks = {1, 2, 1};
    c.diffs[0] = Matrix::from_rows({{1, -1}});
    c.diffs[1] = Matrix::from_rows({{1}, {1}});
    ChainComplex d = chain_complex_from_json(chain_complex_to_json(c));
    CHECK(d.lo == c.lo);
    CHECK(d.ranks == c.ranks);
    CHECK(d.diff(0) == c.diff(0));
    CHECK(d.diff(1) == c.diff(1));
}

TEST_CASE("descent report serializes its verdict") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    DescentReport r = check_descent(s, constant_ab_presheaf(cat), fixtures::twocover_cech(s, 3));
    json j = to_json(r);
    CHECK(j["verdict"] == "pass");
    CHECK(j["strategy"] == "collapse");
    CHECK(j["window"].size() == 2);
}

TEST_CASE("counterexample manifest") {
    CounterexampleBundle b = build_counterexample(4, 2);
    json m = counterexample_manifest(b);
    CHECK(m["depth"] == 4);
    CHECK(m["trunc"] == 2);
    CHECK(m["s_counts"][0] == 2);
    CHECK(m["s_counts"][1] == 6);
    // U_0 = (0, 2/3), V_0 = (1/3, 1), X_1 = U_0 ∩ V_0.
    CHECK(b.endpoints[b.x(1)].first == mpq_class(1, 3));
    CHECK(b.endpoints[b.x(1)].second == mpq_class(2, 3));
    CHECK(b.endpoints[b.u(0)].second == mpq_class(2, 3));
    CHECK(b.endpoints[b.v(0)].first == mpq_class(1, 3));
}
