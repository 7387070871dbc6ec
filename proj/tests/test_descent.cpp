#include <set>

#include "doctest.h"
#include "fixtures.hpp"

#include "descente/errors.hpp"

using namespace descente;

namespace {

DescentOptions with_strategy(DescentStrategy s) {
    DescentOptions o;
    o.strategy = s;
    return o;
}

const AbelianGroup Z{1, {}};

}  // namespace

TEST_CASE("constant Z satisfies descent along the Cech complex") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    AbPresheaf f = constant_ab_presheaf(cat);
    auto c = fixtures::twocover_cech(s, 4);
    for (auto st : {DescentStrategy::Tot, DescentStrategy::Collapse, DescentStrategy::Auto}) {
        DescentReport r = check_descent(s, f, c, with_strategy(st));
        CHECK(r.pass);
        CHECK(r.window_lo == -1);
        for (const auto& d : r.degrees) {
            CHECK(d.iso);
            if (d.k == 0) CHECK(d.target == Z);
        }
    }
    CHECK(check_descent(s, f, c).strategy == "collapse");
}

TEST_CASE("Cech descent fails for the perturbed constant presheaf") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    AbPresheaf f = fixtures::perturbed_constant(cat);
    REQUIRE(validate_ab_presheaf(cat, f).ok());
    CechDescentReport r = check_cech_descent(s, f, cat.object("X"));
    CHECK_FALSE(r.pass);
    REQUIRE(r.first_failure.has_value());
    CHECK(r.families[*r.first_failure].members ==
          fixtures::family(s, "X", {"U->X", "V->X"}).members);
    // H^0 is still Z: the failure is the extra class in degree -1.
    const DescentReport& d = r.reports[*r.first_failure];
    for (const auto& g : d.degrees) {
        if (g.k == 0) CHECK(g.iso);
        if (g.k == -1) {
            CHECK_FALSE(g.iso);
            CHECK(g.target == Z);
        }
    }
    // Every other object is covered only by isomorphisms.
    for (Idx y = 0; y < cat.num_objects(); ++y)
        if (y != cat.object("X")) CHECK(check_cech_descent(s, f, y).pass);
}

TEST_CASE("descent verdicts are invariant under adding an acyclic summand") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    auto c = fixtures::twocover_cech(s, 5);
    for (const auto& f : {constant_ab_presheaf(cat), fixtures::perturbed_constant(cat),
                          fixtures::free_representable(cat, cat.object("U"))}) {
        AbPresheaf g = fixtures::with_acyclic_summand(cat, f);
        DescentReport a = check_descent(s, f, c, with_strategy(DescentStrategy::Tot));
        DescentReport b = check_descent(s, g, c, with_strategy(DescentStrategy::Tot));
        CHECK(a.pass == b.pass);
        // The summand has homology nowhere, so collapse still applies under auto.
        CHECK(check_descent(s, g, c).pass == a.pass);
    }
}

TEST_CASE("tot and collapse agree where collapse applies") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    std::vector<AugSimplicialCoR> us{fixtures::twocover_cech(s, 4), trivial_hypercover(cat, cat.object("X"), 4),
                                     fixtures::twocover_wuv(s, 4)};
    std::vector<AbPresheaf> fs{constant_ab_presheaf(cat), fixtures::perturbed_constant(cat),
                               fixtures::free_representable(cat, cat.object("U")),
                               fixtures::free_representable(cat, cat.object("X")), zero_ab_presheaf(cat)};
    for (const auto& u : us)
        for (const auto& f : fs) {
            DescentReport t = check_descent(s, f, u, with_strategy(DescentStrategy::Tot));
            DescentReport c = check_descent(s, f, u, with_strategy(DescentStrategy::Collapse));
            CHECK(t.pass == c.pass);
            for (const auto& dt : t.degrees)
                for (const auto& dc : c.degrees)
                    if (dt.k == dc.k) CHECK(dt.target == dc.target);
        }
}

TEST_CASE("descent rejects non-hypercovers and bad windows") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    AbPresheaf f = constant_ab_presheaf(cat);
    auto w = cech_complex(s, CoR{{cat.object("W")}}, CoRMap{{0}, {cat.morphism("W->X")}}, cat.object("X"), 3);
    CHECK_THROWS_AS(check_descent(s, f, w), InvalidInput);
    DescentOptions o;
    o.window = std::make_pair(1, 0);
    CHECK_THROWS_AS(check_descent(s, f, fixtures::twocover_cech(s, 3), o), InvalidInput);
    // Collapse refuses a column with homology in degree 1.
    AbPresheaf bad = f;
    bad.values[cat.object("U")].lo = 0;
    bad.values[cat.object("U")].hi = 1;
    bad.values[cat.object("U")].ranks = {1, 1};
    for (Idx m = 0; m < cat.num_morphisms(); ++m)
        if (cat.src(m) == cat.object("U") && cat.dst(m) == cat.object("U")) bad.restrict[m].maps[1] = Matrix::identity(1);
    REQUIRE(validate_ab_presheaf(cat, bad).ok());
    CHECK_THROWS_AS(check_descent(s, bad, fixtures::twocover_cech(s, 3), with_strategy(DescentStrategy::Collapse)),
                    InvalidInput);
    CHECK(parse_strategy("tot") == DescentStrategy::Tot);
    CHECK_THROWS_AS(parse_strategy("holim"), InvalidInput);
}

TEST_CASE("relative descent") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    auto c = fixtures::twocover_cech(s, 4);
    AbPresheaf zero = zero_ab_presheaf(cat);
    AbPresheafMap to_zero;
    to_zero.at.resize(cat.num_objects());
    for (const auto& f : {constant_ab_presheaf(cat), fixtures::perturbed_constant(cat)}) {
        DescentOptions o = with_strategy(DescentStrategy::Tot);
        DescentReport a = check_descent(s, f, c, o);
        DescentReport r = check_relative_descent(s, f, zero, to_zero, c, o);
        CHECK(a.pass == r.pass);
        // Over itself along the identity every level is G(X) again.
        AbPresheafMap id;
        for (Idx y = 0; y < cat.num_objects(); ++y) id.at.push_back(identity_chain_map(f.values[y]));
        CHECK(check_relative_descent(s, f, f, id, c, o).pass);
    }
    AbPresheaf z = constant_ab_presheaf(cat), p = fixtures::perturbed_constant(cat);
    AbPresheaf sum = direct_sum(cat, z, p);
    CHECK(check_relative_descent(s, sum, p, projection_second(cat, z, p), c, with_strategy(DescentStrategy::Tot)).pass);
}

TEST_CASE("relative descent requires an objectwise fibration") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    AbPresheaf e = fixtures::with_acyclic_summand(cat, zero_ab_presheaf(cat));
    AbPresheafMap zero;
    zero.at.resize(cat.num_objects());
    CHECK_THROWS_AS(check_relative_descent(s, zero_ab_presheaf(cat), e, zero, fixtures::twocover_cech(s, 4)),
                    InvalidInput);
}

TEST_CASE("bounded enumeration on TwoCover") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    Idx x = cat.object("X");
    BoundedEnumeration e0 = enumerate_bounded_hypercovers(s, x, 0, 4);
    CHECK_FALSE(e0.truncated);
    // Level 0 is one of the two closed families on X.
    CHECK(e0.items.size() == 2);
    BoundedEnumeration e1 = enumerate_bounded_hypercovers(s, x, 1, 6);
    CHECK(e1.items.size() == 2);
    for (const auto& u : e1.items) {
        CHECK(verify_hypercover(s, u, 1).pass);
        CHECK(is_split(cat, u).split);
    }
    for (std::size_t i = 0; i < e1.items.size(); ++i)
        for (std::size_t j = i + 1; j < e1.items.size(); ++j) CHECK_FALSE(is_isomorphic(s, e1.items[i], e1.items[j]));
}

TEST_CASE("bounded hypercovers inherit Cech descent") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    std::vector<AbPresheaf> fs{constant_ab_presheaf(cat), fixtures::perturbed_constant(cat),
                               fixtures::free_representable(cat, cat.object("X")), zero_ab_presheaf(cat)};
    for (const auto& f : fs) {
        bool cech = true;
        for (Idx y = 0; y < cat.num_objects(); ++y) cech = cech && check_cech_descent(s, f, y).pass;
        if (!cech) continue;
        for (int h = 0; h <= 1; ++h)
            for (const auto& u : enumerate_bounded_hypercovers(s, cat.object("X"), h, 6).items) {
                DescentOptions o;
                o.height = h;
                CHECK(check_descent(s, f, u, o).pass);
            }
    }
}

TEST_CASE("counterexample at depth 5") {
    CounterexampleBundle b = build_counterexample(5, 3);
    CHECK(validate_verdier_site(b.site).ok());
    REQUIRE(b.s_counts.size() >= 2);
    CHECK(b.s_counts[0] == 2);
    CHECK(b.s_counts[1] == 6);
    std::multiset<Idx> l0(b.omega.levels[0].summands.begin(), b.omega.levels[0].summands.end());
    CHECK(l0 == std::multiset<Idx>{b.u(0), b.v(0)});
    std::multiset<Idx> l1(b.omega.levels[1].summands.begin(), b.omega.levels[1].summands.end());
    CHECK(l1 == std::multiset<Idx>{b.u(0), b.u(1), b.v(1), b.u(1), b.v(1), b.v(0)});
    CounterexampleCheck k = check_counterexample(b);
    CHECK(k.cech_pass);
    CHECK(k.cech.size() == 4);
    CHECK(k.omega.pass);
    CHECK(k.omega.verified_to == 3);
    CHECK_FALSE(k.descent.pass);
    CHECK(k.descent.strategy == "collapse");
    for (const auto& d : k.descent.degrees)
        if (d.k == 0) {
            CHECK(d.source.is_zero());
            CHECK(d.target == Z);
        }
    CHECK(k.separated());
}

TEST_CASE("counterexample depth must exceed the truncation") {
    CHECK_THROWS_AS(build_counterexample(3, 2), InvalidInput);
}
