#include <set>

#include "doctest.h"
#include "fixtures.hpp"

#include "descente/errors.hpp"

using namespace descente;

namespace {

// Oracle for TwoCover meets: objects as point sets.
std::set<int> points(const std::string& o) {
    if (o == "X") return {1, 2, 3};
    if (o == "U") return {1, 2};
    if (o == "V") return {2, 3};
    return {2};
}

std::string object_of(const std::set<int>& p) {
    for (std::string o : {"X", "U", "V", "W"})
        if (points(o) == p) return o;
    return "?";
}

}  // namespace

TEST_CASE("presheaf validation") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    CHECK(validate_presheaf(cat, fixtures::constant_set(cat, 2)).ok());
    CHECK(validate_presheaf(cat, fixtures::st_collapse(cat)).ok());
    CHECK(validate_presheaf(cat, fixtures::missing_glue(cat)).ok());
    SetPresheaf bad = fixtures::constant_set(cat, 2);
    bad.restrict[cat.morphism("U->X")] = {1, 0};
    // W->U o U->X must agree with W->X
    CHECK_FALSE(validate_presheaf(cat, bad).ok());
}

TEST_CASE("realized representables") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    SetPresheaf r = realize_cor(cat, CoR{{cat.object("U"), cat.object("V")}});
    CHECK(r.card[cat.object("X")] == 0);
    CHECK(r.card[cat.object("U")] == 1);
    CHECK(r.card[cat.object("W")] == 2);
    CHECK(validate_presheaf(cat, r).ok());
}

TEST_CASE("generalized covers") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    Idx x = cat.object("X");
    CoR uv{{cat.object("U"), cat.object("V")}};
    CoRMap to{{0, 0}, {cat.morphism("U->X"), cat.morphism("V->X")}};
    auto e = realize_cor(cat, uv);
    auto b = realize_cor(cat, representable(x));
    CHECK(is_generalized_cover(s, e, b, realize_map(cat, uv, representable(x), to)).ok);
    CoR w{{cat.object("W")}};
    CoRMap tw{{0}, {cat.morphism("W->X")}};
    auto rep = is_generalized_cover(s, realize_cor(cat, w), b, realize_map(cat, w, representable(x), tw));
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.first_failure.has_value());
    // The section U -> X already fails: only W -> U lifts, which does not cover U.
    CHECK(rep.first_failure->object == cat.object("U"));
}

TEST_CASE("sheaf status of fixture presheaves") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    CHECK(sheaf_status(s, fixtures::constant_set(cat, 1)).status == SheafStatus::Sheaf);
    CHECK(sheaf_status(s, realize_cor(cat, representable(cat.object("U")))).status == SheafStatus::Sheaf);
    CHECK(sheaf_status(s, fixtures::st_collapse(cat)).status == SheafStatus::Neither);
    CHECK(sheaf_status(s, fixtures::missing_glue(cat)).status == SheafStatus::SeparatedOnly);
    // Two sections everywhere: any pair over U, V agreeing on W glues uniquely.
    CHECK(sheaf_status(s, fixtures::constant_set(cat, 2)).status == SheafStatus::Sheaf);
}

TEST_CASE("sheafification collapses s and t") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    QuotientResult q = sheafify(s, fixtures::st_collapse(cat));
    // Matching families over {U, V}: one section on each of U, V, W.
    CHECK(q.result.card[cat.object("X")] == 1);
    CHECK(sheaf_status(s, q.result).status == SheafStatus::Sheaf);
}

TEST_CASE("sheafification adds the missing glue") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    QuotientResult q = sheafify(s, fixtures::missing_glue(cat));
    CHECK(q.result.card[cat.object("X")] == 1);
    CHECK(q.result.card[cat.object("U")] == 1);
    CHECK(sheaf_status(s, q.result).status == SheafStatus::Sheaf);
}

TEST_CASE("sheafification is idempotent and the unit is bijective on sheaves") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    for (const auto& f : {fixtures::st_collapse(cat), fixtures::missing_glue(cat), fixtures::constant_set(cat, 2)}) {
        QuotientResult q = sheafify(s, f);
        QuotientResult qq = sheafify(s, q.result);
        CHECK(is_pointwise_bijective(q.result, qq.result, qq.map));
        CHECK(is_natural(cat, f, q.result, q.map));
    }
    SetPresheaf sh = fixtures::constant_set(cat, 2);
    QuotientResult q = sheafify(s, sh);
    CHECK(is_pointwise_bijective(sh, q.result, q.map));
}

TEST_CASE("matching families on covering sieves") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    Sieve r = generate_sieve(s, {cat.morphism("U->X"), cat.morphism("V->X")});
    // Constant {0,1}: a family is fixed by its value on W -> X, which determines the rest.
    CHECK(matching_families(cat, fixtures::constant_set(cat, 2), r).size() == 2);
    CHECK(covering_sieves(s, cat.object("X")).size() == 2);
}

TEST_CASE("Cech levels of TwoCover follow intersections") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    auto c = fixtures::twocover_cech(s, 3);
    CHECK(validate_simplicial(cat, c).ok());
    const std::vector<std::string> mem{"U", "V"};
    for (int n = 0; n <= 3; ++n) {
        REQUIRE(c.levels[n].size() == (1u << (n + 1)));
        for (std::size_t t = 0; t < c.levels[n].size(); ++t) {
            // tuple t in lexicographic order: digit i picks U (0) or V (1)
            std::set<int> p = points("X");
            for (int i = 0; i <= n; ++i) {
                const auto& q = points(mem[(t >> (n - i)) & 1]);
                std::set<int> m;
                std::set_intersection(p.begin(), p.end(), q.begin(), q.end(), std::inserter(m, m.begin()));
                p = m;
            }
            CHECK(cat.object_id(c.levels[n].summands[t]) == object_of(p));
        }
    }
}

TEST_CASE("pointwise Cech nerve matches the realized Cech complex") {
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    auto c = fixtures::twocover_cech(s, 2);
    auto rc = realize_simplicial(cat, c);
    CoR uv = c.levels[0];
    auto pw = cech_pointwise(cat, realize_cor(cat, uv), realize_cor(cat, representable(cat.object("X"))),
                             realize_map(cat, uv, representable(cat.object("X")), c.aug), 2);
    CHECK(validate_simplicial(cat, pw).ok());
    for (int n = 0; n <= 2; ++n) CHECK(pw.levels[n].card == rc.levels[n].card);
}

TEST_CASE("Cech complex in the counterexample site alternates U_n, V_n, X_{n+1}") {
    CounterexampleBundle b = build_counterexample(3, 1);
    const auto& cat = b.site.cat();
    for (int n = 0; n <= 2; ++n) {
        CoveringFamily f{b.x(n), {}};
        for (Idx m : cat.into(b.x(n)))
            if (cat.src(m) == b.u(n) || cat.src(m) == b.v(n)) f.members.push_back(m);
        std::sort(f.members.begin(), f.members.end());
        auto c = cech_complex(b.site, f, 2);
        for (int k = 0; k <= 2; ++k)
            for (Idx a : c.levels[k].summands) CHECK((a == b.u(n) || a == b.v(n) || a == b.x(n + 1)));
        CHECK(c.levels[1].summands == std::vector<Idx>{b.u(n), b.x(n + 1), b.x(n + 1), b.v(n)});
    }
}
