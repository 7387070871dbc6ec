#pragma once

#include "descente/counterexample.hpp"
#include "descente/descent.hpp"
#include "descente/hypercover.hpp"
#include "descente/presheaf.hpp"
#include "descente/simplicial.hpp"
#include "descente/site.hpp"

namespace fixtures {

using namespace descente;

// X covered by U and V with U ∩ V = W.
inline VerdierSite twocover() {
    FiniteCategory cat = make_poset({"X", "U", "V", "W"}, {{"W", "U"}, {"W", "V"}, {"U", "X"}, {"V", "X"}});
    CoveringFamily f{cat.object("X"), {cat.morphism("U->X"), cat.morphism("V->X")}};
    std::sort(f.members.begin(), f.members.end());
    return VerdierSite(cat, {f}, meet_pullbacks(cat));
}

// A chain A <= U <= X with covers {U -> X} and {A -> U}.
inline VerdierSite chain() {
    FiniteCategory cat = make_poset({"A", "U", "X"}, {{"A", "U"}, {"U", "X"}});
    return VerdierSite(cat, {CoveringFamily{cat.object("X"), {cat.morphism("U->X")}},
                             CoveringFamily{cat.object("U"), {cat.morphism("A->U")}}},
                       meet_pullbacks(cat));
}

inline CoveringFamily family(const VerdierSite& s, const std::string& target, std::vector<std::string> members) {
    CoveringFamily f{s.cat().object(target), {}};
    for (const auto& m : members) f.members.push_back(s.cat().morphism(m));
    std::sort(f.members.begin(), f.members.end());
    return f;
}

inline AugSimplicialCoR twocover_cech(const VerdierSite& s, int d) {
    return cech_complex(s, family(s, "X", {"U->X", "V->X"}), d);
}

// Cech nerve of W + U + V -> X: level 0 is not basal over the base.
inline AugSimplicialCoR twocover_wuv(const VerdierSite& s, int d) {
    const auto& cat = s.cat();
    CoR src{{cat.object("W"), cat.object("U"), cat.object("V")}};
    CoRMap to{{0, 0, 0}, {cat.morphism("W->X"), cat.morphism("U->X"), cat.morphism("V->X")}};
    return cech_complex(s, src, to, cat.object("X"), d);
}

inline SetPresheaf constant_set(const FiniteCategory& cat, std::size_t n) {
    SetPresheaf f;
    f.card.assign(cat.num_objects(), n);
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        f.restrict.emplace_back();
        for (Idx s = 0; s < n; ++s) f.restrict.back().push_back(s);
    }
    return f;
}

// TwoCover presheaf with two sections over X, one everywhere else.
inline SetPresheaf st_collapse(const FiniteCategory& cat) {
    SetPresheaf f = constant_set(cat, 1);
    Idx x = cat.object("X");
    f.card[x] = 2;
    f.names.assign(cat.num_objects(), {});
    f.names[x] = {"s", "t"};
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        if (cat.dst(m) != x) continue;
        if (cat.src(m) == x)
            f.restrict[m] = {0, 1};
        else
            f.restrict[m] = {0, 0};
    }
    return f;
}

// TwoCover presheaf with a section over each of U, V, W and none over X.
inline SetPresheaf missing_glue(const FiniteCategory& cat) {
    SetPresheaf f = constant_set(cat, 1);
    Idx x = cat.object("X");
    f.card[x] = 0;
    for (Idx m = 0; m < cat.num_morphisms(); ++m)
        if (cat.dst(m) == x) f.restrict[m].clear();
    return f;
}

// Free abelian presheaf on the representable of u, in degree 0.
inline AbPresheaf free_representable(const FiniteCategory& cat, Idx u) {
    AbPresheaf f;
    for (Idx y = 0; y < cat.num_objects(); ++y) {
        ChainComplex c;
        c.lo = 0;
        c.hi = 0;
        c.ranks = {cat.hom(y, u).size()};
        f.values.push_back(c);
    }
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        Idx a = cat.dst(m), b = cat.src(m);
        Matrix r(cat.hom(b, u).size(), cat.hom(a, u).size());
        for (Idx h : cat.hom(a, u)) r(cat.hom_position(cat.compose_checked(h, m)), cat.hom_position(h)) = 1;
        ChainMap cm;
        cm.maps[0] = r;
        f.restrict.push_back(cm);
    }
    return f;
}

// Constant Z on TwoCover except Z^2 over W, both U and V restricting onto
// the first coordinate: gluing over {U, V} acquires an extra class.
inline AbPresheaf perturbed_constant(const FiniteCategory& cat) {
    AbPresheaf f = constant_ab_presheaf(cat);
    Idx w = cat.object("W");
    f.values[w].ranks = {2};
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        if (cat.src(m) != w) continue;
        ChainMap cm;
        cm.maps[0] = cat.dst(m) == w ? Matrix::identity(2) : Matrix::from_rows({{1}, {0}});
        f.restrict[m] = cm;
    }
    return f;
}

// F + (Z --id--> Z in degrees 1, 0) everywhere: objectwise quasi-isomorphic to F.
inline AbPresheaf with_acyclic_summand(const FiniteCategory& cat, const AbPresheaf& f) {
    AbPresheaf e;
    ChainComplex c;
    c.lo = 0;
    c.hi = 1;
    c.ranks = {1, 1};
    c.diffs[1] = Matrix::identity(1);
    e.values.assign(cat.num_objects(), c);
    ChainMap id;
    id.maps[0] = Matrix::identity(1);
    id.maps[1] = Matrix::identity(1);
    e.restrict.assign(cat.num_morphisms(), id);
    return direct_sum(cat, f, e);
}

// Pointwise U_k -> hom_+(sk_n Delta^k, U) sending an element to its faces.
inline PresheafMap coskeleton_unit(const FiniteCategory& cat, const RealizedSimplicial& ru, const HomPlus& hp, int n,
                                   int k) {
    SubsetComplex sk = skeleton_shape(n, k);
    PresheafMap m;
    m.at.resize(cat.num_objects());
    for (Idx y = 0; y < cat.num_objects(); ++y)
        for (Idx e = 0; e < ru.count(k, y); ++e) {
            std::vector<Idx> t{ru.aug(y, ru.apply_face_subset(k, {0}, y, e))};
            for (Idx s = 0; s < sk.sset().num_nondeg(); ++s) t.push_back(ru.apply_face_subset(k, sk.subset_of(s), y, e));
            m.at[y].push_back(hp.find(y, t));
        }
    return m;
}

}  // namespace fixtures
