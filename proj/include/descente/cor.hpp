#pragma once

#include <vector>

#include "descente/category.hpp"

namespace descente {

// A coproduct of representables, summands listed by object (repeats allowed).
struct CoR {
    std::vector<Idx> summands;
    std::size_t size() const { return summands.size(); }
    bool operator==(const CoR&) const = default;
};

// A map of coproducts of representables: summand i of the source goes to
// summand to[i] of the target along via[i]: A_i -> B_{to[i]}.
struct CoRMap {
    std::vector<Idx> to;
    std::vector<Idx> via;
    std::size_t size() const { return to.size(); }
    bool operator==(const CoRMap&) const = default;
};

CoRMap compose(const FiniteCategory& cat, const CoRMap& g, const CoRMap& f);
CoRMap identity_map(const FiniteCategory& cat, const CoR& p);
// Empty string when the map is well typed from p to q.
std::string check_cor_map(const FiniteCategory& cat, const CoR& p, const CoR& q, const CoRMap& f);

// A truncated augmented simplicial object in coproducts of representables.
// faces[n][i] : levels[n] -> levels[n-1] for 1 <= n <= trunc (faces[0] empty),
// degens[n][i] : levels[n] -> levels[n+1] for n < trunc, aug : levels[0] -> rX.
struct AugSimplicialCoR {
    Idx base = npos;
    int trunc = 0;
    std::vector<CoR> levels;
    std::vector<std::vector<CoRMap>> faces;
    std::vector<std::vector<CoRMap>> degens;
    CoRMap aug;
};

// The base object as a one-summand coproduct.
CoR representable(Idx x);

// Typing and simplicial identities, including agreement of augmentations.
ValidationReport validate_simplicial(const FiniteCategory& cat, const AugSimplicialCoR& u);

// The morphism from summand j of level n down to the base.
Idx summand_leg(const FiniteCategory& cat, const AugSimplicialCoR& u, int n, Idx j);

// Restrict to levels 0..d.
AugSimplicialCoR truncate(const AugSimplicialCoR& u, int d);

// Levels rX in every degree with identity structure maps.
AugSimplicialCoR trivial_hypercover(const FiniteCategory& cat, Idx x, int d);

// Summand-level action of a monotone surjection s: [k] -> [m] (as a value
// vector) on summand j of level m: returns (summand of level k, via).
std::pair<Idx, Idx> apply_surjection(const FiniteCategory& cat, const AugSimplicialCoR& u,
                                     const std::vector<int>& s, Idx j);
// Summand-level action of the face inclusion of a subset S of [k] (sorted
// vertex list) on summand j of level k.
std::pair<Idx, Idx> apply_face_subset(const FiniteCategory& cat, const AugSimplicialCoR& u, int k,
                                      const std::vector<int>& subset, Idx j);

}  // namespace descente
