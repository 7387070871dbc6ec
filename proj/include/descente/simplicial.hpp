#pragma once

#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "descente/cor.hpp"
#include "descente/presheaf.hpp"
#include "descente/site.hpp"

namespace descente {

// A simplex of a simplicial set written as s^*(tau) with tau nondegenerate
// and s: [k] -> [dim tau] a monotone surjection given by its values.
struct SimplexRef {
    Idx nondeg = npos;
    std::vector<int> surj;
    int dim() const { return static_cast<int>(surj.size()) - 1; }
    bool operator==(const SimplexRef&) const = default;
    bool operator<(const SimplexRef& o) const {
        return nondeg != o.nondeg ? nondeg < o.nondeg : surj < o.surj;
    }
};

std::vector<int> identity_surjection(int k);
// All monotone surjections [k] -> [m] in lexicographic order.
std::vector<std::vector<int>> surjections(int k, int m);

// A finite simplicial set presented by its nondegenerate simplices; every
// simplex is a unique degeneracy of a nondegenerate one.
class FiniteSimplicialSet {
public:
    // faces[i] = d_i of the new simplex; empty for vertices.
    Idx add(int dim, std::vector<SimplexRef> faces);

    int dim() const { return max_dim_; }
    std::size_t num_nondeg() const { return dims_.size(); }
    int nondeg_dim(Idx s) const { return dims_[s]; }
    const std::vector<SimplexRef>& nondeg_faces(Idx s) const { return faces_[s]; }
    std::vector<Idx> nondeg_of_dim(int k) const;
    bool faces_nondegenerate() const;

    SimplexRef as_simplex(Idx s) const;
    SimplexRef face(const SimplexRef& x, int i) const;
    SimplexRef degen(const SimplexRef& x, int i) const;
    // All simplices of dimension k (nondegenerate and degenerate).
    std::vector<SimplexRef> simplices(int k) const;
    ValidationReport validate(int upto) const;

private:
    std::vector<int> dims_;
    std::vector<std::vector<SimplexRef>> faces_;
    int max_dim_ = -1;
};

// The simplicial complex on vertices 0..nverts-1 spanned by the given
// subsets and all their faces. Nondegenerate simplices are ordered by
// dimension, then lexicographically. subset_of() recovers the vertex list.
class SubsetComplex {
public:
    SubsetComplex(int nverts, const std::vector<std::vector<int>>& generators);
    const FiniteSimplicialSet& sset() const { return sset_; }
    const std::vector<int>& subset_of(Idx s) const { return subsets_[s]; }
    std::optional<Idx> find(const std::vector<int>& subset) const;
    int vertices() const { return nverts_; }

private:
    int nverts_;
    FiniteSimplicialSet sset_;
    std::vector<std::vector<int>> subsets_;
    std::map<std::vector<int>, Idx> index_;
};

SubsetComplex simplex_shape(int n);
SubsetComplex boundary_shape(int n);
// sk_n Delta^k.
SubsetComplex skeleton_shape(int n, int k);
FiniteSimplicialSet empty_shape();
// Two copies of Delta^n glued along their boundary.
FiniteSimplicialSet doubled_simplex(int n);

// A map of simplicial sets given on nondegenerate simplices of the source.
struct SimplicialMap {
    std::vector<SimplexRef> image;
};

// Levelwise pointwise realization of an augmented simplicial CoR object with
// face, degeneracy and augmentation tables.
class RealizedSimplicial {
public:
    RealizedSimplicial(const FiniteCategory& cat, const AugSimplicialCoR& u);
    const AugSimplicialCoR& object() const { return *u_; }
    const RealizedCoR& level(int n) const { return levels_[n]; }
    std::size_t count(int n, Idx y) const { return levels_[n].count(y); }
    Idx face(int n, int i, Idx y, Idx e) const;
    Idx degen(int n, int i, Idx y, Idx e) const;
    Idx aug(Idx y, Idx e) const;  // morphism y -> base
    Idx apply_surjection(const std::vector<int>& s, Idx y, Idx e) const;
    Idx apply_face_subset(int k, const std::vector<int>& subset, Idx y, Idx e) const;
    // Elements of level n at y with the given face tuple (n >= 1) or
    // augmentation (n == 0, faces = {u}).
    const std::vector<Idx>& with_faces(int n, Idx y, const std::vector<Idx>& faces) const;

private:
    const FiniteCategory* cat_;
    const AugSimplicialCoR* u_;
    std::vector<RealizedCoR> levels_;
    mutable std::vector<std::vector<std::unique_ptr<std::map<std::vector<Idx>, std::vector<Idx>>>>> face_index_;
};

// The end hom_+(K, U) evaluated pointwise. elements[y][e] lists the base
// morphism y -> X followed by one element index per nondegenerate simplex.
struct HomPlus {
    SetPresheaf presheaf;
    std::vector<std::vector<std::vector<Idx>>> elements;
    std::vector<std::map<std::vector<Idx>, Idx>> lookup;
    Idx find(Idx y, const std::vector<Idx>& tuple) const;
};

HomPlus hom_plus(const FiniteCategory& cat, const FiniteSimplicialSet& k, const AugSimplicialCoR& u);
HomPlus hom_plus(const FiniteCategory& cat, const FiniteSimplicialSet& k, const RealizedSimplicial& ru);

// Pointwise map hom_+(L, U) -> hom_+(K, U) induced by phi: K -> L.
PresheafMap hom_plus_map(const FiniteCategory& cat, const FiniteSimplicialSet& k, const FiniteSimplicialSet& l,
                         const SimplicialMap& phi, const RealizedSimplicial& ru, const HomPlus& hl, const HomPlus& hk);

struct MatchingObject {
    HomPlus m;
    std::optional<PresheafMap> map;  // U_n -> M_n U when level n is stored
};

MatchingObject matching_object(const FiniteCategory& cat, const RealizedSimplicial& ru, int n);
MatchingObject matching_object(const FiniteCategory& cat, const AugSimplicialCoR& u, int n);

// A limit cone built by iterated designated pullbacks.
struct LimitCone {
    Idx object = npos;
    Idx leg = npos;                       // object -> base
    std::vector<Idx> comps;               // per nondegenerate simplex: object -> summand
    std::vector<PullbackSquare> steps;    // one per nondegenerate simplex
};

// A coproduct-of-representables decomposition of hom_+(K, U): one summand per
// simplicial map a: K -> (indexing simplicial set of U).
struct CoRDecomposition {
    CoR cor;
    std::vector<std::vector<Idx>> assignment;  // per summand: summand index per nondegenerate simplex
    std::vector<LimitCone> cones;
    std::map<std::vector<Idx>, Idx> lookup;
};

class CoRLimits {
public:
    CoRLimits(const VerdierSite& site, const AugSimplicialCoR& u);

    // All maps K -> indexing set, each with its limit. Requires the faces of
    // nondegenerate simplices of K to be nondegenerate.
    CoRDecomposition decompose(const FiniteSimplicialSet& k);
    LimitCone limit(const FiniteSimplicialSet& k, const std::vector<Idx>& assignment);
    // Limit over the boundary of a k-simplex with the given codimension-one face summands.
    const LimitCone& boundary_limit(int k, const std::vector<Idx>& face_summands);
    // The component A_j -> M_k U of the matching map on summand j of level k.
    Idx matching_via(int k, Idx j);
    Idx factor(const FiniteSimplicialSet& k, const std::vector<Idx>& assignment, const LimitCone& cone, Idx t,
               Idx leg, const std::vector<Idx>& comps) const;
    // CoR map hom_+(L, U) -> hom_+(K, U) induced by phi: K -> L.
    CoRMap induced_map(const FiniteSimplicialSet& k, const CoRDecomposition& dk, const FiniteSimplicialSet& l,
                       const CoRDecomposition& dl, const SimplicialMap& phi) const;

private:
    const VerdierSite* site_;
    const AugSimplicialCoR* u_;
    std::map<std::pair<int, std::vector<Idx>>, LimitCone> boundary_cache_;
    std::map<std::pair<int, Idx>, Idx> via_cache_;
    std::map<int, SubsetComplex> boundaries_;
    const SubsetComplex& boundary(int k);
    std::pair<Idx, Idx> value(const FiniteSimplicialSet& k, const std::vector<Idx>& assignment,
                              const SimplexRef& x) const;
};

CoRDecomposition matching_object_cor(const VerdierSite& site, const AugSimplicialCoR& u, int n);
// Summand map U_n -> M_n U (decomposition as from matching_object_cor).
CoRMap matching_map_cor(const VerdierSite& site, const AugSimplicialCoR& u, int n, const CoRDecomposition& m);

// Pointwise comparison presheaf map realize(decomposition) -> hom_+(K, U).
PresheafMap realization_comparison(const FiniteCategory& cat, const FiniteSimplicialSet& k,
                                   const CoRDecomposition& dec, const RealizedSimplicial& ru, const HomPlus& hp);

struct LatchingSummand {
    std::vector<int> surj;  // [n] -> [m]
    int m = 0;
    Idx source = npos;      // nondegenerate summand of level m
    Idx object = npos;
    Idx image = npos;       // summand of level n it maps to
    Idx via = npos;
};

struct SplitReport {
    bool split = false;
    std::vector<std::vector<Idx>> nondegenerate;  // N_k per level
    std::string witness;
};

SplitReport is_split(const FiniteCategory& cat, const AugSimplicialCoR& u);
std::vector<LatchingSummand> latching_object(const FiniteCategory& cat, const AugSimplicialCoR& u,
                                             const std::vector<std::vector<Idx>>& nondegenerate, int n);

struct IndexingSimplicialSet {
    std::vector<std::size_t> count;
    std::vector<std::vector<std::vector<Idx>>> faces, degens;
};

IndexingSimplicialSet indexing_simplicial_set(const AugSimplicialCoR& u);
ValidationReport validate_indexing(const IndexingSimplicialSet& k);

// Pointwise hom_+(sk_n Delta^k, U).
HomPlus coskeleton_level(const FiniteCategory& cat, const AugSimplicialCoR& u, int n, int k);
// The coskeleton cosk_n U as a CoR object truncated at d (requires U basal
// through level n).
AugSimplicialCoR coskeleton_cor(const VerdierSite& site, const AugSimplicialCoR& u, int n, int d);

}  // namespace descente
