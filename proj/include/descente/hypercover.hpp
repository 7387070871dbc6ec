#pragma once

#include <optional>
#include <string>
#include <vector>

#include "descente/presheaf.hpp"
#include "descente/simplicial.hpp"
#include "descente/split_builder.hpp"

namespace descente {

// A map of augmented simplicial CoR objects over the same base, levelwise.
struct SimplicialCoRMap {
    std::vector<CoRMap> levels;
};

ValidationReport check_simplicial_map(const FiniteCategory& cat, const AugSimplicialCoR& v, const AugSimplicialCoR& u,
                                      const SimplicialCoRMap& f);
SimplicialPresheafMap realize_simplicial_map(const FiniteCategory& cat, const AugSimplicialCoR& v,
                                             const AugSimplicialCoR& u, const SimplicialCoRMap& f);

struct LevelVerdict {
    int n = 0;
    bool cover = false;
    bool bijective = false;
    std::size_t sections = 0;
    std::optional<SectionWitness> failure;
};

struct HypercoverReport {
    bool pass = true;
    int verified_to = -1;
    std::vector<LevelVerdict> levels;
};

// Checks that U_n -> M_n U is a generalized cover for n <= d.
HypercoverReport verify_hypercover(const VerdierSite& site, const AugSimplicialCoR& u, int d);

struct HeightReport {
    // False when the matching map on level d itself is not a bijection, so the
    // height is at least d and the truncation hides the rest.
    bool determined = false;
    int height = 0;
    int truncation = 0;
    std::string text() const;
};

HeightReport hypercover_height(const VerdierSite& site, const AugSimplicialCoR& u, int d);

// First simplicial map V -> U over the base in lexicographic search order,
// compared on levels up to the smaller truncation. With iso set, only
// summand bijections along isomorphisms are accepted.
std::optional<SimplicialCoRMap> find_refinement(const VerdierSite& site, const AugSimplicialCoR& v,
                                                const AugSimplicialCoR& u, bool iso = false);
inline bool is_refinement(const VerdierSite& site, const AugSimplicialCoR& v, const AugSimplicialCoR& u) {
    return find_refinement(site, v, u).has_value();
}
bool is_isomorphic(const VerdierSite& site, const AugSimplicialCoR& v, const AugSimplicialCoR& u);

// Checks F_n -> M~_n F x_{M~_n G} G_n is a generalized cover for n <= d, with
// M~_n the unaugmented matching object of maps from the boundary of Delta^n.
struct FibrationReport {
    bool pass = true;
    std::vector<LevelVerdict> levels;
};

FibrationReport verify_local_acyclic_fibration(const VerdierSite& site, const SimplicialSetPresheaf& f_src,
                                               const SimplicialSetPresheaf& g_dst, const SimplicialPresheafMap& f, int d);

struct LiftResult {
    AugSimplicialCoR v;
    SimplicialCoRMap refinement;   // V -> U
    SimplicialPresheafMap lift;    // realize(V) -> F
};

// Refines U so that g: realize(U) -> G lifts along f: F -> G, to truncation d.
LiftResult refine_for_lift(const VerdierSite& site, const SimplicialSetPresheaf& f_src,
                           const SimplicialPresheafMap& f, const AugSimplicialCoR& u, const SimplicialPresheafMap& g,
                           int d);

struct RefinementResult {
    AugSimplicialCoR v;
    SimplicialCoRMap refinement;
    bool unchanged = false;  // input was already split and basal
};

// True when every matching map of U up to level `upto` is summandwise basal.
bool matching_maps_basal(const VerdierSite& site, const AugSimplicialCoR& u, int upto, std::string* why = nullptr);

// A split basal hypercover refining U: levels 0..h built by the split
// builder, levels above h (up to out_trunc) by the coskeleton. out_trunc < 0
// means the truncation of U.
RefinementResult split_basal_refinement(const VerdierSite& site, const AugSimplicialCoR& u, int h,
                                        int out_trunc = -1);

struct FiberProduct {
    AugSimplicialCoR object;
    SimplicialCoRMap first, second;
};

// Levelwise summandwise pullback of two hypercovers of the same base.
FiberProduct fiber_product_hypercovers(const VerdierSite& site, const AugSimplicialCoR& u, const AugSimplicialCoR& v,
                                       int d);

}  // namespace descente
