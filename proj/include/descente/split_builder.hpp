#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "descente/presheaf.hpp"
#include "descente/simplicial.hpp"

namespace descente {

// A summand of a split object is s^*(j) for a monotone surjection s: [n] -> [m]
// and a nondegenerate summand j of level m; nondegenerate summands carry the
// identity surjection and their own index.
struct SplitTag {
    std::vector<int> surj;
    Idx source = npos;
    bool operator<(const SplitTag& o) const {
        return surj != o.surj ? surj < o.surj : source < o.source;
    }
};

// Lifting data: a map f: F -> G of simplicial presheaves and g: realize(U) -> G.
struct LiftProblem {
    const SimplicialSetPresheaf* source = nullptr;
    const SimplicialPresheafMap* f = nullptr;
    const SimplicialPresheafMap* g = nullptr;
};

enum class CoverMode {
    // Cover every section of the matching object, objects with the most
    // arrows into them first.
    Elementwise,
    // Cover the identity section of each summand of the CoR matching object by
    // a closed family, so the new matching components are basal.
    Basal,
};

// Builds a split hypercover V with a refinement V -> U one level at a time:
// level n is Z ⊔ L_n V where Z covers M_n V through sections that lift to U_n
// (and to F when a lift problem is given).
class SplitBuilder {
public:
    SplitBuilder(const VerdierSite& site, const AugSimplicialCoR& target, std::optional<LiftProblem> lift = std::nullopt);

    // In Basal mode, chooser(object, ordinal) may name the closed family used
    // for the ordinal-th uncovered matching summand; nullopt keeps the default.
    using Chooser = std::function<std::optional<Idx>(Idx object, std::size_t ordinal)>;
    void build_level(CoverMode mode, const Chooser& chooser = nullptr);
    int levels_built() const { return static_cast<int>(v_.levels.size()); }

    const AugSimplicialCoR& result() const { return v_; }
    const std::vector<CoRMap>& refinement() const { return r_; }
    // Per level and summand: a section of F_n at the summand object.
    const std::vector<std::vector<Idx>>& lifts() const { return lift_; }
    const std::vector<std::vector<SplitTag>>& tags() const { return tags_; }

private:
    const VerdierSite* site_;
    const AugSimplicialCoR* u_;
    std::optional<LiftProblem> lp_;
    RealizedSimplicial ru_;
    std::map<int, MatchingObject> mu_;
    AugSimplicialCoR v_;
    std::vector<CoRMap> r_;
    std::vector<std::vector<Idx>> lift_;
    std::vector<std::vector<SplitTag>> tags_;
    std::vector<std::map<SplitTag, Idx>> tag_index_;
    std::vector<std::vector<Idx>> nondeg_;

    const MatchingObject& target_matching(int n);
    Idx apply_source_surjection(const std::vector<int>& s, Idx obj, Idx x) const;
};

}  // namespace descente
