#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "descente/category.hpp"

namespace descente {

struct CoveringFamily {
    Idx target = npos;
    std::vector<Idx> members;  // sorted, duplicate free
};

// f o p = g o q with p: apex -> src f, q: apex -> src g.
struct PullbackSquare {
    Idx f = npos, g = npos, apex = npos, p = npos, q = npos;
};

struct Sieve {
    Idx target = npos;
    std::vector<Idx> members;  // sorted
    bool contains(Idx m) const;
};

struct CoverSpec {
    std::string target;
    std::vector<std::string> members;
};

struct PullbackSpec {
    std::string f, g, apex, p, q;
};

struct SiteSpec {
    CategorySpec category;
    std::vector<CoverSpec> covers;
    std::vector<PullbackSpec> pullbacks;
};

// A finite category with a basis of covering families and designated
// pullbacks. The family set is closed under isomorphism singletons and under
// composition of families when the site is constructed.
class VerdierSite {
public:
    VerdierSite() = default;
    VerdierSite(FiniteCategory cat, std::vector<CoveringFamily> families, std::vector<PullbackSquare> pullbacks);

    static VerdierSite from_spec(const SiteSpec& spec);
    SiteSpec spec() const;

    const FiniteCategory& cat() const { return cat_; }
    const std::vector<CoveringFamily>& input_families() const { return input_; }
    const std::vector<PullbackSquare>& designated() const { return designated_; }

    // Closed families on X in lexicographic order of their member lists.
    const std::vector<CoveringFamily>& closed_families(Idx x) const { return closed_[x]; }
    bool is_basal(Idx m) const { return basal_[m]; }

    // Designated square for (f, g), the swapped designation of (g, f), or the
    // canonical square when one leg is an isomorphism.
    std::optional<PullbackSquare> pullback(Idx f, Idx g) const;
    PullbackSquare require_pullback(Idx f, Idx g) const;

    // A morphism u: T -> apex with p u = a and q u = b (first in index order).
    std::optional<Idx> factor(const PullbackSquare& sq, Idx a, Idx b) const;

    // Index of the first closed family on x all of whose members satisfy pred.
    std::optional<Idx> first_family_within(Idx x, const std::function<bool(Idx)>& pred) const;

private:
    FiniteCategory cat_;
    std::vector<CoveringFamily> input_;
    std::vector<PullbackSquare> designated_;
    std::vector<std::vector<CoveringFamily>> closed_;
    std::vector<char> basal_;
    std::vector<Idx> designated_index_;  // M*M table into designated_, npos if absent
};

ValidationReport validate_verdier_site(const VerdierSite& site);

Sieve generate_sieve(const VerdierSite& site, const std::vector<Idx>& generators);
Sieve maximal_sieve(const VerdierSite& site, Idx x);

// Index into closed_families(target) of a family contained in the sieve.
std::optional<Idx> covering_witness(const VerdierSite& site, const Sieve& sieve);
inline bool is_covering_sieve(const VerdierSite& site, const Sieve& sieve) {
    return covering_witness(site, sieve).has_value();
}

bool is_basal(const VerdierSite& site, Idx m);

// Designated squares from binary meets, for categories with at most one
// morphism between any two objects. Cospans without a meet are skipped.
std::vector<PullbackSquare> meet_pullbacks(const FiniteCategory& cat);

}  // namespace descente
