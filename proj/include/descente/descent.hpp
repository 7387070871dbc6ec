#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "descente/homalg.hpp"
#include "descente/hypercover.hpp"
#include "descente/site.hpp"

namespace descente {

// A presheaf of bounded free chain complexes: values[o] per object and
// restrict[m]: values[dst m] -> values[src m] per morphism.
struct AbPresheaf {
    std::vector<ChainComplex> values;
    std::vector<ChainMap> restrict;
    // Largest degree carrying a nonzero group over all objects.
    int top_degree() const;
};

// Per-object chain maps F(o) -> G(o).
struct AbPresheafMap {
    std::vector<ChainMap> at;
};

ValidationReport validate_ab_presheaf(const FiniteCategory& cat, const AbPresheaf& f);
ValidationReport validate_ab_map(const FiniteCategory& cat, const AbPresheaf& f, const AbPresheaf& g,
                                 const AbPresheafMap& m);

AbPresheaf zero_ab_presheaf(const FiniteCategory& cat);
// Z in degree 0 everywhere with identity restrictions.
AbPresheaf constant_ab_presheaf(const FiniteCategory& cat);
// Objectwise direct sum F + G, with the two projections.
AbPresheaf direct_sum(const FiniteCategory& cat, const AbPresheaf& f, const AbPresheaf& g);
AbPresheafMap projection_second(const FiniteCategory& cat, const AbPresheaf& f, const AbPresheaf& g);

// F(P) = direct sum of F over the summands of P.
ChainComplex evaluate_on_cor(const FiniteCategory& cat, const AbPresheaf& f, const CoR& p);
// F(g): F(Q) -> F(P) for g: P -> Q.
ChainMap evaluate_map(const FiniteCategory& cat, const AbPresheaf& f, const CoR& p, const CoR& q, const CoRMap& g);

// p -> F(U_p) blockwise: pieces are indexed by object, piece maps by morphism.
BlockCosimplicial cosimplicial_from(const FiniteCategory& cat, const AbPresheaf& f, const AugSimplicialCoR& u);

enum class DescentStrategy { Tot, Collapse, Auto };
std::string to_string(DescentStrategy s);
DescentStrategy parse_strategy(const std::string& s);

struct DegreeComparison {
    int k = 0;
    AbelianGroup source;  // H_k(F(X))
    AbelianGroup target;  // H_k(Tot)
    bool iso = false;
};

struct DescentReport {
    std::string name;
    std::string strategy;  // "tot" or "collapse"
    int levels_used = 0;
    int levels_required = 0;
    bool sound = false;
    int window_lo = 0, window_hi = 0;
    std::vector<DegreeComparison> degrees;
    bool pass = false;
    std::string detail;
};

struct DescentOptions {
    DescentStrategy strategy = DescentStrategy::Auto;
    std::optional<std::pair<int, int>> window;  // default [-1, Q]
    // Objects whose values may serve as collapse columns; default every
    // object with a morphism to the base.
    std::optional<std::vector<Idx>> universe;
    // Supplies the hypercover truncated at the requested level when more
    // levels are needed; default is the coskeleton of a bounded input.
    std::function<AugSimplicialCoR(int)> extend;
    // Caller-asserted height; the coskeleton above it supplies more levels.
    std::optional<int> height;
    bool verify = true;
    std::string name;
};

DescentReport check_descent(const VerdierSite& site, const AbPresheaf& f, const AugSimplicialCoR& u,
                            const DescentOptions& opts = {});

// Compares F(X) with Tot of p -> G(X) x_{G(U_p)} F(U_p).
DescentReport check_relative_descent(const VerdierSite& site, const AbPresheaf& f, const AbPresheaf& g,
                                     const AbPresheafMap& m, const AugSimplicialCoR& u,
                                     const DescentOptions& opts = {});

struct CechDescentReport {
    Idx object = npos;
    bool pass = true;
    std::vector<CoveringFamily> families;
    std::vector<DescentReport> reports;
    std::optional<std::size_t> first_failure;
};

CechDescentReport check_cech_descent(const VerdierSite& site, const AbPresheaf& f, Idx x,
                                     const DescentOptions& opts = {});

struct BoundedEnumeration {
    std::vector<AugSimplicialCoR> items;  // truncated at h
    bool truncated = false;               // budget hit; list is partial
};

// Split basal hypercovers of x of height at most h, up to isomorphism, with
// at most s summands per level. Uncovered matching summands are refined by
// one closed family each.
BoundedEnumeration enumerate_bounded_hypercovers(const VerdierSite& site, Idx x, int h, std::size_t s);

}  // namespace descente
