#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "descente/descent.hpp"

namespace descente {

// Nested open intervals X_0 = (0,1), U_n, V_n the left and right two thirds
// of X_n, X_{n+1} = U_n ∩ V_n, for n <= depth (X_{depth+1} included), with
// the presheaf G of cellular chains of hemisphere models and Ω built from
// labelled simplices.
struct CounterexampleBundle {
    int depth = 0, trunc = 0;
    VerdierSite site;
    AbPresheaf g;
    AugSimplicialCoR omega;
    std::vector<std::pair<mpq_class, mpq_class>> endpoints;  // per object
    // labels[n][j][t]: object labelling the t-th nonempty subset of [n]
    // (order of simplex_shape(n)) in summand j of Ω_n.
    std::vector<std::vector<std::vector<Idx>>> labels;
    std::vector<std::size_t> s_counts;
    std::vector<Idx> universe;  // the U_i and V_i

    Idx x(int n) const;
    Idx u(int n) const;
    Idx v(int n) const;
};

CounterexampleBundle build_counterexample(int depth, int trunc);

// Cells e^k_+ / e^k_- of the hemispherical model carried by an object.
std::vector<std::pair<int, int>> cells_of(const CounterexampleBundle& b, Idx object);

// Designated squares from interval intersections.
std::vector<PullbackSquare> interval_pullbacks(const FiniteCategory& cat,
                                               const std::vector<std::pair<mpq_class, mpq_class>>& endpoints);

struct CounterexampleCheck {
    std::vector<CechDescentReport> cech;  // at X_0..X_{depth-2}
    bool cech_pass = true;
    HypercoverReport omega;
    DescentReport descent;
    // Cech descent and Ω verified, descent along Ω fails.
    bool separated() const { return cech_pass && omega.pass && !descent.pass; }
};

CounterexampleCheck check_counterexample(const CounterexampleBundle& b);

}  // namespace descente
