#include "descente/counterexample.hpp"

#include <algorithm>
#include <map>

#include "descente/errors.hpp"

namespace descente {

namespace {

using Interval = std::pair<mpq_class, mpq_class>;

bool inside(const Interval& a, const Interval& b) { return b.first <= a.first && a.second <= b.second; }

Idx arrow(const FiniteCategory& cat, Idx a, Idx b) {
    if (a == b) return cat.identity(a);
    return cat.morphism(poset_arrow_id(cat.object_id(a), cat.object_id(b)));
}

std::optional<Idx> named_interval(const std::vector<Interval>& ends, const Interval& iv) {
    for (Idx o = 0; o < ends.size(); ++o)
        if (ends[o] == iv) return o;
    return std::nullopt;
}

Interval meet(const Interval& a, const Interval& b) {
    return {std::max(a.first, b.first), std::min(a.second, b.second)};
}

}  // namespace

Idx CounterexampleBundle::x(int n) const { return site.cat().object("X" + std::to_string(n)); }
Idx CounterexampleBundle::u(int n) const { return site.cat().object("U" + std::to_string(n)); }
Idx CounterexampleBundle::v(int n) const { return site.cat().object("V" + std::to_string(n)); }

std::vector<PullbackSquare> interval_pullbacks(const FiniteCategory& cat, const std::vector<Interval>& endpoints) {
    std::vector<PullbackSquare> out;
    for (Idx f = 0; f < cat.num_morphisms(); ++f)
        for (Idx g : cat.into(cat.dst(f))) {
            Interval m = meet(endpoints[cat.src(f)], endpoints[cat.src(g)]);
            auto apex = named_interval(endpoints, m);
            if (!apex) throw InternalError("interval intersection is not an object");
            out.push_back({f, g, *apex, arrow(cat, *apex, cat.src(f)), arrow(cat, *apex, cat.src(g))});
        }
    return out;
}

std::vector<std::pair<int, int>> cells_of(const CounterexampleBundle& b, Idx object) {
    const std::string& id = b.site.cat().object_id(object);
    const int n = std::stoi(id.substr(1));
    std::vector<std::pair<int, int>> cells;
    if (id[0] == 'X') {
        for (int k = 0; k < n; ++k) cells.insert(cells.end(), {{k, +1}, {k, -1}});
    } else {
        for (int k = 0; k < n; ++k) cells.insert(cells.end(), {{k, +1}, {k, -1}});
        cells.push_back({n, id[0] == 'U' ? +1 : -1});
    }
    return cells;
}

namespace {

ChainComplex cell_complex(const std::vector<std::pair<int, int>>& cells,
                          std::map<std::pair<int, int>, std::size_t>& position) {
    ChainComplex c;
    if (cells.empty()) return c;
    int top = 0;
    for (auto [k, s] : cells) top = std::max(top, k);
    c.lo = 0;
    c.hi = top;
    c.ranks.assign(top + 1, 0);
    // Within a degree, e_+ precedes e_-.
    for (int k = 0; k <= top; ++k)
        for (int s : {+1, -1})
            if (std::find(cells.begin(), cells.end(), std::pair{k, s}) != cells.end()) position[{k, s}] = c.ranks[k]++;
    for (int k = 1; k <= top; ++k) {
        Matrix d(c.ranks[k - 1], c.ranks[k]);
        for (int s : {+1, -1}) {
            auto it = position.find({k, s});
            if (it == position.end()) continue;
            d(position.at({k - 1, +1}), it->second) += 1;
            d(position.at({k - 1, -1}), it->second) -= 1;
        }
        c.diffs[k] = d;
    }
    return c;
}

}  // namespace

CounterexampleBundle build_counterexample(int depth, int trunc) {
    if (trunc < 0) throw InvalidInput("negative truncation");
    if (depth < trunc + 2) throw InvalidInput("depth must be at least trunc + 2");
    CounterexampleBundle b;
    b.depth = depth;
    b.trunc = trunc;

    std::vector<std::string> names;
    std::vector<Interval> ends;
    Interval xn{mpq_class(0), mpq_class(1)};
    for (int n = 0; n <= depth; ++n) {
        mpq_class third = (xn.second - xn.first) / 3;
        Interval un{xn.first, xn.first + 2 * third}, vn{xn.first + third, xn.second};
        names.push_back("X" + std::to_string(n));
        ends.push_back(xn);
        names.push_back("U" + std::to_string(n));
        ends.push_back(un);
        names.push_back("V" + std::to_string(n));
        ends.push_back(vn);
        xn = meet(un, vn);
    }
    names.push_back("X" + std::to_string(depth + 1));
    ends.push_back(xn);

    std::vector<std::pair<std::string, std::string>> leq;
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = 0; j < names.size(); ++j)
            if (i != j && inside(ends[i], ends[j])) leq.emplace_back(names[i], names[j]);
    FiniteCategory cat = make_poset(names, leq);

    b.endpoints.resize(cat.num_objects());
    for (std::size_t i = 0; i < names.size(); ++i) b.endpoints[cat.object(names[i])] = ends[i];

    std::vector<CoveringFamily> fams;
    for (int n = 0; n <= depth; ++n) {
        Idx x = cat.object("X" + std::to_string(n));
        CoveringFamily f{x, {arrow(cat, cat.object("U" + std::to_string(n)), x), arrow(cat, cat.object("V" + std::to_string(n)), x)}};
        std::sort(f.members.begin(), f.members.end());
        fams.push_back(f);
    }
    auto squares = interval_pullbacks(cat, b.endpoints);
    b.site = VerdierSite(cat, fams, squares);
    const FiniteCategory& c = b.site.cat();

    for (int n = 0; n <= depth; ++n) {
        b.universe.push_back(b.u(n));
        b.universe.push_back(b.v(n));
    }
    std::sort(b.universe.begin(), b.universe.end());

    // G: cellular chains, restrictions are inclusions of cell sets.
    std::vector<std::map<std::pair<int, int>, std::size_t>> pos(c.num_objects());
    for (Idx o = 0; o < c.num_objects(); ++o) b.g.values.push_back(cell_complex(cells_of(b, o), pos[o]));
    for (Idx m = 0; m < c.num_morphisms(); ++m) {
        Idx big = c.dst(m), small = c.src(m);
        ChainMap r;
        const auto& cb = b.g.values[big];
        const auto& cs = b.g.values[small];
        for (int k = cb.lo; k <= cb.hi; ++k) {
            Matrix x(cs.rank(k), cb.rank(k));
            for (const auto& [cell, i] : pos[big]) {
                if (cell.first != k) continue;
                auto it = pos[small].find(cell);
                if (it == pos[small].end()) throw InternalError("restriction is not a cellular inclusion");
                x(it->second, i) = 1;
            }
            r.maps[k] = x;
        }
        b.g.restrict.push_back(r);
    }

    // S_n by backtracking over nonempty subsets, smaller subsets first.
    std::vector<std::map<std::vector<Idx>, Idx>> index(trunc + 2);
    auto enumerate = [&](int n) {
        SubsetComplex sc = simplex_shape(n);
        const std::size_t T = sc.sset().num_nondeg();
        std::vector<std::vector<Idx>> faces_of(T);
        for (Idx t = 0; t < T; ++t) {
            const auto& sub = sc.subset_of(t);
            if (sub.size() < 2) continue;
            for (std::size_t drop = 0; drop < sub.size(); ++drop) {
                std::vector<int> f = sub;
                f.erase(f.begin() + drop);
                faces_of[t].push_back(*sc.find(f));
            }
        }
        std::vector<std::vector<Idx>> out;
        std::vector<Idx> lab(T);
        auto rec = [&](auto&& self, Idx t) -> void {
            if (t == T) {
                out.push_back(lab);
                return;
            }
            Interval m = b.endpoints[b.x(0)];
            for (Idx f : faces_of[t]) m = meet(m, b.endpoints[lab[f]]);
            auto o = named_interval(b.endpoints, m);
            if (!o) throw InternalError("face labels meet outside the site");
            const std::string& id = c.object_id(*o);
            std::vector<Idx> cand;
            if (id[0] == 'X') {
                int k = std::stoi(id.substr(1));
                if (k <= depth) cand = {b.u(k), b.v(k)};
            } else {
                cand = {*o};
            }
            for (Idx y : cand) {
                lab[t] = y;
                self(self, t + 1);
            }
        };
        rec(rec, 0);
        return out;
    };
    for (int n = 0; n <= trunc; ++n) {
        b.labels.push_back(enumerate(n));
        for (Idx j = 0; j < b.labels[n].size(); ++j) index[n][b.labels[n][j]] = j;
        b.s_counts.push_back(b.labels[n].size());
    }

    // Ω: summand J of level n sits over J([n]); structure maps precompose J.
    AugSimplicialCoR& om = b.omega;
    om.base = b.x(0);
    om.trunc = trunc;
    std::vector<SubsetComplex> shapes;
    for (int n = 0; n <= trunc + 1; ++n) shapes.push_back(simplex_shape(n));
    auto relabel = [&](int from, int to, const std::vector<Idx>& lab, auto&& vertex) {
        const SubsetComplex& dst = shapes[to];
        std::vector<Idx> out(dst.sset().num_nondeg());
        for (Idx t = 0; t < out.size(); ++t) {
            std::vector<int> img;
            for (int vtx : dst.subset_of(t)) img.push_back(vertex(vtx));
            img.erase(std::unique(img.begin(), img.end()), img.end());
            out[t] = lab[*shapes[from].find(img)];
        }
        return out;
    };
    for (int n = 0; n <= trunc; ++n) {
        CoR lvl;
        for (const auto& lab : b.labels[n]) lvl.summands.push_back(lab.back());
        om.levels.push_back(lvl);
    }
    om.faces.resize(trunc + 1);
    om.degens.resize(trunc + 1);
    for (int n = 1; n <= trunc; ++n)
        for (int i = 0; i <= n; ++i) {
            CoRMap d;
            for (const auto& lab : b.labels[n]) {
                auto fl = relabel(n, n - 1, lab, [i](int v) { return v < i ? v : v + 1; });
                Idx j = index[n - 1].at(fl);
                d.to.push_back(j);
                d.via.push_back(arrow(c, lab.back(), b.labels[n - 1][j].back()));
            }
            om.faces[n].push_back(d);
        }
    for (int n = 0; n < trunc; ++n)
        for (int i = 0; i <= n; ++i) {
            CoRMap s;
            for (const auto& lab : b.labels[n]) {
                auto dl = relabel(n, n + 1, lab, [i](int v) { return v <= i ? v : v - 1; });
                auto it = index[n + 1].find(dl);
                if (it == index[n + 1].end()) throw InternalError("degenerate labelling outside S_n");
                s.to.push_back(it->second);
                s.via.push_back(c.identity(lab.back()));
            }
            om.degens[n].push_back(s);
        }
    for (const auto& lab : b.labels[0]) {
        om.aug.to.push_back(0);
        om.aug.via.push_back(arrow(c, lab.back(), b.x(0)));
    }
    return b;
}

CounterexampleCheck check_counterexample(const CounterexampleBundle& b) {
    CounterexampleCheck r;
    for (int n = 0; n <= b.depth - 2; ++n) {
        DescentOptions o;
        o.strategy = DescentStrategy::Tot;
        r.cech.push_back(check_cech_descent(b.site, b.g, b.x(n), o));
        r.cech_pass = r.cech_pass && r.cech.back().pass;
    }
    r.omega = verify_hypercover(b.site, b.omega, b.trunc);
    DescentOptions o;
    o.strategy = DescentStrategy::Collapse;
    o.universe = b.universe;
    o.verify = false;
    o.name = "omega";
    r.descent = check_descent(b.site, b.g, b.omega, o);
    return r;
}

}  // namespace descente
