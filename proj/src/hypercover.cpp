#include "descente/hypercover.hpp"

#include <algorithm>
#include <functional>

#include "descente/errors.hpp"

namespace descente {

ValidationReport check_simplicial_map(const FiniteCategory& cat, const AugSimplicialCoR& v, const AugSimplicialCoR& u,
                                      const SimplicialCoRMap& f) {
    ValidationReport r;
    const int top = std::min(v.trunc, u.trunc);
    if (v.base != u.base) r.add("different bases");
    if (static_cast<int>(f.levels.size()) < top + 1) {
        r.add("map has too few levels");
        return r;
    }
    for (int n = 0; n <= top; ++n) {
        auto e = check_cor_map(cat, v.levels[n], u.levels[n], f.levels[n]);
        if (!e.empty()) r.add("level " + std::to_string(n) + ": " + e);
    }
    if (!r.ok()) return r;
    if (!(compose(cat, u.aug, f.levels[0]) == v.aug)) r.add("augmentation not preserved");
    for (int n = 1; n <= top; ++n)
        for (int i = 0; i <= n; ++i)
            if (!(compose(cat, u.faces[n][i], f.levels[n]) == compose(cat, f.levels[n - 1], v.faces[n][i])))
                r.add("face d" + std::to_string(i) + " on level " + std::to_string(n) + " not preserved");
    for (int n = 0; n < top; ++n)
        for (int i = 0; i <= n; ++i)
            if (!(compose(cat, u.degens[n][i], f.levels[n]) == compose(cat, f.levels[n + 1], v.degens[n][i])))
                r.add("degeneracy s" + std::to_string(i) + " on level " + std::to_string(n) + " not preserved");
    return r;
}

SimplicialPresheafMap realize_simplicial_map(const FiniteCategory& cat, const AugSimplicialCoR& v,
                                             const AugSimplicialCoR& u, const SimplicialCoRMap& f) {
    SimplicialPresheafMap m;
    for (int n = 0; n <= std::min(v.trunc, u.trunc); ++n)
        m.levels.push_back(realize_map(cat, v.levels[n], u.levels[n], f.levels[n]));
    return m;
}

HypercoverReport verify_hypercover(const VerdierSite& site, const AugSimplicialCoR& u, int d) {
    const auto& cat = site.cat();
    auto structure = validate_simplicial(cat, u);
    if (!structure.ok()) throw InvalidInput("malformed hypercover: " + structure.violations.front());
    if (d > u.trunc) throw InvalidInput("insufficient truncation: matching maps requested to level " +
                                        std::to_string(d) + " but levels stop at " + std::to_string(u.trunc));
    HypercoverReport rep;
    RealizedSimplicial ru(cat, u);
    for (int n = 0; n <= d; ++n) {
        MatchingObject mo = matching_object(cat, ru, n);
        SetPresheaf un = ru.level(n).presheaf();
        auto gc = is_generalized_cover(site, un, mo.m.presheaf, *mo.map);
        LevelVerdict lv;
        lv.n = n;
        lv.cover = gc.ok;
        lv.bijective = is_pointwise_bijective(un, mo.m.presheaf, *mo.map);
        lv.sections = gc.sections_checked;
        lv.failure = gc.first_failure;
        rep.pass = rep.pass && gc.ok;
        rep.levels.push_back(std::move(lv));
    }
    rep.verified_to = d;
    return rep;
}

std::string HeightReport::text() const {
    if (determined) return std::to_string(height);
    return ">=" + std::to_string(truncation) + " at truncation";
}

HeightReport hypercover_height(const VerdierSite& site, const AugSimplicialCoR& u, int d) {
    auto rep = verify_hypercover(site, u, d);
    if (!rep.pass) throw InvalidInput("height requires a hypercover; level " +
                                      std::to_string(std::find_if(rep.levels.begin(), rep.levels.end(),
                                                                  [](const LevelVerdict& l) { return !l.cover; })->n) +
                                      " is not a generalized cover");
    HeightReport h;
    h.truncation = d;
    for (const auto& l : rep.levels)
        if (!l.bijective && l.n > 0) h.height = l.n;
    h.determined = h.height < d;
    return h;
}

std::optional<SimplicialCoRMap> find_refinement(const VerdierSite& site, const AugSimplicialCoR& v,
                                                const AugSimplicialCoR& u, bool iso) {
    const auto& cat = site.cat();
    if (v.base != u.base) return std::nullopt;
    const int top = std::min(v.trunc, u.trunc);
    if (iso) {
        if (v.trunc != u.trunc) return std::nullopt;
        for (int n = 0; n <= top; ++n)
            if (v.levels[n].size() != u.levels[n].size()) return std::nullopt;
    }
    // Degeneracy preimages: for level n, summand i, the (k, i') with s_k(i') = i.
    std::vector<std::vector<std::vector<std::pair<int, Idx>>>> pre(top + 1);
    for (int n = 0; n <= top; ++n) {
        pre[n].resize(v.levels[n].size());
        if (n == 0) continue;
        for (int k = 0; k < n; ++k)
            for (Idx ip = 0; ip < v.levels[n - 1].size(); ++ip) pre[n][v.degens[n - 1][k].to[ip]].push_back({k, ip});
    }
    SimplicialCoRMap f;
    f.levels.resize(top + 1);
    const std::size_t budget = enumeration_budget();
    std::size_t steps = 0;

    auto candidates = [&](int n, Idx i) {
        std::vector<std::pair<Idx, Idx>> out;
        Idx a = v.levels[n].summands[i];
        for (Idx j = 0; j < u.levels[n].size(); ++j)
            for (Idx h : cat.hom(a, u.levels[n].summands[j])) {
                if (iso && !cat.is_iso(h)) continue;
                bool ok = true;
                if (n == 0) {
                    ok = cat.compose(u.aug.via[j], h) == v.aug.via[i];
                } else {
                    const auto& fl = f.levels[n - 1];
                    for (int k = 0; k <= n && ok; ++k) {
                        const auto& vf = v.faces[n][k];
                        const auto& uf = u.faces[n][k];
                        Idx ip = vf.to[i];
                        ok = uf.to[j] == fl.to[ip] &&
                             cat.compose(uf.via[j], h) == cat.compose(fl.via[ip], vf.via[i]);
                    }
                    for (auto [k, ip] : pre[n][i]) {
                        if (!ok) break;
                        const auto& ud = u.degens[n - 1][k];
                        Idx t = fl.to[ip];
                        ok = ud.to[t] == j &&
                             cat.compose(h, v.degens[n - 1][k].via[ip]) == cat.compose(ud.via[t], fl.via[ip]);
                    }
                }
                if (ok) out.emplace_back(j, h);
            }
        return out;
    };

    std::function<bool(int)> level = [&](int n) -> bool {
        if (n > top) return true;
        const Idx S = v.levels[n].size();
        std::vector<std::vector<std::pair<Idx, Idx>>> cand(S);
        for (Idx i = 0; i < S; ++i) {
            cand[i] = candidates(n, i);
            if (cand[i].empty()) return false;
        }
        f.levels[n].to.assign(S, npos);
        f.levels[n].via.assign(S, npos);
        std::vector<char> used(iso ? u.levels[n].size() : 0, 0);
        std::function<bool(Idx)> pick = [&](Idx i) -> bool {
            if (++steps > budget) throw GuardExceeded("refinement search exceeds enumeration budget");
            if (i == S) return level(n + 1);
            for (auto [j, h] : cand[i]) {
                if (iso && used[j]) continue;
                if (iso) used[j] = 1;
                f.levels[n].to[i] = j;
                f.levels[n].via[i] = h;
                if (pick(i + 1)) return true;
                if (iso) used[j] = 0;
            }
            return false;
        };
        return pick(0);
    };
    if (!level(0)) return std::nullopt;
    return f;
}

bool is_isomorphic(const VerdierSite& site, const AugSimplicialCoR& v, const AugSimplicialCoR& u) {
    return find_refinement(site, v, u, true).has_value();
}

namespace {

// Pointwise maps from the boundary of Delta^n into a simplicial presheaf, as
// tuples (x_0..x_n) of (n-1)-simplices with d_i x_j = d_{j-1} x_i for i < j.
struct BoundaryTuples {
    SetPresheaf presheaf;
    std::vector<std::vector<std::vector<Idx>>> elements;
    std::vector<std::map<std::vector<Idx>, Idx>> lookup;
};

BoundaryTuples boundary_tuples(const FiniteCategory& cat, const SimplicialSetPresheaf& f, int n) {
    BoundaryTuples bt;
    const std::size_t O = cat.num_objects();
    bt.elements.resize(O);
    bt.lookup.resize(O);
    for (Idx y = 0; y < O; ++y) {
        std::vector<Idx> cur;
        std::function<void()> rec = [&]() {
            int j = static_cast<int>(cur.size());
            if (j == (n == 0 ? 0 : n + 1)) {
                bt.lookup[y].emplace(cur, bt.elements[y].size());
                bt.elements[y].push_back(cur);
                return;
            }
            for (Idx x = 0; x < f.levels[n - 1].card[y]; ++x) {
                bool ok = true;
                for (int i = 0; i < j && ok && n >= 2; ++i)
                    ok = f.faces[n - 1][i].at[y][x] == f.faces[n - 1][j - 1].at[y][cur[i]];
                if (!ok) continue;
                cur.push_back(x);
                rec();
                cur.pop_back();
            }
        };
        rec();
        bt.presheaf.card.push_back(bt.elements[y].size());
    }
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        Idx z = cat.src(m), y = cat.dst(m);
        std::vector<Idx> map;
        for (const auto& t : bt.elements[y]) {
            std::vector<Idx> r;
            for (Idx x : t) r.push_back(f.levels[n - 1].restrict[m][x]);
            map.push_back(bt.lookup[z].at(r));
        }
        bt.presheaf.restrict.push_back(map);
    }
    return bt;
}

std::vector<Idx> boundary_of(const SimplicialSetPresheaf& f, int n, Idx y, Idx x) {
    std::vector<Idx> t;
    if (n >= 1)
        for (int i = 0; i <= n; ++i) t.push_back(f.faces[n][i].at[y][x]);
    return t;
}

}  // namespace

FibrationReport verify_local_acyclic_fibration(const VerdierSite& site, const SimplicialSetPresheaf& fs,
                                               const SimplicialSetPresheaf& gs, const SimplicialPresheafMap& f, int d) {
    const auto& cat = site.cat();
    if (d > fs.trunc || d > gs.trunc || static_cast<int>(f.levels.size()) <= d)
        throw InvalidInput("insufficient truncation for the requested fibration levels");
    for (int n = 0; n <= d; ++n)
        if (!is_natural(cat, fs.levels[n], gs.levels[n], f.levels[n]))
            throw InvalidInput("map is not natural on level " + std::to_string(n));
    FibrationReport rep;
    const std::size_t O = cat.num_objects();
    for (int n = 0; n <= d; ++n) {
        BoundaryTuples mf = boundary_tuples(cat, fs, n), mg = boundary_tuples(cat, gs, n);
        // P_n(Y) = pairs (t, g) with f(t) = boundary of g.
        SetPresheaf p;
        std::vector<std::map<std::pair<Idx, Idx>, Idx>> index(O);
        std::vector<std::vector<std::pair<Idx, Idx>>> elems(O);
        for (Idx y = 0; y < O; ++y) {
            for (Idx t = 0; t < mf.elements[y].size(); ++t) {
                std::vector<Idx> img;
                for (Idx x : mf.elements[y][t]) img.push_back(f.levels[n - 1].at[y][x]);
                Idx ti = mg.lookup[y].at(img);
                for (Idx g = 0; g < gs.levels[n].card[y]; ++g)
                    if (mg.lookup[y].at(boundary_of(gs, n, y, g)) == ti) {
                        index[y][{t, g}] = elems[y].size();
                        elems[y].push_back({t, g});
                    }
            }
            p.card.push_back(elems[y].size());
        }
        for (Idx m = 0; m < cat.num_morphisms(); ++m) {
            std::vector<Idx> map;
            for (auto [t, g] : elems[cat.dst(m)])
                map.push_back(index[cat.src(m)].at({mf.presheaf.restrict[m][t], gs.levels[n].restrict[m][g]}));
            p.restrict.push_back(map);
        }
        PresheafMap to_p;
        to_p.at.resize(O);
        for (Idx y = 0; y < O; ++y)
            for (Idx x = 0; x < fs.levels[n].card[y]; ++x)
                to_p.at[y].push_back(index[y].at({mf.lookup[y].at(boundary_of(fs, n, y, x)), f.levels[n].at[y][x]}));
        auto gc = is_generalized_cover(site, fs.levels[n], p, to_p);
        LevelVerdict lv;
        lv.n = n;
        lv.cover = gc.ok;
        lv.bijective = is_pointwise_bijective(fs.levels[n], p, to_p);
        lv.sections = gc.sections_checked;
        lv.failure = gc.first_failure;
        rep.pass = rep.pass && gc.ok;
        rep.levels.push_back(std::move(lv));
    }
    return rep;
}

LiftResult refine_for_lift(const VerdierSite& site, const SimplicialSetPresheaf& fs, const SimplicialPresheafMap& f,
                           const AugSimplicialCoR& u, const SimplicialPresheafMap& g, int d) {
    const auto& cat = site.cat();
    if (d > u.trunc || d > fs.trunc || static_cast<int>(g.levels.size()) <= d || static_cast<int>(f.levels.size()) <= d)
        throw InvalidInput("insufficient truncation for the requested lift");
    SplitBuilder b(site, u, LiftProblem{&fs, &f, &g});
    for (int n = 0; n <= d; ++n) b.build_level(CoverMode::Elementwise);
    LiftResult res;
    res.v = b.result();
    res.refinement.levels = b.refinement();
    for (int n = 0; n <= d; ++n) {
        RealizedCoR rv(cat, res.v.levels[n]);
        PresheafMap pm;
        pm.at.resize(cat.num_objects());
        for (Idx y = 0; y < cat.num_objects(); ++y)
            for (Idx e = 0; e < rv.count(y); ++e) {
                auto [a, h] = rv.element(y, e);
                pm.at[y].push_back(fs.levels[n].restrict[h][b.lifts()[n][a]]);
            }
        res.lift.levels.push_back(std::move(pm));
    }
    return res;
}

bool matching_maps_basal(const VerdierSite& site, const AugSimplicialCoR& u, int upto, std::string* why) {
    const auto& cat = site.cat();
    try {
        for (int n = 0; n <= upto; ++n) {
            auto dec = matching_object_cor(site, u, n);
            auto mm = matching_map_cor(site, u, n, dec);
            for (Idx j = 0; j < mm.size(); ++j)
                if (!site.is_basal(mm.via[j])) {
                    if (why)
                        *why = "matching component " + cat.morphism_id(mm.via[j]) + " of summand " +
                               std::to_string(j) + " on level " + std::to_string(n) + " is not basal";
                    return false;
                }
        }
    } catch (const InvalidInput& e) {
        if (why) *why = e.what();
        return false;
    }
    return true;
}

RefinementResult split_basal_refinement(const VerdierSite& site, const AugSimplicialCoR& u, int h, int out_trunc) {
    const auto& cat = site.cat();
    const int top = out_trunc < 0 ? u.trunc : out_trunc;
    if (top > u.trunc) throw InvalidInput("insufficient truncation: refinement requested beyond the input levels");
    h = std::min(h, top);
    RefinementResult res;
    if (is_split(cat, u).split && matching_maps_basal(site, u, top)) {
        res.v = truncate(u, top);
        for (int n = 0; n <= top; ++n) res.refinement.levels.push_back(identity_map(cat, res.v.levels[n]));
        res.unchanged = true;
        return res;
    }
    SplitBuilder b(site, u);
    for (int n = 0; n <= h; ++n) b.build_level(CoverMode::Basal);
    res.v = b.result();
    res.refinement.levels = b.refinement();
    if (top > h) {
        res.v = coskeleton_cor(site, res.v, h, top);
        auto f = find_refinement(site, res.v, u);
        if (!f) throw InternalError("coskeletal extension does not refine the input");
        res.refinement = *f;
    }
    return res;
}

FiberProduct fiber_product_hypercovers(const VerdierSite& site, const AugSimplicialCoR& u, const AugSimplicialCoR& v,
                                       int d) {
    const auto& cat = site.cat();
    if (u.base != v.base) throw InvalidInput("fiber product needs hypercovers of the same base");
    if (d > u.trunc || d > v.trunc) throw InvalidInput("insufficient truncation");
    FiberProduct fp;
    auto& w = fp.object;
    w.base = u.base;
    w.trunc = d;
    std::vector<std::vector<PullbackSquare>> sq(d + 1);
    auto pair_index = [&](int n, Idx i, Idx j) { return i * v.levels[n].size() + j; };
    for (int n = 0; n <= d; ++n) {
        CoR lvl;
        CoRMap p1, p2;
        for (Idx i = 0; i < u.levels[n].size(); ++i)
            for (Idx j = 0; j < v.levels[n].size(); ++j) {
                auto s = site.require_pullback(summand_leg(cat, u, n, i), summand_leg(cat, v, n, j));
                sq[n].push_back(s);
                lvl.summands.push_back(s.apex);
                p1.to.push_back(i);
                p1.via.push_back(s.p);
                p2.to.push_back(j);
                p2.via.push_back(s.q);
            }
        w.levels.push_back(lvl);
        fp.first.levels.push_back(p1);
        fp.second.levels.push_back(p2);
    }
    auto induced = [&](int from, int to, const CoRMap& fu, const CoRMap& fv) {
        CoRMap m;
        for (Idx i = 0; i < u.levels[from].size(); ++i)
            for (Idx j = 0; j < v.levels[from].size(); ++j) {
                const auto& s = sq[from][pair_index(from, i, j)];
                Idx t = pair_index(to, fu.to[i], fv.to[j]);
                auto x = site.factor(sq[to][t], cat.compose_checked(fu.via[i], s.p), cat.compose_checked(fv.via[j], s.q));
                if (!x) throw InternalError("fiber product structure map does not factor");
                m.to.push_back(t);
                m.via.push_back(*x);
            }
        return m;
    };
    w.faces.emplace_back();
    for (int n = 1; n <= d; ++n) {
        std::vector<CoRMap> fs;
        for (int i = 0; i <= n; ++i) fs.push_back(induced(n, n - 1, u.faces[n][i], v.faces[n][i]));
        w.faces.push_back(fs);
    }
    for (int n = 0; n < d; ++n) {
        std::vector<CoRMap> ds;
        for (int i = 0; i <= n; ++i) ds.push_back(induced(n, n + 1, u.degens[n][i], v.degens[n][i]));
        w.degens.push_back(ds);
    }
    for (Idx k = 0; k < w.levels[0].size(); ++k) {
        w.aug.to.push_back(0);
        w.aug.via.push_back(cat.compose_checked(u.aug.via[fp.first.levels[0].to[k]], fp.first.levels[0].via[k]));
    }
    return fp;
}

}  // namespace descente
