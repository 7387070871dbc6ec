#include "descente/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "descente/errors.hpp"

namespace descente {

std::string SetPresheaf::name(Idx o, Idx s) const {
    if (o < names.size() && s < names[o].size()) return names[o][s];
    return "s" + std::to_string(s);
}

ValidationReport validate_presheaf(const FiniteCategory& cat, const SetPresheaf& f) {
    ValidationReport r;
    if (f.card.size() != cat.num_objects() || f.restrict.size() != cat.num_morphisms()) {
        r.add("presheaf shape does not match the category");
        return r;
    }
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        const auto& map = f.restrict[m];
        if (map.size() != f.card[cat.dst(m)]) {
            r.add("restriction along " + cat.morphism_id(m) + " has the wrong domain size");
            continue;
        }
        for (Idx v : map)
            if (v >= f.card[cat.src(m)]) {
                r.add("restriction along " + cat.morphism_id(m) + " leaves the section set");
                break;
            }
    }
    if (!r.ok()) return r;
    for (Idx o = 0; o < cat.num_objects(); ++o) {
        const auto& id = f.restrict[cat.identity(o)];
        for (Idx s = 0; s < id.size(); ++s)
            if (id[s] != s) {
                r.add("identity of " + cat.object_id(o) + " does not restrict to the identity");
                break;
            }
    }
    for (Idx g = 0; g < cat.num_morphisms(); ++g)
        for (Idx h : cat.into(cat.src(g))) {
            Idx gh = cat.compose(g, h);
            for (Idx s = 0; s < f.card[cat.dst(g)]; ++s)
                if (f.restrict[gh][s] != f.restrict[h][f.restrict[g][s]]) {
                    r.add("restriction is not functorial on (" + cat.morphism_id(g) + ", " + cat.morphism_id(h) + ")");
                    break;
                }
        }
    return r;
}

bool is_natural(const FiniteCategory& cat, const SetPresheaf& e, const SetPresheaf& b, const PresheafMap& m) {
    if (m.at.size() != cat.num_objects()) return false;
    for (Idx o = 0; o < cat.num_objects(); ++o)
        if (m.at[o].size() != e.card[o]) return false;
    for (Idx k = 0; k < cat.num_morphisms(); ++k) {
        Idx z = cat.src(k), y = cat.dst(k);
        for (Idx s = 0; s < e.card[y]; ++s)
            if (m.at[z][e.restrict[k][s]] != b.restrict[k][m.at[y][s]]) return false;
    }
    return true;
}

PresheafMap identity_map(const SetPresheaf& f) {
    PresheafMap m;
    for (std::size_t c : f.card) {
        std::vector<Idx> id(c);
        std::iota(id.begin(), id.end(), Idx{0});
        m.at.push_back(std::move(id));
    }
    return m;
}

PresheafMap compose(const PresheafMap& g, const PresheafMap& f) {
    PresheafMap r;
    r.at.resize(f.at.size());
    for (Idx o = 0; o < f.at.size(); ++o)
        for (Idx v : f.at[o]) r.at[o].push_back(g.at[o][v]);
    return r;
}

bool is_pointwise_bijective(const SetPresheaf& e, const SetPresheaf& b, const PresheafMap& m) {
    for (Idx o = 0; o < e.card.size(); ++o) {
        if (e.card[o] != b.card[o]) return false;
        std::vector<char> hit(b.card[o], 0);
        for (Idx v : m.at[o]) {
            if (hit[v]) return false;
            hit[v] = 1;
        }
    }
    return true;
}

RealizedCoR::RealizedCoR(const FiniteCategory& cat, const CoR& p) : cat_(&cat), p_(p) {
    const std::size_t O = cat.num_objects();
    offset_.assign(O, std::vector<Idx>(p.size(), 0));
    elems_.assign(O, {});
    for (Idx y = 0; y < O; ++y)
        for (Idx i = 0; i < p.size(); ++i) {
            offset_[y][i] = elems_[y].size();
            for (Idx h : cat.hom(y, p.summands[i])) elems_[y].emplace_back(i, h);
        }
}

Idx RealizedCoR::restrict(Idx k, Idx e) const {
    auto [i, h] = elems_[cat_->dst(k)][e];
    return index(cat_->src(k), i, cat_->compose_checked(h, k));
}

SetPresheaf RealizedCoR::presheaf() const {
    SetPresheaf f;
    const auto& cat = *cat_;
    for (Idx y = 0; y < cat.num_objects(); ++y) {
        f.card.push_back(elems_[y].size());
        std::vector<std::string> nm;
        for (auto [i, h] : elems_[y]) nm.push_back(std::to_string(i) + ":" + cat.morphism_id(h));
        f.names.push_back(std::move(nm));
    }
    for (Idx k = 0; k < cat.num_morphisms(); ++k) {
        std::vector<Idx> map;
        for (Idx e = 0; e < elems_[cat.dst(k)].size(); ++e) map.push_back(restrict(k, e));
        f.restrict.push_back(std::move(map));
    }
    return f;
}

SetPresheaf realize_cor(const FiniteCategory& cat, const CoR& p) {
    for (Idx s : p.summands)
        if (s >= cat.num_objects()) throw InvalidInput("unknown object in coproduct of representables");
    return RealizedCoR(cat, p).presheaf();
}

PresheafMap realize_map(const FiniteCategory& cat, const CoR& p, const CoR& q, const CoRMap& f) {
    RealizedCoR rp(cat, p), rq(cat, q);
    PresheafMap m;
    m.at.resize(cat.num_objects());
    for (Idx y = 0; y < cat.num_objects(); ++y)
        for (Idx e = 0; e < rp.count(y); ++e) {
            auto [i, h] = rp.element(y, e);
            m.at[y].push_back(rq.index(y, f.to[i], cat.compose_checked(f.via[i], h)));
        }
    return m;
}

namespace {

std::vector<std::vector<char>> image_sets(const SetPresheaf& b, const PresheafMap& m) {
    std::vector<std::vector<char>> img(b.card.size());
    for (Idx o = 0; o < b.card.size(); ++o) {
        img[o].assign(b.card[o], 0);
        for (Idx v : m.at[o]) img[o][v] = 1;
    }
    return img;
}

}  // namespace

std::vector<Idx> lifting_sieve(const FiniteCategory& cat, const SetPresheaf&, const SetPresheaf& b,
                               const PresheafMap& m, Idx x, Idx section) {
    auto img = image_sets(b, m);
    std::vector<Idx> r;
    for (Idx h : cat.into(x))
        if (img[cat.src(h)][b.restrict[h][section]]) r.push_back(h);
    return r;
}

GenCoverReport is_generalized_cover(const VerdierSite& site, const SetPresheaf&, const SetPresheaf& b,
                                    const PresheafMap& m, bool keep_witnesses) {
    const auto& cat = site.cat();
    auto img = image_sets(b, m);
    GenCoverReport rep;
    for (Idx x = 0; x < cat.num_objects(); ++x) {
        const auto& into = cat.into(x);
        std::vector<char> lifts(cat.num_morphisms(), 0);
        for (Idx s = 0; s < b.card[x]; ++s) {
            ++rep.sections_checked;
            for (Idx h : into) lifts[h] = img[cat.src(h)][b.restrict[h][s]];
            auto fam = site.first_family_within(x, [&](Idx h) { return lifts[h] != 0; });
            if (fam && !keep_witnesses) continue;
            SectionWitness w;
            w.object = x;
            w.section = s;
            w.covers = fam.has_value();
            w.family = fam;
            for (Idx h : into)
                if (lifts[h]) w.lifting_sieve.push_back(h);
            if (!fam) {
                rep.ok = false;
                if (!rep.first_failure) rep.first_failure = w;
            }
            if (keep_witnesses) rep.witnesses.push_back(std::move(w));
        }
    }
    return rep;
}

namespace {

struct UnionFind {
    std::vector<Idx> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), Idx{0}); }
    Idx find(Idx a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(Idx a, Idx b) {
        a = find(a);
        b = find(b);
        if (a < b) std::swap(a, b);
        if (a != b) parent[a] = b;
    }
};

}  // namespace

QuotientResult apply_A(const VerdierSite& site, const SetPresheaf& f) {
    const auto& cat = site.cat();
    const std::size_t O = cat.num_objects();
    QuotientResult res;
    res.map.at.resize(O);
    std::vector<std::vector<Idx>> reps(O);
    for (Idx x = 0; x < O; ++x) {
        UnionFind uf(f.card[x]);
        std::vector<char> agree(cat.num_morphisms(), 0);
        for (Idx s = 0; s < f.card[x]; ++s)
            for (Idx t = s + 1; t < f.card[x]; ++t) {
                if (uf.find(s) == uf.find(t)) continue;
                for (Idx h : cat.into(x)) agree[h] = f.restrict[h][s] == f.restrict[h][t];
                if (site.first_family_within(x, [&](Idx h) { return agree[h] != 0; })) uf.unite(s, t);
            }
        std::vector<Idx> cls(f.card[x], npos);
        for (Idx s = 0; s < f.card[x]; ++s) {
            Idx root = uf.find(s);
            if (cls[root] == npos) {
                cls[root] = reps[x].size();
                reps[x].push_back(s);
            }
            res.map.at[x].push_back(cls[root]);
        }
        res.result.card.push_back(reps[x].size());
        std::vector<std::string> nm;
        for (Idx s : reps[x]) nm.push_back("[" + f.name(x, s) + "]");
        res.result.names.push_back(std::move(nm));
    }
    for (Idx k = 0; k < cat.num_morphisms(); ++k) {
        std::vector<Idx> map;
        for (Idx s : reps[cat.dst(k)]) map.push_back(res.map.at[cat.src(k)][f.restrict[k][s]]);
        res.result.restrict.push_back(std::move(map));
    }
    return res;
}

std::vector<Sieve> covering_sieves(const VerdierSite& site, Idx x) {
    const auto& cat = site.cat();
    const auto& into = cat.into(x);
    const std::size_t n = into.size();
    std::vector<Idx> pos(cat.num_morphisms(), npos);
    for (Idx i = 0; i < n; ++i) pos[into[i]] = i;
    std::vector<std::vector<Idx>> below(n), above(n);
    for (Idx i = 0; i < n; ++i)
        for (Idx k : cat.into(cat.src(into[i]))) {
            Idx j = pos[cat.compose_checked(into[i], k)];
            if (j != i) {
                below[i].push_back(j);
                above[j].push_back(i);
            }
        }
    std::vector<Sieve> out;
    const std::size_t budget = enumeration_budget();
    std::size_t nodes = 0;
    std::vector<int> state(n, 0);  // 0 unknown, 1 in, -1 out
    std::function<void()> rec = [&]() {
        if (++nodes > budget) throw GuardExceeded("covering sieve enumeration exceeds enumeration budget");
        Idx i = 0;
        while (i < n && state[i] != 0) ++i;
        if (i == n) {
            Sieve s{x, {}};
            for (Idx j = 0; j < n; ++j)
                if (state[j] == 1) s.members.push_back(into[j]);
            if (is_covering_sieve(site, s)) out.push_back(std::move(s));
            return;
        }
        for (int choice : {1, -1}) {
            std::vector<int> saved = state;
            std::vector<Idx> stack{i};
            bool ok = true;
            while (ok && !stack.empty()) {
                Idx j = stack.back();
                stack.pop_back();
                if (state[j] == choice) continue;
                if (state[j] == -choice) {
                    ok = false;
                    break;
                }
                state[j] = choice;
                for (Idx k : (choice == 1 ? below[j] : above[j])) stack.push_back(k);
            }
            if (ok) rec();
            state = std::move(saved);
        }
    };
    rec();
    std::sort(out.begin(), out.end(), [](const Sieve& a, const Sieve& b) { return a.members < b.members; });
    return out;
}

std::vector<std::vector<Idx>> matching_families(const FiniteCategory& cat, const SetPresheaf& f, const Sieve& r) {
    const auto& mem = r.members;
    const std::size_t n = mem.size();
    std::vector<Idx> pos(cat.num_morphisms(), npos);
    for (Idx i = 0; i < n; ++i) pos[mem[i]] = i;
    // Constraint (i, k, j): phi[j] = F(k)(phi[i]) where mem[j] = mem[i] o k.
    struct Link {
        Idx other, k;
        bool forward;
    };
    std::vector<std::vector<Link>> links(n);
    for (Idx i = 0; i < n; ++i)
        for (Idx k : cat.into(cat.src(mem[i]))) {
            Idx j = pos[cat.compose_checked(mem[i], k)];
            if (j == npos) throw InvalidInput("sieve is not closed under precomposition");
            links[i].push_back({j, k, true});
            links[j].push_back({i, k, false});
        }
    // Assign larger domains first so that most members are forced.
    std::vector<Idx> order(n);
    std::iota(order.begin(), order.end(), Idx{0});
    std::stable_sort(order.begin(), order.end(), [&](Idx a, Idx b) {
        return cat.into(cat.src(mem[a])).size() > cat.into(cat.src(mem[b])).size();
    });
    std::vector<std::vector<Idx>> out;
    std::vector<Idx> phi(n, npos);
    const std::size_t budget = enumeration_budget();
    std::size_t nodes = 0;
    std::function<void(Idx)> rec = [&](Idx t) {
        if (++nodes > budget) throw GuardExceeded("matching family enumeration exceeds enumeration budget");
        if (t == n) {
            out.push_back(phi);
            return;
        }
        Idx i = order[t];
        for (Idx s = 0; s < f.card[cat.src(mem[i])]; ++s) {
            bool ok = true;
            for (const auto& l : links[i]) {
                if (phi[l.other] == npos && l.other != i) continue;
                Idx other_val = l.other == i ? s : phi[l.other];
                if (l.forward) {
                    if (f.restrict[l.k][s] != other_val) ok = false;
                } else {
                    if (f.restrict[l.k][other_val] != s) ok = false;
                }
                if (!ok) break;
            }
            if (!ok) continue;
            phi[i] = s;
            rec(t + 1);
            phi[i] = npos;
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

QuotientResult apply_B(const VerdierSite& site, const SetPresheaf& f) {
    const auto& cat = site.cat();
    const std::size_t O = cat.num_objects();
    struct Index {
        Idx x;
        Sieve r;
        std::vector<Idx> phi;
        std::vector<Idx> slot;  // position of each morphism into x within r, or npos
    };
    std::vector<Index> indices;
    for (Idx x = 0; x < O; ++x)
        for (auto& r : covering_sieves(site, x)) {
            std::vector<Idx> slot(cat.num_morphisms(), npos);
            for (Idx i = 0; i < r.members.size(); ++i) slot[r.members[i]] = i;
            for (auto& phi : matching_families(cat, f, r)) indices.push_back({x, r, std::move(phi), slot});
        }

    QuotientResult res;
    res.map = identity_map(f);
    // table[y][i][hom position of u] = section id of (i, u), or npos when u lies in the sieve.
    std::vector<std::vector<std::vector<Idx>>> table(O);
    for (Idx y = 0; y < O; ++y) {
        std::size_t next = f.card[y];
        std::vector<std::string> nm;
        for (Idx s = 0; s < f.card[y]; ++s) nm.push_back(f.name(y, s));
        table[y].resize(indices.size());
        for (Idx i = 0; i < indices.size(); ++i) {
            const auto& hom = cat.hom(y, indices[i].x);
            table[y][i].assign(hom.size(), npos);
            for (Idx p = 0; p < hom.size(); ++p)
                if (indices[i].slot[hom[p]] == npos) {
                    table[y][i][p] = next++;
                    nm.push_back("glue" + std::to_string(i) + ":" + cat.morphism_id(hom[p]));
                }
        }
        res.result.card.push_back(next);
        res.result.names.push_back(std::move(nm));
    }
    for (Idx k = 0; k < cat.num_morphisms(); ++k) {
        Idx z = cat.src(k), y = cat.dst(k);
        std::vector<Idx> map(res.result.card[y], npos);
        for (Idx s = 0; s < f.card[y]; ++s) map[s] = f.restrict[k][s];
        for (Idx i = 0; i < indices.size(); ++i) {
            const auto& hom = cat.hom(y, indices[i].x);
            for (Idx p = 0; p < hom.size(); ++p) {
                Idx id = table[y][i][p];
                if (id == npos) continue;
                Idx uk = cat.compose_checked(hom[p], k);
                Idx sl = indices[i].slot[uk];
                map[id] = sl != npos ? indices[i].phi[sl] : table[z][i][cat.hom_position(uk)];
            }
        }
        res.result.restrict.push_back(std::move(map));
    }
    return res;
}

QuotientResult sheafify(const VerdierSite& site, const SetPresheaf& f) {
    QuotientResult cur{f, identity_map(f)};
    for (int round = 0; round < 2; ++round) {
        auto b = apply_B(site, cur.result);
        auto a = apply_A(site, b.result);
        cur.map = compose(a.map, compose(b.map, cur.map));
        cur.result = std::move(a.result);
    }
    return cur;
}

std::string to_string(SheafStatus s) {
    switch (s) {
        case SheafStatus::Sheaf: return "sheaf";
        case SheafStatus::SeparatedOnly: return "separated-only";
        case SheafStatus::Neither: return "neither";
    }
    return "neither";
}

SheafStatusReport sheaf_status(const VerdierSite& site, const SetPresheaf& f) {
    const auto& cat = site.cat();
    SheafStatusReport rep;
    std::optional<SheafStatusReport> not_glue;
    for (Idx x = 0; x < cat.num_objects(); ++x) {
        for (const auto& fam : site.closed_families(x)) {
            const auto& mem = fam.members;
            const std::size_t n = mem.size();
            std::vector<std::vector<PullbackSquare>> sq(n, std::vector<PullbackSquare>(n));
            for (Idx a = 0; a < n; ++a)
                for (Idx b = 0; b < n; ++b) {
                    auto s = site.pullback(mem[a], mem[b]);
                    if (!s)
                        throw InvalidInput("pullback required for sheaf condition: (" + cat.morphism_id(mem[a]) +
                                           ", " + cat.morphism_id(mem[b]) + ")");
                    sq[a][b] = *s;
                }
            std::map<std::vector<Idx>, Idx> image;
            bool separated = true;
            for (Idx s = 0; s < f.card[x]; ++s) {
                std::vector<Idx> v;
                for (Idx m : mem) v.push_back(f.restrict[m][s]);
                if (!image.emplace(v, s).second) separated = false;
            }
            std::string names;
            for (Idx m : mem) names += (names.empty() ? "" : ", ") + cat.morphism_id(m);
            if (!separated) {
                rep.status = SheafStatus::Neither;
                rep.offending = fam;
                rep.detail = "restriction to {" + names + "} on " + cat.object_id(x) + " is not injective";
                return rep;
            }
            if (not_glue) continue;
            // Count matching families and compare with the image.
            std::vector<Idx> pick(n, 0);
            std::size_t count = 0;
            std::function<bool(Idx)> rec = [&](Idx a) -> bool {
                if (a == n) {
                    ++count;
                    return image.count(pick) == 0;
                }
                for (Idx s = 0; s < f.card[cat.src(mem[a])]; ++s) {
                    pick[a] = s;
                    bool ok = true;
                    for (Idx b = 0; b <= a && ok; ++b) {
                        const auto& q = sq[a][b];
                        ok = f.restrict[q.p][pick[a]] == f.restrict[q.q][pick[b]];
                    }
                    if (ok && rec(a + 1)) return true;
                }
                return false;
            };
            if (rec(0)) {
                SheafStatusReport r2;
                r2.status = SheafStatus::SeparatedOnly;
                r2.offending = fam;
                r2.detail = "a matching family on {" + names + "} over " + cat.object_id(x) + " does not glue";
                not_glue = r2;
            }
        }
    }
    if (not_glue) return *not_glue;
    return rep;
}

namespace {

struct CechLevel {
    std::vector<Idx> object, leg;
    std::vector<PullbackSquare> square;  // extends the prefix tuple (unused at level 0)
};

}  // namespace

AugSimplicialCoR cech_complex(const VerdierSite& site, const CoR& source, const CoRMap& to_base, Idx base, int d) {
    const auto& cat = site.cat();
    if (auto e = check_cor_map(cat, source, representable(base), to_base); !e.empty())
        throw InvalidInput("Cech input map: " + e);
    const std::size_t k = source.size();
    std::vector<CechLevel> lv(d + 1);
    std::vector<std::size_t> count(d + 1);
    for (int n = 0; n <= d; ++n) {
        count[n] = n == 0 ? k : count[n - 1] * k;
        if (count[n] > enumeration_budget()) throw GuardExceeded("Cech complex exceeds enumeration budget");
    }
    for (Idx t = 0; t < k; ++t) {
        lv[0].object.push_back(source.summands[t]);
        lv[0].leg.push_back(to_base.via[t]);
        lv[0].square.push_back({});
    }
    for (int n = 1; n <= d; ++n)
        for (Idx t = 0; t < count[n]; ++t) {
            Idx prefix = t / k, last = t % k;
            auto sq = site.require_pullback(lv[n - 1].leg[prefix], to_base.via[last]);
            lv[n].object.push_back(sq.apex);
            lv[n].leg.push_back(cat.compose_checked(lv[n - 1].leg[prefix], sq.p));
            lv[n].square.push_back(sq);
        }
    auto digits = [&](int n, Idx t) {
        std::vector<Idx> dg(n + 1);
        for (int i = n; i >= 0; --i) {
            dg[i] = t % k;
            t /= k;
        }
        return dg;
    };
    auto encode = [&](const std::vector<Idx>& dg) {
        Idx t = 0;
        for (Idx v : dg) t = t * k + v;
        return t;
    };
    // Projections of tuple t at level n onto its coordinates.
    auto projections = [&](int n, Idx t) {
        std::vector<Idx> pr(n + 1);
        Idx acc = cat.identity(lv[n].object[t]);
        for (int m = n; m >= 1; --m) {
            const auto& sq = lv[m].square[t];
            pr[m] = cat.compose_checked(sq.q, acc);
            acc = cat.compose_checked(sq.p, acc);
            t /= k;
        }
        pr[0] = acc;
        return pr;
    };
    auto factor_into = [&](int n, Idx t, const std::vector<Idx>& comps) {
        std::vector<Idx> prefixes(n + 1);
        Idx c = t;
        for (int m = n; m >= 0; --m) {
            prefixes[m] = c;
            c /= k;
        }
        Idx u = comps[0];
        for (int m = 1; m <= n; ++m) {
            auto f = site.factor(lv[m].square[prefixes[m]], u, comps[m]);
            if (!f) throw InternalError("Cech structure map does not factor through the iterated pullback");
            u = *f;
        }
        return u;
    };

    AugSimplicialCoR u;
    u.base = base;
    u.trunc = d;
    u.levels.resize(d + 1);
    u.faces.assign(d + 1, {});
    u.degens.assign(d, {});
    for (int n = 0; n <= d; ++n) u.levels[n].summands = lv[n].object;
    for (Idx t = 0; t < k; ++t) {
        u.aug.to.push_back(0);
        u.aug.via.push_back(to_base.via[t]);
    }
    for (int n = 1; n <= d; ++n) {
        u.faces[n].resize(n + 1);
        for (Idx t = 0; t < count[n]; ++t) {
            auto dg = digits(n, t);
            auto pr = projections(n, t);
            for (int i = 0; i <= n; ++i) {
                std::vector<Idx> ndg, comps;
                for (int j = 0; j <= n; ++j)
                    if (j != i) {
                        ndg.push_back(dg[j]);
                        comps.push_back(pr[j]);
                    }
                Idx target = encode(ndg);
                u.faces[n][i].to.push_back(target);
                u.faces[n][i].via.push_back(factor_into(n - 1, target, comps));
            }
        }
    }
    for (int n = 0; n < d; ++n) {
        u.degens[n].resize(n + 1);
        for (Idx t = 0; t < count[n]; ++t) {
            auto dg = digits(n, t);
            auto pr = projections(n, t);
            for (int i = 0; i <= n; ++i) {
                std::vector<Idx> ndg, comps;
                for (int j = 0; j <= n; ++j) {
                    ndg.push_back(dg[j]);
                    comps.push_back(pr[j]);
                    if (j == i) {
                        ndg.push_back(dg[j]);
                        comps.push_back(pr[j]);
                    }
                }
                Idx target = encode(ndg);
                u.degens[n][i].to.push_back(target);
                u.degens[n][i].via.push_back(factor_into(n + 1, target, comps));
            }
        }
    }
    return u;
}

AugSimplicialCoR cech_complex(const VerdierSite& site, const CoveringFamily& family, int d) {
    const auto& cat = site.cat();
    CoR src;
    CoRMap map;
    for (Idx m : family.members) {
        src.summands.push_back(cat.src(m));
        map.to.push_back(0);
        map.via.push_back(m);
    }
    return cech_complex(site, src, map, family.target, d);
}

SimplicialSetPresheaf realize_simplicial(const FiniteCategory& cat, const AugSimplicialCoR& u) {
    SimplicialSetPresheaf s;
    s.trunc = u.trunc;
    for (const auto& l : u.levels) s.levels.push_back(realize_cor(cat, l));
    s.faces.assign(u.trunc + 1, {});
    s.degens.assign(u.trunc, {});
    for (int n = 1; n <= u.trunc; ++n)
        for (const auto& f : u.faces[n]) s.faces[n].push_back(realize_map(cat, u.levels[n], u.levels[n - 1], f));
    for (int n = 0; n < u.trunc; ++n)
        for (const auto& f : u.degens[n]) s.degens[n].push_back(realize_map(cat, u.levels[n], u.levels[n + 1], f));
    return s;
}

SimplicialPresheafMap realize_augmentation(const FiniteCategory& cat, const AugSimplicialCoR& u) {
    SimplicialPresheafMap m;
    for (int n = 0; n <= u.trunc; ++n) {
        CoRMap leg;
        for (Idx j = 0; j < u.levels[n].size(); ++j) {
            leg.to.push_back(0);
            leg.via.push_back(summand_leg(cat, u, n, j));
        }
        m.levels.push_back(realize_map(cat, u.levels[n], representable(u.base), leg));
    }
    return m;
}

SimplicialSetPresheaf constant_simplicial(const SetPresheaf& f, int d) {
    SimplicialSetPresheaf s;
    s.trunc = d;
    s.levels.assign(d + 1, f);
    s.faces.assign(d + 1, {});
    s.degens.assign(d, {});
    for (int n = 1; n <= d; ++n) s.faces[n].assign(n + 1, identity_map(f));
    for (int n = 0; n < d; ++n) s.degens[n].assign(n + 1, identity_map(f));
    return s;
}

ValidationReport validate_simplicial(const FiniteCategory& cat, const SimplicialSetPresheaf& f) {
    ValidationReport r;
    for (int n = 0; n <= f.trunc; ++n) r.merge(validate_presheaf(cat, f.levels[n]));
    if (!r.ok()) return r;
    for (int n = 1; n <= f.trunc; ++n)
        for (int i = 0; i <= n; ++i)
            if (!is_natural(cat, f.levels[n], f.levels[n - 1], f.faces[n][i]))
                r.add("face d" + std::to_string(i) + " on level " + std::to_string(n) + " is not natural");
    for (int n = 0; n < f.trunc; ++n)
        for (int i = 0; i <= n; ++i)
            if (!is_natural(cat, f.levels[n], f.levels[n + 1], f.degens[n][i]))
                r.add("degeneracy s" + std::to_string(i) + " on level " + std::to_string(n) + " is not natural");
    if (!r.ok()) return r;
    auto eq = [](const PresheafMap& a, const PresheafMap& b) { return a.at == b.at; };
    for (int n = 2; n <= f.trunc; ++n)
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i)
                if (!eq(compose(f.faces[n - 1][i], f.faces[n][j]), compose(f.faces[n - 1][j - 1], f.faces[n][i])))
                    r.add("d_i d_j identity fails on level " + std::to_string(n));
    for (int n = 0; n < f.trunc; ++n) {
        auto id = identity_map(f.levels[n]);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n + 1; ++i) {
                auto lhs = compose(f.faces[n + 1][i], f.degens[n][j]);
                if (i == j || i == j + 1) {
                    if (!eq(lhs, id)) r.add("d_i s_j = id fails on level " + std::to_string(n));
                } else if (n >= 1) {
                    auto rhs = i < j ? compose(f.degens[n - 1][j - 1], f.faces[n][i])
                                     : compose(f.degens[n - 1][j], f.faces[n][i - 1]);
                    if (!eq(lhs, rhs)) r.add("mixed simplicial identity fails on level " + std::to_string(n));
                }
            }
    }
    for (int n = 0; n + 2 <= f.trunc; ++n)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= j; ++i)
                if (!eq(compose(f.degens[n + 1][i], f.degens[n][j]), compose(f.degens[n + 1][j + 1], f.degens[n][i])))
                    r.add("s_i s_j identity fails on level " + std::to_string(n));
    return r;
}

SimplicialSetPresheaf cech_pointwise(const FiniteCategory& cat, const SetPresheaf& f, const SetPresheaf& g,
                                     const PresheafMap& m, int d) {
    (void)g;
    const std::size_t O = cat.num_objects();
    SimplicialSetPresheaf s;
    s.trunc = d;
    std::vector<std::vector<std::map<std::vector<Idx>, Idx>>> index(d + 1, std::vector<std::map<std::vector<Idx>, Idx>>(O));
    std::vector<std::vector<std::vector<std::vector<Idx>>>> tuples(d + 1, std::vector<std::vector<std::vector<Idx>>>(O));
    for (int n = 0; n <= d; ++n) {
        SetPresheaf lvl;
        for (Idx y = 0; y < O; ++y) {
            std::vector<Idx> cur;
            std::function<void()> rec = [&]() {
                if (static_cast<int>(cur.size()) == n + 1) {
                    index[n][y][cur] = tuples[n][y].size();
                    tuples[n][y].push_back(cur);
                    return;
                }
                for (Idx x = 0; x < f.card[y]; ++x) {
                    if (!cur.empty() && m.at[y][x] != m.at[y][cur.front()]) continue;
                    cur.push_back(x);
                    rec();
                    cur.pop_back();
                }
            };
            rec();
            lvl.card.push_back(tuples[n][y].size());
        }
        for (Idx k = 0; k < cat.num_morphisms(); ++k) {
            std::vector<Idx> map;
            for (const auto& t : tuples[n][cat.dst(k)]) {
                std::vector<Idx> r;
                for (Idx x : t) r.push_back(f.restrict[k][x]);
                map.push_back(index[n][cat.src(k)].at(r));
            }
            lvl.restrict.push_back(std::move(map));
        }
        s.levels.push_back(std::move(lvl));
    }
    s.faces.assign(d + 1, {});
    s.degens.assign(d, {});
    for (int n = 1; n <= d; ++n)
        for (int i = 0; i <= n; ++i) {
            PresheafMap pm;
            pm.at.resize(O);
            for (Idx y = 0; y < O; ++y)
                for (const auto& t : tuples[n][y]) {
                    std::vector<Idx> r = t;
                    r.erase(r.begin() + i);
                    pm.at[y].push_back(index[n - 1][y].at(r));
                }
            s.faces[n].push_back(std::move(pm));
        }
    for (int n = 0; n < d; ++n)
        for (int i = 0; i <= n; ++i) {
            PresheafMap pm;
            pm.at.resize(O);
            for (Idx y = 0; y < O; ++y)
                for (const auto& t : tuples[n][y]) {
                    std::vector<Idx> r = t;
                    r.insert(r.begin() + i, t[i]);
                    pm.at[y].push_back(index[n + 1][y].at(r));
                }
            s.degens[n].push_back(std::move(pm));
        }
    return s;
}

}  // namespace descente
