#include "descente/split_builder.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "descente/errors.hpp"

namespace descente {

SplitBuilder::SplitBuilder(const VerdierSite& site, const AugSimplicialCoR& target, std::optional<LiftProblem> lift)
    : site_(&site), u_(&target), lp_(lift), ru_(site.cat(), target) {
    v_.base = target.base;
    v_.trunc = -1;
}

const MatchingObject& SplitBuilder::target_matching(int n) {
    auto it = mu_.find(n);
    if (it == mu_.end()) it = mu_.emplace(n, matching_object(site_->cat(), ru_, n)).first;
    return it->second;
}

Idx SplitBuilder::apply_source_surjection(const std::vector<int>& s, Idx obj, Idx x) const {
    const auto& F = *lp_->source;
    int level = s.back();
    for (std::size_t p = 0; p + 1 < s.size(); ++p) {
        if (s[p] != s[p + 1]) continue;
        x = F.degens[level][p].at[obj][x];
        ++level;
    }
    return x;
}

namespace {

std::vector<int> compose_surj(const std::vector<int>& outer, const std::vector<int>& inner) {
    std::vector<int> r;
    for (int v : inner) r.push_back(outer[v]);
    return r;
}

std::vector<int> codegeneracy(int n, int i) {
    // sigma_i: [n] -> [n-1], hitting i twice.
    std::vector<int> s;
    for (int p = 0; p <= n; ++p) s.push_back(p <= i ? p : p - 1);
    return s;
}

}  // namespace

void SplitBuilder::build_level(CoverMode mode, const Chooser& chooser) {
    const auto& cat = site_->cat();
    const int n = levels_built();
    if (n > u_->trunc) throw InvalidInput("insufficient truncation of the hypercover being refined");
    if (lp_ && n > lp_->source->trunc) throw InvalidInput("insufficient truncation of the lifting source");
    const std::size_t O = cat.num_objects();

    // Degenerate part L_n V with its faces, refinement and lifts.
    struct Pending {
        Idx object;
        SplitTag tag;
        std::vector<std::pair<Idx, Idx>> faces;  // (summand of level n-1, via)
        std::pair<Idx, Idx> refine;
        Idx lift = npos;
        Idx aug = npos;
    };
    std::vector<Pending> latch;
    for (int m = 0; m < n; ++m)
        for (const auto& s : surjections(n, m))
            for (Idx j : nondeg_[m]) {
                Pending p;
                p.object = v_.levels[m].summands[j];
                p.tag = {s, j};
                for (int i = 0; i <= n; ++i) {
                    std::vector<int> t;
                    for (int q = 0; q <= n; ++q)
                        if (q != i) t.push_back(s[q]);
                    bool repeated = (i > 0 && s[i - 1] == s[i]) || (i < n && s[i + 1] == s[i]);
                    if (repeated) {
                        p.faces.emplace_back(tag_index_[n - 1].at({t, j}), cat.identity(p.object));
                    } else {
                        int v = s[i];
                        for (int& val : t)
                            if (val > v) --val;
                        const auto& fm = v_.faces[m][v];
                        Idx jp = fm.to[j];
                        const SplitTag& inner = tags_[m - 1][jp];
                        p.faces.emplace_back(tag_index_[n - 1].at({compose_surj(inner.surj, t), inner.source}),
                                             fm.via[j]);
                    }
                }
                auto [k, w] = apply_surjection(cat, *u_, s, r_[m].to[j]);
                p.refine = {k, cat.compose_checked(w, r_[m].via[j])};
                if (lp_) p.lift = apply_source_surjection(s, p.object, lift_[m][j]);
                latch.push_back(std::move(p));
            }

    // Provisional object with level n = L_n V, used for the matching object.
    AugSimplicialCoR t = v_;
    t.trunc = n;
    CoR lcor;
    for (const auto& p : latch) lcor.summands.push_back(p.object);
    t.levels.push_back(lcor);
    if (n == 0) {
        t.faces.emplace_back();
    } else {
        std::vector<CoRMap> fs(n + 1);
        for (const auto& p : latch)
            for (int i = 0; i <= n; ++i) {
                fs[i].to.push_back(p.faces[i].first);
                fs[i].via.push_back(p.faces[i].second);
            }
        t.faces.push_back(fs);
        std::vector<CoRMap> ds(n);
        for (int i = 0; i < n; ++i)
            for (Idx a = 0; a < v_.levels[n - 1].size(); ++a) {
                const SplitTag& tg = tags_[n - 1][a];
                Idx idx = std::find_if(latch.begin(), latch.end(), [&](const Pending& p) {
                              return p.tag.source == tg.source && p.tag.surj == compose_surj(tg.surj, codegeneracy(n, i));
                          }) - latch.begin();
                ds[i].to.push_back(idx);
                ds[i].via.push_back(cat.identity(v_.levels[n - 1].summands[a]));
            }
        t.degens.push_back(ds);
    }
    RealizedSimplicial rv(cat, t);
    MatchingObject mv = matching_object(cat, rv, n);
    const SetPresheaf& M = mv.m.presheaf;
    const MatchingObject& mu = target_matching(n);
    SubsetComplex bshape = boundary_shape(n);

    // Refinement of matching objects, M_n V -> M_n U, and target sections by matching image.
    std::vector<std::vector<Idx>> rM(O);
    std::vector<std::map<Idx, std::vector<Idx>>> over(O);
    for (Idx y = 0; y < O; ++y) {
        for (const auto& tup : mv.m.elements[y]) {
            std::vector<Idx> img(tup.size());
            img[0] = tup[0];
            for (Idx s = 0; s < bshape.sset().num_nondeg(); ++s) {
                int k = bshape.sset().nondeg_dim(s);
                auto [a, h] = rv.level(k).element(y, tup[1 + s]);
                img[1 + s] = ru_.level(k).index(y, r_[k].to[a], cat.compose_checked(r_[k].via[a], h));
            }
            rM[y].push_back(mu.m.find(y, img));
        }
        for (Idx e = 0; e < ru_.count(n, y); ++e) over[y][mu.map->at[y][e]].push_back(e);
    }

    // Lift of a section of V_{n-1} to F_{n-1}.
    auto lower_lift = [&](Idx y, Idx e) {
        auto [a, h] = rv.level(n - 1).element(y, e);
        return lp_->source->levels[n - 1].restrict[h][lift_[n - 1][a]];
    };
    // First (u, x) over section m of M_n V at y, if any.
    auto first_lift = [&](Idx y, Idx m) -> std::optional<std::pair<Idx, Idx>> {
        auto it = over[y].find(rM[y][m]);
        if (it == over[y].end()) return std::nullopt;
        for (Idx u : it->second) {
            if (!lp_) return std::make_pair(u, npos);
            const auto& F = *lp_->source;
            Idx gu = lp_->g->levels[n].at[y][u];
            const auto& tup = mv.m.elements[y][m];
            for (Idx x = 0; x < F.levels[n].card[y]; ++x) {
                if (lp_->f->levels[n].at[y][x] != gu) continue;
                bool ok = true;
                for (int i = 0; n >= 1 && i <= n && ok; ++i) {
                    auto f = identity_surjection(n);
                    f.erase(f.begin() + i);
                    Idx e = tup[1 + *bshape.find(f)];
                    ok = F.faces[n][i].at[y][x] == lower_lift(y, e);
                }
                if (ok) return std::make_pair(u, x);
            }
        }
        return std::nullopt;
    };

    std::vector<std::vector<char>> image(O);
    for (Idx y = 0; y < O; ++y) image[y].assign(M.card[y], 0);
    auto mark = [&](Idx obj, Idx m) {
        for (Idx y = 0; y < O; ++y)
            for (Idx k : cat.hom(y, obj)) image[y][M.restrict[k][m]] = 1;
    };
    auto covered = [&](Idx y, Idx m) {
        Sieve s{y, {}};
        for (Idx h : cat.into(y))
            if (image[cat.src(h)][M.restrict[h][m]]) s.members.push_back(h);
        return is_covering_sieve(*site_, s);
    };
    for (Idx a = 0; a < latch.size(); ++a) {
        Idx obj = latch[a].object;
        mark(obj, mv.map->at[obj][rv.level(n).index(obj, a, cat.identity(obj))]);
    }

    struct NewSummand {
        Idx object, m, u, x;
    };
    std::vector<NewSummand> z;
    std::set<std::tuple<Idx, Idx, Idx, Idx>> seen;
    const std::size_t budget = enumeration_budget();
    std::size_t ordinal = 0;
    auto lifts_along = [&](Idx h, Idx m) { return first_lift(cat.src(h), M.restrict[h][m]).has_value(); };
    auto cover_section = [&](Idx y, Idx m) {
        if (covered(y, m)) return;
        std::optional<Idx> fam;
        if (chooser) {
            fam = chooser(y, ordinal++);
            if (fam) {
                const auto& members = site_->closed_families(y).at(*fam).members;
                if (!std::all_of(members.begin(), members.end(), [&](Idx h) { return lifts_along(h, m); }))
                    throw InvalidInput("chosen family on " + cat.object_id(y) + " does not lift");
            }
        }
        if (!fam) fam = site_->first_family_within(y, [&](Idx h) { return lifts_along(h, m); });
        if (!fam) {
            throw InvalidInput(std::string(lp_ ? "not a local acyclic fibration" : "not a hypercover") + " at level " +
                               std::to_string(n) + ": section " + std::to_string(m) + " of the matching object at " +
                               cat.object_id(y) + " has no covering family of lifts");
        }
        for (Idx h : site_->closed_families(y)[*fam].members) {
            Idx src = cat.src(h), mh = M.restrict[h][m];
            auto l = *first_lift(src, mh);
            if (!seen.insert({src, mh, l.first, l.second}).second) continue;
            z.push_back({src, mh, l.first, l.second});
            if (z.size() + latch.size() > budget) throw GuardExceeded("split refinement exceeds enumeration budget");
            mark(src, mh);
        }
    };

    if (mode == CoverMode::Elementwise) {
        std::vector<Idx> order(O);
        std::iota(order.begin(), order.end(), Idx{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Idx a, Idx b) { return cat.into(a).size() > cat.into(b).size(); });
        for (Idx y : order)
            for (Idx m = 0; m < M.card[y]; ++m) cover_section(y, m);
    } else {
        CoRDecomposition dec = matching_object_cor(*site_, t, n);
        PresheafMap cmp = realization_comparison(cat, bshape.sset(), dec, rv, mv.m);
        RealizedCoR rd(cat, dec.cor);
        for (Idx p = 0; p < dec.cor.size(); ++p) {
            Idx obj = dec.cor.summands[p];
            cover_section(obj, cmp.at[obj][rd.index(obj, p, cat.identity(obj))]);
        }
    }

    // Assemble level n = Z ⊔ L.
    const Idx zs = z.size();
    CoR level;
    CoRMap refine;
    std::vector<Idx> lifts;
    std::vector<SplitTag> tags;
    std::vector<CoRMap> faces(n == 0 ? 0 : n + 1);
    std::map<SplitTag, Idx> tindex;
    for (Idx a = 0; a < zs; ++a) {
        const auto& s = z[a];
        level.summands.push_back(s.object);
        auto [b, h] = ru_.level(n).element(s.object, s.u);
        refine.to.push_back(b);
        refine.via.push_back(h);
        lifts.push_back(s.x);
        tags.push_back({identity_surjection(n), a});
        const auto& tup = mv.m.elements[s.object][s.m];
        if (n == 0) {
            v_.aug.to.push_back(0);
            v_.aug.via.push_back(tup[0]);
        } else {
            for (int i = 0; i <= n; ++i) {
                auto f = identity_surjection(n);
                f.erase(f.begin() + i);
                auto [fa, fh] = rv.level(n - 1).element(s.object, tup[1 + *bshape.find(f)]);
                faces[i].to.push_back(fa);
                faces[i].via.push_back(fh);
            }
        }
    }
    for (const auto& p : latch) {
        level.summands.push_back(p.object);
        refine.to.push_back(p.refine.first);
        refine.via.push_back(p.refine.second);
        lifts.push_back(p.lift);
        tags.push_back(p.tag);
        for (int i = 0; i <= n; ++i) {
            faces[i].to.push_back(p.faces[i].first);
            faces[i].via.push_back(p.faces[i].second);
        }
    }
    for (Idx a = 0; a < tags.size(); ++a) tindex[tags[a]] = a;

    v_.levels.push_back(level);
    v_.faces.push_back(faces);
    if (n > 0) {
        auto ds = t.degens.back();
        for (auto& d : ds)
            for (Idx& to : d.to) to += zs;
        v_.degens.push_back(ds);
    }
    v_.trunc = n;
    r_.push_back(refine);
    lift_.push_back(lifts);
    tags_.push_back(tags);
    tag_index_.push_back(tindex);
    std::vector<Idx> nd(zs);
    std::iota(nd.begin(), nd.end(), Idx{0});
    nondeg_.push_back(nd);
}

}  // namespace descente
