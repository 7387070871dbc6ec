#include "descente/simplicial.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "descente/errors.hpp"

namespace descente {

std::vector<int> identity_surjection(int k) {
    std::vector<int> s(k + 1);
    std::iota(s.begin(), s.end(), 0);
    return s;
}

std::vector<std::vector<int>> surjections(int k, int m) {
    std::vector<std::vector<int>> out;
    if (m > k || m < 0) return out;
    std::vector<int> cur{0};
    std::function<void()> rec = [&]() {
        int p = static_cast<int>(cur.size());
        if (p == k + 1) {
            if (cur.back() == m) out.push_back(cur);
            return;
        }
        int last = cur.back();
        // Remaining positions must still be able to reach m.
        for (int step : {0, 1}) {
            int v = last + step;
            if (v > m || m - v > k - p) continue;
            cur.push_back(v);
            rec();
            cur.pop_back();
        }
    };
    rec();
    return out;
}

Idx FiniteSimplicialSet::add(int dim, std::vector<SimplexRef> faces) {
    if (dim < 0) throw InvalidInput("negative simplex dimension");
    if (dim == 0 ? !faces.empty() : static_cast<int>(faces.size()) != dim + 1)
        throw InvalidInput("simplex needs dim+1 faces");
    for (const auto& f : faces)
        if (f.nondeg >= dims_.size() || f.dim() != dim - 1 || f.surj.back() != dims_[f.nondeg])
            throw InvalidInput("simplex face refers to an unknown or ill-shaped simplex");
    dims_.push_back(dim);
    faces_.push_back(std::move(faces));
    max_dim_ = std::max(max_dim_, dim);
    return dims_.size() - 1;
}

std::vector<Idx> FiniteSimplicialSet::nondeg_of_dim(int k) const {
    std::vector<Idx> r;
    for (Idx s = 0; s < dims_.size(); ++s)
        if (dims_[s] == k) r.push_back(s);
    return r;
}

bool FiniteSimplicialSet::faces_nondegenerate() const {
    for (const auto& fs : faces_)
        for (const auto& f : fs)
            if (f.surj != identity_surjection(f.dim())) return false;
    return true;
}

SimplexRef FiniteSimplicialSet::as_simplex(Idx s) const { return {s, identity_surjection(dims_[s])}; }

SimplexRef FiniteSimplicialSet::face(const SimplexRef& x, int i) const {
    const auto& s = x.surj;
    const int k = x.dim();
    if (k < 1 || i < 0 || i > k) throw InvalidInput("face index out of range");
    bool repeated = (i > 0 && s[i - 1] == s[i]) || (i < k && s[i + 1] == s[i]);
    std::vector<int> t;
    for (int p = 0; p <= k; ++p)
        if (p != i) t.push_back(s[p]);
    if (repeated) return {x.nondeg, t};
    int v = s[i];
    for (int& val : t)
        if (val > v) --val;
    const SimplexRef& f = faces_[x.nondeg][v];
    std::vector<int> r;
    for (int val : t) r.push_back(f.surj[val]);
    return {f.nondeg, r};
}

SimplexRef FiniteSimplicialSet::degen(const SimplexRef& x, int i) const {
    std::vector<int> s = x.surj;
    s.insert(s.begin() + i, x.surj[i]);
    return {x.nondeg, s};
}

std::vector<SimplexRef> FiniteSimplicialSet::simplices(int k) const {
    std::vector<SimplexRef> r;
    for (Idx s = 0; s < dims_.size(); ++s)
        for (auto& surj : surjections(k, dims_[s])) r.push_back({s, surj});
    return r;
}

ValidationReport FiniteSimplicialSet::validate(int upto) const {
    ValidationReport r;
    for (int k = 1; k <= upto; ++k) {
        for (const auto& x : simplices(k)) {
            for (int j = 1; j <= k && k >= 2; ++j)
                for (int i = 0; i < j; ++i)
                    if (!(face(face(x, j), i) == face(face(x, i), j - 1))) r.add("d_i d_j identity fails");
            for (int j = 0; j <= k; ++j) {
                SimplexRef y = degen(x, j);
                for (int i = 0; i <= k + 1; ++i) {
                    SimplexRef lhs = face(y, i);
                    if (i == j || i == j + 1) {
                        if (!(lhs == x)) r.add("d_i s_j = id fails");
                    } else if (i < j) {
                        if (!(lhs == degen(face(x, i), j - 1))) r.add("d_i s_j = s_{j-1} d_i fails");
                    } else {
                        if (!(lhs == degen(face(x, i - 1), j))) r.add("d_i s_j = s_j d_{i-1} fails");
                    }
                }
                for (int i = 0; i <= j; ++i)
                    if (!(degen(degen(x, j), i) == degen(degen(x, i), j + 1))) r.add("s_i s_j identity fails");
            }
        }
    }
    return r;
}

SubsetComplex::SubsetComplex(int nverts, const std::vector<std::vector<int>>& generators) : nverts_(nverts) {
    std::set<std::vector<int>> all;
    for (auto g : generators) {
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        for (int v : g)
            if (v < 0 || v >= nverts) throw InvalidInput("subset complex vertex out of range");
        const int r = static_cast<int>(g.size());
        for (unsigned mask = 1; mask < (1u << r); ++mask) {
            std::vector<int> s;
            for (int b = 0; b < r; ++b)
                if (mask & (1u << b)) s.push_back(g[b]);
            all.insert(s);
        }
    }
    std::vector<std::vector<int>> sorted(all.begin(), all.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    for (const auto& s : sorted) {
        const int dim = static_cast<int>(s.size()) - 1;
        std::vector<SimplexRef> faces;
        if (dim > 0)
            for (int i = 0; i <= dim; ++i) {
                std::vector<int> f = s;
                f.erase(f.begin() + i);
                faces.push_back({index_.at(f), identity_surjection(dim - 1)});
            }
        index_[s] = sset_.add(dim, std::move(faces));
        subsets_.push_back(s);
    }
}

std::optional<Idx> SubsetComplex::find(const std::vector<int>& subset) const {
    auto it = index_.find(subset);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

SubsetComplex simplex_shape(int n) { return SubsetComplex(n + 1, {identity_surjection(n)}); }

SubsetComplex boundary_shape(int n) {
    std::vector<std::vector<int>> gens;
    if (n >= 1)
        for (int i = 0; i <= n; ++i) {
            auto f = identity_surjection(n);
            f.erase(f.begin() + i);
            gens.push_back(f);
        }
    return SubsetComplex(n + 1, gens);
}

SubsetComplex skeleton_shape(int n, int k) {
    if (n >= k) return simplex_shape(k);
    std::vector<std::vector<int>> gens;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int v) {
        if (static_cast<int>(cur.size()) == n + 1) {
            gens.push_back(cur);
            return;
        }
        for (int w = v; w <= k; ++w) {
            cur.push_back(w);
            rec(w + 1);
            cur.pop_back();
        }
    };
    if (n >= 0) rec(0);
    return SubsetComplex(k + 1, gens);
}

FiniteSimplicialSet empty_shape() { return FiniteSimplicialSet(); }

FiniteSimplicialSet doubled_simplex(int n) {
    SubsetComplex b = boundary_shape(n);
    FiniteSimplicialSet s;
    for (Idx i = 0; i < b.sset().num_nondeg(); ++i) s.add(b.sset().nondeg_dim(i), b.sset().nondeg_faces(i));
    std::vector<SimplexRef> faces;
    if (n >= 1)
        for (int i = 0; i <= n; ++i) {
            auto f = identity_surjection(n);
            f.erase(f.begin() + i);
            faces.push_back({*b.find(f), identity_surjection(n - 1)});
        }
    s.add(n, faces);
    s.add(n, faces);
    return s;
}

RealizedSimplicial::RealizedSimplicial(const FiniteCategory& cat, const AugSimplicialCoR& u) : cat_(&cat), u_(&u) {
    for (const auto& l : u.levels) levels_.emplace_back(cat, l);
    face_index_.resize(u.trunc + 1);
    for (auto& v : face_index_) v.resize(cat.num_objects());
}

Idx RealizedSimplicial::face(int n, int i, Idx y, Idx e) const {
    auto [j, h] = levels_[n].element(y, e);
    const auto& f = u_->faces[n][i];
    return levels_[n - 1].index(y, f.to[j], cat_->compose_checked(f.via[j], h));
}

Idx RealizedSimplicial::degen(int n, int i, Idx y, Idx e) const {
    auto [j, h] = levels_[n].element(y, e);
    const auto& f = u_->degens[n][i];
    return levels_[n + 1].index(y, f.to[j], cat_->compose_checked(f.via[j], h));
}

Idx RealizedSimplicial::aug(Idx y, Idx e) const {
    auto [j, h] = levels_[0].element(y, e);
    (void)y;
    return cat_->compose_checked(u_->aug.via[j], h);
}

Idx RealizedSimplicial::apply_surjection(const std::vector<int>& s, Idx y, Idx e) const {
    int level = s.back();
    for (std::size_t p = 0; p + 1 < s.size(); ++p) {
        if (s[p] != s[p + 1]) continue;
        e = degen(level, static_cast<int>(p), y, e);
        ++level;
    }
    return e;
}

Idx RealizedSimplicial::apply_face_subset(int k, const std::vector<int>& subset, Idx y, Idx e) const {
    int level = k;
    std::size_t pos = subset.size();
    for (int v = k; v >= 0; --v) {
        if (pos > 0 && subset[pos - 1] == v) {
            --pos;
            continue;
        }
        e = face(level, v, y, e);
        --level;
    }
    return e;
}

const std::vector<Idx>& RealizedSimplicial::with_faces(int n, Idx y, const std::vector<Idx>& faces) const {
    static const std::vector<Idx> none;
    auto& slot = face_index_[n][y];
    if (!slot) {
        slot = std::make_unique<std::map<std::vector<Idx>, std::vector<Idx>>>();
        for (Idx e = 0; e < count(n, y); ++e) {
            std::vector<Idx> key;
            if (n == 0) {
                key.push_back(aug(y, e));
            } else {
                for (int i = 0; i <= n; ++i) key.push_back(face(n, i, y, e));
            }
            (*slot)[key].push_back(e);
        }
    }
    auto it = slot->find(faces);
    return it == slot->end() ? none : it->second;
}

Idx HomPlus::find(Idx y, const std::vector<Idx>& tuple) const {
    auto it = lookup[y].find(tuple);
    if (it == lookup[y].end()) throw InternalError("element missing from end enumeration");
    return it->second;
}

HomPlus hom_plus(const FiniteCategory& cat, const FiniteSimplicialSet& k, const AugSimplicialCoR& u) {
    RealizedSimplicial ru(cat, u);
    return hom_plus(cat, k, ru);
}

HomPlus hom_plus(const FiniteCategory& cat, const FiniteSimplicialSet& k, const RealizedSimplicial& ru) {
    const auto& u = ru.object();
    if (k.dim() > u.trunc) throw InvalidInput("insufficient truncation");
    const std::size_t O = cat.num_objects(), N = k.num_nondeg();
    const std::size_t budget = enumeration_budget();
    HomPlus hp;
    hp.elements.resize(O);
    hp.lookup.resize(O);
    for (Idx y = 0; y < O; ++y) {
        std::vector<Idx> tuple(N + 1, npos);
        std::function<void(Idx)> rec = [&](Idx s) {
            if (s == N) {
                hp.lookup[y].emplace(tuple, hp.elements[y].size());
                hp.elements[y].push_back(tuple);
                if (hp.elements[y].size() > budget) throw GuardExceeded("end enumeration exceeds enumeration budget");
                return;
            }
            const int d = k.nondeg_dim(s);
            std::vector<Idx> key;
            if (d == 0) {
                key.push_back(tuple[0]);
            } else {
                for (const auto& f : k.nondeg_faces(s))
                    key.push_back(ru.apply_surjection(f.surj, y, tuple[1 + f.nondeg]));
            }
            for (Idx e : ru.with_faces(d, y, key)) {
                tuple[1 + s] = e;
                rec(s + 1);
            }
            tuple[1 + s] = npos;
        };
        for (Idx base : cat.hom(y, u.base)) {
            tuple[0] = base;
            rec(0);
        }
        hp.presheaf.card.push_back(hp.elements[y].size());
    }
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        Idx z = cat.src(m), y = cat.dst(m);
        std::vector<Idx> map;
        map.reserve(hp.elements[y].size());
        for (const auto& t : hp.elements[y]) {
            std::vector<Idx> r(N + 1);
            r[0] = cat.compose_checked(t[0], m);
            for (Idx s = 0; s < N; ++s) r[1 + s] = ru.level(k.nondeg_dim(s)).restrict(m, t[1 + s]);
            map.push_back(hp.find(z, r));
        }
        hp.presheaf.restrict.push_back(std::move(map));
    }
    return hp;
}

PresheafMap hom_plus_map(const FiniteCategory& cat, const FiniteSimplicialSet& k, const FiniteSimplicialSet&,
                         const SimplicialMap& phi, const RealizedSimplicial& ru, const HomPlus& hl, const HomPlus& hk) {
    PresheafMap pm;
    pm.at.resize(cat.num_objects());
    for (Idx y = 0; y < cat.num_objects(); ++y)
        for (const auto& t : hl.elements[y]) {
            std::vector<Idx> r(k.num_nondeg() + 1);
            r[0] = t[0];
            for (Idx s = 0; s < k.num_nondeg(); ++s) {
                const auto& img = phi.image[s];
                r[1 + s] = ru.apply_surjection(img.surj, y, t[1 + img.nondeg]);
            }
            pm.at[y].push_back(hk.find(y, r));
        }
    return pm;
}

MatchingObject matching_object(const FiniteCategory& cat, const AugSimplicialCoR& u, int n) {
    RealizedSimplicial ru(cat, u);
    return matching_object(cat, ru, n);
}

MatchingObject matching_object(const FiniteCategory& cat, const RealizedSimplicial& ru, int n) {
    const auto& u = ru.object();
    if (n < 0 || n > u.trunc + 1) throw InvalidInput("insufficient truncation");
    SubsetComplex b = boundary_shape(n);
    MatchingObject mo{hom_plus(cat, b.sset(), ru), std::nullopt};
    if (n <= u.trunc) {
        PresheafMap pm;
        pm.at.resize(cat.num_objects());
        const std::size_t N = b.sset().num_nondeg();
        for (Idx y = 0; y < cat.num_objects(); ++y)
            for (Idx e = 0; e < ru.count(n, y); ++e) {
                std::vector<Idx> t(N + 1);
                t[0] = ru.aug(y, ru.apply_face_subset(n, {0}, y, e));
                for (Idx s = 0; s < N; ++s) t[1 + s] = ru.apply_face_subset(n, b.subset_of(s), y, e);
                pm.at[y].push_back(mo.m.find(y, t));
            }
        mo.map = std::move(pm);
    }
    return mo;
}

CoRLimits::CoRLimits(const VerdierSite& site, const AugSimplicialCoR& u) : site_(&site), u_(&u) {}

const SubsetComplex& CoRLimits::boundary(int k) {
    auto it = boundaries_.find(k);
    if (it == boundaries_.end()) it = boundaries_.emplace(k, boundary_shape(k)).first;
    return it->second;
}

std::pair<Idx, Idx> CoRLimits::value(const FiniteSimplicialSet&, const std::vector<Idx>& assignment,
                                     const SimplexRef& x) const {
    return apply_surjection(site_->cat(), *u_, x.surj, assignment[x.nondeg]);
}

namespace {

// The simplex of K spanned by `subset` of the vertices of nondegenerate sigma.
SimplexRef subface(const FiniteSimplicialSet& k, Idx sigma, const std::vector<int>& subset) {
    SimplexRef x = k.as_simplex(sigma);
    int d = k.nondeg_dim(sigma);
    std::size_t pos = subset.size();
    for (int v = d; v >= 0; --v) {
        if (pos > 0 && subset[pos - 1] == v) {
            --pos;
            continue;
        }
        x = k.face(x, v);
    }
    return x;
}

}  // namespace

LimitCone CoRLimits::limit(const FiniteSimplicialSet& k, const std::vector<Idx>& a) {
    const auto& cat = site_->cat();
    const auto& u = *u_;
    LimitCone P{u.base, cat.identity(u.base), std::vector<Idx>(k.num_nondeg(), npos), {}};
    for (Idx s = 0; s < k.num_nondeg(); ++s) {
        const int d = k.nondeg_dim(s);
        const Idx j = a[s];
        PullbackSquare sq;
        if (d == 0) {
            Idx f = u.aug.via[j];
            if (!site_->is_basal(f))
                throw InvalidInput("basal precondition violated: augmentation " + cat.morphism_id(f) + " is not basal");
            sq = site_->require_pullback(f, P.leg);
        } else {
            std::vector<Idx> faces;
            for (const auto& f : k.nondeg_faces(s)) faces.push_back(value(k, a, f).first);
            const LimitCone& M = boundary_limit(d, faces);
            Idx mu = matching_via(d, j);
            if (!site_->is_basal(mu))
                throw InvalidInput("basal precondition violated: matching map component " + cat.morphism_id(mu) +
                                   " on level " + std::to_string(d) + " is not basal");
            const SubsetComplex& b = boundary(d);
            std::vector<Idx> comps;
            for (Idx t = 0; t < b.sset().num_nondeg(); ++t) {
                SimplexRef x = subface(k, s, b.subset_of(t));
                auto [summand, via] = value(k, a, x);
                (void)summand;
                comps.push_back(cat.compose_checked(via, P.comps[x.nondeg]));
            }
            Idx t = factor(b.sset(), faces, M, P.object, P.leg, comps);
            sq = site_->require_pullback(mu, t);
        }
        for (Idx& c : P.comps)
            if (c != npos) c = cat.compose_checked(c, sq.q);
        P.comps[s] = sq.p;
        P.leg = cat.compose_checked(P.leg, sq.q);
        P.object = sq.apex;
        P.steps.push_back(sq);
    }
    return P;
}

const LimitCone& CoRLimits::boundary_limit(int k, const std::vector<Idx>& face_summands) {
    auto key = std::make_pair(k, face_summands);
    auto it = boundary_cache_.find(key);
    if (it != boundary_cache_.end()) return it->second;
    const auto& cat = site_->cat();
    LimitCone cone;
    if (k == 0) {
        cone = LimitCone{u_->base, cat.identity(u_->base), {}, {}};
    } else {
        const SubsetComplex& b = boundary(k);
        std::vector<Idx> a;
        for (Idx t = 0; t < b.sset().num_nondeg(); ++t) {
            const auto& S = b.subset_of(t);
            int i = 0;
            while (i < static_cast<int>(S.size()) && S[i] == i) ++i;
            std::vector<int> reindexed;
            for (int v : S) reindexed.push_back(v > i ? v - 1 : v);
            a.push_back(apply_face_subset(cat, *u_, k - 1, reindexed, face_summands[i]).first);
        }
        cone = limit(b.sset(), a);
    }
    return boundary_cache_.emplace(key, std::move(cone)).first->second;
}

Idx CoRLimits::matching_via(int k, Idx j) {
    auto key = std::make_pair(k, j);
    if (auto it = via_cache_.find(key); it != via_cache_.end()) return it->second;
    const auto& cat = site_->cat();
    Idx result;
    if (k == 0) {
        result = u_->aug.via[j];
    } else {
        std::vector<Idx> faces;
        for (int i = 0; i <= k; ++i) faces.push_back(u_->faces[k][i].to[j]);
        const LimitCone& M = boundary_limit(k, faces);
        const SubsetComplex& b = boundary(k);
        std::vector<Idx> comps;
        for (Idx t = 0; t < b.sset().num_nondeg(); ++t)
            comps.push_back(apply_face_subset(cat, *u_, k, b.subset_of(t), j).second);
        result = factor(b.sset(), faces, M, u_->levels[k].summands[j], summand_leg(cat, *u_, k, j), comps);
    }
    via_cache_.emplace(key, result);
    return result;
}

Idx CoRLimits::factor(const FiniteSimplicialSet&, const std::vector<Idx>&, const LimitCone& cone, Idx, Idx leg,
                      const std::vector<Idx>& comps) const {
    Idx u = leg;
    for (Idx s = 0; s < cone.steps.size(); ++s) {
        auto f = site_->factor(cone.steps[s], comps[s], u);
        if (!f) throw InternalError("cone does not factor through the iterated pullback");
        u = *f;
    }
    return u;
}

CoRDecomposition CoRLimits::decompose(const FiniteSimplicialSet& k) {
    const auto& u = *u_;
    if (k.dim() > u.trunc) throw InvalidInput("insufficient truncation");
    if (!k.faces_nondegenerate()) throw InvalidInput("CoR decomposition needs nondegenerate faces");
    // Summands of each level by face tuple.
    std::vector<std::map<std::vector<Idx>, std::vector<Idx>>> by_faces(k.dim() + 1);
    for (int d = 1; d <= k.dim(); ++d)
        for (Idx j = 0; j < u.levels[d].size(); ++j) {
            std::vector<Idx> key;
            for (int i = 0; i <= d; ++i) key.push_back(u.faces[d][i].to[j]);
            by_faces[d][key].push_back(j);
        }
    std::vector<Idx> all0(u.levels[0].size());
    std::iota(all0.begin(), all0.end(), Idx{0});
    CoRDecomposition dec;
    std::vector<Idx> a(k.num_nondeg(), npos);
    const std::size_t budget = enumeration_budget();
    std::function<void(Idx)> rec = [&](Idx s) {
        if (s == k.num_nondeg()) {
            if (dec.assignment.size() >= budget) throw GuardExceeded("CoR decomposition exceeds enumeration budget");
            dec.lookup.emplace(a, dec.assignment.size());
            dec.assignment.push_back(a);
            return;
        }
        const int d = k.nondeg_dim(s);
        const std::vector<Idx>* cand = &all0;
        static const std::vector<Idx> none;
        if (d > 0) {
            std::vector<Idx> key;
            for (const auto& f : k.nondeg_faces(s)) key.push_back(a[f.nondeg]);
            auto it = by_faces[d].find(key);
            cand = it == by_faces[d].end() ? &none : &it->second;
        }
        for (Idx j : *cand) {
            a[s] = j;
            rec(s + 1);
        }
        a[s] = npos;
    };
    rec(0);
    for (const auto& as : dec.assignment) {
        dec.cones.push_back(limit(k, as));
        dec.cor.summands.push_back(dec.cones.back().object);
    }
    return dec;
}

CoRMap CoRLimits::induced_map(const FiniteSimplicialSet& k, const CoRDecomposition& dk, const FiniteSimplicialSet& l,
                              const CoRDecomposition& dl, const SimplicialMap& phi) const {
    const auto& cat = site_->cat();
    CoRMap m;
    for (Idx b = 0; b < dl.assignment.size(); ++b) {
        std::vector<Idx> a(k.num_nondeg()), comps(k.num_nondeg());
        for (Idx s = 0; s < k.num_nondeg(); ++s) {
            const auto& img = phi.image[s];
            auto [summand, via] = value(l, dl.assignment[b], img);
            a[s] = summand;
            comps[s] = cat.compose_checked(via, dl.cones[b].comps[img.nondeg]);
        }
        auto it = dk.lookup.find(a);
        if (it == dk.lookup.end()) throw InternalError("induced assignment missing from decomposition");
        m.to.push_back(it->second);
        m.via.push_back(factor(k, a, dk.cones[it->second], dl.cones[b].object, dl.cones[b].leg, comps));
    }
    return m;
}

CoRDecomposition matching_object_cor(const VerdierSite& site, const AugSimplicialCoR& u, int n) {
    if (n > u.trunc + 1) throw InvalidInput("insufficient truncation");
    CoRLimits lim(site, u);
    SubsetComplex b = boundary_shape(n);
    return lim.decompose(b.sset());
}

CoRMap matching_map_cor(const VerdierSite& site, const AugSimplicialCoR& u, int n, const CoRDecomposition& m) {
    const auto& cat = site.cat();
    CoRLimits lim(site, u);
    SubsetComplex b = boundary_shape(n);
    CoRMap r;
    for (Idx j = 0; j < u.levels[n].size(); ++j) {
        std::vector<Idx> a, comps;
        for (Idx t = 0; t < b.sset().num_nondeg(); ++t) {
            auto [s, via] = apply_face_subset(cat, u, n, b.subset_of(t), j);
            a.push_back(s);
            comps.push_back(via);
        }
        auto it = m.lookup.find(a);
        if (it == m.lookup.end()) throw InternalError("boundary of a summand is missing from the matching object");
        r.to.push_back(it->second);
        r.via.push_back(lim.factor(b.sset(), a, m.cones[it->second], u.levels[n].summands[j],
                                   summand_leg(cat, u, n, j), comps));
    }
    return r;
}

PresheafMap realization_comparison(const FiniteCategory& cat, const FiniteSimplicialSet& k,
                                   const CoRDecomposition& dec, const RealizedSimplicial& ru, const HomPlus& hp) {
    RealizedCoR rc(cat, dec.cor);
    PresheafMap pm;
    pm.at.resize(cat.num_objects());
    for (Idx y = 0; y < cat.num_objects(); ++y)
        for (Idx e = 0; e < rc.count(y); ++e) {
            auto [a, h] = rc.element(y, e);
            const auto& cone = dec.cones[a];
            std::vector<Idx> t(k.num_nondeg() + 1);
            t[0] = cat.compose_checked(cone.leg, h);
            for (Idx s = 0; s < k.num_nondeg(); ++s)
                t[1 + s] = ru.level(k.nondeg_dim(s)).index(y, dec.assignment[a][s], cat.compose_checked(cone.comps[s], h));
            pm.at[y].push_back(hp.find(y, t));
        }
    return pm;
}

std::vector<LatchingSummand> latching_object(const FiniteCategory& cat, const AugSimplicialCoR& u,
                                             const std::vector<std::vector<Idx>>& nondegenerate, int n) {
    std::vector<LatchingSummand> out;
    for (int m = 0; m < n; ++m)
        for (const auto& s : surjections(n, m))
            for (Idx j : nondegenerate[m]) {
                auto [img, via] = apply_surjection(cat, u, s, j);
                out.push_back({s, m, j, u.levels[m].summands[j], img, via});
            }
    return out;
}

SplitReport is_split(const FiniteCategory& cat, const AugSimplicialCoR& u) {
    SplitReport rep;
    rep.split = true;
    for (int k = 0; k <= u.trunc; ++k) {
        std::vector<char> degenerate(u.levels[k].size(), 0);
        if (k > 0)
            for (const auto& s : u.degens[k - 1])
                for (Idx t : s.to) degenerate[t] = 1;
        std::vector<Idx> nk;
        for (Idx j = 0; j < degenerate.size(); ++j)
            if (!degenerate[j]) nk.push_back(j);
        rep.nondegenerate.push_back(nk);
        if (k == 0 || !rep.split) continue;
        auto lat = latching_object(cat, u, rep.nondegenerate, k);
        std::vector<int> hits(u.levels[k].size(), 0);
        for (const auto& l : lat) {
            ++hits[l.image];
            if (!cat.is_iso(l.via) && rep.split) {
                rep.split = false;
                rep.witness = "degenerate summand " + std::to_string(l.image) + " of level " + std::to_string(k) +
                              " is reached along a non-isomorphism";
            }
        }
        for (Idx j = 0; j < hits.size() && rep.split; ++j) {
            if (degenerate[j] && hits[j] != 1) {
                rep.split = false;
                rep.witness = "degenerate summand " + std::to_string(j) + " of level " + std::to_string(k) + " is hit " +
                              std::to_string(hits[j]) + " times by the latching object";
            }
        }
    }
    return rep;
}

IndexingSimplicialSet indexing_simplicial_set(const AugSimplicialCoR& u) {
    IndexingSimplicialSet k;
    for (const auto& l : u.levels) k.count.push_back(l.size());
    k.faces.resize(u.trunc + 1);
    k.degens.resize(u.trunc);
    for (int n = 1; n <= u.trunc; ++n)
        for (const auto& f : u.faces[n]) k.faces[n].push_back(f.to);
    for (int n = 0; n < u.trunc; ++n)
        for (const auto& s : u.degens[n]) k.degens[n].push_back(s.to);
    return k;
}

ValidationReport validate_indexing(const IndexingSimplicialSet& k) {
    ValidationReport r;
    const int d = static_cast<int>(k.count.size()) - 1;
    auto at = [](const std::vector<Idx>& m, Idx x) { return m[x]; };
    for (int n = 2; n <= d; ++n)
        for (Idx x = 0; x < k.count[n]; ++x)
            for (int j = 1; j <= n; ++j)
                for (int i = 0; i < j; ++i)
                    if (at(k.faces[n - 1][i], at(k.faces[n][j], x)) != at(k.faces[n - 1][j - 1], at(k.faces[n][i], x)))
                        r.add("indexing set violates d_i d_j on level " + std::to_string(n));
    for (int n = 0; n < d; ++n)
        for (Idx x = 0; x < k.count[n]; ++x)
            for (int j = 0; j <= n; ++j) {
                Idx y = at(k.degens[n][j], x);
                for (int i = 0; i <= n + 1; ++i) {
                    Idx lhs = at(k.faces[n + 1][i], y);
                    if (i == j || i == j + 1) {
                        if (lhs != x) r.add("indexing set violates d_i s_j = id on level " + std::to_string(n));
                    } else if (n >= 1) {
                        Idx rhs = i < j ? at(k.degens[n - 1][j - 1], at(k.faces[n][i], x))
                                        : at(k.degens[n - 1][j], at(k.faces[n][i - 1], x));
                        if (lhs != rhs) r.add("indexing set violates a mixed identity on level " + std::to_string(n));
                    }
                }
            }
    return r;
}

HomPlus coskeleton_level(const FiniteCategory& cat, const AugSimplicialCoR& u, int n, int k) {
    if (n > u.trunc) throw InvalidInput("insufficient truncation");
    SubsetComplex sk = skeleton_shape(n, k);
    return hom_plus(cat, sk.sset(), u);
}

namespace {

// Level k <= n of U as a decomposition over Delta^k (cones without steps).
CoRDecomposition stored_level(const FiniteCategory& cat, const AugSimplicialCoR& u, const SubsetComplex& shape, int k) {
    CoRDecomposition dec;
    dec.cor = u.levels[k];
    for (Idx j = 0; j < u.levels[k].size(); ++j) {
        LimitCone cone{u.levels[k].summands[j], summand_leg(cat, u, k, j), {}, {}};
        std::vector<Idx> a;
        for (Idx t = 0; t < shape.sset().num_nondeg(); ++t) {
            auto [s, via] = apply_face_subset(cat, u, k, shape.subset_of(t), j);
            a.push_back(s);
            cone.comps.push_back(via);
        }
        dec.lookup.emplace(a, j);
        dec.assignment.push_back(std::move(a));
        dec.cones.push_back(std::move(cone));
    }
    return dec;
}

SimplicialMap coface_map(const SubsetComplex& from, const SubsetComplex& to, int i) {
    SimplicialMap phi;
    for (Idx t = 0; t < from.sset().num_nondeg(); ++t) {
        std::vector<int> s;
        for (int v : from.subset_of(t)) s.push_back(v >= i ? v + 1 : v);
        phi.image.push_back({*to.find(s), identity_surjection(static_cast<int>(s.size()) - 1)});
    }
    return phi;
}

SimplicialMap codegeneracy_map(const SubsetComplex& from, const SubsetComplex& to, int i) {
    SimplicialMap phi;
    for (Idx t = 0; t < from.sset().num_nondeg(); ++t) {
        std::vector<int> img;
        for (int v : from.subset_of(t)) img.push_back(v > i ? v - 1 : v);
        std::vector<int> uniq = img;
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<int> surj;
        for (int v : img) surj.push_back(static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), v) - uniq.begin()));
        phi.image.push_back({*to.find(uniq), surj});
    }
    return phi;
}

}  // namespace

AugSimplicialCoR coskeleton_cor(const VerdierSite& site, const AugSimplicialCoR& u, int n, int d) {
    const auto& cat = site.cat();
    if (n > u.trunc) throw InvalidInput("insufficient truncation");
    AugSimplicialCoR base = truncate(u, n);
    if (d <= n) return truncate(u, d);
    CoRLimits lim(site, base);
    std::vector<SubsetComplex> shapes;
    std::vector<CoRDecomposition> decs;
    for (int k = 0; k <= d; ++k) {
        shapes.push_back(skeleton_shape(n, k));
        decs.push_back(k <= n ? stored_level(cat, base, shapes[k], k) : lim.decompose(shapes[k].sset()));
    }
    AugSimplicialCoR r = base;
    r.trunc = d;
    for (int k = n + 1; k <= d; ++k) {
        r.levels.push_back(decs[k].cor);
        std::vector<CoRMap> faces;
        for (int i = 0; i <= k; ++i) {
            SimplicialMap phi = coface_map(shapes[k - 1], shapes[k], i);
            if (k - 1 <= n) {
                // Target is a stored level: read off the summand on the face itself.
                CoRMap m;
                Idx top = *shapes[k - 1].find(identity_surjection(k - 1));
                const auto& img = phi.image[top];
                for (Idx b = 0; b < decs[k].assignment.size(); ++b) {
                    m.to.push_back(decs[k].assignment[b][img.nondeg]);
                    m.via.push_back(decs[k].cones[b].comps[img.nondeg]);
                }
                faces.push_back(std::move(m));
            } else {
                faces.push_back(lim.induced_map(shapes[k - 1].sset(), decs[k - 1], shapes[k].sset(), decs[k], phi));
            }
        }
        r.faces.push_back(std::move(faces));
    }
    for (int k = n; k < d; ++k) {
        std::vector<CoRMap> degs;
        for (int i = 0; i <= k; ++i) {
            SimplicialMap phi = codegeneracy_map(shapes[k + 1], shapes[k], i);
            degs.push_back(lim.induced_map(shapes[k + 1].sset(), decs[k + 1], shapes[k].sset(), decs[k], phi));
        }
        r.degens.push_back(std::move(degs));
    }
    return r;
}

}  // namespace descente
