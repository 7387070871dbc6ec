#include "descente/category.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "descente/errors.hpp"

namespace descente {

std::size_t enumeration_budget() {
    if (const char* env = std::getenv("DESCENTE_MAX_ENUM")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return 2000000;
}

FiniteCategory::FiniteCategory(const CategorySpec& spec) {
    std::set<std::string> obj_set;
    for (const auto& o : spec.objects) {
        if (!obj_set.insert(o).second) throw InvalidInput("malformed category: duplicate object " + o);
    }
    objects_.assign(obj_set.begin(), obj_set.end());
    for (Idx i = 0; i < objects_.size(); ++i) object_index_[objects_[i]] = i;

    std::map<std::string, const MorphismSpec*> by_id;
    for (const auto& m : spec.morphisms) {
        if (!by_id.emplace(m.id, &m).second)
            throw InvalidInput("malformed category: duplicate morphism " + m.id);
        if (!object_index_.count(m.src) || !object_index_.count(m.dst))
            throw InvalidInput("malformed category: dangling endpoint of morphism " + m.id);
    }
    const std::size_t M = by_id.size(), O = objects_.size();
    for (const auto& [id, m] : by_id) {
        morphism_index_[id] = morphisms_.size();
        morphisms_.push_back(id);
        src_.push_back(object_index_.at(m->src));
        dst_.push_back(object_index_.at(m->dst));
    }

    identity_.assign(O, npos);
    for (const auto& [o, m] : spec.identities) {
        auto oi = object_index_.find(o);
        auto mi = morphism_index_.find(m);
        if (oi == object_index_.end()) throw InvalidInput("malformed category: identity for unknown object " + o);
        if (mi == morphism_index_.end()) throw InvalidInput("malformed category: unknown identity morphism " + m);
        if (src_[mi->second] != oi->second || dst_[mi->second] != oi->second)
            issues_.push_back("identity " + m + " is not an endomorphism of " + o);
        identity_[oi->second] = mi->second;
    }
    for (Idx o = 0; o < O; ++o)
        if (identity_[o] == npos) issues_.push_back("object " + objects_[o] + " has no identity");

    comp_.assign(M * M, npos);
    for (const auto& c : spec.composition) {
        auto g = morphism_index_.find(c.g), f = morphism_index_.find(c.f), gf = morphism_index_.find(c.gf);
        if (g == morphism_index_.end() || f == morphism_index_.end() || gf == morphism_index_.end())
            throw InvalidInput("malformed category: composition entry (" + c.g + ", " + c.f + ") names an unknown morphism");
        if (src_[g->second] != dst_[f->second]) {
            issues_.push_back("composition entry (" + c.g + ", " + c.f + ") is not a composable pair");
            continue;
        }
        if (src_[gf->second] != src_[f->second] || dst_[gf->second] != dst_[g->second]) {
            issues_.push_back("composition entry (" + c.g + ", " + c.f + ") = " + c.gf + " has the wrong type");
            continue;
        }
        Idx& slot = comp_[g->second * M + f->second];
        if (slot != npos && slot != gf->second)
            issues_.push_back("conflicting composition entries for (" + c.g + ", " + c.f + ")");
        slot = gf->second;
    }
    // Composites with identities are implied even when the table omits them.
    for (Idx m = 0; m < M; ++m) {
        Idx a = identity_[src_[m]], b = identity_[dst_[m]];
        if (a != npos && src_[a] == src_[m] && dst_[a] == src_[m] && comp_[m * M + a] == npos) comp_[m * M + a] = m;
        if (b != npos && src_[b] == dst_[m] && dst_[b] == dst_[m] && comp_[b * M + m] == npos) comp_[b * M + m] = m;
    }

    hom_.assign(O * O, {});
    into_.assign(O, {});
    out_.assign(O, {});
    hom_pos_.assign(M, 0);
    for (Idx m = 0; m < M; ++m) {
        auto& h = hom_[src_[m] * O + dst_[m]];
        hom_pos_[m] = h.size();
        h.push_back(m);
        into_[dst_[m]].push_back(m);
        out_[src_[m]].push_back(m);
    }
    inverse_.assign(M, npos);
    for (Idx m = 0; m < M; ++m) {
        for (Idx n : hom(dst_[m], src_[m])) {
            if (compose(n, m) == identity_[src_[m]] && compose(m, n) == identity_[dst_[m]] &&
                identity_[src_[m]] != npos) {
                inverse_[m] = n;
                break;
            }
        }
    }
}

std::optional<Idx> FiniteCategory::find_object(const std::string& id) const {
    auto it = object_index_.find(id);
    if (it == object_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<Idx> FiniteCategory::find_morphism(const std::string& id) const {
    auto it = morphism_index_.find(id);
    if (it == morphism_index_.end()) return std::nullopt;
    return it->second;
}

Idx FiniteCategory::object(const std::string& id) const {
    auto o = find_object(id);
    if (!o) throw InvalidInput("unknown object: " + id);
    return *o;
}

Idx FiniteCategory::morphism(const std::string& id) const {
    auto m = find_morphism(id);
    if (!m) throw InvalidInput("unknown morphism: " + id);
    return *m;
}

Idx FiniteCategory::compose_checked(Idx g, Idx f) const {
    Idx r = compose(g, f);
    if (r == npos)
        throw InternalError("composite " + morphisms_[g] + " o " + morphisms_[f] + " is undefined");
    return r;
}

CategorySpec FiniteCategory::spec() const {
    CategorySpec s;
    s.objects = objects_;
    for (Idx m = 0; m < morphisms_.size(); ++m)
        s.morphisms.push_back({morphisms_[m], objects_[src_[m]], objects_[dst_[m]]});
    for (Idx o = 0; o < objects_.size(); ++o)
        if (identity_[o] != npos) s.identities[objects_[o]] = morphisms_[identity_[o]];
    const std::size_t M = morphisms_.size();
    for (Idx g = 0; g < M; ++g)
        for (Idx f = 0; f < M; ++f)
            if (comp_[g * M + f] != npos)
                s.composition.push_back({morphisms_[g], morphisms_[f], morphisms_[comp_[g * M + f]]});
    return s;
}

ValidationReport validate_category(const FiniteCategory& cat) {
    ValidationReport r;
    for (const auto& issue : cat.input_issues()) r.add(issue);
    const std::size_t M = cat.num_morphisms();
    for (Idx g = 0; g < M; ++g) {
        for (Idx f : cat.into(cat.src(g))) {
            if (cat.compose(g, f) == npos)
                r.add("missing composite (" + cat.morphism_id(g) + ", " + cat.morphism_id(f) + ")");
        }
    }
    for (Idx m = 0; m < M; ++m) {
        Idx a = cat.identity(cat.src(m)), b = cat.identity(cat.dst(m));
        if (a != npos && cat.compose(m, a) != npos && cat.compose(m, a) != m)
            r.add("identity " + cat.morphism_id(a) + " is not right neutral for " + cat.morphism_id(m));
        if (b != npos && cat.compose(b, m) != npos && cat.compose(b, m) != m)
            r.add("identity " + cat.morphism_id(b) + " is not left neutral for " + cat.morphism_id(m));
    }
    for (Idx h = 0; h < M; ++h) {
        for (Idx g : cat.into(cat.src(h))) {
            Idx hg = cat.compose(h, g);
            if (hg == npos) continue;
            for (Idx f : cat.into(cat.src(g))) {
                Idx gf = cat.compose(g, f);
                if (gf == npos) continue;
                Idx lhs = cat.compose(hg, f), rhs = cat.compose(h, gf);
                if (lhs == npos || rhs == npos) continue;
                if (lhs != rhs)
                    r.add("associativity fails on (" + cat.morphism_id(h) + ", " + cat.morphism_id(g) + ", " +
                          cat.morphism_id(f) + ")");
            }
        }
    }
    return r;
}

std::string poset_identity_id(const std::string& a) { return "id_" + a; }
std::string poset_arrow_id(const std::string& a, const std::string& b) { return a + "->" + b; }

FiniteCategory make_poset(const std::vector<std::string>& objects,
                          const std::vector<std::pair<std::string, std::string>>& leq) {
    std::vector<std::string> objs(objects.begin(), objects.end());
    std::sort(objs.begin(), objs.end());
    const std::size_t n = objs.size();
    auto index = [&](const std::string& o) {
        auto it = std::lower_bound(objs.begin(), objs.end(), o);
        if (it == objs.end() || *it != o) throw InvalidInput("unknown object in poset relation: " + o);
        return static_cast<Idx>(it - objs.begin());
    };
    std::vector<char> le(n * n, 0);
    for (Idx i = 0; i < n; ++i) le[i * n + i] = 1;
    for (const auto& [a, b] : leq) le[index(a) * n + index(b)] = 1;
    for (Idx k = 0; k < n; ++k)
        for (Idx i = 0; i < n; ++i)
            if (le[i * n + k])
                for (Idx j = 0; j < n; ++j)
                    if (le[k * n + j]) le[i * n + j] = 1;
    for (Idx i = 0; i < n; ++i)
        for (Idx j = i + 1; j < n; ++j)
            if (le[i * n + j] && le[j * n + i]) throw InvalidInput("poset relations contain a cycle through " + objs[i]);

    auto arrow = [&](Idx a, Idx b) {
        return a == b ? poset_identity_id(objs[a]) : poset_arrow_id(objs[a], objs[b]);
    };
    CategorySpec s;
    s.objects = objs;
    for (Idx a = 0; a < n; ++a) {
        s.identities[objs[a]] = arrow(a, a);
        for (Idx b = 0; b < n; ++b)
            if (le[a * n + b]) s.morphisms.push_back({arrow(a, b), objs[a], objs[b]});
    }
    for (Idx a = 0; a < n; ++a)
        for (Idx b = 0; b < n; ++b)
            if (le[a * n + b])
                for (Idx c = 0; c < n; ++c)
                    if (le[b * n + c]) s.composition.push_back({arrow(b, c), arrow(a, b), arrow(a, c)});
    return FiniteCategory(s);
}

}  // namespace descente
