#include "descente/cor.hpp"

#include <string>

#include "descente/errors.hpp"

namespace descente {

CoRMap compose(const FiniteCategory& cat, const CoRMap& g, const CoRMap& f) {
    CoRMap r;
    r.to.resize(f.size());
    r.via.resize(f.size());
    for (Idx i = 0; i < f.size(); ++i) {
        r.to[i] = g.to[f.to[i]];
        r.via[i] = cat.compose_checked(g.via[f.to[i]], f.via[i]);
    }
    return r;
}

CoRMap identity_map(const FiniteCategory& cat, const CoR& p) {
    CoRMap r;
    for (Idx i = 0; i < p.size(); ++i) {
        r.to.push_back(i);
        r.via.push_back(cat.identity(p.summands[i]));
    }
    return r;
}

std::string check_cor_map(const FiniteCategory& cat, const CoR& p, const CoR& q, const CoRMap& f) {
    if (f.to.size() != p.size() || f.via.size() != p.size()) return "map has wrong number of summands";
    for (Idx i = 0; i < p.size(); ++i) {
        if (f.to[i] >= q.size()) return "summand " + std::to_string(i) + " maps to a missing target summand";
        if (f.via[i] >= cat.num_morphisms()) return "summand " + std::to_string(i) + " has an unknown morphism";
        if (cat.src(f.via[i]) != p.summands[i] || cat.dst(f.via[i]) != q.summands[f.to[i]])
            return "summand " + std::to_string(i) + " via " + cat.morphism_id(f.via[i]) + " has the wrong type";
    }
    return {};
}

CoR representable(Idx x) { return CoR{{x}}; }

ValidationReport validate_simplicial(const FiniteCategory& cat, const AugSimplicialCoR& u) {
    ValidationReport r;
    const int d = u.trunc;
    if (d < 0 || static_cast<int>(u.levels.size()) != d + 1) {
        r.add("levels do not match truncation");
        return r;
    }
    if (static_cast<int>(u.faces.size()) != d + 1 || static_cast<int>(u.degens.size()) < d) {
        r.add("face/degeneracy arrays do not match truncation");
        return r;
    }
    if (u.base >= cat.num_objects()) {
        r.add("unknown base object");
        return r;
    }
    for (Idx s : [&] {
             std::vector<Idx> all;
             for (const auto& l : u.levels) all.insert(all.end(), l.summands.begin(), l.summands.end());
             return all;
         }())
        if (s >= cat.num_objects()) {
            r.add("unknown summand object");
            return r;
        }
    CoR base = representable(u.base);
    if (auto e = check_cor_map(cat, u.levels[0], base, u.aug); !e.empty()) r.add("augmentation: " + e);
    for (int n = 1; n <= d; ++n) {
        if (static_cast<int>(u.faces[n].size()) != n + 1) {
            r.add("level " + std::to_string(n) + " needs " + std::to_string(n + 1) + " faces");
            continue;
        }
        for (int i = 0; i <= n; ++i)
            if (auto e = check_cor_map(cat, u.levels[n], u.levels[n - 1], u.faces[n][i]); !e.empty())
                r.add("face d" + std::to_string(i) + " on level " + std::to_string(n) + ": " + e);
    }
    for (int n = 0; n < d; ++n) {
        if (static_cast<int>(u.degens[n].size()) != n + 1) {
            r.add("level " + std::to_string(n) + " needs " + std::to_string(n + 1) + " degeneracies");
            continue;
        }
        for (int i = 0; i <= n; ++i)
            if (auto e = check_cor_map(cat, u.levels[n], u.levels[n + 1], u.degens[n][i]); !e.empty())
                r.add("degeneracy s" + std::to_string(i) + " on level " + std::to_string(n) + ": " + e);
    }
    if (!r.ok()) return r;
    auto lvl = [](int n, int i) { return " at level " + std::to_string(n) + " (i=" + std::to_string(i) + ")"; };
    if (d >= 1 && compose(cat, u.aug, u.faces[1][0]) != compose(cat, u.aug, u.faces[1][1]))
        r.add("augmentation does not equalize d0, d1");
    for (int n = 2; n <= d; ++n)
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i)
                if (compose(cat, u.faces[n - 1][i], u.faces[n][j]) != compose(cat, u.faces[n - 1][j - 1], u.faces[n][i]))
                    r.add("d_i d_j = d_{j-1} d_i fails" + lvl(n, i) + " j=" + std::to_string(j));
    for (int n = 0; n + 2 <= d; ++n)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= j; ++i)
                if (compose(cat, u.degens[n + 1][i], u.degens[n][j]) != compose(cat, u.degens[n + 1][j + 1], u.degens[n][i]))
                    r.add("s_i s_j = s_{j+1} s_i fails" + lvl(n, i) + " j=" + std::to_string(j));
    for (int n = 0; n < d; ++n) {
        const int m = n + 1;  // degens[n][j]: n -> m, faces[m][i]: m -> n
        CoRMap id = identity_map(cat, u.levels[n]);
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= m; ++i) {
                CoRMap lhs = compose(cat, u.faces[m][i], u.degens[n][j]);
                if (i == j || i == j + 1) {
                    if (lhs != id) r.add("d_i s_j = id fails" + lvl(m, i) + " j=" + std::to_string(j));
                } else if (i < j) {
                    if (n < 1) continue;
                    CoRMap rhs = compose(cat, u.degens[n - 1][j - 1], u.faces[n][i]);
                    if (lhs != rhs) r.add("d_i s_j = s_{j-1} d_i fails" + lvl(m, i) + " j=" + std::to_string(j));
                } else {
                    if (n < 1) continue;
                    CoRMap rhs = compose(cat, u.degens[n - 1][j], u.faces[n][i - 1]);
                    if (lhs != rhs) r.add("d_i s_j = s_j d_{i-1} fails" + lvl(m, i) + " j=" + std::to_string(j));
                }
            }
        }
    }
    return r;
}

Idx summand_leg(const FiniteCategory& cat, const AugSimplicialCoR& u, int n, Idx j) {
    Idx via = cat.identity(u.levels[n].summands[j]);
    for (int k = n; k >= 1; --k) {
        const auto& f = u.faces[k][k];
        via = cat.compose_checked(f.via[j], via);
        j = f.to[j];
    }
    return cat.compose_checked(u.aug.via[j], via);
}

AugSimplicialCoR truncate(const AugSimplicialCoR& u, int d) {
    if (d > u.trunc) throw InvalidInput("cannot truncate above the stored truncation");
    AugSimplicialCoR r;
    r.base = u.base;
    r.trunc = d;
    r.levels.assign(u.levels.begin(), u.levels.begin() + d + 1);
    r.faces.assign(u.faces.begin(), u.faces.begin() + d + 1);
    r.degens.assign(u.degens.begin(), u.degens.begin() + d);
    r.aug = u.aug;
    return r;
}

AugSimplicialCoR trivial_hypercover(const FiniteCategory& cat, Idx x, int d) {
    AugSimplicialCoR r;
    r.base = x;
    r.trunc = d;
    CoRMap id{{0}, {cat.identity(x)}};
    r.levels.assign(d + 1, representable(x));
    r.faces.assign(d + 1, {});
    r.degens.assign(d, {});
    for (int n = 1; n <= d; ++n) r.faces[n].assign(n + 1, id);
    for (int n = 0; n < d; ++n) r.degens[n].assign(n + 1, id);
    r.aug = id;
    return r;
}

std::pair<Idx, Idx> apply_surjection(const FiniteCategory& cat, const AugSimplicialCoR& u,
                                     const std::vector<int>& s, Idx j) {
    int m = s.empty() ? -1 : s.back();
    Idx via = cat.identity(u.levels[m].summands[j]);
    int level = m;
    for (std::size_t p = 0; p + 1 < s.size(); ++p) {
        if (s[p] != s[p + 1]) continue;
        const auto& sm = u.degens[level][p];
        via = cat.compose_checked(sm.via[j], via);
        j = sm.to[j];
        ++level;
    }
    return {j, via};
}

std::pair<Idx, Idx> apply_face_subset(const FiniteCategory& cat, const AugSimplicialCoR& u, int k,
                                      const std::vector<int>& subset, Idx j) {
    Idx via = cat.identity(u.levels[k].summands[j]);
    int level = k;
    std::size_t pos = subset.size();
    for (int v = k; v >= 0; --v) {
        if (pos > 0 && subset[pos - 1] == v) {
            --pos;
            continue;
        }
        const auto& f = u.faces[level][v];
        via = cat.compose_checked(f.via[j], via);
        j = f.to[j];
        --level;
    }
    return {j, via};
}

}  // namespace descente
