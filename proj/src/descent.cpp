#include "descente/descent.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

#include "descente/errors.hpp"
#include "descente/split_builder.hpp"

namespace descente {

int AbPresheaf::top_degree() const {
    int t = 0;
    for (const auto& c : values)
        for (int k = c.lo; k <= c.hi; ++k)
            if (c.rank(k) > 0) t = std::max(t, k);
    return t;
}

ValidationReport validate_ab_presheaf(const FiniteCategory& cat, const AbPresheaf& f) {
    ValidationReport r;
    if (f.values.size() != cat.num_objects()) {
        r.add("expected " + std::to_string(cat.num_objects()) + " object values");
        return r;
    }
    if (f.restrict.size() != cat.num_morphisms()) {
        r.add("expected " + std::to_string(cat.num_morphisms()) + " restriction maps");
        return r;
    }
    for (Idx o = 0; o < cat.num_objects(); ++o) {
        auto v = validate_complex(f.values[o]);
        for (const auto& s : v.violations) r.add("value at " + cat.object_id(o) + ": " + s);
    }
    if (!r.ok()) return r;
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        const auto& a = f.values[cat.dst(m)];
        const auto& b = f.values[cat.src(m)];
        bool shapes = true;
        for (const auto& [k, mat] : f.restrict[m].maps)
            if (mat.rows() != b.rank(k) || mat.cols() != a.rank(k)) shapes = false;
        if (!shapes) {
            r.add("restriction along " + cat.morphism_id(m) + " has the wrong shape");
            continue;
        }
        if (!is_chain_map(a, b, f.restrict[m])) r.add("restriction along " + cat.morphism_id(m) + " is not a chain map");
    }
    if (!r.ok()) return r;
    for (Idx o = 0; o < cat.num_objects(); ++o) {
        const auto& c = f.values[o];
        if (!chain_maps_equal(c, c, f.restrict[cat.identity(o)], identity_chain_map(c)))
            r.add("identity of " + cat.object_id(o) + " does not act as the identity");
    }
    for (Idx g = 0; g < cat.num_morphisms(); ++g)
        for (Idx h : cat.into(cat.src(g))) {
            Idx gh = cat.compose(g, h);
            if (gh == npos) continue;
            const auto& a = f.values[cat.dst(g)];
            const auto& b = f.values[cat.src(g)];
            const auto& c = f.values[cat.src(h)];
            ChainMap lhs = compose(a, b, c, f.restrict[h], f.restrict[g]);
            if (!chain_maps_equal(a, c, lhs, f.restrict[gh]))
                r.add("restriction is not functorial on " + cat.morphism_id(g) + " o " + cat.morphism_id(h));
        }
    return r;
}

ValidationReport validate_ab_map(const FiniteCategory& cat, const AbPresheaf& f, const AbPresheaf& g,
                                 const AbPresheafMap& m) {
    ValidationReport r;
    if (m.at.size() != cat.num_objects()) {
        r.add("expected one chain map per object");
        return r;
    }
    for (Idx o = 0; o < cat.num_objects(); ++o)
        if (!is_chain_map(f.values[o], g.values[o], m.at[o])) r.add("component at " + cat.object_id(o) + " is not a chain map");
    if (!r.ok()) return r;
    for (Idx k = 0; k < cat.num_morphisms(); ++k) {
        Idx a = cat.dst(k), b = cat.src(k);
        ChainMap lhs = compose(f.values[a], g.values[a], g.values[b], g.restrict[k], m.at[a]);
        ChainMap rhs = compose(f.values[a], f.values[b], g.values[b], m.at[b], f.restrict[k]);
        if (!chain_maps_equal(f.values[a], g.values[b], lhs, rhs)) r.add("not natural along " + cat.morphism_id(k));
    }
    return r;
}

AbPresheaf zero_ab_presheaf(const FiniteCategory& cat) {
    AbPresheaf f;
    f.values.assign(cat.num_objects(), ChainComplex::zero());
    f.restrict.assign(cat.num_morphisms(), ChainMap{});
    return f;
}

AbPresheaf constant_ab_presheaf(const FiniteCategory& cat) {
    AbPresheaf f;
    ChainComplex z;
    z.lo = 0;
    z.hi = 0;
    z.ranks = {1};
    f.values.assign(cat.num_objects(), z);
    ChainMap id;
    id.maps[0] = Matrix::identity(1);
    f.restrict.assign(cat.num_morphisms(), id);
    return f;
}

namespace {

struct SumLayout {
    ChainComplex c;
    // off[q - c.lo][i]: offset of summand i in degree q
    std::vector<std::vector<std::size_t>> off;
};

SumLayout direct_sum_layout(const std::vector<const ChainComplex*>& parts) {
    SumLayout s;
    int lo = INT_MAX, hi = INT_MIN;
    for (const auto* p : parts)
        if (p->hi >= p->lo) {
            lo = std::min(lo, p->lo);
            hi = std::max(hi, p->hi);
        }
    if (lo > hi) {
        s.c = ChainComplex::zero();
        return s;
    }
    s.c.lo = lo;
    s.c.hi = hi;
    s.c.ranks.assign(hi - lo + 1, 0);
    s.off.assign(hi - lo + 1, {});
    for (int q = lo; q <= hi; ++q)
        for (const auto* p : parts) {
            s.off[q - lo].push_back(s.c.ranks[q - lo]);
            s.c.ranks[q - lo] += p->rank(q);
        }
    for (int q = lo + 1; q <= hi; ++q) {
        Matrix d(s.c.rank(q - 1), s.c.rank(q));
        for (std::size_t i = 0; i < parts.size(); ++i)
            d.set_block(s.off[q - 1 - lo][i], s.off[q - lo][i], parts[i]->diff(q));
        s.c.diffs[q] = d;
    }
    return s;
}

SumLayout cor_layout(const AbPresheaf& f, const CoR& p) {
    std::vector<const ChainComplex*> parts;
    for (Idx a : p.summands) parts.push_back(&f.values.at(a));
    return direct_sum_layout(parts);
}

std::size_t offset_in(const SumLayout& s, int q, std::size_t i) {
    if (q < s.c.lo || q > s.c.hi) return 0;
    return s.off[q - s.c.lo][i];
}

}  // namespace

AbPresheaf direct_sum(const FiniteCategory& cat, const AbPresheaf& f, const AbPresheaf& g) {
    AbPresheaf r;
    std::vector<SumLayout> lay;
    for (Idx o = 0; o < cat.num_objects(); ++o) {
        lay.push_back(direct_sum_layout({&f.values[o], &g.values[o]}));
        r.values.push_back(lay.back().c);
    }
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        Idx a = cat.dst(m), b = cat.src(m);
        ChainMap cm;
        for (int q = r.values[a].lo; q <= r.values[a].hi; ++q) {
            Matrix x(r.values[b].rank(q), r.values[a].rank(q));
            x.set_block(offset_in(lay[b], q, 0), offset_in(lay[a], q, 0), f.restrict[m].at(q, f.values[a], f.values[b]));
            x.set_block(offset_in(lay[b], q, 1), offset_in(lay[a], q, 1), g.restrict[m].at(q, g.values[a], g.values[b]));
            cm.maps[q] = x;
        }
        r.restrict.push_back(cm);
    }
    return r;
}

AbPresheafMap projection_second(const FiniteCategory& cat, const AbPresheaf& f, const AbPresheaf& g) {
    AbPresheafMap m;
    for (Idx o = 0; o < cat.num_objects(); ++o) {
        SumLayout s = direct_sum_layout({&f.values[o], &g.values[o]});
        ChainMap cm;
        for (int q = s.c.lo; q <= s.c.hi; ++q) {
            Matrix x(g.values[o].rank(q), s.c.rank(q));
            x.set_block(0, offset_in(s, q, 1), Matrix::identity(g.values[o].rank(q)));
            cm.maps[q] = x;
        }
        m.at.push_back(cm);
    }
    return m;
}

ChainComplex evaluate_on_cor(const FiniteCategory& cat, const AbPresheaf& f, const CoR& p) {
    for (Idx a : p.summands)
        if (a >= cat.num_objects() || a >= f.values.size()) throw InvalidInput("unknown object in coproduct");
    return cor_layout(f, p).c;
}

ChainMap evaluate_map(const FiniteCategory& cat, const AbPresheaf& f, const CoR& p, const CoR& q, const CoRMap& g) {
    auto err = check_cor_map(cat, p, q, g);
    if (!err.empty()) throw InvalidInput(err);
    SumLayout sp = cor_layout(f, p), sq = cor_layout(f, q);
    ChainMap m;
    for (int k = sq.c.lo; k <= sq.c.hi; ++k) {
        if (sp.c.rank(k) == 0) continue;
        Matrix x(sp.c.rank(k), sq.c.rank(k));
        for (Idx i = 0; i < p.size(); ++i) {
            const auto& a = f.values[q.summands[g.to[i]]];
            const auto& b = f.values[p.summands[i]];
            x.set_block(offset_in(sp, k, i), offset_in(sq, k, g.to[i]), f.restrict[g.via[i]].at(k, a, b));
        }
        m.maps[k] = x;
    }
    return m;
}

BlockCosimplicial cosimplicial_from(const FiniteCategory& cat, const AbPresheaf& f, const AugSimplicialCoR& u) {
    (void)cat;
    BlockCosimplicial b;
    b.pieces = f.values;
    b.piece_maps = f.restrict;
    const int P = u.trunc;
    b.cofaces.resize(P + 1);
    b.codegens.resize(P + 1);
    auto parts = [](const CoRMap& m) {
        std::vector<std::pair<Idx, Idx>> v;
        for (Idx i = 0; i < m.size(); ++i) v.emplace_back(m.to[i], m.via[i]);
        return v;
    };
    for (int p = 0; p <= P; ++p) {
        b.blocks.push_back(u.levels[p].summands);
        if (p >= 1)
            for (const auto& d : u.faces[p]) b.cofaces[p].push_back(parts(d));
        if (p < P)
            for (const auto& s : u.degens[p]) b.codegens[p].push_back(parts(s));
    }
    return b;
}

std::string to_string(DescentStrategy s) {
    switch (s) {
        case DescentStrategy::Tot: return "tot";
        case DescentStrategy::Collapse: return "collapse";
        case DescentStrategy::Auto: return "auto";
    }
    return "auto";
}

DescentStrategy parse_strategy(const std::string& s) {
    if (s == "tot") return DescentStrategy::Tot;
    if (s == "collapse") return DescentStrategy::Collapse;
    if (s == "auto") return DescentStrategy::Auto;
    throw InvalidInput("unknown strategy '" + s + "' (expected tot, collapse or auto)");
}

namespace {

// U truncated at exactly `top`, extending when it stores fewer levels.
AugSimplicialCoR levels_up_to(const VerdierSite& site, const AugSimplicialCoR& u, int top, const DescentOptions& opts) {
    if (u.trunc >= top) return truncate(u, top);
    AugSimplicialCoR ext;
    if (opts.extend) {
        ext = opts.extend(top);
    } else if (opts.height) {
        if (*opts.height > u.trunc) throw InvalidInput("asserted height exceeds the stored levels");
        ext = coskeleton_cor(site, u, *opts.height, top);
    } else {
        HeightReport h = hypercover_height(site, u, u.trunc);
        if (!h.determined || !matching_maps_basal(site, u, h.height))
            throw InvalidInput("levels required up to " + std::to_string(top) + " (hypercover stores " +
                               std::to_string(u.trunc) + ")");
        ext = coskeleton_cor(site, u, h.height, top);
    }
    if (ext.trunc < top) throw InvalidInput("levels required up to " + std::to_string(top));
    return truncate(ext, top);
}

std::vector<Idx> default_universe(const FiniteCategory& cat, Idx x) {
    std::vector<Idx> v;
    for (Idx y = 0; y < cat.num_objects(); ++y)
        if (!cat.hom(y, x).empty()) v.push_back(y);
    return v;
}

bool concentrated(const ChainComplex& c) {
    HomologySummary h = homology(c);
    for (int k = h.lo; k <= h.hi; ++k) {
        if (k != 0 && !h.at(k).is_zero()) return false;
        if (k == 0 && !h.at(k).torsion.empty()) return false;
    }
    return true;
}

int top_of(const ChainComplex& c) {
    int t = INT_MIN;
    for (int k = c.lo; k <= c.hi; ++k)
        if (c.rank(k) > 0) t = std::max(t, k);
    return t;
}

int internal_top(const CosimplicialComplex& c) {
    int t = INT_MIN;
    for (const auto& l : c.levels) t = std::max(t, top_of(l));
    return t;
}

void verify_or_throw(const VerdierSite& site, const AugSimplicialCoR& u) {
    HypercoverReport r = verify_hypercover(site, u, u.trunc);
    if (!r.pass) throw InvalidInput("not a hypercover: matching map fails at level " + std::to_string(r.verified_to + 1));
}

Matrix augmentation_block(const TotResult& t, const ChainComplex& fx, const Matrix& e, int k) {
    Matrix m(t.tot.rank(k), fx.rank(k));
    auto it = t.offset.find({0, k});
    if (it != t.offset.end() && e.rows() > 0) m.set_block(it->second, 0, e);
    return m;
}

// Compares source -> Tot(c) on the window, where eps0 maps source into C^0.
void compare_with_tot(DescentReport& rep, const ChainComplex& source, const CosimplicialComplex& c, const ChainMap& eps0,
                      int a, int b) {
    TotResult t = totalize(c, a, b, false);
    rep.levels_used = t.levels_used;
    rep.levels_required = t.levels_required;
    rep.sound = t.sound;
    ChainMap eps;
    for (int k = source.lo; k <= source.hi; ++k) eps.maps[k] = augmentation_block(t, source, eps0.at(k, source, c.levels[0]), k);
    if (!is_chain_map(source, t.tot, eps)) throw InternalError("augmentation into Tot is not a chain map");
    rep.pass = t.sound;
    for (int k = a; k <= b; ++k) {
        DegreeComparison dc;
        dc.k = k;
        dc.source = homology_at(source, k);
        dc.target = homology_at(t.tot, k);
        dc.iso = homology_iso(source, t.tot, eps, k);
        rep.pass = rep.pass && dc.iso;
        rep.degrees.push_back(dc);
    }
}

int window_top(const ChainComplex& fx, const CosimplicialComplex& c) { return std::max({0, top_of(fx), internal_top(c)}); }

std::string group_power(std::size_t n) { return n == 0 ? "0" : n == 1 ? "Z" : "Z^" + std::to_string(n); }

DescentReport descent_by_tot(const VerdierSite& site, const AbPresheaf& f, const AugSimplicialCoR& u,
                             const DescentOptions& opts) {
    const auto& cat = site.cat();
    const ChainComplex& fx = f.values[u.base];
    AugSimplicialCoR cur = u;
    CosimplicialComplex c;
    int a = 0, b = 0;
    for (int guard = 0;; ++guard) {
        if (guard > 64) throw InternalError("level requirement did not stabilize");
        c = cosimplicial_from(cat, f, cur).assemble();
        a = opts.window ? opts.window->first : -1;
        b = opts.window ? opts.window->second : window_top(fx, c);
        const int need = std::max(1, required_levels(c, a));
        if (cur.trunc + 1 == need) break;
        if (cur.trunc + 1 > need) {
            // Fewer levels may lower the internal top; keep the extra ones.
            AugSimplicialCoR t = truncate(cur, need - 1);
            CosimplicialComplex ct = cosimplicial_from(cat, f, t).assemble();
            if (required_levels(ct, a) <= need) {
                cur = t;
                c = ct;
            }
            break;
        }
        cur = levels_up_to(site, u, need - 1, opts);
    }
    DescentReport rep;
    rep.name = opts.name;
    rep.strategy = "tot";
    rep.window_lo = a;
    rep.window_hi = b;
    ChainMap eps0 = evaluate_map(cat, f, cur.levels[0], representable(u.base), cur.aug);
    compare_with_tot(rep, fx, c, eps0, a, b);
    return rep;
}

DescentReport descent_by_collapse(const VerdierSite& site, const AbPresheaf& f, const AugSimplicialCoR& u,
                                  const std::vector<Idx>& universe, const DescentOptions& opts) {
    const auto& cat = site.cat();
    const ChainComplex& fx = f.values[u.base];
    const int a = opts.window ? opts.window->first : -1;
    const int top = std::max(1, 1 - a);
    AugSimplicialCoR cur = levels_up_to(site, u, top, opts);
    BlockCosimplicial bc = cosimplicial_from(cat, f, cur);
    CollapseResult cr = column_collapse(bc, universe);
    if (!cr.ok) throw InvalidInput("column collapse refused: " + cr.refusal);
    const int b = opts.window ? opts.window->second : std::max(0, top_of(fx));

    // A = (F(X)_1 -> F(X)_0); H_0(F(X)) -> H^0 through the level-0 blocks.
    ChainComplex a01;
    a01.lo = 0;
    a01.hi = 1;
    a01.ranks = {fx.rank(0), fx.rank(1)};
    a01.diffs[1] = fx.diff(1);
    Matrix e0(cr.level_ranks[0], fx.rank(0));
    std::size_t row = 0;
    for (Idx j = 0; j < cur.levels[0].size(); ++j) {
        Idx y = cur.levels[0].summands[j];
        HomologyPresentation ps = homology_presentation(f.values[y], 0);
        Matrix m = ps.free_projection * ps.coordinates * f.restrict[cur.aug.via[j]].at(0, fx, f.values[y]);
        e0.set_block(row, 0, m);
        row += ps.group.betti;
    }
    ChainMap eps;
    eps.maps[0] = e0;
    if (!is_chain_map(a01, cr.cochain, eps)) throw InternalError("augmentation into the collapsed complex is not a chain map");

    DescentReport rep;
    rep.name = opts.name;
    rep.strategy = "collapse";
    rep.window_lo = a;
    rep.window_hi = b;
    rep.levels_used = cur.trunc + 1;
    rep.levels_required = top + 1;
    rep.sound = true;
    rep.pass = true;
    for (int k = a; k <= b; ++k) {
        DegreeComparison dc;
        dc.k = k;
        dc.source = homology_at(fx, k);
        if (k <= 0) dc.target = cr.cohomology.at(static_cast<std::size_t>(-k));
        dc.iso = k == 0 ? homology_iso(a01, cr.cochain, eps, 0) : (dc.source.is_zero() && dc.target.is_zero());
        rep.pass = rep.pass && dc.iso;
        rep.degrees.push_back(dc);
    }
    std::ostringstream os;
    os << "H_0(Tot) = ker(d0 - d1: " << group_power(cr.level_ranks[0]) << " -> " << group_power(cr.level_ranks[1])
       << ") = " << cr.cohomology[0].str();
    rep.detail = os.str();
    return rep;
}

}  // namespace

DescentReport check_descent(const VerdierSite& site, const AbPresheaf& f, const AugSimplicialCoR& u,
                            const DescentOptions& opts) {
    const auto& cat = site.cat();
    auto v = validate_ab_presheaf(cat, f);
    if (!v.ok()) throw InvalidInput("invalid abelian presheaf: " + v.violations.front());
    auto vs = validate_simplicial(cat, u);
    if (!vs.ok()) throw InvalidInput("malformed hypercover: " + vs.violations.front());
    if (opts.window && opts.window->first > opts.window->second) throw InvalidInput("empty degree window");
    if (opts.verify) verify_or_throw(site, u);

    DescentStrategy s = opts.strategy;
    std::vector<Idx> universe = opts.universe ? *opts.universe : default_universe(cat, u.base);
    if (s != DescentStrategy::Tot) {
        std::string why;
        for (Idx y : universe)
            if (!concentrated(f.values.at(y))) {
                why = "value at " + cat.object_id(y) + " has homology outside degree 0";
                break;
            }
        for (int k = f.values[u.base].lo; why.empty() && k < 0; ++k)
            if (f.values[u.base].rank(k) > 0) why = "F(X) has negative degrees";
        if (s == DescentStrategy::Collapse && !why.empty()) throw InvalidInput("column collapse refused: " + why);
        if (why.empty()) return descent_by_collapse(site, f, u, universe, opts);
    }
    return descent_by_tot(site, f, u, opts);
}

namespace {

// Kernel of [e | -m]: A + B -> C, as a saturated basis and coordinates.
struct PullbackDegree {
    Matrix basis;   // (a + b) x r
    Matrix coords;  // r x (a + b)
};

PullbackDegree pullback_degree(const Matrix& e, const Matrix& m, std::size_t a, std::size_t b, std::size_t c) {
    Matrix joint(c, a + b);
    if (c > 0) {
        if (a > 0) joint.set_block(0, 0, e);
        if (b > 0) joint.set_block(0, a, m.scaled(-1));
    }
    SmithForm s = smith_normal_form(joint, true);
    const std::size_t n = a + b;
    return {s.v->block(0, n, s.rank, n), s.vinv->block(s.rank, n, 0, n)};
}

Matrix block_diag(const Matrix& x, const Matrix& y) {
    Matrix r(x.rows() + y.rows(), x.cols() + y.cols());
    r.set_block(0, 0, x);
    r.set_block(x.rows(), x.cols(), y);
    return r;
}

}  // namespace

DescentReport check_relative_descent(const VerdierSite& site, const AbPresheaf& f, const AbPresheaf& g,
                                     const AbPresheafMap& m, const AugSimplicialCoR& u, const DescentOptions& opts) {
    const auto& cat = site.cat();
    for (const auto* p : {&f, &g}) {
        auto v = validate_ab_presheaf(cat, *p);
        if (!v.ok()) throw InvalidInput("invalid abelian presheaf: " + v.violations.front());
    }
    auto vm = validate_ab_map(cat, f, g, m);
    if (!vm.ok()) throw InvalidInput("invalid presheaf map: " + vm.violations.front());
    for (Idx o = 0; o < cat.num_objects(); ++o)
        for (int k = std::max(1, g.values[o].lo); k <= g.values[o].hi; ++k) {
            SmithForm s = smith_normal_form(m.at[o].at(k, f.values[o], g.values[o]), false);
            bool onto = s.rank == g.values[o].rank(k) &&
                        std::all_of(s.diagonal.begin(), s.diagonal.end(), [](const mpz_class& d) { return d == 1; });
            if (!onto)
                throw InvalidInput("not an objectwise fibration: map at " + cat.object_id(o) + " is not onto in degree " +
                                   std::to_string(k));
        }
    auto vs = validate_simplicial(cat, u);
    if (!vs.ok()) throw InvalidInput("malformed hypercover: " + vs.violations.front());
    if (opts.verify) verify_or_throw(site, u);

    const Idx x = u.base;
    const ChainComplex& fx = f.values[x];
    const ChainComplex& gx = g.values[x];
    const int a = opts.window ? opts.window->first : -1;

    auto build = [&](const AugSimplicialCoR& v, ChainMap& eps0) {
        const int P = v.trunc;
        CosimplicialComplex fc = cosimplicial_from(cat, f, v).assemble();
        CosimplicialComplex gc = cosimplicial_from(cat, g, v).assemble();
        int lo = std::min(fx.lo, gx.lo), hi = std::max(fx.hi, gx.hi);
        for (const auto& l : fc.levels) lo = std::min(lo, l.lo), hi = std::max(hi, l.hi);
        std::vector<ChainMap> eg(P + 1), mf(P + 1);
        for (int p = 0; p <= P; ++p) {
            // G(X) -> G(U_p) along any iterated face; all agree by the simplicial identities.
            CoRMap lvl = identity_map(cat, v.levels[p]);
            for (int q = p; q > 0; --q) lvl = compose(cat, v.faces[q][0], lvl);
            CoRMap to_base = compose(cat, v.aug, lvl);
            eg[p] = evaluate_map(cat, g, v.levels[p], representable(x), to_base);
            ChainMap mp;
            for (int k = lo; k <= hi; ++k) {
                Matrix blk(gc.levels[p].rank(k), fc.levels[p].rank(k));
                std::size_t r = 0, col = 0;
                for (Idx y : v.levels[p].summands) {
                    blk.set_block(r, col, m.at[y].at(k, f.values[y], g.values[y]));
                    r += g.values[y].rank(k);
                    col += f.values[y].rank(k);
                }
                mp.maps[k] = blk;
            }
            mf[p] = mp;
        }
        CosimplicialComplex e;
        std::vector<std::map<int, PullbackDegree>> pb(P + 1);
        for (int p = 0; p <= P; ++p) {
            ChainComplex lev;
            lev.lo = lo;
            lev.hi = hi;
            for (int k = lo; k <= hi; ++k) {
                pb[p][k] = pullback_degree(eg[p].at(k, gx, gc.levels[p]), mf[p].at(k, fc.levels[p], gc.levels[p]),
                                           gx.rank(k), fc.levels[p].rank(k), gc.levels[p].rank(k));
                lev.ranks.push_back(pb[p][k].basis.cols());
            }
            for (int k = lo + 1; k <= hi; ++k)
                lev.diffs[k] = pb[p][k - 1].coords * block_diag(gx.diff(k), fc.levels[p].diff(k)) * pb[p][k].basis;
            e.levels.push_back(lev);
        }
        auto transport = [&](int from, int to, const ChainMap& fm) {
            ChainMap r;
            for (int k = lo; k <= hi; ++k)
                r.maps[k] = pb[to][k].coords *
                            block_diag(Matrix::identity(gx.rank(k)), fm.at(k, fc.levels[from], fc.levels[to])) *
                            pb[from][k].basis;
            return r;
        };
        e.cofaces.resize(P + 1);
        e.codegens.resize(P + 1);
        for (int p = 1; p <= P; ++p)
            for (const auto& d : fc.cofaces[p]) e.cofaces[p].push_back(transport(p - 1, p, d));
        for (int p = 0; p < P; ++p)
            for (const auto& s : fc.codegens[p]) e.codegens[p].push_back(transport(p + 1, p, s));
        ChainMap fe = evaluate_map(cat, f, v.levels[0], representable(x), v.aug);
        for (int k = lo; k <= hi; ++k) {
            Matrix stacked = vconcat(m.at[x].at(k, fx, gx), fe.at(k, fx, fc.levels[0]));
            eps0.maps[k] = pb[0][k].coords * stacked;
        }
        return e;
    };

    AugSimplicialCoR cur = u;
    CosimplicialComplex e;
    ChainMap eps0;
    for (int guard = 0;; ++guard) {
        if (guard > 64) throw InternalError("level requirement did not stabilize");
        eps0 = ChainMap{};
        e = build(cur, eps0);
        const int need = std::max(1, required_levels(e, a));
        if (cur.trunc + 1 >= need) break;
        cur = levels_up_to(site, u, need - 1, opts);
    }
    DescentReport rep;
    rep.name = opts.name;
    rep.strategy = "tot";
    rep.window_lo = a;
    rep.window_hi = opts.window ? opts.window->second : window_top(fx, e);
    compare_with_tot(rep, fx, e, eps0, rep.window_lo, rep.window_hi);
    return rep;
}

CechDescentReport check_cech_descent(const VerdierSite& site, const AbPresheaf& f, Idx x, const DescentOptions& opts) {
    CechDescentReport rep;
    rep.object = x;
    const auto& cat = site.cat();
    for (const auto& fam : site.closed_families(x)) {
        DescentOptions o = opts;
        o.verify = false;
        o.extend = [&site, fam](int d) { return cech_complex(site, fam, d); };
        std::string name = "cech{";
        for (std::size_t i = 0; i < fam.members.size(); ++i) name += (i ? "," : "") + cat.morphism_id(fam.members[i]);
        o.name = name + "}";
        DescentReport r = check_descent(site, f, cech_complex(site, fam, 1), o);
        if (!r.pass && !rep.first_failure) rep.first_failure = rep.reports.size();
        rep.pass = rep.pass && r.pass;
        rep.families.push_back(fam);
        rep.reports.push_back(std::move(r));
    }
    return rep;
}

namespace {

struct BoundedSearch {
    const VerdierSite* site;
    Idx x;
    int h;
    std::size_t s;
    AugSimplicialCoR base;
    std::size_t budget, builds = 0;
    BoundedEnumeration out;

    // Replays the chosen families of levels 0..n-1 and reports the objects of
    // the uncovered matching summands of level n.
    SplitBuilder replay(const std::vector<std::vector<Idx>>& choices) {
        SplitBuilder b(*site, base);
        for (const auto& lvl : choices)
            b.build_level(CoverMode::Basal, [&lvl](Idx, std::size_t i) -> std::optional<Idx> { return lvl.at(i); });
        return b;
    }

    bool spend() {
        if (++builds > budget) {
            out.truncated = true;
            return false;
        }
        return true;
    }

    void run(std::vector<std::vector<Idx>>& choices) {
        if (out.truncated) return;
        const int n = static_cast<int>(choices.size());
        std::vector<Idx> objs;
        {
            if (!spend()) return;
            SplitBuilder probe = replay(choices);
            probe.build_level(CoverMode::Basal, [&objs](Idx y, std::size_t) -> std::optional<Idx> {
                objs.push_back(y);
                return std::nullopt;
            });
        }
        std::vector<Idx> pick(objs.size(), 0);
        for (;;) {
            if (!spend()) return;
            choices.push_back(pick);
            SplitBuilder b = replay(choices);
            const AugSimplicialCoR& v = b.result();
            if (v.levels[n].size() <= s) {
                if (n == h) {
                    if (verify_hypercover(*site, v, h).pass) {
                        bool seen = std::any_of(out.items.begin(), out.items.end(),
                                                [&](const AugSimplicialCoR& w) { return is_isomorphic(*site, v, w); });
                        if (!seen) out.items.push_back(v);
                    }
                } else {
                    run(choices);
                }
            }
            choices.pop_back();
            if (out.truncated) return;
            std::size_t i = 0;
            while (i < pick.size() && ++pick[i] == site->closed_families(objs[i]).size()) pick[i++] = 0;
            if (i == pick.size()) break;
        }
    }
};

}  // namespace

BoundedEnumeration enumerate_bounded_hypercovers(const VerdierSite& site, Idx x, int h, std::size_t s) {
    if (h < 0) throw InvalidInput("height bound must be nonnegative");
    BoundedSearch search{&site, x, h, s, trivial_hypercover(site.cat(), x, h), enumeration_budget(), 0, {}};
    std::vector<std::vector<Idx>> choices;
    search.run(choices);
    return search.out;
}

}  // namespace descente
