#include "descente/homalg.hpp"

#include <algorithm>
#include <sstream>

#include "descente/errors.hpp"

namespace descente {

std::size_t ChainComplex::rank(int k) const {
    if (k < lo || k > hi) return 0;
    return ranks[k - lo];
}

Matrix ChainComplex::diff(int k) const {
    auto it = diffs.find(k);
    if (it != diffs.end()) return it->second;
    return Matrix(rank(k - 1), rank(k));
}

ChainComplex ChainComplex::zero() { return ChainComplex{}; }

Matrix ChainMap::at(int k, const ChainComplex& src, const ChainComplex& dst) const {
    auto it = maps.find(k);
    if (it != maps.end()) return it->second;
    return Matrix(dst.rank(k), src.rank(k));
}

ValidationReport validate_complex(const ChainComplex& c) {
    ValidationReport r;
    if (c.hi >= c.lo && c.ranks.size() != static_cast<std::size_t>(c.hi - c.lo + 1)) {
        r.add("ranks do not match the degree range");
        return r;
    }
    for (const auto& [k, m] : c.diffs)
        if (m.rows() != c.rank(k - 1) || m.cols() != c.rank(k))
            r.add("differential in degree " + std::to_string(k) + " has the wrong shape");
    if (!r.ok()) return r;
    for (int k = c.lo + 1; k <= c.hi; ++k)
        if (!(c.diff(k - 1) * c.diff(k)).is_zero()) r.add("d o d != 0 in degree " + std::to_string(k));
    return r;
}

bool is_chain_map(const ChainComplex& a, const ChainComplex& b, const ChainMap& f) {
    int lo = std::min(a.lo, b.lo), hi = std::max(a.hi, b.hi);
    for (const auto& [k, m] : f.maps)
        if (m.rows() != b.rank(k) || m.cols() != a.rank(k)) return false;
    for (int k = lo; k <= hi + 1; ++k)
        if (!(b.diff(k) * f.at(k, a, b) == f.at(k - 1, a, b) * a.diff(k))) return false;
    return true;
}

ChainMap identity_chain_map(const ChainComplex& c) {
    ChainMap f;
    for (int k = c.lo; k <= c.hi; ++k) f.maps[k] = Matrix::identity(c.rank(k));
    return f;
}

ChainMap compose(const ChainComplex& a, const ChainComplex& b, const ChainComplex& c, const ChainMap& g,
                 const ChainMap& f) {
    ChainMap r;
    for (int k = a.lo; k <= a.hi; ++k)
        if (c.rank(k) > 0 && a.rank(k) > 0) r.maps[k] = g.at(k, b, c) * f.at(k, a, b);
    return r;
}

bool chain_maps_equal(const ChainComplex& a, const ChainComplex& b, const ChainMap& f, const ChainMap& g) {
    for (int k = a.lo; k <= a.hi; ++k)
        if (!(f.at(k, a, b) == g.at(k, a, b))) return false;
    return true;
}

std::string AbelianGroup::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    if (betti > 0) {
        os << "Z";
        if (betti > 1) os << "^" << betti;
        first = false;
    }
    for (const auto& t : torsion) {
        os << (first ? "" : " + ") << "Z/" << t.get_str();
        first = false;
    }
    return os.str();
}

AbelianGroup HomologySummary::at(int k) const {
    if (k < lo || k > hi) return {};
    return groups[k - lo];
}

bool HomologySummary::acyclic() const {
    return std::all_of(groups.begin(), groups.end(), [](const AbelianGroup& g) { return g.is_zero(); });
}

namespace {

void require_complex(const ChainComplex& c) {
    auto r = validate_complex(c);
    if (!r.ok()) throw InvalidInput("not a complex: " + r.violations.front());
}

AbelianGroup group_from(std::size_t rank_k, std::size_t rank_out, const SmithForm& in) {
    AbelianGroup g;
    g.betti = rank_k - rank_out - in.rank;
    for (const auto& d : in.diagonal)
        if (d > 1) g.torsion.push_back(d);
    return g;
}

}  // namespace

HomologySummary homology(const ChainComplex& c) {
    require_complex(c);
    HomologySummary h;
    h.lo = c.lo;
    h.hi = c.hi;
    std::map<int, SmithForm> snf;
    for (int k = c.lo; k <= c.hi + 1; ++k) snf[k] = smith_normal_form(c.diff(k), false);
    for (int k = c.lo; k <= c.hi; ++k) h.groups.push_back(group_from(c.rank(k), snf[k].rank, snf[k + 1]));
    return h;
}

AbelianGroup homology_at(const ChainComplex& c, int k) {
    SmithForm out = smith_normal_form(c.diff(k), false), in = smith_normal_form(c.diff(k + 1), false);
    return group_from(c.rank(k), out.rank, in);
}

HomologyPresentation homology_presentation(const ChainComplex& c, int k) {
    HomologyPresentation p;
    const std::size_t n = c.rank(k);
    SmithForm s = smith_normal_form(c.diff(k), true);
    p.cycles = s.v->block(0, n, s.rank, n);
    p.coordinates = s.vinv->block(s.rank, n, 0, n);
    p.relations = p.coordinates * c.diff(k + 1);
    const std::size_t z = n - s.rank;
    SmithForm r = smith_normal_form(p.relations, true);
    p.group.betti = z - r.rank;
    for (const auto& d : r.diagonal)
        if (d > 1) p.group.torsion.push_back(d);
    p.free_projection = r.u->block(r.rank, z, 0, z);
    p.free_lift = r.uinv->block(0, z, r.rank, z);
    return p;
}

bool homology_iso(const ChainComplex& a, const ChainComplex& b, const ChainMap& f, int k) {
    HomologyPresentation pa = homology_presentation(a, k), pb = homology_presentation(b, k);
    const std::size_t za = pa.cycles.cols(), zb = pb.cycles.cols();
    Matrix F = pb.coordinates * f.at(k, a, b) * pa.cycles;
    Matrix m = hconcat(F, pb.relations);
    SmithForm s = smith_normal_form(m, true);
    if (s.rank != zb) return false;
    for (const auto& d : s.diagonal)
        if (d != 1) return false;
    if (za == 0) return true;
    Matrix kernel_x = s.v->block(0, za, s.rank, m.cols());
    if (kernel_x.cols() == 0) return true;
    return solve_integer(pa.relations, kernel_x).has_value();
}

ChainComplex mapping_cone(const ChainComplex& a, const ChainComplex& b, const ChainMap& f) {
    if (!is_chain_map(a, b, f)) throw InvalidInput("mapping cone of a map that is not a chain map");
    ChainComplex c;
    bool ea = a.hi < a.lo, eb = b.hi < b.lo;
    if (ea && eb) return c;
    c.lo = ea ? b.lo : eb ? a.lo + 1 : std::min(a.lo + 1, b.lo);
    c.hi = ea ? b.hi : eb ? a.hi + 1 : std::max(a.hi + 1, b.hi);
    for (int n = c.lo; n <= c.hi; ++n) c.ranks.push_back(a.rank(n - 1) + b.rank(n));
    for (int n = c.lo + 1; n <= c.hi; ++n) {
        Matrix d(c.rank(n - 1), c.rank(n));
        const std::size_t a2 = a.rank(n - 2), a1 = a.rank(n - 1);
        d.set_block(0, 0, a.diff(n - 1).scaled(-1));
        d.set_block(a2, 0, f.at(n - 1, a, b));
        d.set_block(a2, a1, b.diff(n));
        c.diffs[n] = d;
    }
    return c;
}

bool is_quasi_isomorphism(const ChainComplex& a, const ChainComplex& b, const ChainMap& f) {
    return homology(mapping_cone(a, b, f)).acyclic();
}

ValidationReport validate_cosimplicial(const CosimplicialComplex& c) {
    ValidationReport r;
    const int P = c.top();
    auto L = [&](int p) -> const ChainComplex& { return c.levels[p]; };
    for (int p = 0; p <= P; ++p) {
        auto v = validate_complex(L(p));
        if (!v.ok()) r.add("level " + std::to_string(p) + ": " + v.violations.front());
    }
    if (static_cast<int>(c.cofaces.size()) != P + 1 || static_cast<int>(c.codegens.size()) != P + 1) {
        r.add("coface or codegeneracy table has the wrong length");
        return r;
    }
    for (int p = 1; p <= P; ++p) {
        if (static_cast<int>(c.cofaces[p].size()) != p + 1) r.add("level " + std::to_string(p) + " needs p+1 cofaces");
        for (const auto& d : c.cofaces[p])
            if (!is_chain_map(L(p - 1), L(p), d)) r.add("coface into level " + std::to_string(p) + " is not a chain map");
    }
    for (int p = 0; p < P; ++p) {
        if (static_cast<int>(c.codegens[p].size()) != p + 1)
            r.add("level " + std::to_string(p) + " needs p+1 codegeneracies");
        for (const auto& s : c.codegens[p])
            if (!is_chain_map(L(p + 1), L(p), s))
                r.add("codegeneracy onto level " + std::to_string(p) + " is not a chain map");
    }
    if (!r.ok()) return r;
    auto comp = [&](int from, int mid, int to, const ChainMap& g, const ChainMap& f) {
        return compose(L(from), L(mid), L(to), g, f);
    };
    auto eq = [&](int from, int to, const ChainMap& f, const ChainMap& g) { return chain_maps_equal(L(from), L(to), f, g); };
    for (int p = 2; p <= P; ++p)
        for (int j = 1; j <= p; ++j)
            for (int i = 0; i < j; ++i)
                if (!eq(p - 2, p, comp(p - 2, p - 1, p, c.cofaces[p][j], c.cofaces[p - 1][i]),
                        comp(p - 2, p - 1, p, c.cofaces[p][i], c.cofaces[p - 1][j - 1])))
                    r.add("d^j d^i identity fails into level " + std::to_string(p));
    for (int p = 0; p + 1 <= P; ++p)
        for (int j = 0; j <= p; ++j)
            for (int i = 0; i <= p + 1; ++i) {
                ChainMap lhs = comp(p, p + 1, p, c.codegens[p][j], c.cofaces[p + 1][i]);
                bool ok;
                if (i == j || i == j + 1) {
                    ok = eq(p, p, lhs, identity_chain_map(L(p)));
                } else if (i < j) {
                    ok = eq(p, p, lhs, comp(p, p - 1, p, c.cofaces[p][i], c.codegens[p - 1][j - 1]));
                } else {
                    ok = eq(p, p, lhs, comp(p, p - 1, p, c.cofaces[p][i - 1], c.codegens[p - 1][j]));
                }
                if (!ok) r.add("s^j d^i identity fails on level " + std::to_string(p));
            }
    for (int p = 0; p + 2 <= P; ++p)
        for (int j = 0; j <= p; ++j)
            for (int i = 0; i <= j; ++i)
                if (!eq(p + 2, p, comp(p + 2, p + 1, p, c.codegens[p][j], c.codegens[p + 1][i]),
                        comp(p + 2, p + 1, p, c.codegens[p][i], c.codegens[p + 1][j + 1])))
                    r.add("s^j s^i identity fails onto level " + std::to_string(p));
    return r;
}

ChainMap alternating_coface(const CosimplicialComplex& c, int p) {
    const auto& a = c.levels[p - 1];
    const auto& b = c.levels[p];
    ChainMap d;
    for (int k = std::min(a.lo, b.lo); k <= std::max(a.hi, b.hi); ++k) {
        if (a.rank(k) == 0 || b.rank(k) == 0) continue;
        Matrix m(b.rank(k), a.rank(k));
        for (int i = 0; i <= p; ++i) {
            Matrix t = c.cofaces[p][i].at(k, a, b);
            m = m + (i % 2 ? t.scaled(-1) : t);
        }
        d.maps[k] = m;
    }
    return d;
}

namespace {

int internal_extent(const CosimplicialComplex& c, bool high) {
    int v = high ? INT32_MIN : INT32_MAX;
    for (const auto& l : c.levels)
        for (int q = l.lo; q <= l.hi; ++q)
            if (l.rank(q) > 0) v = high ? std::max(v, q) : std::min(v, q);
    if (v == INT32_MIN || v == INT32_MAX) return 0;
    return v;
}

}  // namespace

int required_levels(const CosimplicialComplex& c, int a) { return internal_extent(c, true) - a + 2; }

TotResult totalize(const CosimplicialComplex& c, int a, int b, bool normalized) {
    const int P = c.top();
    if (P < 0) throw InvalidInput("totalization of an empty cosimplicial complex");
    TotResult res;
    res.window_lo = a;
    res.window_hi = b;
    res.levels_used = P + 1;
    res.internal_hi = internal_extent(c, true);
    res.levels_required = required_levels(c, a);
    res.sound = res.levels_used >= res.levels_required;
    const int qlo = internal_extent(c, false), qhi = res.internal_hi;

    // Basis of each (p, q) block: all of C^p_q, or the codegeneracy kernels.
    std::map<std::pair<int, int>, Matrix> basis, coords;
    for (int p = 0; p <= P; ++p)
        for (int q = qlo; q <= qhi; ++q) {
            const std::size_t n = c.levels[p].rank(q);
            if (!normalized || p == 0) {
                basis[{p, q}] = Matrix::identity(n);
                coords[{p, q}] = Matrix::identity(n);
                continue;
            }
            Matrix stacked(0, n);
            for (int j = 0; j < p; ++j) stacked = vconcat(stacked, c.codegens[p - 1][j].at(q, c.levels[p], c.levels[p - 1]));
            SmithForm s = smith_normal_form(stacked, true);
            basis[{p, q}] = s.v->block(0, n, s.rank, n);
            coords[{p, q}] = s.vinv->block(s.rank, n, 0, n);
        }
    std::vector<ChainMap> delta(P + 1);
    for (int p = 1; p <= P; ++p) delta[p] = alternating_coface(c, p);

    ChainComplex& t = res.tot;
    t.lo = qlo - P;
    t.hi = qhi;
    t.ranks.assign(t.hi - t.lo + 1, 0);
    for (int n = t.lo; n <= t.hi; ++n)
        for (int p = 0; p <= P; ++p) {
            int q = n + p;
            if (q < qlo || q > qhi) continue;
            res.offset[{p, q}] = t.ranks[n - t.lo];
            t.ranks[n - t.lo] += basis[{p, q}].cols();
        }
    for (int n = t.lo + 1; n <= t.hi; ++n) {
        Matrix d(t.rank(n - 1), t.rank(n));
        for (int p = 0; p <= P; ++p) {
            int q = n + p;
            if (q < qlo || q > qhi) continue;
            const Matrix& K = basis[{p, q}];
            if (K.cols() == 0) continue;
            if (q - 1 >= qlo) {
                Matrix m = coords[{p, q - 1}] * c.levels[p].diff(q) * K;
                d.set_block(res.offset[{p, q - 1}], res.offset[{p, q}], m);
            }
            if (p + 1 <= P) {
                Matrix m = coords[{p + 1, q}] * delta[p + 1].at(q, c.levels[p], c.levels[p + 1]) * K;
                d.set_block(res.offset[{p + 1, q}], res.offset[{p, q}], (q % 2 == 0) ? m : m.scaled(-1));
            }
        }
        t.diffs[n] = d;
    }
    auto v = validate_complex(t);
    if (!v.ok()) throw InternalError("total complex is not a complex: " + v.violations.front());
    return res;
}

CosimplicialComplex BlockCosimplicial::assemble() const {
    CosimplicialComplex c;
    const int P = top();
    int lo = INT32_MAX, hi = INT32_MIN;
    for (const auto& pc : pieces)
        if (pc.hi >= pc.lo) {
            lo = std::min(lo, pc.lo);
            hi = std::max(hi, pc.hi);
        }
    if (lo > hi) lo = 0, hi = -1;
    // offsets[p][b][q]
    std::vector<std::vector<std::vector<std::size_t>>> off(P + 1);
    for (int p = 0; p <= P; ++p) {
        ChainComplex l;
        l.lo = lo;
        l.hi = hi;
        l.ranks.assign(hi >= lo ? hi - lo + 1 : 0, 0);
        off[p].resize(blocks[p].size());
        for (Idx b = 0; b < blocks[p].size(); ++b)
            for (int q = lo; q <= hi; ++q) {
                off[p][b].push_back(l.ranks[q - lo]);
                l.ranks[q - lo] += pieces[blocks[p][b]].rank(q);
            }
        for (int q = lo + 1; q <= hi; ++q) {
            Matrix d(l.rank(q - 1), l.rank(q));
            for (Idx b = 0; b < blocks[p].size(); ++b)
                d.set_block(off[p][b][q - 1 - lo], off[p][b][q - lo], pieces[blocks[p][b]].diff(q));
            l.diffs[q] = d;
        }
        c.levels.push_back(std::move(l));
    }
    auto assemble_map = [&](int from, int to, const std::vector<std::pair<Idx, Idx>>& parts) {
        ChainMap f;
        for (int q = lo; q <= hi; ++q) {
            Matrix m(c.levels[to].rank(q), c.levels[from].rank(q));
            for (Idx b = 0; b < parts.size(); ++b) {
                auto [src, pm] = parts[b];
                const auto& sp = pieces[blocks[from][src]];
                const auto& dp = pieces[blocks[to][b]];
                m.set_block(off[to][b][q - lo], off[from][src][q - lo], piece_maps[pm].at(q, sp, dp));
            }
            f.maps[q] = m;
        }
        return f;
    };
    c.cofaces.resize(P + 1);
    c.codegens.resize(P + 1);
    for (int p = 1; p <= P; ++p)
        for (const auto& parts : cofaces[p]) c.cofaces[p].push_back(assemble_map(p - 1, p, parts));
    for (int p = 0; p < P; ++p)
        for (const auto& parts : codegens[p]) c.codegens[p].push_back(assemble_map(p + 1, p, parts));
    return c;
}

namespace {

std::string concentration_problem(const ChainComplex& c) {
    HomologySummary h = homology(c);
    for (int k = h.lo; k <= h.hi; ++k) {
        const auto& g = h.at(k);
        if (k != 0 && !g.is_zero()) return "homology " + g.str() + " in degree " + std::to_string(k);
        if (k == 0 && !g.torsion.empty()) return "torsion " + g.str() + " in degree 0";
    }
    return {};
}

// H_0(f) on free parts.
Matrix induced_h0(const HomologyPresentation& ps, const HomologyPresentation& pd, const Matrix& f0) {
    return pd.free_projection * pd.coordinates * f0 * ps.cycles * ps.free_lift;
}

void finish_collapse(CollapseResult& res) {
    const int P = static_cast<int>(res.level_ranks.size()) - 1;
    ChainComplex& ch = res.cochain;
    ch.lo = -P;
    ch.hi = 0;
    ch.ranks.clear();
    for (int k = -P; k <= 0; ++k) ch.ranks.push_back(res.level_ranks[-k]);
    auto v = validate_complex(ch);
    if (!v.ok()) throw InternalError("collapsed cochain complex is not a complex: " + v.violations.front());
    for (int p = 0; p < P; ++p) res.cohomology.push_back(homology_at(ch, -p));
    res.ok = true;
}

}  // namespace

CollapseResult column_collapse(const CosimplicialComplex& c) {
    CollapseResult res;
    const int P = c.top();
    std::vector<HomologyPresentation> pres;
    for (int p = 0; p <= P; ++p) {
        auto prob = concentration_problem(c.levels[p]);
        if (!prob.empty()) {
            res.refusal = "column " + std::to_string(p) + " has " + prob;
            return res;
        }
        pres.push_back(homology_presentation(c.levels[p], 0));
        res.level_ranks.push_back(pres.back().group.betti);
    }
    for (int p = 1; p <= P; ++p) {
        Matrix d0 = alternating_coface(c, p).at(0, c.levels[p - 1], c.levels[p]);
        res.cochain.diffs[-(p - 1)] = induced_h0(pres[p - 1], pres[p], d0);
    }
    finish_collapse(res);
    return res;
}

CollapseResult column_collapse(const BlockCosimplicial& c, const std::vector<Idx>& universe) {
    CollapseResult res;
    const int P = c.top();
    std::map<Idx, HomologyPresentation> pres;
    for (Idx u : universe) {
        auto prob = concentration_problem(c.pieces[u]);
        if (!prob.empty()) {
            res.refusal = "piece " + std::to_string(u) + " has " + prob;
            return res;
        }
        pres.emplace(u, homology_presentation(c.pieces[u], 0));
    }
    std::vector<std::vector<std::size_t>> off(P + 1);
    for (int p = 0; p <= P; ++p) {
        std::size_t r = 0;
        for (Idx pc : c.blocks[p]) {
            if (!pres.count(pc)) {
                res.refusal = "level " + std::to_string(p) + " uses a piece outside the certified universe";
                return res;
            }
            off[p].push_back(r);
            r += pres.at(pc).group.betti;
        }
        res.level_ranks.push_back(r);
    }
    std::map<Idx, Matrix> h0;
    for (int p = 1; p <= P; ++p) {
        Matrix d(res.level_ranks[p], res.level_ranks[p - 1]);
        for (int i = 0; i <= p; ++i)
            for (Idx b = 0; b < c.blocks[p].size(); ++b) {
                auto [src, pm] = c.cofaces[p][i][b];
                Idx sp = c.blocks[p - 1][src], dp = c.blocks[p][b];
                auto it = h0.find(pm);
                if (it == h0.end())
                    it = h0.emplace(pm, induced_h0(pres.at(sp), pres.at(dp),
                                                   c.piece_maps[pm].at(0, c.pieces[sp], c.pieces[dp])))
                             .first;
                const Matrix& m = it->second;
                for (std::size_t x = 0; x < m.rows(); ++x)
                    for (std::size_t y = 0; y < m.cols(); ++y)
                        if (m(x, y) != 0) {
                            if (i % 2)
                                d(off[p][b] + x, off[p - 1][src] + y) -= m(x, y);
                            else
                                d(off[p][b] + x, off[p - 1][src] + y) += m(x, y);
                        }
            }
        res.cochain.diffs[-(p - 1)] = d;
    }
    finish_collapse(res);
    return res;
}

}  // namespace descente
