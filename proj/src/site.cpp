#include "descente/site.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "descente/errors.hpp"

namespace descente {

bool Sieve::contains(Idx m) const { return std::binary_search(members.begin(), members.end(), m); }

namespace {

void close_families(const FiniteCategory& cat, const std::vector<CoveringFamily>& input,
                    std::vector<std::vector<CoveringFamily>>& closed) {
    const std::size_t O = cat.num_objects();
    std::vector<std::set<std::vector<Idx>>> fam(O);
    for (const auto& f : input) fam[f.target].insert(f.members);
    for (Idx m = 0; m < cat.num_morphisms(); ++m)
        if (cat.is_iso(m)) fam[cat.dst(m)].insert({m});

    const std::size_t budget = enumeration_budget();
    bool changed = true;
    while (changed) {
        changed = false;
        std::size_t total = 0;
        for (const auto& s : fam) total += s.size();
        if (total > budget) throw GuardExceeded("covering family closure exceeds enumeration budget");
        for (Idx x = 0; x < O; ++x) {
            std::vector<std::vector<Idx>> current(fam[x].begin(), fam[x].end());
            for (const auto& members : current) {
                // One refining family per member; iterate the product of choices.
                std::vector<std::vector<std::vector<Idx>>> choices;
                for (Idx m : members) choices.emplace_back(fam[cat.src(m)].begin(), fam[cat.src(m)].end());
                std::vector<std::size_t> pick(members.size(), 0);
                std::size_t steps = 0;
                while (true) {
                    if (++steps > budget) throw GuardExceeded("covering family closure exceeds enumeration budget");
                    std::vector<Idx> composite;
                    for (std::size_t a = 0; a < members.size(); ++a)
                        for (Idx g : choices[a][pick[a]]) composite.push_back(cat.compose_checked(members[a], g));
                    std::sort(composite.begin(), composite.end());
                    composite.erase(std::unique(composite.begin(), composite.end()), composite.end());
                    if (fam[x].insert(composite).second) changed = true;
                    std::size_t a = 0;
                    while (a < members.size() && ++pick[a] == choices[a].size()) pick[a++] = 0;
                    if (a == members.size()) break;
                }
            }
        }
    }
    closed.assign(O, {});
    for (Idx x = 0; x < O; ++x)
        for (const auto& members : fam[x]) closed[x].push_back({x, members});
}

}  // namespace

VerdierSite::VerdierSite(FiniteCategory cat, std::vector<CoveringFamily> families, std::vector<PullbackSquare> pullbacks)
    : cat_(std::move(cat)), input_(std::move(families)), designated_(std::move(pullbacks)) {
    auto report = validate_category(cat_);
    if (!report.ok()) throw InvalidInput("malformed category: " + report.violations.front());
    for (auto& f : input_) {
        if (f.members.empty()) throw InvalidInput("covering family on " + cat_.object_id(f.target) + " is empty");
        for (Idx m : f.members)
            if (cat_.dst(m) != f.target)
                throw InvalidInput("covering family member " + cat_.morphism_id(m) + " does not target " +
                                   cat_.object_id(f.target));
        std::sort(f.members.begin(), f.members.end());
        f.members.erase(std::unique(f.members.begin(), f.members.end()), f.members.end());
    }
    close_families(cat_, input_, closed_);
    basal_.assign(cat_.num_morphisms(), 0);
    for (const auto& fams : closed_)
        for (const auto& f : fams)
            for (Idx m : f.members) basal_[m] = 1;
    const std::size_t M = cat_.num_morphisms();
    designated_index_.assign(M * M, npos);
    for (Idx i = 0; i < designated_.size(); ++i) {
        const auto& sq = designated_[i];
        designated_index_[sq.f * M + sq.g] = i;
    }
}

VerdierSite VerdierSite::from_spec(const SiteSpec& spec) {
    FiniteCategory cat(spec.category);
    std::vector<CoveringFamily> fams;
    for (const auto& c : spec.covers) {
        auto t = cat.find_object(c.target);
        if (!t) throw InvalidInput("cover targets unknown object " + c.target);
        CoveringFamily f{*t, {}};
        for (const auto& m : c.members) {
            auto mi = cat.find_morphism(m);
            if (!mi) throw InvalidInput("cover names unknown morphism " + m);
            f.members.push_back(*mi);
        }
        fams.push_back(std::move(f));
    }
    std::vector<PullbackSquare> pbs;
    for (const auto& p : spec.pullbacks) {
        auto f = cat.find_morphism(p.f), g = cat.find_morphism(p.g), pp = cat.find_morphism(p.p),
             q = cat.find_morphism(p.q);
        auto apex = cat.find_object(p.apex);
        if (!f || !g || !pp || !q || !apex)
            throw InvalidInput("malformed pullback entry (" + p.f + ", " + p.g + ")");
        if (cat.dst(*f) != cat.dst(*g) || cat.src(*pp) != *apex || cat.src(*q) != *apex ||
            cat.dst(*pp) != cat.src(*f) || cat.dst(*q) != cat.src(*g))
            throw InvalidInput("malformed pullback entry (" + p.f + ", " + p.g + "): ill-typed square");
        pbs.push_back({*f, *g, *apex, *pp, *q});
    }
    return VerdierSite(std::move(cat), std::move(fams), std::move(pbs));
}

SiteSpec VerdierSite::spec() const {
    SiteSpec s;
    s.category = cat_.spec();
    for (const auto& f : input_) {
        CoverSpec c{cat_.object_id(f.target), {}};
        for (Idx m : f.members) c.members.push_back(cat_.morphism_id(m));
        s.covers.push_back(std::move(c));
    }
    for (const auto& p : designated_)
        s.pullbacks.push_back({cat_.morphism_id(p.f), cat_.morphism_id(p.g), cat_.object_id(p.apex),
                               cat_.morphism_id(p.p), cat_.morphism_id(p.q)});
    return s;
}

std::optional<PullbackSquare> VerdierSite::pullback(Idx f, Idx g) const {
    const std::size_t M = cat_.num_morphisms();
    if (cat_.dst(f) != cat_.dst(g)) return std::nullopt;
    if (Idx i = designated_index_[f * M + g]; i != npos) return designated_[i];
    if (Idx i = designated_index_[g * M + f]; i != npos) {
        const auto& s = designated_[i];
        return PullbackSquare{f, g, s.apex, s.q, s.p};
    }
    if (cat_.is_iso(g)) {
        Idx a = cat_.src(f);
        return PullbackSquare{f, g, a, cat_.identity(a), cat_.compose_checked(cat_.inverse(g), f)};
    }
    if (cat_.is_iso(f)) {
        Idx b = cat_.src(g);
        return PullbackSquare{f, g, b, cat_.compose_checked(cat_.inverse(f), g), cat_.identity(b)};
    }
    return std::nullopt;
}

PullbackSquare VerdierSite::require_pullback(Idx f, Idx g) const {
    auto sq = pullback(f, g);
    if (!sq)
        throw InvalidInput("missing pullback for cospan (" + cat_.morphism_id(f) + ", " + cat_.morphism_id(g) + ")");
    return *sq;
}

std::optional<Idx> VerdierSite::factor(const PullbackSquare& sq, Idx a, Idx b) const {
    Idx t = cat_.src(a);
    for (Idx u : cat_.hom(t, sq.apex))
        if (cat_.compose(sq.p, u) == a && cat_.compose(sq.q, u) == b) return u;
    return std::nullopt;
}

std::optional<Idx> VerdierSite::first_family_within(Idx x, const std::function<bool(Idx)>& pred) const {
    const auto& fams = closed_[x];
    for (Idx i = 0; i < fams.size(); ++i) {
        bool inside = true;
        for (Idx m : fams[i].members)
            if (!pred(m)) {
                inside = false;
                break;
            }
        if (inside) return i;
    }
    return std::nullopt;
}

Sieve generate_sieve(const VerdierSite& site, const std::vector<Idx>& generators) {
    const auto& cat = site.cat();
    if (generators.empty()) throw InvalidInput("heterogeneous generators: empty generator list has no target");
    Idx x = cat.dst(generators.front());
    std::set<Idx> members;
    for (Idx g : generators) {
        if (cat.dst(g) != x) throw InvalidInput("heterogeneous generators");
        for (Idx h : cat.into(cat.src(g))) members.insert(cat.compose_checked(g, h));
    }
    return Sieve{x, std::vector<Idx>(members.begin(), members.end())};
}

Sieve maximal_sieve(const VerdierSite& site, Idx x) { return Sieve{x, site.cat().into(x)}; }

std::optional<Idx> covering_witness(const VerdierSite& site, const Sieve& sieve) {
    return site.first_family_within(sieve.target, [&](Idx m) { return sieve.contains(m); });
}

bool is_basal(const VerdierSite& site, Idx m) { return site.is_basal(m); }

ValidationReport validate_verdier_site(const VerdierSite& site) {
    const auto& cat = site.cat();
    ValidationReport r = validate_category(cat);
    if (!r.ok()) return r;
    const std::size_t M = cat.num_morphisms();

    for (const auto& sq : site.designated()) {
        if (cat.compose(sq.f, sq.p) != cat.compose(sq.g, sq.q))
            r.add("designated square (" + cat.morphism_id(sq.f) + ", " + cat.morphism_id(sq.g) + ") does not commute");
    }

    auto check_universal = [&](const PullbackSquare& sq) {
        const std::string name = "(" + cat.morphism_id(sq.f) + ", " + cat.morphism_id(sq.g) + ")";
        if (cat.compose(sq.f, sq.p) != cat.compose(sq.g, sq.q)) {
            r.add("pullback square " + name + " does not commute");
            return;
        }
        for (Idx t = 0; t < cat.num_objects(); ++t) {
            for (Idx a : cat.hom(t, cat.src(sq.f))) {
                for (Idx b : cat.hom(t, cat.src(sq.g))) {
                    if (cat.compose(sq.f, a) != cat.compose(sq.g, b)) continue;
                    std::size_t count = 0;
                    for (Idx u : cat.hom(t, sq.apex))
                        if (cat.compose(sq.p, u) == a && cat.compose(sq.q, u) == b) ++count;
                    if (count != 1) {
                        r.add("universal property of pullback " + name + " fails: cone from " + cat.object_id(t) +
                              " via (" + cat.morphism_id(a) + ", " + cat.morphism_id(b) + ") has " +
                              std::to_string(count) + " factorizations");
                        return;
                    }
                }
            }
        }
    };

    // Axiom (ii): pullbacks along basal maps exist, are universal, and carry
    // covering families to covering sieves.
    for (Idx f = 0; f < M; ++f) {
        if (!site.is_basal(f)) continue;
        for (Idx g : cat.into(cat.dst(f))) {
            auto sq = site.pullback(f, g);
            if (!sq) {
                r.add("missing pullback for basal " + cat.morphism_id(f) + " along " + cat.morphism_id(g));
                continue;
            }
            check_universal(*sq);
        }
    }
    for (Idx x = 0; x < cat.num_objects(); ++x) {
        for (const auto& fam : site.closed_families(x)) {
            for (Idx g : cat.into(x)) {
                std::vector<Idx> pulled;
                bool complete = true;
                for (Idx m : fam.members) {
                    auto sq = site.pullback(m, g);
                    if (!sq) {
                        complete = false;
                        break;
                    }
                    pulled.push_back(sq->q);
                }
                if (!complete) continue;
                if (!is_covering_sieve(site, generate_sieve(site, pulled))) {
                    std::string names;
                    for (Idx m : fam.members) names += (names.empty() ? "" : ", ") + cat.morphism_id(m);
                    r.add("pullback of family {" + names + "} along " + cat.morphism_id(g) +
                          " does not generate a covering sieve");
                }
            }
        }
    }
    // Axiom (iv): diagonals of basal maps are basal.
    for (Idx f = 0; f < M; ++f) {
        if (!site.is_basal(f)) continue;
        auto sq = site.pullback(f, f);
        if (!sq) continue;
        Idx id = cat.identity(cat.src(f));
        auto diag = site.factor(*sq, id, id);
        if (!diag) {
            r.add("diagonal of basal " + cat.morphism_id(f) + " does not exist");
        } else if (!site.is_basal(*diag)) {
            r.add("diagonal " + cat.morphism_id(*diag) + " of basal " + cat.morphism_id(f) + " is not basal");
        }
    }
    return r;
}

std::vector<PullbackSquare> meet_pullbacks(const FiniteCategory& cat) {
    const std::size_t O = cat.num_objects();
    auto below = [&](Idx a, Idx b) { return !cat.hom(a, b).empty(); };
    std::vector<Idx> meet(O * O, npos);
    for (Idx a = 0; a < O; ++a)
        for (Idx b = 0; b < O; ++b) {
            std::vector<Idx> lower;
            for (Idx m = 0; m < O; ++m)
                if (below(m, a) && below(m, b)) lower.push_back(m);
            for (Idx m : lower)
                if (std::all_of(lower.begin(), lower.end(), [&](Idx l) { return below(l, m); })) {
                    meet[a * O + b] = m;
                    break;
                }
        }
    std::vector<PullbackSquare> out;
    for (Idx f = 0; f < cat.num_morphisms(); ++f)
        for (Idx g = 0; g < cat.num_morphisms(); ++g) {
            if (cat.dst(f) != cat.dst(g)) continue;
            Idx m = meet[cat.src(f) * O + cat.src(g)];
            if (m == npos) continue;
            out.push_back({f, g, m, cat.hom(m, cat.src(f)).front(), cat.hom(m, cat.src(g)).front()});
        }
    return out;
}

}  // namespace descente
