// One line per criterion: "AC<n> PASS|FAIL <name>: <evidence>". Exit 0 iff all pass.
// Every comparison is exact integer or structural equality; the only tolerance
// is the 60 s wall-clock bound on criterion 1.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "../fixtures.hpp"
#include "../oracles.hpp"

#include "descente/cli.hpp"
#include "descente/errors.hpp"
#include "descente/io.hpp"

using namespace descente;
using namespace oracles;

namespace {

constexpr double kRuntimeLimitSeconds = 60.0;

struct Outcome {
    bool pass = true;
    std::string evidence;
    void fail(const std::string& why) {
        if (pass) evidence = why;
        pass = false;
    }
};

using Sites = std::vector<std::pair<std::string, VerdierSite>>;

Sites fixture_sites() {
    return {{"twocover", fixtures::twocover()}, {"chain", fixtures::chain()},
            {"interval", build_counterexample(3, 1).site}};
}

struct NamedHypercover {
    std::string name;
    VerdierSite site;
    AugSimplicialCoR u;
};

std::vector<NamedHypercover> fixture_hypercovers() {
    std::vector<NamedHypercover> out;
    VerdierSite t = fixtures::twocover();
    out.push_back({"cech{U,V}", t, fixtures::twocover_cech(t, 3)});
    out.push_back({"trivial(X)", t, trivial_hypercover(t.cat(), t.cat().object("X"), 3)});
    out.push_back({"cech{W,U,V}", t, fixtures::twocover_wuv(t, 3)});
    VerdierSite c = fixtures::chain();
    out.push_back({"chain cech{A}", c, cech_complex(c, fixtures::family(c, "X", {"A->X"}), 3)});
    CounterexampleBundle b = build_counterexample(5, 3);
    out.push_back({"omega", b.site, b.omega});
    return out;
}

Outcome ac1() {
    Outcome o;
    const char* argv[] = {"descente", "counterexample", "--depth", "5", "--trunc", "3", "--check"};
    std::ostringstream out, err;
    auto t0 = std::chrono::steady_clock::now();
    int code = run_cli(7, argv, out, err);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json r;
    try {
        r = json::parse(out.str());
    } catch (const std::exception&) {
        o.fail("unparseable output: " + err.str());
        return o;
    }
    const json& c = r["check"];
    if (code != 1) o.fail("exit code " + std::to_string(code) + " (expected 1: descent fails)");
    if (c["cech_verdict"] != "pass") o.fail("Cech descent of G fails");
    if (c["cech_descent"].size() != 4) o.fail("Cech descent not checked at X_0..X_3");
    if (c["omega"]["verdict"] != "pass" || c["omega"]["verified_to"] != 3) o.fail("Omega not verified to level 3");
    const json& d = c["descent"];
    if (d["verdict"] != "fail") o.fail("descent along Omega passes");
    if (d["strategy"] != "collapse") o.fail("strategy is " + d["strategy"].dump());
    bool h0 = false;
    for (const auto& g : d["degrees"])
        if (g["k"] == 0) h0 = g["tot"]["betti"] == 1 && g["tot"]["torsion"].empty();
    if (!h0) o.fail("H_0(Tot) is not Z");
    const std::string detail = d.value("detail", "");
    if (detail.find("ker(d0 - d1: Z^2 -> Z^6) = Z") == std::string::npos) o.fail("detail: " + detail);
    if (secs >= kRuntimeLimitSeconds) o.fail("runtime " + std::to_string(secs) + " s");
    if (o.pass) {
        std::ostringstream e;
        e.precision(2);
        e << std::fixed << detail << ", Cech passes at X_0..X_3, Omega verified to 3, " << secs << " s";
        o.evidence = e.str();
    }
    return o;
}

Outcome ac2() {
    Outcome o;
    CounterexampleBundle b = build_counterexample(5, 3);
    if (b.s_counts.size() < 2 || b.s_counts[0] != 2 || b.s_counts[1] != 6) o.fail("|S_0|, |S_1| wrong");
    std::multiset<Idx> l0(b.omega.levels[0].summands.begin(), b.omega.levels[0].summands.end());
    std::multiset<Idx> l1(b.omega.levels[1].summands.begin(), b.omega.levels[1].summands.end());
    if (l0 != std::multiset<Idx>{b.u(0), b.v(0)}) o.fail("Omega_0 is not U_0 + V_0");
    if (l1 != std::multiset<Idx>{b.u(0), b.u(1), b.v(1), b.u(1), b.v(1), b.v(0)}) o.fail("Omega_1 multiset differs");
    if (o.pass) o.evidence = "|S_0| = 2, |S_1| = 6, Omega_1 = U_0 + U_1 + V_1 + U_1 + V_1 + V_0";
    return o;
}

Outcome ac3() {
    Outcome o;
    std::size_t n = 0;
    for (const auto& [name, s] : fixture_sites())
        for (Idx x = 0; x < s.cat().num_objects(); ++x)
            for (const auto& fam : s.closed_families(x)) {
                ++n;
                auto c = cech_complex(s, fam, 3);
                HypercoverReport r = verify_hypercover(s, c, 3);
                if (!r.pass) o.fail(name + ": Cech complex on " + s.cat().object_id(x) + " fails");
                for (const auto& lv : r.levels)
                    if (lv.n > 0 && !lv.bijective) o.fail(name + ": matching map not bijective above level 0");
                HeightReport h = hypercover_height(s, c, 3);
                if (!h.determined || h.height != 0) o.fail(name + ": height " + h.text());
            }
    if (o.pass) o.evidence = std::to_string(n) + " covering families, all verified with height 0";
    return o;
}

Outcome ac4() {
    Outcome o;
    std::size_t n = 0;
    for (const auto& h : fixture_hypercovers()) {
        if (!matching_maps_basal(h.site, h.u, 0)) continue;
        const auto& cat = h.site.cat();
        RealizedSimplicial ru(cat, h.u);
        for (int k = 0; k <= std::min(3, h.u.trunc); ++k) {
            ++n;
            MatchingObject mo = matching_object(cat, ru, k);
            CoRDecomposition dec = matching_object_cor(h.site, h.u, k);
            PresheafMap cmp = realization_comparison(cat, boundary_shape(k).sset(), dec, ru, mo.m);
            SetPresheaf rd = realize_cor(cat, dec.cor);
            if (!is_natural(cat, rd, mo.m.presheaf, cmp) || !is_pointwise_bijective(rd, mo.m.presheaf, cmp))
                o.fail(h.name + ": level " + std::to_string(k) + " decomposition not pointwise bijective");
        }
    }
    if (o.pass) o.evidence = std::to_string(n) + " (hypercover, level) pairs agree pointwise";
    return o;
}

Outcome ac5() {
    Outcome o;
    VerdierSite t = fixtures::twocover();
    VerdierSite c = fixtures::chain();
    CounterexampleBundle b = build_counterexample(4, 2);
    std::vector<std::tuple<std::string, VerdierSite, AugSimplicialCoR, int>> cases{
        {"cech{W,U,V}", t, fixtures::twocover_wuv(t, 2), 1},
        {"cech{U,V}", t, fixtures::twocover_cech(t, 2), 0},
        {"chain cech{A}", c, cech_complex(c, fixtures::family(c, "X", {"A->X"}), 2), 0},
        {"omega(trunc 2)", b.site, b.omega, 2}};
    for (const auto& [name, s, u, h] : cases) {
        RefinementResult r = split_basal_refinement(s, u, h);
        const auto& cat = s.cat();
        if (!is_split(cat, r.v).split) o.fail(name + ": output not split");
        if (!matching_maps_basal(s, r.v, r.v.trunc)) o.fail(name + ": matching maps not basal");
        if (!is_refinement(s, r.v, u)) o.fail(name + ": no refinement map");
        if (!verify_hypercover(s, r.v, r.v.trunc).pass) o.fail(name + ": output not a hypercover");
    }
    if (o.pass) o.evidence = std::to_string(cases.size()) + " inputs refined (including non-basal level 0 and omega)";
    return o;
}

Outcome ac6() {
    Outcome o;
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    auto c = fixtures::twocover_cech(s, 2);
    SimplicialSetPresheaf f = realize_simplicial(cat, c);
    SimplicialPresheafMap fm = realize_augmentation(cat, c);
    auto u = trivial_hypercover(cat, cat.object("X"), 2);
    SimplicialPresheafMap gm = realize_augmentation(cat, u);
    SimplicialSetPresheaf g = constant_simplicial(realize_cor(cat, representable(cat.object("X"))), 2);
    if (!verify_local_acyclic_fibration(s, f, g, fm, 2).pass) o.fail("not a local acyclic fibration");
    LiftResult r = refine_for_lift(s, f, fm, u, gm, 2);
    if (!verify_hypercover(s, r.v, 2).pass) o.fail("refined object is not a hypercover");
    SimplicialPresheafMap rr = realize_simplicial_map(cat, r.v, u, r.refinement);
    for (int n = 0; n <= 2; ++n)
        if (compose(fm.levels[n], r.lift.levels[n]).at != compose(gm.levels[n], rr.levels[n]).at)
            o.fail("square does not commute on level " + std::to_string(n));
    if (o.pass) o.evidence = "lift commutes strictly, refinement verified to d = 2";
    return o;
}

Outcome ac7() {
    Outcome o;
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    std::vector<SetPresheaf> fs{fixtures::st_collapse(cat), fixtures::missing_glue(cat), fixtures::constant_set(cat, 1),
                                fixtures::constant_set(cat, 2), realize_cor(cat, representable(cat.object("U"))),
                                realize_cor(cat, CoR{{cat.object("U"), cat.object("V")}})};
    for (const auto& f : fs) {
        QuotientResult q = sheafify(s, f);
        if (sheaf_status(s, q.result).status != SheafStatus::Sheaf) o.fail("sheafification is not a sheaf");
        QuotientResult qq = sheafify(s, q.result);
        if (!is_pointwise_bijective(q.result, qq.result, qq.map)) o.fail("sheafification not idempotent");
        if (sheaf_status(s, f).status == SheafStatus::Sheaf && !is_pointwise_bijective(f, q.result, q.map))
            o.fail("unit not bijective on a sheaf");
    }
    // Oracle: matching families on the covering sieves of X for st_collapse are
    // determined by one section each on U, V, W, so the sheaf condition closes
    // F(X) to a single point.
    SetPresheaf st = fixtures::st_collapse(cat);
    std::set<std::size_t> fam_counts;
    for (const auto& r : covering_sieves(s, cat.object("X")))
        if (!r.contains(cat.identity(cat.object("X")))) fam_counts.insert(matching_families(cat, st, r).size());
    const std::size_t expected = fam_counts.size() == 1 ? *fam_counts.begin() : 0;
    std::size_t got = sheafify(s, st).result.card[cat.object("X")];
    if (got != expected || expected != 1) o.fail("F~(X) has " + std::to_string(got) + " sections");
    if (o.pass) o.evidence = std::to_string(fs.size()) + " presheaves; {s,t}-collapse gives |F~(X)| = 1";
    return o;
}

Outcome ac8() {
    Outcome o;
    std::size_t n = 0;
    for (const auto& h : fixture_hypercovers()) {
        if (!verify_hypercover(h.site, h.u, h.u.trunc).pass) continue;
        const auto& cat = h.site.cat();
        RealizedSimplicial ru(cat, h.u);
        for (int k = 1; k <= h.u.trunc; ++k)
            for (int m = 0; m < k && m <= 2; ++m) {
                ++n;
                HomPlus hp = coskeleton_level(cat, h.u, m, k);
                PresheafMap unit = fixtures::coskeleton_unit(cat, ru, hp, m, k);
                SetPresheaf lk = realize_cor(cat, h.u.levels[k]);
                if (!is_generalized_cover(h.site, lk, hp.presheaf, unit).ok)
                    o.fail(h.name + ": U_" + std::to_string(k) + " -> cosk_" + std::to_string(m) + " not a cover");
            }
    }
    if (o.pass) o.evidence = std::to_string(n) + " maps U_k -> (cosk_n U)_k with n <= 2 are generalized covers";
    return o;
}

Outcome ac9() {
    Outcome o;
    std::size_t pairs = 0, presheaves = 0;
    for (const auto& [name, s] : Sites{{"twocover", fixtures::twocover()}, {"chain", fixtures::chain()}}) {
        const auto& cat = s.cat();
        std::vector<AbPresheaf> fs{constant_ab_presheaf(cat), zero_ab_presheaf(cat)};
        for (Idx y = 0; y < cat.num_objects(); ++y) fs.push_back(fixtures::free_representable(cat, y));
        if (name == "twocover") fs.push_back(fixtures::perturbed_constant(cat));
        fs.push_back(fixtures::with_acyclic_summand(cat, constant_ab_presheaf(cat)));
        for (const auto& f : fs) {
            bool cech = true;
            for (Idx x = 0; x < cat.num_objects(); ++x) cech = cech && check_cech_descent(s, f, x).pass;
            if (!cech) continue;
            ++presheaves;
            for (Idx x = 0; x < cat.num_objects(); ++x)
                for (int h = 0; h <= 1; ++h) {
                    BoundedEnumeration e = enumerate_bounded_hypercovers(s, x, h, 6);
                    if (e.truncated) o.fail(name + ": enumeration truncated");
                    for (const auto& u : e.items) {
                        ++pairs;
                        DescentOptions opt;
                        opt.height = h;
                        if (!check_descent(s, f, u, opt).pass) o.fail(name + ": descent fails on a bounded hypercover");
                    }
                }
        }
    }
    if (o.pass)
        o.evidence = std::to_string(presheaves) + " Cech-descent presheaves, " + std::to_string(pairs) +
                     " (presheaf, bounded hypercover) pairs pass";
    return o;
}

Outcome ac10() {
    Outcome o;
    std::mt19937 rng(10);
    int snf = 0;
    for (int t = 0; t < 300; ++t) {
        std::uniform_int_distribution<int> dim(1, 7);
        std::size_t r = dim(rng), c = dim(rng);
        Matrix a = t % 3 == 0 ? random_low_rank(rng, r, c, 1 + t % 3) : random_matrix(rng, r, c, 12);
        std::string d = snf_defect(a);
        if (!d.empty()) o.fail("SNF: " + d);
        ++snf;
    }
    for (int t = 0; t < 100; ++t) {
        ChainComplex c = random_complex(rng);
        if (euler_ranks(c) != euler_homology(c)) o.fail("Euler characteristic mismatch");
    }
    for (int n = 1; n <= 4; ++n) {
        HomologySummary h = homology(sphere(n));
        for (int k = 0; k <= n; ++k) {
            bool z = h.at(k) == AbelianGroup{1, {}};
            if ((k == 0 || k == n) != z) o.fail("sphere S^" + std::to_string(n) + " has wrong H_" + std::to_string(k));
        }
    }
    // Totalizations over the TwoCover fixtures: d^2 = 0, stability in P, tot vs collapse.
    VerdierSite s = fixtures::twocover();
    const auto& cat = s.cat();
    std::vector<AbPresheaf> fs{constant_ab_presheaf(cat), fixtures::perturbed_constant(cat),
                               fixtures::free_representable(cat, cat.object("U")),
                               fixtures::with_acyclic_summand(cat, constant_ab_presheaf(cat))};
    std::vector<AugSimplicialCoR> us{fixtures::twocover_cech(s, 6), trivial_hypercover(cat, cat.object("X"), 6)};
    int tots = 0, agreements = 0;
    for (const auto& u : us)
        for (const auto& f : fs) {
            CosimplicialComplex full = cosimplicial_from(cat, f, u).assemble();
            const int a = -1, b = 1, need = required_levels(full, a);
            std::optional<HomologySummary> ref;
            for (int extra = 0; extra <= 2; ++extra) {
                CosimplicialComplex c = cosimplicial_from(cat, f, truncate(u, need - 1 + extra)).assemble();
                for (bool norm : {false, true}) {
                    TotResult t = totalize(c, a, b, norm);
                    ++tots;
                    for (int k = t.tot.lo + 1; k <= t.tot.hi; ++k)
                        if (!(t.tot.diff(k - 1) * t.tot.diff(k)).is_zero()) o.fail("d_tot^2 != 0");
                    HomologySummary h = homology(t.tot);
                    if (!ref) ref = h;
                    for (int k = a; k <= b; ++k)
                        if (!(h.at(k) == ref->at(k))) o.fail("Tot homology changes with P + " + std::to_string(extra));
                }
            }
        }
    us.push_back(fixtures::twocover_wuv(s, 3));
    for (const auto& u : us)
        for (const auto& f : fs) {
            bool collapsible = true;
            for (Idx y = 0; y < cat.num_objects(); ++y) {
                HomologySummary h = homology(f.values[y]);
                for (int k = h.lo; k <= h.hi; ++k)
                    if (k != 0 && !h.at(k).is_zero()) collapsible = false;
            }
            if (!collapsible) continue;
            DescentOptions ot, oc;
            ot.strategy = DescentStrategy::Tot;
            oc.strategy = DescentStrategy::Collapse;
            DescentReport rt = check_descent(s, f, u, ot), rc = check_descent(s, f, u, oc);
            ++agreements;
            if (rt.pass != rc.pass) o.fail("tot and collapse verdicts differ");
            for (const auto& dt : rt.degrees)
                for (const auto& dc : rc.degrees)
                    if (dt.k == dc.k && !(dt.target == dc.target)) o.fail("tot and collapse groups differ");
        }
    if (o.pass)
        o.evidence = std::to_string(snf) + " SNF cases, 100 Euler checks, S^1..S^4, " + std::to_string(tots) +
                     " totalizations, " + std::to_string(agreements) + " strategy agreements";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"counterexample separation", ac1}, {"Omega combinatorics", ac2},
        {"Cech complexes have height 0", ac3}, {"matching-object cross-check", ac4},
        {"split basal refinement", ac5}, {"lift algorithm", ac6},
        {"sheafification", ac7}, {"coskeletal covers", ac8},
        {"Cech descent implies bounded descent", ac9}, {"homological core", ac10}};
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        all = all && r.pass;
        std::cout << "AC" << (i + 1) << " " << (r.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
                  << r.evidence << std::endl;
    }
    return all ? 0 : 1;
}
