#include "descente/cli.hpp"

#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "descente/counterexample.hpp"
#include "descente/descent.hpp"
#include "descente/errors.hpp"
#include "descente/hypercover.hpp"
#include "descente/io.hpp"

namespace descente {

namespace {

struct Options {
    std::string input, site, hypercover, object, members, window, strategy = "auto", out;
    int d = -1, cap_height = 1, trunc = -1, depth = 5;
    std::size_t cap_summands = 6, sample = 0;
    long seed = -1;
    bool check = false, assume = false;
};

VerdierSite load_site(const json& doc, const Options& o) {
    if (doc.is_object() && doc.contains("site")) return site_from_json(doc.at("site"));
    if (o.site.empty()) throw InvalidInput("no site: pass --site or embed a \"site\" field");
    return site_from_json(read_json_file(o.site));
}

const json& payload(const json& doc, const char* key) {
    if (doc.is_object() && doc.contains(key)) return doc.at(key);
    return doc;
}

AugSimplicialCoR load_hypercover(const VerdierSite& site, const std::string& path) {
    json doc = read_json_file(path);
    return hypercover_from_json(site.cat(), payload(doc, "hypercover"));
}

std::pair<int, int> parse_window(const std::string& w) {
    auto comma = w.find(',');
    if (comma == std::string::npos) throw InvalidInput("window must be a,b");
    try {
        return {std::stoi(w.substr(0, comma)), std::stoi(w.substr(comma + 1))};
    } catch (const std::exception&) {
        throw InvalidInput("window must be a,b");
    }
}

DescentOptions descent_options(const Options& o) {
    DescentOptions d;
    d.strategy = parse_strategy(o.strategy);
    if (!o.window.empty()) d.window = parse_window(o.window);
    d.verify = !o.assume;
    return d;
}

int truncation(const Options& o, const AugSimplicialCoR& u) {
    if (o.d < 0) return u.trunc;
    if (o.d > u.trunc) throw InvalidInput("insufficient truncation: --d exceeds the stored levels");
    return o.d;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void emit(const json& report, const Options& o, std::ostream& out) {
    const std::string text = report.dump(2);
    out << text << "\n";
    if (!o.out.empty()) write_json_file(o.out, report);
}

int verdict(bool pass) { return pass ? 0 : 1; }

int cmd_validate_site(const Options& o, std::ostream& out) {
    json doc = read_json_file(o.input);
    SiteSpec spec = site_spec_from_json(payload(doc, "site"));
    json rep;
    std::vector<std::string> violations;
    FiniteCategory cat(spec.category);
    for (const auto& s : cat.input_issues()) violations.push_back(s);
    for (const auto& s : validate_category(cat).violations) violations.push_back(s);
    if (violations.empty()) {
        VerdierSite site = VerdierSite::from_spec(spec);
        for (const auto& s : validate_verdier_site(site).violations) violations.push_back(s);
        json fams = json::object();
        for (Idx x = 0; x < site.cat().num_objects(); ++x) fams[site.cat().object_id(x)] = site.closed_families(x).size();
        rep["closed_families"] = fams;
    }
    rep["verdict"] = violations.empty() ? "pass" : "fail";
    rep["violations"] = violations;
    emit(rep, o, out);
    return verdict(violations.empty());
}

int cmd_sheafify(const Options& o, std::ostream& out) {
    json doc = read_json_file(o.input);
    VerdierSite site = load_site(doc, o);
    const auto& cat = site.cat();
    SetPresheaf f = presheaf_from_json(cat, payload(doc, "presheaf"));
    auto v = validate_presheaf(cat, f);
    if (!v.ok()) throw InvalidInput("invalid presheaf: " + v.violations.front());
    QuotientResult q = sheafify(site, f);
    json unit = json::object();
    for (Idx x = 0; x < cat.num_objects(); ++x) {
        json m = json::object();
        for (Idx s = 0; s < f.card[x]; ++s) m[f.name(x, s)] = q.result.name(x, q.map.at[x][s]);
        unit[cat.object_id(x)] = m;
    }
    json rep;
    rep["status_before"] = to_string(sheaf_status(site, f).status);
    rep["status_after"] = to_string(sheaf_status(site, q.result).status);
    rep["sheafified"] = presheaf_to_json(cat, q.result);
    rep["unit"] = unit;
    rep["unit_bijective"] = is_pointwise_bijective(f, q.result, q.map);
    emit(rep, o, out);
    return 0;
}

int cmd_cech(const Options& o, std::ostream& out) {
    json doc = o.input.empty() ? json::object() : read_json_file(o.input);
    VerdierSite site = load_site(doc, o);
    const auto& cat = site.cat();
    if (o.object.empty()) throw InvalidInput("--object is required");
    auto x = cat.find_object(o.object);
    if (!x) throw InvalidInput("unknown object '" + o.object + "'");
    CoveringFamily fam{*x, {}};
    for (const auto& m : split_list(o.members)) {
        auto id = cat.find_morphism(m);
        if (!id) throw InvalidInput("unknown morphism '" + m + "'");
        if (cat.dst(*id) != *x) throw InvalidInput("member " + m + " does not map to " + o.object);
        fam.members.push_back(*id);
    }
    if (fam.members.empty()) throw InvalidInput("--members is required");
    std::sort(fam.members.begin(), fam.members.end());
    fam.members.erase(std::unique(fam.members.begin(), fam.members.end()), fam.members.end());
    AugSimplicialCoR u = cech_complex(site, fam, o.d < 0 ? 2 : o.d);
    emit(hypercover_to_json(cat, u), o, out);
    return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
    json doc = read_json_file(o.input);
    VerdierSite site = load_site(doc, o);
    AugSimplicialCoR u = hypercover_from_json(site.cat(), payload(doc, "hypercover"));
    HypercoverReport r = verify_hypercover(site, u, truncation(o, u));
    emit(to_json(site.cat(), r), o, out);
    return verdict(r.pass);
}

int cmd_height(const Options& o, std::ostream& out) {
    json doc = read_json_file(o.input);
    VerdierSite site = load_site(doc, o);
    AugSimplicialCoR u = hypercover_from_json(site.cat(), payload(doc, "hypercover"));
    HeightReport h = hypercover_height(site, u, truncation(o, u));
    emit(to_json(h), o, out);
    return 0;
}

int cmd_refine(const Options& o, std::ostream& out) {
    json doc = read_json_file(o.input);
    VerdierSite site = load_site(doc, o);
    const auto& cat = site.cat();
    AugSimplicialCoR u = hypercover_from_json(cat, payload(doc, "hypercover"));
    RefinementResult r = split_basal_refinement(site, u, o.cap_height, o.trunc);
    json rep;
    rep["hypercover"] = hypercover_to_json(cat, r.v);
    rep["refinement"] = simplicial_map_to_json(cat, r.refinement);
    rep["unchanged"] = r.unchanged;
    bool pass = true;
    if (o.check) {
        bool split = is_split(cat, r.v).split;
        bool basal = matching_maps_basal(site, r.v, r.v.trunc);
        bool refines = check_simplicial_map(cat, r.v, truncate(u, std::min(u.trunc, r.v.trunc)), r.refinement).ok();
        bool hyper = verify_hypercover(site, r.v, r.v.trunc).pass;
        rep["checks"] = {{"split", split}, {"basal", basal}, {"refines", refines}, {"hypercover", hyper}};
        pass = split && basal && refines && hyper;
    }
    emit(rep, o, out);
    return verdict(pass);
}

int cmd_lift(const Options& o, std::ostream& out) {
    json doc = read_json_file(o.input);
    VerdierSite site = load_site(doc, o);
    const auto& cat = site.cat();
    // F = realize(C) over G = rX along the augmentation; U defaults to rX.
    AugSimplicialCoR c = hypercover_from_json(cat, payload(doc, "hypercover"));
    const int d = o.d < 0 ? std::min(2, c.trunc) : o.d;
    if (d > c.trunc) throw InvalidInput("insufficient truncation: --d exceeds the stored levels");
    AugSimplicialCoR u = o.hypercover.empty() ? trivial_hypercover(cat, c.base, d) : load_hypercover(site, o.hypercover);
    if (u.base != c.base) throw InvalidInput("hypercovers have different bases");
    if (u.trunc < d) throw InvalidInput("insufficient truncation of the hypercover to refine");
    SimplicialSetPresheaf f = realize_simplicial(cat, c);
    SimplicialPresheafMap fmap = realize_augmentation(cat, c);
    SimplicialSetPresheaf g = constant_simplicial(realize_cor(cat, representable(c.base)), c.trunc);
    SimplicialPresheafMap gmap = realize_augmentation(cat, u);
    FibrationReport fib = verify_local_acyclic_fibration(site, f, g, fmap, d);
    json rep;
    rep["fibration"] = fib.pass ? "pass" : "fail";
    if (!fib.pass) {
        rep["verdict"] = "fail";
        emit(rep, o, out);
        return 1;
    }
    LiftResult r = refine_for_lift(site, f, fmap, u, gmap, d);
    rep["hypercover"] = hypercover_to_json(cat, r.v);
    rep["refinement"] = simplicial_map_to_json(cat, r.refinement);
    json lifts = json::array();
    for (const auto& l : r.lift.levels) lifts.push_back(l.at);
    rep["lift"] = lifts;
    bool hyper = verify_hypercover(site, r.v, d).pass;
    SimplicialPresheafMap rr = realize_simplicial_map(cat, r.v, truncate(u, d), r.refinement);
    bool commutes = true;
    for (int n = 0; n <= d; ++n)
        if (compose(fmap.levels[n], r.lift.levels[n]).at != compose(gmap.levels[n], rr.levels[n]).at) commutes = false;
    rep["checks"] = {{"hypercover", hyper}, {"commutes", commutes}};
    rep["verdict"] = hyper && commutes ? "pass" : "fail";
    emit(rep, o, out);
    return verdict(hyper && commutes);
}

int cmd_descent(const Options& o, std::ostream& out) {
    json doc = read_json_file(o.input);
    VerdierSite site = load_site(doc, o);
    const auto& cat = site.cat();
    AbPresheaf f = ab_presheaf_from_json(cat, payload(doc, "presheaf"));
    if (o.hypercover.empty()) throw InvalidInput("--hypercover is required");
    AugSimplicialCoR u = load_hypercover(site, o.hypercover);
    DescentOptions d = descent_options(o);
    d.name = o.hypercover;
    DescentReport r = check_descent(site, f, u, d);
    emit(to_json(r), o, out);
    return verdict(r.pass);
}

int cmd_cech_descent(const Options& o, std::ostream& out) {
    json doc = read_json_file(o.input);
    VerdierSite site = load_site(doc, o);
    const auto& cat = site.cat();
    AbPresheaf f = ab_presheaf_from_json(cat, payload(doc, "presheaf"));
    std::vector<Idx> objs;
    if (o.object.empty()) {
        for (Idx x = 0; x < cat.num_objects(); ++x) objs.push_back(x);
    } else {
        auto x = cat.find_object(o.object);
        if (!x) throw InvalidInput("unknown object '" + o.object + "'");
        objs.push_back(*x);
    }
    json reps = json::array();
    bool pass = true;
    for (Idx x : objs) {
        CechDescentReport r = check_cech_descent(site, f, x, descent_options(o));
        pass = pass && r.pass;
        reps.push_back(to_json(cat, r));
    }
    emit({{"verdict", pass ? "pass" : "fail"}, {"objects", reps}}, o, out);
    return verdict(pass);
}

int cmd_rel_descent(const Options& o, std::ostream& out) {
    json doc = read_json_file(o.input);
    VerdierSite site = load_site(doc, o);
    const auto& cat = site.cat();
    AbPresheaf f = ab_presheaf_from_json(cat, doc.at("source"));
    AbPresheaf g = ab_presheaf_from_json(cat, doc.at("target"));
    AbPresheafMap m = ab_map_from_json(cat, doc.at("map"), f, g);
    if (o.hypercover.empty()) throw InvalidInput("--hypercover is required");
    AugSimplicialCoR u = load_hypercover(site, o.hypercover);
    DescentOptions d = descent_options(o);
    d.name = o.hypercover;
    DescentReport r = check_relative_descent(site, f, g, m, u, d);
    emit(to_json(r), o, out);
    return verdict(r.pass);
}

int cmd_enum_bounded(const Options& o, std::ostream& out) {
    json doc = o.input.empty() ? json::object() : read_json_file(o.input);
    VerdierSite site = load_site(doc, o);
    const auto& cat = site.cat();
    auto x = cat.find_object(o.object);
    if (!x) throw InvalidInput("unknown object '" + o.object + "'");
    BoundedEnumeration e = enumerate_bounded_hypercovers(site, *x, o.cap_height, o.cap_summands);
    std::vector<std::size_t> keep(e.items.size());
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
    if (o.seed >= 0 && o.sample > 0 && o.sample < keep.size()) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(o.seed));
        std::shuffle(keep.begin(), keep.end(), rng);
        keep.resize(o.sample);
        std::sort(keep.begin(), keep.end());
    }
    json items = json::array();
    for (std::size_t i : keep) items.push_back(hypercover_to_json(cat, e.items[i]));
    emit({{"count", e.items.size()}, {"truncated", e.truncated}, {"items", items}}, o, out);
    return e.truncated ? 3 : 0;
}

int cmd_counterexample(const Options& o, std::ostream& out) {
    CounterexampleBundle b = build_counterexample(o.depth, o.trunc < 0 ? 3 : o.trunc);
    const auto& cat = b.site.cat();
    json rep = counterexample_manifest(b);
    int code = 0;
    if (o.check) {
        CounterexampleCheck c = check_counterexample(b);
        rep["check"] = to_json(cat, c);
        code = verdict(c.descent.pass);
    }
    if (!o.out.empty()) {
        std::filesystem::create_directories(o.out);
        write_json_file(o.out + "/site.json", to_json(b.site.spec()));
        write_json_file(o.out + "/G.json", ab_presheaf_to_json(cat, b.g));
        write_json_file(o.out + "/omega.json", hypercover_to_json(cat, b.omega));
        write_json_file(o.out + "/manifest.json", rep);
    }
    out << rep.dump(2) << "\n";
    return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hypercovers and descent on finite sites", "descente"};
    app.require_subcommand(1);
    Options o;

    auto add = [&](const char* name, const char* help, bool needs_input) {
        CLI::App* s = app.add_subcommand(name, help);
        auto* in = s->add_option("input", o.input, "input JSON file");
        if (needs_input) in->required();
        s->add_option("--site", o.site, "site JSON file when the input does not embed one");
        s->add_option("--out", o.out, "also write the report here");
        return s;
    };
    add("validate-site", "check the axioms of a site", true);
    add("sheafify", "sheafify a set-valued presheaf", true);
    auto* cech = add("cech", "Cech complex of a covering family", false);
    cech->add_option("--object", o.object, "base object");
    cech->add_option("--members", o.members, "comma separated family members");
    cech->add_option("--d", o.d, "truncation");
    auto* verify = add("verify-hypercover", "check the matching maps of a hypercover", true);
    verify->add_option("--d", o.d, "levels to check");
    auto* height = add("height", "height of a hypercover", true);
    height->add_option("--d", o.d, "levels to inspect");
    auto* refine = add("refine", "split basal refinement", true);
    refine->add_option("--cap-height", o.cap_height, "levels built by the split builder");
    refine->add_option("--trunc", o.trunc, "truncation of the output");
    refine->add_flag("--check", o.check, "verify the postconditions");
    auto* lift = add("lift", "refine a hypercover so a map lifts", true);
    lift->add_option("--d", o.d, "truncation");
    lift->add_option("--hypercover", o.hypercover, "hypercover to refine (default: the base)");
    auto* descent = add("descent", "descent of an abelian presheaf along a hypercover", true);
    auto* cdesc = add("cech-descent", "descent along every Cech complex of an object", true);
    cdesc->add_option("--object", o.object, "base object (default: all)");
    auto* rdesc = add("rel-descent", "relative descent of a map of abelian presheaves", true);
    for (auto* s : {descent, rdesc}) {
        s->add_option("--hypercover", o.hypercover, "hypercover JSON file");
        s->add_flag("--assume-hypercover", o.assume, "skip verification of the hypercover");
    }
    for (auto* s : {descent, cdesc, rdesc}) {
        s->add_option("--window", o.window, "degree window a,b");
        s->add_option("--strategy", o.strategy, "tot, collapse or auto");
    }
    auto* eb = add("enum-bounded", "enumerate bounded split basal hypercovers", false);
    eb->add_option("--object", o.object, "base object")->required();
    eb->add_option("--cap-height", o.cap_height, "height bound");
    eb->add_option("--cap-summands", o.cap_summands, "summands per level");
    eb->add_option("--seed", o.seed, "sample with this seed instead of listing everything");
    eb->add_option("--sample", o.sample, "sample size when --seed is given");
    auto* ce = app.add_subcommand("counterexample", "interval site separating Cech and hypercover descent");
    ce->add_option("--depth", o.depth, "interval depth");
    ce->add_option("--trunc", o.trunc, "levels of the hypercover");
    ce->add_flag("--check", o.check, "run the separation checks");
    ce->add_option("--out", o.out, "directory for the bundle files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        CLI::App* s = app.get_subcommands().front();
        const std::string v = s->get_name();
        if (v == "validate-site") return cmd_validate_site(o, out);
        if (v == "sheafify") return cmd_sheafify(o, out);
        if (v == "cech") return cmd_cech(o, out);
        if (v == "verify-hypercover") return cmd_verify(o, out);
        if (v == "height") return cmd_height(o, out);
        if (v == "refine") return cmd_refine(o, out);
        if (v == "lift") return cmd_lift(o, out);
        if (v == "descent") return cmd_descent(o, out);
        if (v == "cech-descent") return cmd_cech_descent(o, out);
        if (v == "rel-descent") return cmd_rel_descent(o, out);
        if (v == "enum-bounded") return cmd_enum_bounded(o, out);
        if (v == "counterexample") return cmd_counterexample(o, out);
        err << app.help();
        return 2;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const GuardExceeded& e) {
        err << "guard exceeded: " << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace descente
