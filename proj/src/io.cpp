#include "descente/io.hpp"

#include <fstream>
#include <sstream>

#include "descente/errors.hpp"

namespace descente {

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string str(const json& j, const char* what) {
    if (!j.is_string()) throw InvalidInput(std::string(what) + " must be a string");
    return j.get<std::string>();
}

long long integer(const json& j, const char* what) {
    if (!j.is_number_integer()) throw InvalidInput(std::string(what) + " must be an integer");
    return j.get<long long>();
}

Idx object_of(const FiniteCategory& cat, const json& j) {
    auto o = cat.find_object(str(j, "object id"));
    if (!o) throw InvalidInput("unknown object '" + j.get<std::string>() + "'");
    return *o;
}

Idx morphism_of(const FiniteCategory& cat, const json& j) {
    auto m = cat.find_morphism(str(j, "morphism id"));
    if (!m) throw InvalidInput("unknown morphism '" + j.get<std::string>() + "'");
    return *m;
}

json entry(const mpz_class& x) {
    if (x.fits_slong_p()) return x.get_si();
    return x.get_str();
}

mpz_class entry_from(const json& j) {
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        try {
            return mpz_class(j.get<std::string>());
        } catch (const std::invalid_argument&) {
        }
    }
    throw InvalidInput("matrix entries must be integers");
}

}  // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    out << j.dump(2) << "\n";
}

json to_json(const SiteSpec& s) {
    json j;
    j["objects"] = s.category.objects;
    j["morphisms"] = json::array();
    for (const auto& m : s.category.morphisms) j["morphisms"].push_back({{"id", m.id}, {"src", m.src}, {"dst", m.dst}});
    j["identities"] = s.category.identities;
    j["composition"] = json::array();
    for (const auto& c : s.category.composition) j["composition"].push_back({{"g", c.g}, {"f", c.f}, {"gf", c.gf}});
    j["covers"] = json::array();
    for (const auto& c : s.covers) j["covers"].push_back({{"target", c.target}, {"members", c.members}});
    j["pullbacks"] = json::array();
    for (const auto& p : s.pullbacks)
        j["pullbacks"].push_back({{"f", p.f}, {"g", p.g}, {"apex", p.apex}, {"p", p.p}, {"q", p.q}});
    return j;
}

SiteSpec site_spec_from_json(const json& j) {
    SiteSpec s;
    for (const auto& o : field(j, "objects")) s.category.objects.push_back(str(o, "object"));
    for (const auto& m : field(j, "morphisms"))
        s.category.morphisms.push_back({str(field(m, "id"), "id"), str(field(m, "src"), "src"), str(field(m, "dst"), "dst")});
    const json& ids = field(j, "identities");
    if (!ids.is_object()) throw InvalidInput("identities must be an object");
    for (auto it = ids.begin(); it != ids.end(); ++it) s.category.identities[it.key()] = str(it.value(), "identity");
    for (const auto& c : field(j, "composition"))
        s.category.composition.push_back({str(field(c, "g"), "g"), str(field(c, "f"), "f"), str(field(c, "gf"), "gf")});
    if (j.contains("covers"))
        for (const auto& c : j.at("covers")) {
            CoverSpec cs{str(field(c, "target"), "target"), {}};
            for (const auto& m : field(c, "members")) cs.members.push_back(str(m, "member"));
            s.covers.push_back(cs);
        }
    if (j.contains("pullbacks"))
        for (const auto& p : j.at("pullbacks"))
            s.pullbacks.push_back({str(field(p, "f"), "f"), str(field(p, "g"), "g"), str(field(p, "apex"), "apex"),
                                   str(field(p, "p"), "p"), str(field(p, "q"), "q")});
    return s;
}

VerdierSite site_from_json(const json& j) { return VerdierSite::from_spec(site_spec_from_json(j)); }

json presheaf_to_json(const FiniteCategory& cat, const SetPresheaf& f) {
    json j;
    j["values"] = json::object();
    j["restrictions"] = json::object();
    for (Idx o = 0; o < cat.num_objects(); ++o) {
        json secs = json::array();
        for (Idx s = 0; s < f.card[o]; ++s) secs.push_back(f.name(o, s));
        j["values"][cat.object_id(o)] = secs;
    }
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        json r = json::object();
        for (Idx s = 0; s < f.card[cat.dst(m)]; ++s) r[f.name(cat.dst(m), s)] = f.name(cat.src(m), f.restrict[m][s]);
        j["restrictions"][cat.morphism_id(m)] = r;
    }
    return j;
}

SetPresheaf presheaf_from_json(const FiniteCategory& cat, const json& j) {
    SetPresheaf f;
    f.card.assign(cat.num_objects(), 0);
    f.names.assign(cat.num_objects(), {});
    std::vector<std::map<std::string, Idx>> lookup(cat.num_objects());
    const json& vals = field(j, "values");
    for (Idx o = 0; o < cat.num_objects(); ++o) {
        if (!vals.contains(cat.object_id(o))) throw InvalidInput("no sections given for " + cat.object_id(o));
        for (const auto& s : vals.at(cat.object_id(o))) {
            std::string n = str(s, "section id");
            if (lookup[o].count(n)) throw InvalidInput("duplicate section " + n + " at " + cat.object_id(o));
            lookup[o][n] = f.names[o].size();
            f.names[o].push_back(n);
        }
        f.card[o] = f.names[o].size();
    }
    const json& res = field(j, "restrictions");
    f.restrict.assign(cat.num_morphisms(), {});
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        Idx a = cat.dst(m), b = cat.src(m);
        if (cat.is_identity(m) && !res.contains(cat.morphism_id(m))) {
            for (Idx s = 0; s < f.card[a]; ++s) f.restrict[m].push_back(s);
            continue;
        }
        if (!res.contains(cat.morphism_id(m))) throw InvalidInput("no restriction given along " + cat.morphism_id(m));
        const json& r = res.at(cat.morphism_id(m));
        for (Idx s = 0; s < f.card[a]; ++s) {
            const std::string& n = f.names[a][s];
            if (!r.contains(n)) throw InvalidInput("restriction along " + cat.morphism_id(m) + " misses section " + n);
            std::string t = str(r.at(n), "section id");
            auto it = lookup[b].find(t);
            if (it == lookup[b].end()) throw InvalidInput("unknown section " + t + " at " + cat.object_id(b));
            f.restrict[m].push_back(it->second);
        }
    }
    return f;
}

json cor_to_json(const FiniteCategory& cat, const CoR& p) {
    json s = json::array();
    for (Idx a : p.summands) s.push_back(cat.object_id(a));
    return {{"summands", s}};
}

CoR cor_from_json(const FiniteCategory& cat, const json& j) {
    CoR p;
    for (const auto& s : field(j, "summands")) p.summands.push_back(object_of(cat, s));
    return p;
}

json cor_map_to_json(const FiniteCategory& cat, const CoRMap& m) {
    json a = json::array();
    for (Idx i = 0; i < m.size(); ++i) a.push_back({{"to", m.to[i]}, {"via", cat.morphism_id(m.via[i])}});
    return a;
}

CoRMap cor_map_from_json(const FiniteCategory& cat, const json& j) {
    if (!j.is_array()) throw InvalidInput("a coproduct map must be an array");
    CoRMap m;
    for (const auto& e : j) {
        long long to = integer(field(e, "to"), "to");
        if (to < 0) throw InvalidInput("negative summand index");
        m.to.push_back(static_cast<Idx>(to));
        m.via.push_back(morphism_of(cat, field(e, "via")));
    }
    return m;
}

json hypercover_to_json(const FiniteCategory& cat, const AugSimplicialCoR& u) {
    json j;
    j["base"] = cat.object_id(u.base);
    j["trunc"] = u.trunc;
    j["levels"] = json::array();
    for (const auto& l : u.levels) j["levels"].push_back(cor_to_json(cat, l));
    j["faces"] = json::array();
    for (const auto& fs : u.faces) {
        json a = json::array();
        for (const auto& f : fs) a.push_back(cor_map_to_json(cat, f));
        j["faces"].push_back(a);
    }
    j["degens"] = json::array();
    for (int n = 0; n < u.trunc; ++n) {
        const auto& ds = u.degens[n];
        json a = json::array();
        for (const auto& d : ds) a.push_back(cor_map_to_json(cat, d));
        j["degens"].push_back(a);
    }
    j["aug"] = cor_map_to_json(cat, u.aug);
    return j;
}

AugSimplicialCoR hypercover_from_json(const FiniteCategory& cat, const json& j) {
    AugSimplicialCoR u;
    u.base = object_of(cat, field(j, "base"));
    long long d = integer(field(j, "trunc"), "trunc");
    if (d < 0) throw InvalidInput("negative truncation");
    u.trunc = static_cast<int>(d);
    for (const auto& l : field(j, "levels")) u.levels.push_back(cor_from_json(cat, l));
    for (const auto& fs : field(j, "faces")) {
        u.faces.emplace_back();
        for (const auto& f : fs) u.faces.back().push_back(cor_map_from_json(cat, f));
    }
    for (const auto& ds : field(j, "degens")) {
        u.degens.emplace_back();
        for (const auto& s : ds) u.degens.back().push_back(cor_map_from_json(cat, s));
    }
    u.aug = cor_map_from_json(cat, field(j, "aug"));
    const std::size_t n = static_cast<std::size_t>(u.trunc) + 1;
    if (u.levels.size() != n) throw InvalidInput("expected trunc + 1 levels");
    if (u.degens.size() == n && u.degens.back().empty()) u.degens.pop_back();
    if (u.faces.size() != n || u.degens.size() + 1 != n)
        throw InvalidInput("expected trunc + 1 face lists and trunc degeneracy lists");
    auto v = validate_simplicial(cat, u);
    if (!v.ok()) throw InvalidInput("malformed hypercover: " + v.violations.front());
    return u;
}

json simplicial_map_to_json(const FiniteCategory& cat, const SimplicialCoRMap& f) {
    json a = json::array();
    for (const auto& l : f.levels) a.push_back(cor_map_to_json(cat, l));
    return a;
}

json matrix_to_json(const Matrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(entry(m(i, k)));
        a.push_back(row);
    }
    return a;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
    if (!j.is_array() || j.size() != rows) throw InvalidInput("matrix has the wrong number of rows");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw InvalidInput("matrix has the wrong number of columns");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = entry_from(j[i][k]);
    }
    return m;
}

json chain_complex_to_json(const ChainComplex& c) {
    json j;
    j["lo"] = c.lo;
    j["hi"] = c.hi;
    j["ranks"] = c.ranks;
    j["diffs"] = json::object();
    for (const auto& [k, d] : c.diffs) j["diffs"][std::to_string(k)] = matrix_to_json(d);
    return j;
}

ChainComplex chain_complex_from_json(const json& j) {
    ChainComplex c;
    c.lo = static_cast<int>(integer(field(j, "lo"), "lo"));
    c.hi = static_cast<int>(integer(field(j, "hi"), "hi"));
    for (const auto& r : field(j, "ranks")) {
        long long v = integer(r, "rank");
        if (v < 0) throw InvalidInput("negative rank");
        c.ranks.push_back(static_cast<std::size_t>(v));
    }
    if (c.hi >= c.lo ? c.ranks.size() != static_cast<std::size_t>(c.hi - c.lo + 1) : !c.ranks.empty())
        throw InvalidInput("ranks do not match lo..hi");
    if (j.contains("diffs")) {
        const json& d = j.at("diffs");
        if (!d.is_object()) throw InvalidInput("diffs must be an object keyed by degree");
        for (auto it = d.begin(); it != d.end(); ++it) {
            int k = 0;
            try {
                k = std::stoi(it.key());
            } catch (const std::exception&) {
                throw InvalidInput("differential key '" + it.key() + "' is not a degree");
            }
            c.diffs[k] = matrix_from_json(it.value(), c.rank(k - 1), c.rank(k));
        }
    }
    auto v = validate_complex(c);
    if (!v.ok()) throw InvalidInput("not a complex: " + v.violations.front());
    return c;
}

json chain_map_to_json(const ChainMap& f) {
    json j = json::object();
    for (const auto& [k, m] : f.maps) j[std::to_string(k)] = matrix_to_json(m);
    return j;
}

ChainMap chain_map_from_json(const json& j, const ChainComplex& src, const ChainComplex& dst) {
    if (!j.is_object()) throw InvalidInput("a chain map must be an object keyed by degree");
    ChainMap f;
    for (auto it = j.begin(); it != j.end(); ++it) {
        int k = 0;
        try {
            k = std::stoi(it.key());
        } catch (const std::exception&) {
            throw InvalidInput("chain map key '" + it.key() + "' is not a degree");
        }
        f.maps[k] = matrix_from_json(it.value(), dst.rank(k), src.rank(k));
    }
    return f;
}

json ab_presheaf_to_json(const FiniteCategory& cat, const AbPresheaf& f) {
    json j;
    j["objects"] = json::object();
    j["restrictions"] = json::object();
    for (Idx o = 0; o < cat.num_objects(); ++o) j["objects"][cat.object_id(o)] = chain_complex_to_json(f.values[o]);
    for (Idx m = 0; m < cat.num_morphisms(); ++m) j["restrictions"][cat.morphism_id(m)] = chain_map_to_json(f.restrict[m]);
    return j;
}

AbPresheaf ab_presheaf_from_json(const FiniteCategory& cat, const json& j) {
    AbPresheaf f;
    const json& objs = field(j, "objects");
    for (Idx o = 0; o < cat.num_objects(); ++o) {
        if (!objs.contains(cat.object_id(o))) throw InvalidInput("no complex given for " + cat.object_id(o));
        f.values.push_back(chain_complex_from_json(objs.at(cat.object_id(o))));
    }
    const json& res = field(j, "restrictions");
    for (Idx m = 0; m < cat.num_morphisms(); ++m) {
        const auto& a = f.values[cat.dst(m)];
        const auto& b = f.values[cat.src(m)];
        if (!res.contains(cat.morphism_id(m))) {
            if (!cat.is_identity(m)) throw InvalidInput("no restriction given along " + cat.morphism_id(m));
            f.restrict.push_back(identity_chain_map(a));
            continue;
        }
        f.restrict.push_back(chain_map_from_json(res.at(cat.morphism_id(m)), a, b));
    }
    auto v = validate_ab_presheaf(cat, f);
    if (!v.ok()) throw InvalidInput("invalid abelian presheaf: " + v.violations.front());
    return f;
}

json ab_map_to_json(const FiniteCategory& cat, const AbPresheafMap& m) {
    json j = json::object();
    for (Idx o = 0; o < cat.num_objects(); ++o) j[cat.object_id(o)] = chain_map_to_json(m.at[o]);
    return j;
}

AbPresheafMap ab_map_from_json(const FiniteCategory& cat, const json& j, const AbPresheaf& f, const AbPresheaf& g) {
    AbPresheafMap m;
    for (Idx o = 0; o < cat.num_objects(); ++o) {
        if (!j.contains(cat.object_id(o))) throw InvalidInput("no component given at " + cat.object_id(o));
        m.at.push_back(chain_map_from_json(j.at(cat.object_id(o)), f.values[o], g.values[o]));
    }
    auto v = validate_ab_map(cat, f, g, m);
    if (!v.ok()) throw InvalidInput("invalid presheaf map: " + v.violations.front());
    return m;
}

json group_to_json(const AbelianGroup& g) {
    json t = json::array();
    for (const auto& x : g.torsion) t.push_back(entry(x));
    return {{"betti", g.betti}, {"torsion", t}, {"text", g.str()}};
}

json to_json(const FiniteCategory& cat, const HypercoverReport& r) {
    json j;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["verified_to"] = r.verified_to;
    j["levels"] = json::array();
    for (const auto& l : r.levels) {
        json e{{"n", l.n}, {"cover", l.cover}, {"bijective", l.bijective}, {"sections", l.sections}};
        if (l.failure) {
            json sieve = json::array();
            for (Idx m : l.failure->lifting_sieve) sieve.push_back(cat.morphism_id(m));
            e["witness"] = {{"object", cat.object_id(l.failure->object)}, {"section", l.failure->section},
                            {"lifting_sieve", sieve}};
        } else {
            e["witness"] = nullptr;
        }
        j["levels"].push_back(e);
    }
    return j;
}

json to_json(const HeightReport& r) {
    return {{"determined", r.determined}, {"height", r.height}, {"truncation", r.truncation}, {"text", r.text()}};
}

json to_json(const DescentReport& r) {
    json j;
    j["hypercover"] = r.name;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["strategy"] = r.strategy;
    j["levels_used"] = r.levels_used;
    j["levels_required"] = r.levels_required;
    j["sound"] = r.sound;
    j["window"] = {r.window_lo, r.window_hi};
    j["degrees"] = json::array();
    for (const auto& d : r.degrees)
        j["degrees"].push_back({{"k", d.k},
                                {"source", group_to_json(d.source)},
                                {"tot", group_to_json(d.target)},
                                {"iso", d.iso}});
    if (!r.detail.empty()) j["detail"] = r.detail;
    return j;
}

json to_json(const FiniteCategory& cat, const CechDescentReport& r) {
    json j;
    j["object"] = cat.object_id(r.object);
    j["verdict"] = r.pass ? "pass" : "fail";
    j["families"] = json::array();
    for (std::size_t i = 0; i < r.families.size(); ++i) {
        json mem = json::array();
        for (Idx m : r.families[i].members) mem.push_back(cat.morphism_id(m));
        j["families"].push_back({{"members", mem}, {"report", to_json(r.reports[i])}});
    }
    if (r.first_failure) j["witness_family"] = j["families"][*r.first_failure]["members"];
    return j;
}

json to_json(const FiniteCategory& cat, const CounterexampleCheck& c) {
    json j;
    j["cech_descent"] = json::array();
    for (const auto& r : c.cech) j["cech_descent"].push_back(to_json(cat, r));
    j["cech_verdict"] = c.cech_pass ? "pass" : "fail";
    j["omega"] = to_json(cat, c.omega);
    j["descent"] = to_json(c.descent);
    j["separated"] = c.separated();
    j["verdict"] = c.descent.pass ? "pass" : "fail";
    return j;
}

json counterexample_manifest(const CounterexampleBundle& b) {
    const auto& cat = b.site.cat();
    json j;
    j["depth"] = b.depth;
    j["trunc"] = b.trunc;
    j["s_counts"] = b.s_counts;
    j["endpoints"] = json::object();
    for (Idx o = 0; o < cat.num_objects(); ++o)
        j["endpoints"][cat.object_id(o)] = {b.endpoints[o].first.get_str(), b.endpoints[o].second.get_str()};
    j["files"] = {{"site", "site.json"}, {"presheaf", "G.json"}, {"hypercover", "omega.json"}};
    return j;
}

}  // namespace descente
