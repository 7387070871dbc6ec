#pragma once

#include <string>

#include "json.hpp"

#include "descente/counterexample.hpp"
#include "descente/descent.hpp"
#include "descente/hypercover.hpp"
#include "descente/presheaf.hpp"
#include "descente/site.hpp"

namespace descente {

using json = nlohmann::json;

// Parse errors throw InvalidInput naming the offending field.
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

json to_json(const SiteSpec& s);
SiteSpec site_spec_from_json(const json& j);
VerdierSite site_from_json(const json& j);

json presheaf_to_json(const FiniteCategory& cat, const SetPresheaf& f);
SetPresheaf presheaf_from_json(const FiniteCategory& cat, const json& j);

json cor_to_json(const FiniteCategory& cat, const CoR& p);
CoR cor_from_json(const FiniteCategory& cat, const json& j);
json cor_map_to_json(const FiniteCategory& cat, const CoRMap& m);
CoRMap cor_map_from_json(const FiniteCategory& cat, const json& j);

json hypercover_to_json(const FiniteCategory& cat, const AugSimplicialCoR& u);
AugSimplicialCoR hypercover_from_json(const FiniteCategory& cat, const json& j);
json simplicial_map_to_json(const FiniteCategory& cat, const SimplicialCoRMap& f);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols);
json chain_complex_to_json(const ChainComplex& c);
ChainComplex chain_complex_from_json(const json& j);
json chain_map_to_json(const ChainMap& f);
ChainMap chain_map_from_json(const json& j, const ChainComplex& src, const ChainComplex& dst);

json ab_presheaf_to_json(const FiniteCategory& cat, const AbPresheaf& f);
AbPresheaf ab_presheaf_from_json(const FiniteCategory& cat, const json& j);
json ab_map_to_json(const FiniteCategory& cat, const AbPresheafMap& m);
AbPresheafMap ab_map_from_json(const FiniteCategory& cat, const json& j, const AbPresheaf& f, const AbPresheaf& g);

json group_to_json(const AbelianGroup& g);
json to_json(const FiniteCategory& cat, const HypercoverReport& r);
json to_json(const HeightReport& r);
json to_json(const DescentReport& r);
json to_json(const FiniteCategory& cat, const CechDescentReport& r);
json to_json(const FiniteCategory& cat, const CounterexampleCheck& c);
json counterexample_manifest(const CounterexampleBundle& b);

}  // namespace descente
