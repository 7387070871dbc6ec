#pragma once

#include <optional>
#include <string>
#include <vector>

#include "descente/cor.hpp"
#include "descente/site.hpp"

namespace descente {

// A finite set-valued presheaf. Sections of object o are 0..card[o]-1;
// restrict[m] sends sections of dst(m) to sections of src(m).
struct SetPresheaf {
    std::vector<std::size_t> card;
    std::vector<std::vector<Idx>> restrict;
    std::vector<std::vector<std::string>> names;  // optional, per object

    std::string name(Idx o, Idx s) const;
};

// Per-object functions between section sets.
struct PresheafMap {
    std::vector<std::vector<Idx>> at;
};

ValidationReport validate_presheaf(const FiniteCategory& cat, const SetPresheaf& f);
bool is_natural(const FiniteCategory& cat, const SetPresheaf& e, const SetPresheaf& b, const PresheafMap& m);
PresheafMap identity_map(const SetPresheaf& f);
PresheafMap compose(const PresheafMap& g, const PresheafMap& f);
bool is_pointwise_bijective(const SetPresheaf& e, const SetPresheaf& b, const PresheafMap& m);

// Elements of a realized coproduct of representables at Y are pairs
// (summand i, h: Y -> A_i), indexed summand-major in hom order.
class RealizedCoR {
public:
    RealizedCoR(const FiniteCategory& cat, const CoR& p);
    std::size_t count(Idx y) const { return elems_[y].size(); }
    std::pair<Idx, Idx> element(Idx y, Idx e) const { return elems_[y][e]; }
    Idx index(Idx y, Idx i, Idx h) const { return offset_[y][i] + cat_->hom_position(h); }
    Idx restrict(Idx k, Idx e) const;  // k: Z -> Y, e at Y
    SetPresheaf presheaf() const;

private:
    const FiniteCategory* cat_;
    CoR p_;
    std::vector<std::vector<Idx>> offset_;
    std::vector<std::vector<std::pair<Idx, Idx>>> elems_;
};

SetPresheaf realize_cor(const FiniteCategory& cat, const CoR& p);
PresheafMap realize_map(const FiniteCategory& cat, const CoR& p, const CoR& q, const CoRMap& f);

struct SectionWitness {
    Idx object = npos;
    Idx section = npos;
    bool covers = false;
    std::optional<Idx> family;   // index into closed_families(object)
    std::vector<Idx> lifting_sieve;
};

struct GenCoverReport {
    bool ok = true;
    std::size_t sections_checked = 0;
    std::optional<SectionWitness> first_failure;
    std::vector<SectionWitness> witnesses;  // all sections, when requested
};

// Lifting sieve of section b of B(x): morphisms h: Y -> x with B(h)(b) in the image of m.
std::vector<Idx> lifting_sieve(const FiniteCategory& cat, const SetPresheaf& e, const SetPresheaf& b,
                               const PresheafMap& m, Idx x, Idx section);

GenCoverReport is_generalized_cover(const VerdierSite& site, const SetPresheaf& e, const SetPresheaf& b,
                                    const PresheafMap& m, bool keep_witnesses = false);

struct QuotientResult {
    SetPresheaf result;
    PresheafMap map;  // F -> result
};

QuotientResult apply_A(const VerdierSite& site, const SetPresheaf& f);
QuotientResult apply_B(const VerdierSite& site, const SetPresheaf& f);
// F -> A B A B F.
QuotientResult sheafify(const VerdierSite& site, const SetPresheaf& f);

enum class SheafStatus { Sheaf, SeparatedOnly, Neither };
std::string to_string(SheafStatus s);

struct SheafStatusReport {
    SheafStatus status = SheafStatus::Sheaf;
    std::optional<CoveringFamily> offending;  // a family witnessing the failure
    std::string detail;
};

SheafStatusReport sheaf_status(const VerdierSite& site, const SetPresheaf& f);

// All covering sieves on x, each as a sorted list of morphisms.
std::vector<Sieve> covering_sieves(const VerdierSite& site, Idx x);
// All matching families on a sieve: phi[k] is a section of src(sieve.members[k]).
std::vector<std::vector<Idx>> matching_families(const FiniteCategory& cat, const SetPresheaf& f, const Sieve& r);

// Cech nerve of a map of coproducts of representables into a representable.
// Level n has one summand per (n+1)-tuple of source summands (lexicographic),
// its object the iterated designated pullback.
AugSimplicialCoR cech_complex(const VerdierSite& site, const CoR& source, const CoRMap& to_base, Idx base, int d);
AugSimplicialCoR cech_complex(const VerdierSite& site, const CoveringFamily& family, int d);

// Levelwise set presheaves with face and degeneracy maps (no augmentation).
struct SimplicialSetPresheaf {
    int trunc = 0;
    std::vector<SetPresheaf> levels;
    std::vector<std::vector<PresheafMap>> faces;   // faces[n][i]: n -> n-1
    std::vector<std::vector<PresheafMap>> degens;  // degens[n][i]: n -> n+1
};

struct SimplicialPresheafMap {
    std::vector<PresheafMap> levels;
};

SimplicialSetPresheaf realize_simplicial(const FiniteCategory& cat, const AugSimplicialCoR& u);
// Levelwise augmentation maps realize(U_n) -> rX.
SimplicialPresheafMap realize_augmentation(const FiniteCategory& cat, const AugSimplicialCoR& u);
SimplicialSetPresheaf constant_simplicial(const SetPresheaf& f, int d);
ValidationReport validate_simplicial(const FiniteCategory& cat, const SimplicialSetPresheaf& f);

// Pointwise Cech nerve of a presheaf map m: F -> G: level n is the (n+1)-fold
// fiber product of F over G.
SimplicialSetPresheaf cech_pointwise(const FiniteCategory& cat, const SetPresheaf& f, const SetPresheaf& g,
                                     const PresheafMap& m, int d);

}  // namespace descente
