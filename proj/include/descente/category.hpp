#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace descente {

using Idx = std::size_t;
inline constexpr Idx npos = static_cast<Idx>(-1);

struct MorphismSpec {
    std::string id, src, dst;
};

// One entry of the composition table: gf = g o f.
struct CompositionSpec {
    std::string g, f, gf;
};

struct CategorySpec {
    std::vector<std::string> objects;
    std::vector<MorphismSpec> morphisms;
    std::map<std::string, std::string> identities;
    std::vector<CompositionSpec> composition;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    void add(std::string v) { violations.push_back(std::move(v)); }
    void merge(const ValidationReport& other) {
        violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    }
};

// A finite category with objects and morphisms indexed in lexicographic order
// of their ids. Composition is a dense table; missing entries are npos and are
// reported by validate_category rather than rejected at construction.
class FiniteCategory {
public:
    FiniteCategory() = default;
    explicit FiniteCategory(const CategorySpec& spec);

    std::size_t num_objects() const { return objects_.size(); }
    std::size_t num_morphisms() const { return morphisms_.size(); }

    const std::string& object_id(Idx o) const { return objects_[o]; }
    const std::string& morphism_id(Idx m) const { return morphisms_[m]; }

    std::optional<Idx> find_object(const std::string& id) const;
    std::optional<Idx> find_morphism(const std::string& id) const;
    Idx object(const std::string& id) const;
    Idx morphism(const std::string& id) const;

    Idx src(Idx m) const { return src_[m]; }
    Idx dst(Idx m) const { return dst_[m]; }
    Idx identity(Idx o) const { return identity_[o]; }
    bool is_identity(Idx m) const { return identity_[src_[m]] == m; }

    // g o f, or npos when the table has no entry.
    Idx compose(Idx g, Idx f) const { return comp_[g * morphisms_.size() + f]; }
    // g o f; throws InternalError when undefined.
    Idx compose_checked(Idx g, Idx f) const;

    const std::vector<Idx>& hom(Idx a, Idx b) const { return hom_[a * objects_.size() + b]; }
    Idx hom_position(Idx m) const { return hom_pos_[m]; }
    // All morphisms with target b, in index order.
    const std::vector<Idx>& into(Idx b) const { return into_[b]; }
    // All morphisms with source a, in index order.
    const std::vector<Idx>& out_of(Idx a) const { return out_[a]; }

    bool is_iso(Idx m) const { return inverse_[m] != npos; }
    Idx inverse(Idx m) const { return inverse_[m]; }

    CategorySpec spec() const;

    // Problems found in the input that do not prevent indexing
    // (ill-typed or conflicting composition entries, missing identities).
    const std::vector<std::string>& input_issues() const { return issues_; }

private:
    std::vector<std::string> objects_, morphisms_;
    std::map<std::string, Idx> object_index_, morphism_index_;
    std::vector<Idx> src_, dst_, identity_, comp_, hom_pos_, inverse_;
    std::vector<std::vector<Idx>> hom_, into_, out_;
    std::vector<std::string> issues_;
};

ValidationReport validate_category(const FiniteCategory& cat);

// Id conventions of make_poset.
std::string poset_identity_id(const std::string& a);
std::string poset_arrow_id(const std::string& a, const std::string& b);

// The poset category generated by the relations a <= b (one arrow a -> b).
// Reflexive-transitive closure is taken; cycles are rejected.
FiniteCategory make_poset(const std::vector<std::string>& objects,
                          const std::vector<std::pair<std::string, std::string>>& leq);

}  // namespace descente
