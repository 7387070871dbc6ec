#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "descente/category.hpp"
#include "descente/matrix.hpp"

namespace descente {

// A bounded chain complex of free abelian groups in degrees lo..hi. The
// differential d(k): C_k -> C_{k-1} is a rank(k-1) x rank(k) matrix; missing
// entries are zero.
struct ChainComplex {
    int lo = 0, hi = -1;
    std::vector<std::size_t> ranks;
    std::map<int, Matrix> diffs;

    std::size_t rank(int k) const;
    Matrix diff(int k) const;
    static ChainComplex zero();
};

// Per-degree matrices C_k -> D_k; missing entries are zero.
struct ChainMap {
    std::map<int, Matrix> maps;
    Matrix at(int k, const ChainComplex& src, const ChainComplex& dst) const;
};

ValidationReport validate_complex(const ChainComplex& c);
bool is_chain_map(const ChainComplex& a, const ChainComplex& b, const ChainMap& f);
ChainMap identity_chain_map(const ChainComplex& c);
ChainMap compose(const ChainComplex& a, const ChainComplex& b, const ChainComplex& c, const ChainMap& g,
                 const ChainMap& f);
bool chain_maps_equal(const ChainComplex& a, const ChainComplex& b, const ChainMap& f, const ChainMap& g);

// A finitely generated abelian group Z^betti + sum of Z/t.
struct AbelianGroup {
    std::size_t betti = 0;
    std::vector<mpz_class> torsion;  // each > 1, each dividing the next
    bool is_zero() const { return betti == 0 && torsion.empty(); }
    bool operator==(const AbelianGroup&) const = default;
    std::string str() const;
};

struct HomologySummary {
    int lo = 0, hi = -1;
    std::vector<AbelianGroup> groups;
    AbelianGroup at(int k) const;
    bool acyclic() const;
};

HomologySummary homology(const ChainComplex& c);
AbelianGroup homology_at(const ChainComplex& c, int k);

// H_k as the cokernel of a relation matrix on a basis of the cycles.
struct HomologyPresentation {
    Matrix cycles;         // rank(k) x z, columns a basis of ker d_k
    Matrix coordinates;    // z x rank(k), cycle -> coordinates in that basis
    Matrix relations;      // z x rank(k+1), boundaries in cycle coordinates
    AbelianGroup group;
    Matrix free_projection;  // betti x z, coordinates -> free part
    Matrix free_lift;        // z x betti, free generators as cycle coordinates
};

HomologyPresentation homology_presentation(const ChainComplex& c, int k);

// Lattice test that H_k(f) is an isomorphism.
bool homology_iso(const ChainComplex& a, const ChainComplex& b, const ChainMap& f, int k);

// cone(f)_n = A_{n-1} + B_n with d(a, b) = (-d a, f(a) + d b).
ChainComplex mapping_cone(const ChainComplex& a, const ChainComplex& b, const ChainMap& f);
bool is_quasi_isomorphism(const ChainComplex& a, const ChainComplex& b, const ChainMap& f);

// Levels C^0..C^P with cofaces d^i: C^{p-1} -> C^p (i = 0..p) and
// codegeneracies s^i: C^{p+1} -> C^p (i = 0..p).
struct CosimplicialComplex {
    std::vector<ChainComplex> levels;
    std::vector<std::vector<ChainMap>> cofaces;   // cofaces[0] empty
    std::vector<std::vector<ChainMap>> codegens;  // codegens[P] empty
    int top() const { return static_cast<int>(levels.size()) - 1; }
};

ValidationReport validate_cosimplicial(const CosimplicialComplex& c);
// delta = sum (-1)^i d^i : C^{p-1} -> C^p.
ChainMap alternating_coface(const CosimplicialComplex& c, int p);

struct TotResult {
    ChainComplex tot;
    int window_lo = 0, window_hi = 0;
    int levels_used = 0;       // P + 1
    int levels_required = 0;   // for a sound window
    bool sound = false;
    int internal_hi = 0;       // largest internal degree present
    // Offsets of the (p, q) blocks inside total degree q - p.
    std::map<std::pair<int, int>, std::size_t> offset;
};

// Tot in total degree n = sum over q - p = n of C^p_q, D = d + (-1)^q delta.
// normalized keeps only the intersection of the codegeneracy kernels.
TotResult totalize(const CosimplicialComplex& c, int a, int b, bool normalized = false);
// Levels needed so that total degrees a-1..b+1 see every column.
int required_levels(const CosimplicialComplex& c, int a);

// A cosimplicial complex given as levelwise direct sums of pieces. Block b of
// level p is pieces[blocks[p][b]]; coface d^i sends block c of level p-1 into
// block b of level p along piece_maps[m] when cofaces[p][i][b] = (c, m).
struct BlockCosimplicial {
    std::vector<ChainComplex> pieces;
    std::vector<std::vector<Idx>> blocks;
    std::vector<ChainMap> piece_maps;
    std::vector<std::vector<std::vector<std::pair<Idx, Idx>>>> cofaces;
    std::vector<std::vector<std::vector<std::pair<Idx, Idx>>>> codegens;  // s^i: block of level p+1 -> level p

    int top() const { return static_cast<int>(blocks.size()) - 1; }
    CosimplicialComplex assemble() const;
};

struct CollapseResult {
    bool ok = false;
    std::string refusal;
    // The cochain complex p -> H_0(C^p) as a chain complex in degrees -P..0.
    ChainComplex cochain;
    std::vector<std::size_t> level_ranks;
    // H^p for p = 0..P-1 (the top level only bounds H^{P-1}).
    std::vector<AbelianGroup> cohomology;
};

// Requires every column to have homology concentrated in degree 0.
CollapseResult column_collapse(const CosimplicialComplex& c);
// Blockwise: the pieces listed in universe must have free H_0 and no higher
// homology; every piece used by a block must belong to the universe.
CollapseResult column_collapse(const BlockCosimplicial& c, const std::vector<Idx>& universe);

}  // namespace descente
