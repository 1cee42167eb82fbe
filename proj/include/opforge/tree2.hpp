#pragma once
// Composite products of Sigma-modules through an explicit ambient basis of
// two-level trees.  An ambient basis element is an outer basis vector of M(k)
// together with k slots, slot j carrying a nonempty set of leaf labels
// (ascending) and an inner basis vector; the leaf sets partition {0..n-1}.
// This realizes M(k) ⊗ Ind_{Sigma_{i_1} x ... x Sigma_{i_k}}^{Sigma_n}(N(i_1)⊗...⊗N(i_k))
// before the outer Sigma_k coinvariants.
//
// Sigma_k acts freely on the tuples of leaf sets (disjoint nonempty sets are
// pairwise distinct), so the coinvariants have a canonical basis: the ambient
// elements whose slots are sorted by minimal leaf.  incl is the averaging
// idempotent restricted to those; proj moves a tuple to its sorted form by the
// unique slot permutation, picking up the outer action and the Koszul sign of
// reordering the graded slot contents.
//
// With a second inner module ("linear mode") the slots carry colors and
// exactly one slot holds the distinguished module: the summand of M∘(N0 ⊕ N1)
// linear in N1, which is the infinitesimal composite when N0 is the unit.
#include "opforge/symmod.hpp"

namespace opforge {

struct Slot {
    std::vector<int> leaves;  // ascending global leaf labels
    int color = 0;            // 0 = primary inner module, 1 = distinguished
    int deg = 0, idx = 0;     // inner basis position
};

struct TreeElt {
    int odeg = 0, oidx = 0;  // outer basis position
    std::vector<Slot> slots;

    int k() const { return (int)slots.size(); }
    int degree() const;
    std::vector<int> slot_degs() const;
};

std::vector<int> tree_key(const TreeElt& z);
bool tree_canonical(const TreeElt& z);  // slot minima ascending

struct Tree2 {
    int n = 0;
    std::map<int, std::vector<TreeElt>> basis;                 // ambient, per degree
    std::map<int, std::map<std::vector<int>, int>> index;      // key -> ambient position
    std::map<int, std::vector<int>> canon;                     // coinv order -> ambient position
    std::map<int, std::map<int, int>> coinv_of;                // ambient position -> coinv position
    ChainComplex coinv;
    std::vector<std::map<int, RationalMatrix>> gens;           // transported Sigma_n generators
    std::map<int, RationalMatrix> incl, proj;                  // coinv <-> ambient

    int idx_of(int deg, const TreeElt& z) const;
};

// coordinates of the class of coeff·z in the coinvariant basis (outer = the
// module whose element decorates the root)
std::map<int, Rat> tree2_project(const Tree2& t, const SymModule& outer, int deg,
                                 const TreeElt& z, const Rat& coeff);

// n1 == nullptr: plain composite over inner n0; else linear mode
Tree2 build_tree2(const SymModule& outer, const SymModule& n0, const SymModule* n1, int n);

struct CompositeData {
    SymModule mod;
    std::map<int, Tree2> amb;
};

// check=false skips re-validating the assembled Sigma-module (the transported
// action is produced by machinery that is itself under test elsewhere); the
// retraction assertion inside build_tree2 always runs
CompositeData composite_full(const SymModule& M, const SymModule& N, int max_arity,
                             bool check = true);
SymModule composite(const SymModule& M, const SymModule& N, int max_arity);

CompositeData inf_composite_full(const SymModule& M, const SymModule& N0,
                                 const SymModule& N1, int max_arity, bool check = true);
SymModule inf_composite(const SymModule& M, const SymModule& N);

// f∘(id;g) summed over slots with Koszul signs: composite(M1,N1) -> M2∘(N1;N2).
// Returns arity -> source degree -> matrix between the coinvariant bases.
std::map<int, std::map<int, RationalMatrix>> inf_composite_map(
    const CompositeData& src, const CompositeData& tgt,
    const SymModule& M1, const SymModule& N1,
    const SymModule& M2, const SymModule& N2,
    const SymMap& f, const SymMap& g);

} // namespace opforge
