#pragma once
// Operads, cooperads and their algebras at a finite arity truncation.
//
// A truncated operad is a Sigma-module P with a unit in P(1) and partial
// compositions o_i : P(m)⊗P(n) -> P(m+n-1), stored as one matrix per (m,n,i)
// against the flattened (degree-ascending) bases; the column for the basis
// pair (a,b) sits at a*flat_dim(P(n)) + b.  Construction with check=true
// verifies the graded operad axioms as matrix identities: degree additivity,
// the chain rule d(a o_i b) = da o_i b + (-1)^{|a|} a o_i db, both unit laws,
// sequential associativity
//     (a o_i b) o_{i+j-1} c = a o_i (b o_j c)
// and parallel associativity
//     (a o_i b) o_{k+m-1} c = (-1)^{|b||c|} (a o_k c) o_i b     (i < k),
// all inside the arity truncation.  Equivariance of the o_i under block
// permutations is checked through the assembled infinitesimal composition
// gamma_(1) : P∘(I;P) -> P, which must intertwine the transported Sigma_n
// action on the two-level tree basis with the action on P; that identity is
// exactly the block-permutation compatibility of the partial compositions.
//
// A cooperad C is stored with the dual data: a counit row on C(1), partial
// decompositions C(m+n-1) -> C(m)⊗C(n) (rows indexed like the o_i columns),
// and the full infinitesimal decomposition Delta_(1) as a map into the
// canonical tree basis of C∘(I;C), whose contiguous components must agree
// with the partial decompositions.  Cooperads here are conilpotent: every
// component complex carries a weight grading, decompositions are additive in
// it, and the weight-0 part is one-dimensional in arity 1 where the counit
// pairs with it.
#include <tuple>

#include "opforge/tree2.hpp"

namespace opforge {

struct Operad {
    SymModule mod;
    RationalMatrix unit;  // flat column in P(1), concentrated in degree 0
    std::map<std::tuple<int, int, int>, RationalMatrix> comp;
};

Operad make_operad(SymModule mod, RationalMatrix unit,
                   std::map<std::tuple<int, int, int>, RationalMatrix> comp,
                   bool check = true);

struct Cooperad {
    SymModule mod;
    RationalMatrix counit;  // flat row on C(1)
    std::map<std::tuple<int, int, int>, RationalMatrix> decomp;
    SymMap d1;  // Delta_(1) : C -> C∘(I;C), target the canonical tree basis
};

Cooperad make_cooperad(SymModule mod, RationalMatrix counit,
                       std::map<std::tuple<int, int, int>, RationalMatrix> decomp,
                       SymMap d1, bool check = true);

// gamma_(1) assembled from the o_i: the column of a canonical tree (lambda;
// mu in the marked slot) is rho(L_z^{-1}) applied to lambda o_i mu, where L_z
// is the concatenated leaf listing of the slots (the assembled tree action of
// p relabels leaves by p^{-1}).  Throws NotReduced when P has an arity-0
// component.
struct InfComposition {
    CompositeData dom;
    SymMap map;  // dom.mod -> P.mod
};
// check=false skips re-validating the assembled tree module (see tree2.hpp)
InfComposition gamma1(const Operad& P, bool check = true);

struct InfDecomposition {
    CompositeData cod;
    SymMap map;  // C.mod -> cod.mod
};
InfDecomposition delta1(const Cooperad& C, bool check = true);

// the full two-level decomposition C -> C∘C over the canonical tree basis,
// assembled from the partial decompositions: on a contiguous splitting it is
// the peeling of one inner factor at a time (the transpose shape of the
// sign-free left-to-right filling of gamma), and the coefficient at a tree
// with leaf listing L is the contiguous coefficient of rho(L) applied to the
// source.  Trivial pieces through the weight-0 class are included.
struct Decomposition {
    CompositeData cod;
    SymMap map;  // C.mod -> cod.mod
};
Decomposition full_decomposition(const Cooperad& C, bool check = true);

// library operads and cooperads
Operad ass_operad(int max_arity);      // Ass(n) = Q[Sigma_n], basis labeled by product words
Operad comm_operad(int max_arity);     // trivial reps including the arity-0 unit component
Operad comm_nu_operad(int max_arity);  // reduced: arities >= 1 only
Operad lie_operad(int max_arity);      // Dynkin bracket span inside Ass, dim (n-1)!
Cooperad cocomm_nu_cooperad(int max_arity);

// operadic (de)suspension: S(n) one-dimensional in degree n-1 with the sign
// action and o_i signs (-1)^{(n-1)(i-1)}; S^c carries the transposed
// decompositions in the same degrees
Operad suspension_operad(int max_arity);
Cooperad suspension_cooperad(int max_arity);

// checks P(V)[1] ≅ (S ⊗_H P)(V[1]) weight by weight: equal dimensions and
// equal homology in every degree (which over Q detects isomorphism of
// complexes), with the weight gradings aligned
bool suspension_iso_check(const Operad& P, const ChainComplex& V, int max_weight);

// weight-truncated tensor algebra on a complex, as an operad concentrated in
// arity 1: T(V) = ⊕_{w<=W} V^{⊗w} with concatenation, weight = word length,
// words past the truncation multiply to zero.  The Sigma-module overloads
// throw ArityViolation off arity 1.
Operad tensor_algebra(const ChainComplex& V, int max_weight);
Operad tensor_algebra(const SymModule& V, int max_weight);
Cooperad tensor_coalgebra(const ChainComplex& V, int max_weight);
Cooperad tensor_coalgebra(const SymModule& V, int max_weight);

// algebra over an operad; the structure map for arity n is stored on the
// ambient P(n) ⊗ A^{⊗n} (flat basis of P(n) times big-endian words in the
// flat basis of A) and must coequalize the diagonal Sigma_n action, so it
// descends to P(n) ⊗_{Sigma_n} A^{⊗n}.  check verifies degree 0, the chain
// rule, unit law, equivariance and compatibility with every o_i available in
// the truncation.
struct OperadAlgebra {
    Operad op;
    ChainComplex carrier;
    std::map<int, RationalMatrix> structure;  // arity -> flat_dim(A) x (flat_dim P(n) * flat_dim A^n)
};

OperadAlgebra make_operad_algebra(Operad op, ChainComplex carrier,
                                  std::map<int, RationalMatrix> structure,
                                  bool check = true);

// coalgebra over a cooperad: carrier weight graded, arity-n cocomposition
// A -> C(n) ⊗ A^{⊗n} with Sigma_n-invariant image; components of arity >= 2
// strictly lower the weight of every letter
struct CooperadCoalgebra {
    Cooperad coop;
    ChainComplex carrier;
    std::map<int, RationalMatrix> structure;  // arity -> (flat C(n) * words) x flat_dim(A)
};

CooperadCoalgebra make_cooperad_coalgebra(Cooperad coop, ChainComplex carrier,
                                          std::map<int, RationalMatrix> structure,
                                          bool check = true);

// dg Lie algebra from structure constants on the flat basis of the carrier:
// bracket[{i,j}] lists (k, coefficient) for [x_i, x_j].  A missing (j,i)
// entry is filled in by graded antisymmetry; a present one is checked against
// it.  Throws AntisymmetryFailure / JacobiFailure / LeibnizFailure naming the
// offending basis indices.  The result is an algebra over lie_operad(max_arity)
// whose higher structure maps evaluate left-normed brackets.
OperadAlgebra lie_algebra_from_constants(
    const ChainComplex& carrier,
    const std::map<std::pair<int, int>, std::vector<std::pair<int, Rat>>>& bracket,
    int max_arity);

OperadAlgebra sl2_algebra(int max_arity);          // [e,f]=h, [h,e]=2e, [h,f]=-2f
OperadAlgebra heisenberg3_algebra(int max_arity);  // [x,y]=z central
OperadAlgebra abelian_algebra(int dim, int max_arity);

} // namespace opforge
