#pragma once
// Symmetric-group modules in chain complexes ("Sigma-modules"), stored one
// arity at a time as a complex plus the right action of Sigma_n.  Only the
// images of the adjacent transpositions s_i are stored; arbitrary rho(sigma)
// are reassembled through descent words, using the identity
// rho(perm_compose(a,b)) = rho(a) rho(b).  Construction validates that the
// generators are chain maps and satisfy the Coxeter relations, which pins the
// whole action.
#include <functional>
#include <map>
#include <mutex>

#include "opforge/complex.hpp"
#include "opforge/errors.hpp"
#include "opforge/perm.hpp"

namespace opforge {

struct SymArity {
    ChainComplex cx;
    // gens[i] = rho(s_i) per homological degree, i = 0..n-2; a missing degree
    // entry denotes the identity block
    std::vector<std::map<int, RationalMatrix>> gens;
};

class SymModule {
  public:
    SymModule() = default;
    SymModule(int max_arity, std::map<int, SymArity> comp, bool check = true);
    SymModule(const SymModule& o) : max_arity_(o.max_arity_), comp_(o.comp_) {}
    SymModule(SymModule&& o) noexcept : max_arity_(o.max_arity_), comp_(std::move(o.comp_)) {}
    SymModule& operator=(const SymModule& o) {
        max_arity_ = o.max_arity_;
        comp_ = o.comp_;
        return *this;
    }
    SymModule& operator=(SymModule&& o) noexcept {
        max_arity_ = o.max_arity_;
        comp_ = std::move(o.comp_);
        return *this;
    }

    int max_arity() const { return max_arity_; }
    bool present(int n) const;
    // component complex; ArityOverflow beyond the truncation bound
    const ChainComplex& cx(int n) const;
    const SymArity& arity(int n) const;
    std::vector<int> arities() const;

    // rho(p) on the degree-d component (zero-shaped when the degree is empty)
    RationalMatrix act(int n, const Perm& p, int d) const;
    std::map<int, RationalMatrix> act_full(int n, const Perm& p) const;

    // per-degree traces of rho(p); complete iso invariant of the action in char 0
    std::map<int, Rat> character(int n, const Perm& p) const;

  private:
    void validate() const;

    int max_arity_ = 0;
    std::map<int, SymArity> comp_;
    static const SymArity zero_arity_;

    mutable std::mutex mu_;
    mutable std::map<std::pair<int, Perm>, std::map<int, RationalMatrix>> cache_;
};

// 1-based leaf-set rendering for basis labels: {0,2} -> "13", dot-separated
// once more than 9 leaves are in play
std::string leaf_label(const std::vector<int>& leaves, int n);

// rho(p) on the whole of M(n): the per-degree action blocks laid along the
// flat basis
RationalMatrix flat_act(const SymModule& M, int n, const Perm& p);

// I(1) = Q in degree 0, all other arities zero
SymModule unit_symmod(int max_arity);
SymModule zero_symmod(int max_arity);
// arity-wise direct sum
SymModule direct_sum_sym(const SymModule& M, const SymModule& N);
// arity-wise dual: component n becomes dual(M(n)) with action rho^dual(p) the
// transpose of rho(p); degrees flip
SymModule dual_sym(const SymModule& M);

struct Coinvariants {
    ChainComplex cx;
    ChainMap proj;  // V -> cx
    ChainMap incl;  // cx -> V; proj∘incl = id, incl∘proj = averaging idempotent
};

// image of e = (1/n!) sum rho(sigma); act(p, d) must give chain-map actions
Coinvariants coinvariants(const ChainComplex& V, int n,
                          const std::function<RationalMatrix(const Perm&, int)>& act);
Coinvariants coinvariants(const SymModule& M, int n);

// Day tensor: (M⊗N)(n) = ⊕_{i+j=n} Ind_{Sigma_i x Sigma_j}^{Sigma_n} M(i)⊗N(j),
// basis = (i-element leaf set for the M part) x basis pairs
SymModule tensor_sym(const SymModule& M, const SymModule& N);

// arity-wise tensor with the diagonal action
SymModule hadamard(const SymModule& M, const SymModule& N);

// Schur functor: ⊕_{n<=max_weight} M(n) ⊗_{Sigma_n} V^{⊗n}, weight graded by n
// (or by total letter weight when V itself is weight graded)
ChainComplex schur(const SymModule& M, const ChainComplex& V, int max_weight);

// degree-homogeneous Sigma-equivariant map between Sigma-modules
struct SymMap {
    int deg = 0;
    std::map<int, std::map<int, RationalMatrix>> comp;  // arity -> source degree -> matrix

    RationalMatrix at(int arity, int sdeg, const SymModule& src, const SymModule& tgt) const;
};

SymMap identity_sym_map(const SymModule& M);

} // namespace opforge
