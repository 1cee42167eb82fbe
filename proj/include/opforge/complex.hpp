#pragma once
// Bounded chain complexes of finite dimensional Q-vector spaces, homological
// grading, differential of degree -1.  d∘d = 0 is checked at construction, so
// a ChainComplex in hand is always an actual complex.
//
// Sign conventions used throughout (and pinned by tests):
//   shift      (X[1])_i = X_{i+1},  d^{X[1]} = -d^X
//   tensor     d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy
//   dual       (X^v)_n = (X_{-n})^*, (d^v φ) = -(-1)^{|φ|} φ∘d
//   cone(f)_n  = X_{n-1} ⊕ Y_n with d = [[-d^X, 0], [-f, d^Y]]
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opforge/linalg.hpp"

namespace opforge {

class ChainComplex {
  public:
    ChainComplex() = default;

    // labels/weights are optional per-degree metadata parallel to the basis
    static ChainComplex build(std::map<int, int> dims,
                              std::map<int, RationalMatrix> diffs,
                              std::map<int, std::vector<std::string>> labels = {},
                              std::map<int, std::vector<int>> weights = {});

    int dim(int n) const;
    int total_dim() const;
    bool is_zero() const;
    int lo() const { return lo_; }   // support window, inclusive
    int hi() const { return hi_; }
    const std::map<int, int>& dims() const { return dims_; }

    // degree-n differential X_n -> X_{n-1}; zero matrix of correct shape if absent
    RationalMatrix diff(int n) const;
    const std::map<int, RationalMatrix>& diffs() const { return d_; }

    const std::vector<std::string>& labels(int n) const;
    const std::vector<int>& weights(int n) const;
    bool has_labels() const { return !labels_.empty(); }
    bool has_weights() const { return !weights_.empty(); }
    // weight of basis element i in degree n; 0 when no metadata is attached
    int weight_of(int n, int i) const;

    std::map<int, int> homology() const;
    std::vector<int> weight_set() const;

  private:
    std::map<int, int> dims_;
    std::map<int, RationalMatrix> d_;
    std::map<int, std::vector<std::string>> labels_;
    std::map<int, std::vector<int>> weights_;
    int lo_ = 0, hi_ = -1;

    static const std::vector<std::string> no_labels_;
    static const std::vector<int> no_weights_;
};

struct ChainMap {
    ChainComplex source, target;
    int deg = 0;                          // maps X_n -> Y_{n+deg}
    std::map<int, RationalMatrix> comp;   // keyed by source degree

    RationalMatrix at(int n) const;       // zero-filled when absent
};

// validates shapes and d_Y f = f d_X (degree-0 chain maps only)
ChainMap make_chain_map(const ChainComplex& X, const ChainComplex& Y,
                        std::map<int, RationalMatrix> comp);
ChainMap identity_map(const ChainComplex& X);
ChainMap compose(const ChainMap& g, const ChainMap& f);   // g after f

ChainComplex shift(const ChainComplex& X, int k);
ChainComplex dual(const ChainComplex& X);
ChainComplex cone(const ChainMap& f);
ChainComplex truncate_ge(const ChainComplex& X, int n0);
ChainComplex tensor(const ChainComplex& X, const ChainComplex& Y);
ChainComplex direct_sum(const ChainComplex& X, const ChainComplex& Y);

ChainComplex sphere(int e_dim, int n);   // E = Q^e concentrated in degree n
ChainComplex disk(int e_dim, int n);     // degrees n, n-1 with identity differential

bool is_quasi_iso(const ChainMap& f);

// canonical signed identification X -> X^vv, components (-1)^n id
ChainMap double_dual_iso(const ChainComplex& X);

// the subcomplex spanned by basis vectors of one weight (weights must be set)
ChainComplex weight_piece(const ChainComplex& X, int w);

bool complexes_equal(const ChainComplex& a, const ChainComplex& b);

// flattened basis: all (degree, index) pairs, degree ascending.  Operadic
// composition matrices are written against this ordering.
std::vector<std::pair<int, int>> flat_basis(const ChainComplex& X);
int flat_index(const ChainComplex& X, int deg, int idx);
// the differential as one total_dim x total_dim matrix over the flat basis
RationalMatrix flat_diff(const ChainComplex& X);

} // namespace opforge
