#pragma once
// Exact elimination over Q.  Rows are cleared to primitive integer vectors and
// combined by cross-multiplication, so no intermediate fractions appear; after
// every combination the row is divided by its content to keep entries small.
// Pivot selection: among candidate leading entries for the current column, the
// one of smallest bit length wins, ties broken by lowest row index.
#include <map>
#include <optional>
#include <vector>

#include "opforge/matrix.hpp"

namespace opforge {

struct SubspaceBasis {
    int ambient_dim = 0;
    RationalMatrix vecs;   // ambient_dim x k, columns are the basis vectors

    int dim() const { return vecs.cols(); }
};

namespace detail {

using IntRow = std::vector<std::pair<int, Int>>;   // sorted by column, no zeros

struct Echelon {
    std::vector<IntRow> rows;    // pivot rows, ascending pivot column
    std::vector<int> pivots;     // pivot column per row
    std::vector<IntRow> tail;    // rows supported only on columns >= limit
    int cols = 0;
    int limit = 0;               // pivot search bound (== cols unless augmented)
};

Echelon echelonize(const RationalMatrix& m, int pivot_limit = -1);

} // namespace detail

int rank(const RationalMatrix& m);

// right kernel {v : m v = 0}; each vector has entry 1 at "its" free column and
// 0 at the others, columns ordered by free column index
SubspaceBasis kernel_basis(const RationalMatrix& m);

// indices of a maximal independent set of columns (deterministic), and those
// columns as a basis of the column space
std::vector<int> image_pivot_cols(const RationalMatrix& m);
SubspaceBasis image_basis(const RationalMatrix& m);

// solves A X = B for all columns of B simultaneously; nullopt if inconsistent
std::optional<RationalMatrix> solve(const RationalMatrix& A, const RationalMatrix& B);

// target / image(m): quotient coordinates are a subset of ambient coordinates
struct Cokernel {
    std::vector<int> coords;   // ambient indices representing the quotient
    RationalMatrix proj;       // |coords| x target_dim
    RationalMatrix sect;       // target_dim x |coords|, proj * sect = id
};
Cokernel cokernel(const RationalMatrix& m);

// dim H_n = dim ker d_n - rank d_{n+1}; validates shapes and d∘d = 0.
// dims lists the nonzero degrees; d[n] maps degree n to degree n-1.
std::map<int, int> homology_dims(const std::map<int, int>& dims,
                                 const std::map<int, RationalMatrix>& d);

// cycle representatives completing im(d_in) to ker(d_out): columns span a
// complement of the boundaries inside the cycles
SubspaceBasis homology_reps(const RationalMatrix& d_out, const RationalMatrix& d_in);

} // namespace opforge
