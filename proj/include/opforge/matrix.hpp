#pragma once
// Sparse matrices over Q.  Triplet semantics: no duplicate (row, col) keys, no
// stored zeros.  The ordered map keeps iteration row-major and deterministic,
// which the reporting layer relies on.
#include <map>
#include <utility>
#include <vector>

#include "opforge/rational.hpp"

namespace opforge {

struct Triplet {
    int row, col;
    Rat val;
};

class RationalMatrix {
  public:
    RationalMatrix() = default;
    RationalMatrix(int rows, int cols);

    // rejects out-of-range indices and duplicate keys; drops explicit zeros
    static RationalMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& ts);
    static RationalMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t nnz() const { return ent_.size(); }
    bool is_zero() const { return ent_.empty(); }

    Rat get(int r, int c) const;
    void set(int r, int c, const Rat& v);     // v == 0 erases
    void add_at(int r, int c, const Rat& v);  // accumulate, erase on cancel

    const std::map<std::pair<int, int>, Rat>& entries() const { return ent_; }
    std::vector<Triplet> triplets() const;

    RationalMatrix transpose() const;
    RationalMatrix operator+(const RationalMatrix& o) const;
    RationalMatrix operator-(const RationalMatrix& o) const;
    RationalMatrix operator-() const;
    RationalMatrix operator*(const RationalMatrix& o) const;
    RationalMatrix scaled(const Rat& c) const;
    bool operator==(const RationalMatrix& o) const;

    std::vector<Rat> apply(const std::vector<Rat>& v) const;

    // block assembly
    static RationalMatrix hstack(const RationalMatrix& a, const RationalMatrix& b);
    static RationalMatrix vstack(const RationalMatrix& a, const RationalMatrix& b);
    static RationalMatrix direct_sum(const RationalMatrix& a, const RationalMatrix& b);
    static RationalMatrix kron(const RationalMatrix& a, const RationalMatrix& b);

    RationalMatrix select_cols(const std::vector<int>& idx) const;
    RationalMatrix select_rows(const std::vector<int>& idx) const;

    std::vector<Rat> col_dense(int c) const;

  private:
    int rows_ = 0, cols_ = 0;
    std::map<std::pair<int, int>, Rat> ent_;

    void check_index(int r, int c) const;
};

} // namespace opforge
