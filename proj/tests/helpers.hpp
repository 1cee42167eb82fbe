#pragma once
// Shared test utilities: seeded random matrices, random complexes with known
// homology (sums of disks and spheres hit with a random basis change), and an
// independent quasi-iso oracle working through induced maps on homology.
#include <random>

#include "opforge/complex.hpp"

namespace opforge::testing {

using Rng = std::mt19937_64;

inline Rat rand_rat(Rng& g) {
    static const Rat pool[] = {Rat(1), Rat(-1), Rat(2), Rat(-2), Rat(3),
                               Rat(1, 2), Rat(-1, 2), Rat(2, 3), Rat(-5, 3), Rat(7, 4)};
    return pool[g() % (sizeof(pool) / sizeof(pool[0]))];
}

inline RationalMatrix rand_matrix(Rng& g, int rows, int cols, int fill_percent = 40) {
    RationalMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if ((int)(g() % 100) < fill_percent) m.set(r, c, rand_rat(g));
    return m;
}

// unit lower-triangular with random strictly-lower entries; exactly invertible
inline RationalMatrix rand_unitriangular(Rng& g, int n, int fill_percent = 30) {
    RationalMatrix m = RationalMatrix::identity(n);
    for (int r = 1; r < n; ++r)
        for (int c = 0; c < r; ++c)
            if ((int)(g() % 100) < fill_percent) m.set(r, c, rand_rat(g));
    return m;
}

inline RationalMatrix unitriangular_inverse(const RationalMatrix& m) {
    int n = m.rows();
    RationalMatrix inv = RationalMatrix::identity(n);
    // forward substitution column by column
    for (int c = 0; c < n; ++c) {
        std::vector<Rat> x(n, Rat(0));
        x[c] = 1;
        for (int r = c + 1; r < n; ++r) {
            Rat s(0);
            for (int k = 0; k < r; ++k)
                if (x[k] != 0) s += m.get(r, k) * x[k];
            x[r] = -s;
        }
        for (int r = 0; r < n; ++r)
            if (x[r] != 0 && r != c) inv.set(r, c, x[r]);
    }
    return inv;
}

struct RandomComplex {
    ChainComplex X;
    std::map<int, int> expected_homology;
};

// direct sum of spheres and disks in a degree window, conjugated by a random
// unitriangular basis change in every degree
inline RandomComplex rand_complex(Rng& g, int lo = -2, int hi = 3, int max_pieces = 6) {
    ChainComplex X;
    std::map<int, int> hom;
    int pieces = 1 + (int)(g() % max_pieces);
    for (int i = 0; i < pieces; ++i) {
        int n = lo + (int)(g() % (hi - lo + 1));
        if (g() % 2 == 0) {
            X = direct_sum(X, sphere(1, n));
            hom[n] += 1;
        } else if (n > lo) {
            X = direct_sum(X, disk(1, n));
        } else {
            X = direct_sum(X, sphere(1, n));
            hom[n] += 1;
        }
    }
    std::map<int, RationalMatrix> G, Ginv;
    for (const auto& [n, d] : X.dims()) {
        G[n] = rand_unitriangular(g, d);
        Ginv[n] = unitriangular_inverse(G[n]);
    }
    std::map<int, RationalMatrix> diffs;
    for (const auto& [n, dn] : X.diffs()) {
        RationalMatrix m = dn * Ginv[n];
        if (G.count(n - 1)) m = G[n - 1] * m;
        if (!m.is_zero()) diffs[n] = std::move(m);
    }
    RandomComplex out;
    out.X = ChainComplex::build(X.dims(), std::move(diffs));
    out.expected_homology = std::move(hom);
    return out;
}

// independent quasi-iso oracle: compare induced maps on homology representatives
inline bool induced_homology_iso(const ChainMap& f) {
    const ChainComplex &X = f.source, &Y = f.target;
    int lo = std::min(X.lo(), Y.lo()), hi = std::max(X.hi(), Y.hi());
    for (int n = lo; n <= hi; ++n) {
        SubspaceBasis hx = homology_reps(X.diff(n), X.diff(n + 1));
        SubspaceBasis hy = homology_reps(Y.diff(n), Y.diff(n + 1));
        if (hx.dim() != hy.dim()) return false;
        if (hx.dim() == 0) continue;
        // coordinates of f(reps) against [boundaries | homology reps] downstairs
        RationalMatrix img = f.at(n) * hx.vecs;
        RationalMatrix frame = RationalMatrix::hstack(image_basis(Y.diff(n + 1)).vecs, hy.vecs);
        auto coords = solve(frame, img);
        if (!coords) return false;   // image not even a cycle combination
        int b = frame.cols() - hy.dim();
        std::vector<int> tail_rows;
        for (int i = 0; i < hy.dim(); ++i) tail_rows.push_back(b + i);
        if (rank(coords->select_rows(tail_rows)) != hx.dim()) return false;
    }
    return true;
}

} // namespace opforge::testing
