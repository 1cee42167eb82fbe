#include "opforge/linalg.hpp"

#include <algorithm>
#include <list>
#include <sstream>

namespace opforge {
namespace detail {

namespace {

// gcd of all entries; 0 for the empty row
Int row_content(const IntRow& r) {
    Int g = 0;
    for (const auto& [c, v] : r) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

void normalize(IntRow& r) {
    if (r.empty()) return;
    Int g = row_content(r);
    if (r.front().second < 0) g = -g;   // leading entry positive
    if (g != 1)
        for (auto& [c, v] : r) v /= g;
}

// a*r1 + b*r2, merged by column
IntRow combine(const Int& a, const IntRow& r1, const Int& b, const IntRow& r2) {
    IntRow out;
    out.reserve(r1.size() + r2.size());
    size_t i = 0, j = 0;
    while (i < r1.size() || j < r2.size()) {
        if (j == r2.size() || (i < r1.size() && r1[i].first < r2[j].first)) {
            out.emplace_back(r1[i].first, a * r1[i].second);
            ++i;
        } else if (i == r1.size() || r2[j].first < r1[i].first) {
            out.emplace_back(r2[j].first, b * r2[j].second);
            ++j;
        } else {
            Int v = a * r1[i].second + b * r2[j].second;
            if (v != 0) out.emplace_back(r1[i].first, v);
            ++i, ++j;
        }
    }
    return out;
}

// clear denominators of one matrix row, then make primitive
IntRow to_int_row(const RationalMatrix& m, int r) {
    Int l = 1;
    auto lo = m.entries().lower_bound({r, 0});
    auto hi = m.entries().lower_bound({r + 1, 0});
    for (auto it = lo; it != hi; ++it)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), it->second.get_den().get_mpz_t());
    IntRow row;
    for (auto it = lo; it != hi; ++it) {
        Rat v = it->second * l;
        row.emplace_back(it->first.second, v.get_num());
    }
    normalize(row);
    return row;
}

} // namespace

Echelon echelonize(const RationalMatrix& m, int pivot_limit) {
    Echelon e;
    e.cols = m.cols();
    e.limit = pivot_limit < 0 ? m.cols() : pivot_limit;

    struct Active {
        IntRow row;
        int order;   // original row index, for tie breaks
    };
    // bucket active rows by leading column
    std::map<int, std::list<Active>> buckets;
    for (int r = 0; r < m.rows(); ++r) {
        IntRow row = to_int_row(m, r);
        if (!row.empty()) buckets[row.front().first].push_back({std::move(row), r});
    }

    while (!buckets.empty() && buckets.begin()->first < e.limit) {
        auto node = buckets.extract(buckets.begin());
        int col = node.key();
        std::list<Active>& cand = node.mapped();
        // spec pivot rule: smallest bit length, then lowest index
        auto best = cand.begin();
        for (auto it = std::next(cand.begin()); it != cand.end(); ++it) {
            size_t ib = int_bits(it->row.front().second);
            size_t bb = int_bits(best->row.front().second);
            if (ib < bb || (ib == bb && it->order < best->order)) best = it;
        }
        Active piv = std::move(*best);
        cand.erase(best);
        const Int& p = piv.row.front().second;
        for (auto& a : cand) {
            IntRow reduced = combine(p, a.row, -a.row.front().second, piv.row);
            normalize(reduced);
            if (!reduced.empty())
                buckets[reduced.front().first].push_back({std::move(reduced), a.order});
        }
        e.rows.push_back(std::move(piv.row));
        e.pivots.push_back(col);
    }
    for (auto& [c, rest] : buckets)
        for (auto& a : rest) e.tail.push_back(std::move(a.row));
    return e;
}

} // namespace detail

int rank(const RationalMatrix& m) {
    return (int)detail::echelonize(m).rows.size();
}

SubspaceBasis kernel_basis(const RationalMatrix& m) {
    detail::Echelon e = detail::echelonize(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : e.pivots) is_pivot[p] = true;

    SubspaceBasis out;
    out.ambient_dim = m.cols();
    std::vector<std::vector<Rat>> vecs;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rat> v(m.cols(), Rat(0));
        v[f] = 1;
        for (int i = (int)e.rows.size() - 1; i >= 0; --i) {
            const auto& row = e.rows[i];
            int p = e.pivots[i];
            Rat s(0);
            for (const auto& [c, a] : row)
                if (c > p && v[c] != 0) s += Rat(a) * v[c];
            v[p] = -s / Rat(row.front().second);
        }
        vecs.push_back(std::move(v));
    }
    out.vecs = RationalMatrix(m.cols(), (int)vecs.size());
    for (int j = 0; j < (int)vecs.size(); ++j)
        for (int i = 0; i < m.cols(); ++i)
            if (vecs[j][i] != 0) out.vecs.set(i, j, vecs[j][i]);
    return out;
}

std::vector<int> image_pivot_cols(const RationalMatrix& m) {
    return detail::echelonize(m).pivots;
}

SubspaceBasis image_basis(const RationalMatrix& m) {
    SubspaceBasis out;
    out.ambient_dim = m.rows();
    out.vecs = m.select_cols(image_pivot_cols(m));
    return out;
}

std::optional<RationalMatrix> solve(const RationalMatrix& A, const RationalMatrix& B) {
    if (A.rows() != B.rows()) throw ShapeMismatch("solve: row counts differ");
    detail::Echelon e = detail::echelonize(RationalMatrix::hstack(A, B), A.cols());
    // a tail row meeting a right-hand-side column certifies inconsistency
    for (const auto& row : e.tail)
        if (!row.empty()) return std::nullopt;

    RationalMatrix X(A.cols(), B.cols());
    for (int j = 0; j < B.cols(); ++j) {
        std::vector<Rat> x(A.cols(), Rat(0));
        for (int i = (int)e.rows.size() - 1; i >= 0; --i) {
            const auto& row = e.rows[i];
            int p = e.pivots[i];
            Rat rhs(0);
            Rat acc(0);
            for (const auto& [c, a] : row) {
                if (c == A.cols() + j) rhs = Rat(a);
                else if (c > p && c < A.cols() && x[c] != 0) acc += Rat(a) * x[c];
            }
            x[p] = (rhs - acc) / Rat(row.front().second);
        }
        for (int i = 0; i < A.cols(); ++i)
            if (x[i] != 0) X.set(i, j, x[i]);
    }
    return X;
}

Cokernel cokernel(const RationalMatrix& m) {
    // row space of m^T = column space of m, expressed in target coordinates
    detail::Echelon e = detail::echelonize(m.transpose());
    std::vector<bool> is_pivot(m.rows(), false);
    for (int p : e.pivots) is_pivot[p] = true;

    Cokernel ck;
    for (int i = 0; i < m.rows(); ++i)
        if (!is_pivot[i]) ck.coords.push_back(i);

    ck.proj = RationalMatrix((int)ck.coords.size(), m.rows());
    for (int j = 0; j < m.rows(); ++j) {
        std::vector<Rat> y(m.rows(), Rat(0));
        y[j] = 1;
        for (size_t i = 0; i < e.rows.size(); ++i) {
            int p = e.pivots[i];
            if (y[p] == 0) continue;
            Rat c = y[p] / Rat(e.rows[i].front().second);
            for (const auto& [col, a] : e.rows[i]) y[col] -= c * Rat(a);
        }
        for (int i = 0; i < (int)ck.coords.size(); ++i)
            if (y[ck.coords[i]] != 0) ck.proj.set(i, j, y[ck.coords[i]]);
    }
    ck.sect = RationalMatrix(m.rows(), (int)ck.coords.size());
    for (int i = 0; i < (int)ck.coords.size(); ++i) ck.sect.set(ck.coords[i], i, Rat(1));
    return ck;
}

std::map<int, int> homology_dims(const std::map<int, int>& dims,
                                 const std::map<int, RationalMatrix>& d) {
    auto dim_at = [&](int n) {
        auto it = dims.find(n);
        return it == dims.end() ? 0 : it->second;
    };
    for (const auto& [n, dn] : d) {
        if (dn.cols() != dim_at(n) || dn.rows() != dim_at(n - 1)) {
            std::ostringstream os;
            os << "differential at degree " << n << " is " << dn.rows() << "x" << dn.cols()
               << ", expected " << dim_at(n - 1) << "x" << dim_at(n);
            throw ShapeMismatch(os.str());
        }
        auto up = d.find(n + 1);
        if (up != d.end() && !(dn * up->second).is_zero()) {
            std::ostringstream os;
            os << "d∘d != 0 between degrees " << n + 1 << " and " << n - 1;
            throw NotAComplex(os.str());
        }
    }
    std::map<int, int> h;
    for (const auto& [n, dim] : dims) {
        if (dim == 0) continue;
        auto dn = d.find(n);
        int ker = (dn == d.end() || dn->second.rows() == 0) ? dim : kernel_basis(dn->second).dim();
        auto up = d.find(n + 1);
        int im = (up == d.end()) ? 0 : rank(up->second);
        h[n] = ker - im;
    }
    return h;
}

SubspaceBasis homology_reps(const RationalMatrix& d_out, const RationalMatrix& d_in) {
    if (d_out.cols() != d_in.rows()) throw ShapeMismatch("homology_reps: degree mismatch");
    SubspaceBasis K = kernel_basis(d_out);
    SubspaceBasis B = image_basis(d_in);
    // greedy extension of the boundary basis through the cycle basis
    RationalMatrix probe = RationalMatrix::hstack(B.vecs, K.vecs);
    std::vector<int> picked;
    for (int p : image_pivot_cols(probe))
        if (p >= B.vecs.cols()) picked.push_back(p - B.vecs.cols());
    SubspaceBasis out;
    out.ambient_dim = K.ambient_dim;
    out.vecs = K.vecs.select_cols(picked);
    return out;
}

} // namespace opforge
