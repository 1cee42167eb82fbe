#include "opforge/complex.hpp"

#include <sstream>

namespace opforge {

const std::vector<std::string> ChainComplex::no_labels_;
const std::vector<int> ChainComplex::no_weights_;

ChainComplex ChainComplex::build(std::map<int, int> dims,
                                 std::map<int, RationalMatrix> diffs,
                                 std::map<int, std::vector<std::string>> labels,
                                 std::map<int, std::vector<int>> weights) {
    for (auto it = dims.begin(); it != dims.end();) {
        if (it->second < 0) throw ShapeMismatch("negative dimension");
        it = it->second == 0 ? dims.erase(it) : std::next(it);
    }
    auto dim_at = [&](int n) {
        auto it = dims.find(n);
        return it == dims.end() ? 0 : it->second;
    };
    for (auto it = diffs.begin(); it != diffs.end();) {
        const auto& [n, dn] = *it;
        if (dn.cols() != dim_at(n) || dn.rows() != dim_at(n - 1)) {
            std::ostringstream os;
            os << "differential at degree " << n << " is " << dn.rows() << "x" << dn.cols()
               << ", expected " << dim_at(n - 1) << "x" << dim_at(n);
            throw ShapeMismatch(os.str());
        }
        it = dn.is_zero() ? diffs.erase(it) : std::next(it);
    }
    for (const auto& [n, dn] : diffs) {
        auto up = diffs.find(n + 1);
        if (up != diffs.end() && !(dn * up->second).is_zero()) {
            std::ostringstream os;
            os << "d∘d != 0 from degree " << n + 1;
            throw NotAComplex(os.str());
        }
    }
    for (const auto& [n, ls] : labels)
        if ((int)ls.size() != dim_at(n)) throw ShapeMismatch("label count at degree " + std::to_string(n));
    for (const auto& [n, ws] : weights)
        if ((int)ws.size() != dim_at(n)) throw ShapeMismatch("weight count at degree " + std::to_string(n));

    ChainComplex X;
    X.dims_ = std::move(dims);
    X.d_ = std::move(diffs);
    X.labels_ = std::move(labels);
    X.weights_ = std::move(weights);
    if (!X.dims_.empty()) {
        X.lo_ = X.dims_.begin()->first;
        X.hi_ = X.dims_.rbegin()->first;
    }
    return X;
}

int ChainComplex::dim(int n) const {
    auto it = dims_.find(n);
    return it == dims_.end() ? 0 : it->second;
}

int ChainComplex::total_dim() const {
    int t = 0;
    for (const auto& [n, d] : dims_) t += d;
    return t;
}

bool ChainComplex::is_zero() const { return dims_.empty(); }

RationalMatrix ChainComplex::diff(int n) const {
    auto it = d_.find(n);
    if (it != d_.end()) return it->second;
    return RationalMatrix(dim(n - 1), dim(n));
}

const std::vector<std::string>& ChainComplex::labels(int n) const {
    auto it = labels_.find(n);
    return it == labels_.end() ? no_labels_ : it->second;
}

const std::vector<int>& ChainComplex::weights(int n) const {
    auto it = weights_.find(n);
    return it == weights_.end() ? no_weights_ : it->second;
}

int ChainComplex::weight_of(int n, int i) const {
    const auto& ws = weights(n);
    return ws.empty() ? 0 : ws[i];
}

std::map<int, int> ChainComplex::homology() const {
    return homology_dims(dims_, d_);
}

std::vector<int> ChainComplex::weight_set() const {
    std::vector<int> out;
    for (const auto& [n, dim] : dims_) {
        const auto& ws = weights(n);
        for (int i = 0; i < dim; ++i) {
            int w = ws.empty() ? 0 : ws[i];
            if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

RationalMatrix ChainMap::at(int n) const {
    auto it = comp.find(n);
    if (it != comp.end()) return it->second;
    return RationalMatrix(target.dim(n + deg), source.dim(n));
}

ChainMap make_chain_map(const ChainComplex& X, const ChainComplex& Y,
                        std::map<int, RationalMatrix> comp) {
    for (auto it = comp.begin(); it != comp.end();) {
        const auto& [n, f] = *it;
        if (f.cols() != X.dim(n) || f.rows() != Y.dim(n)) {
            std::ostringstream os;
            os << "chain map component at degree " << n << " is " << f.rows() << "x" << f.cols()
               << ", expected " << Y.dim(n) << "x" << X.dim(n);
            throw ShapeMismatch(os.str());
        }
        it = f.is_zero() ? comp.erase(it) : std::next(it);
    }
    ChainMap f{X, Y, 0, std::move(comp)};
    for (int n = std::min(X.lo(), Y.lo()); n <= std::max(X.hi(), Y.hi()) + 1; ++n) {
        if (!(Y.diff(n) * f.at(n) == f.at(n - 1) * X.diff(n))) {
            std::ostringstream os;
            os << "not a chain map at degree " << n;
            throw DegreeMismatch(os.str());
        }
    }
    return f;
}

ChainMap identity_map(const ChainComplex& X) {
    std::map<int, RationalMatrix> comp;
    for (const auto& [n, d] : X.dims()) comp[n] = RationalMatrix::identity(d);
    return ChainMap{X, X, 0, std::move(comp)};
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
    ChainMap h{f.source, g.target, f.deg + g.deg, {}};
    for (const auto& [n, fn] : f.comp) {
        RationalMatrix m = g.at(n + f.deg) * fn;
        if (!m.is_zero()) h.comp[n] = std::move(m);
    }
    return h;
}

ChainComplex shift(const ChainComplex& X, int k) {
    std::map<int, int> dims;
    std::map<int, RationalMatrix> diffs;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, std::vector<int>> weights;
    Rat sign = (k % 2 == 0) ? 1 : -1;
    for (const auto& [n, d] : X.dims()) {
        dims[n - k] = d;
        if (!X.labels(n).empty()) labels[n - k] = X.labels(n);
        if (!X.weights(n).empty()) weights[n - k] = X.weights(n);
    }
    for (const auto& [n, dn] : X.diffs()) diffs[n - k] = dn.scaled(sign);
    return ChainComplex::build(std::move(dims), std::move(diffs), std::move(labels), std::move(weights));
}

ChainComplex dual(const ChainComplex& X) {
    std::map<int, int> dims;
    std::map<int, RationalMatrix> diffs;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, std::vector<int>> weights;
    for (const auto& [n, d] : X.dims()) {
        dims[-n] = d;
        if (!X.labels(n).empty()) {
            std::vector<std::string> ls;
            for (const auto& l : X.labels(n)) ls.push_back(l + "*");
            labels[-n] = std::move(ls);
        }
        if (!X.weights(n).empty()) weights[-n] = X.weights(n);
    }
    // (d^v)_n = -(-1)^n (d_{1-n})^T
    for (const auto& [m, dm] : X.diffs()) {
        int n = 1 - m;
        Rat sign = (n % 2 == 0) ? -1 : 1;
        diffs[n] = dm.transpose().scaled(sign);
    }
    return ChainComplex::build(std::move(dims), std::move(diffs), std::move(labels), std::move(weights));
}

ChainComplex cone(const ChainMap& f) {
    if (f.deg != 0) throw DegreeMismatch("cone of a non-degree-0 map");
    const ChainComplex &X = f.source, &Y = f.target;
    std::map<int, int> dims;
    std::map<int, RationalMatrix> diffs;
    std::map<int, std::vector<std::string>> labels;
    int lo = std::min(X.lo(), Y.lo()), hi = std::max(X.hi() + 1, Y.hi());
    for (int n = lo; n <= hi; ++n) {
        int d = X.dim(n - 1) + Y.dim(n);
        if (d > 0) dims[n] = d;
    }
    bool lb = X.has_labels() || Y.has_labels();
    for (int n = lo; n <= hi; ++n) {
        int dx = X.dim(n - 1), dy = Y.dim(n);
        if (dx + dy == 0) continue;
        if (lb) {
            std::vector<std::string> ls;
            for (int i = 0; i < dx; ++i)
                ls.push_back("x:" + (X.labels(n - 1).empty() ? std::to_string(i) : X.labels(n - 1)[i]));
            for (int i = 0; i < dy; ++i)
                ls.push_back("y:" + (Y.labels(n).empty() ? std::to_string(i) : Y.labels(n)[i]));
            labels[n] = std::move(ls);
        }
        int dx1 = X.dim(n - 2), dy1 = Y.dim(n - 1);
        if (dx1 + dy1 == 0) continue;
        RationalMatrix d(dx1 + dy1, dx + dy);
        RationalMatrix dX = X.diff(n - 1), fc = f.at(n - 1), dY = Y.diff(n);
        for (const auto& [rc, v] : dX.entries()) d.set(rc.first, rc.second, -v);
        for (const auto& [rc, v] : fc.entries()) d.set(dx1 + rc.first, rc.second, -v);
        for (const auto& [rc, v] : dY.entries()) d.set(dx1 + rc.first, dx + rc.second, v);
        if (!d.is_zero()) diffs[n] = std::move(d);
    }
    return ChainComplex::build(std::move(dims), std::move(diffs), std::move(labels));
}

ChainComplex truncate_ge(const ChainComplex& X, int n0) {
    std::map<int, int> dims;
    std::map<int, RationalMatrix> diffs;
    std::map<int, std::vector<std::string>> labels;
    for (const auto& [n, d] : X.dims()) {
        if (n <= n0) continue;
        dims[n] = d;
        if (!X.labels(n).empty()) labels[n] = X.labels(n);
    }
    for (const auto& [n, dn] : X.diffs())
        if (n > n0 + 1) diffs[n] = dn;
    // degree n0 becomes the cycles there; the incoming differential corestricts
    SubspaceBasis K = kernel_basis(X.diff(n0));
    if (K.dim() > 0) {
        dims[n0] = K.dim();
        std::vector<std::string> ls;
        for (int i = 0; i < K.dim(); ++i) ls.push_back("z" + std::to_string(i));
        labels[n0] = std::move(ls);
        RationalMatrix din = X.diff(n0 + 1);
        if (!din.is_zero()) {
            auto Y = solve(K.vecs, din);
            if (!Y) throw NotAComplex("image does not land in cycles");   // impossible if d²=0
            if (!Y->is_zero()) diffs[n0 + 1] = *Y;
        }
    } else {
        diffs.erase(n0 + 1);
    }
    return ChainComplex::build(std::move(dims), std::move(diffs), std::move(labels));
}

ChainComplex tensor(const ChainComplex& X, const ChainComplex& Y) {
    // basis of (X⊗Y)_n: blocks (p, q = n-p) by ascending p, kron order inside
    std::map<int, int> dims;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, std::vector<int>> weights;
    // block offsets per total degree: off[n][p]
    std::map<int, std::map<int, int>> off;
    bool lb = X.has_labels() && Y.has_labels();
    bool wt = X.has_weights() || Y.has_weights();
    for (const auto& [p, dx] : X.dims()) {
        for (const auto& [q, dy] : Y.dims()) {
            int n = p + q;
            off[n][p] = dims[n];
            dims[n] += dx * dy;
            for (int i = 0; i < dx && (lb || wt); ++i)
                for (int j = 0; j < dy; ++j) {
                    if (lb) labels[n].push_back(X.labels(p)[i] + "|" + Y.labels(q)[j]);
                    if (wt) weights[n].push_back(X.weight_of(p, i) + Y.weight_of(q, j));
                }
        }
    }
    auto block_off = [&](int n, int p) { return off.at(n).at(p); };
    std::map<int, RationalMatrix> diffs;
    for (const auto& [n, dn] : dims) {
        int below = dims.count(n - 1) ? dims.at(n - 1) : 0;
        if (below == 0) continue;
        RationalMatrix d(below, dn);
        for (const auto& [p, o] : off.at(n)) {
            int q = n - p;
            int dx = X.dim(p), dy = Y.dim(q);
            // d_X ⊗ id
            RationalMatrix dX = X.diff(p), dY = Y.diff(q);
            if (X.dim(p - 1) > 0 && !dX.is_zero() && off.at(n - 1).count(p - 1)) {
                int to = block_off(n - 1, p - 1);
                for (const auto& [rc, v] : dX.entries())
                    for (int j = 0; j < dy; ++j)
                        d.add_at(to + rc.first * dy + j, o + rc.second * dy + j, v);
            }
            // (-1)^p id ⊗ d_Y
            if (Y.dim(q - 1) > 0 && !dY.is_zero() && off.at(n - 1).count(p)) {
                int to = block_off(n - 1, p);
                Rat s = (p % 2 == 0) ? 1 : -1;
                for (const auto& [rc, v] : dY.entries())
                    for (int i = 0; i < dx; ++i)
                        d.add_at(to + i * Y.dim(q - 1) + rc.first, o + i * dy + rc.second, s * v);
            }
        }
        if (!d.is_zero()) diffs[n] = std::move(d);
    }
    return ChainComplex::build(std::move(dims), std::move(diffs), std::move(labels), std::move(weights));
}

ChainComplex direct_sum(const ChainComplex& X, const ChainComplex& Y) {
    std::map<int, int> dims;
    std::map<int, RationalMatrix> diffs;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, std::vector<int>> weights;
    int lo = std::min(X.lo(), Y.lo()), hi = std::max(X.hi(), Y.hi());
    bool lb = X.has_labels() || Y.has_labels();
    bool wt = X.has_weights() || Y.has_weights();
    for (int n = lo; n <= hi; ++n) {
        int d = X.dim(n) + Y.dim(n);
        if (d == 0) continue;
        dims[n] = d;
        if (lb) {
            std::vector<std::string> ls;
            for (int i = 0; i < X.dim(n); ++i)
                ls.push_back(X.labels(n).empty() ? "l:" + std::to_string(i) : "l:" + X.labels(n)[i]);
            for (int i = 0; i < Y.dim(n); ++i)
                ls.push_back(Y.labels(n).empty() ? "r:" + std::to_string(i) : "r:" + Y.labels(n)[i]);
            labels[n] = std::move(ls);
        }
        if (wt) {
            std::vector<int> ws;
            for (int i = 0; i < X.dim(n); ++i) ws.push_back(X.weights(n).empty() ? 0 : X.weights(n)[i]);
            for (int i = 0; i < Y.dim(n); ++i) ws.push_back(Y.weights(n).empty() ? 0 : Y.weights(n)[i]);
            weights[n] = std::move(ws);
        }
        RationalMatrix d2 = RationalMatrix::direct_sum(X.diff(n), Y.diff(n));
        if (!d2.is_zero()) diffs[n] = std::move(d2);
    }
    return ChainComplex::build(std::move(dims), std::move(diffs), std::move(labels), std::move(weights));
}

ChainComplex sphere(int e_dim, int n) {
    std::vector<std::string> ls;
    for (int i = 0; i < e_dim; ++i) ls.push_back("e" + std::to_string(i));
    return ChainComplex::build({{n, e_dim}}, {}, {{n, ls}});
}

ChainComplex disk(int e_dim, int n) {
    std::vector<std::string> top, bot;
    for (int i = 0; i < e_dim; ++i) {
        top.push_back("e" + std::to_string(i));
        bot.push_back("de" + std::to_string(i));
    }
    return ChainComplex::build({{n, e_dim}, {n - 1, e_dim}},
                               {{n, RationalMatrix::identity(e_dim)}},
                               {{n, top}, {n - 1, bot}});
}

bool is_quasi_iso(const ChainMap& f) {
    for (const auto& [n, h] : cone(f).homology())
        if (h != 0) return false;
    return true;
}

ChainMap double_dual_iso(const ChainComplex& X) {
    ChainComplex XVV = dual(dual(X));
    std::map<int, RationalMatrix> comp;
    for (const auto& [n, d] : X.dims())
        comp[n] = RationalMatrix::identity(d).scaled((n % 2 == 0) ? 1 : -1);
    return make_chain_map(X, XVV, std::move(comp));
}

ChainComplex weight_piece(const ChainComplex& X, int w) {
    std::map<int, int> dims;
    std::map<int, std::vector<int>> keep;
    std::map<int, std::vector<std::string>> labels;
    for (const auto& [n, d] : X.dims()) {
        const auto& ws = X.weights(n);
        for (int i = 0; i < d; ++i) {
            int wi = ws.empty() ? 0 : ws[i];
            if (wi == w) keep[n].push_back(i);
        }
        if (keep.count(n)) {
            dims[n] = (int)keep[n].size();
            if (!X.labels(n).empty()) {
                for (int i : keep[n]) labels[n].push_back(X.labels(n)[i]);
            }
        }
    }
    std::map<int, RationalMatrix> diffs;
    for (const auto& [n, dn] : X.diffs()) {
        if (!keep.count(n)) continue;
        RationalMatrix cols = dn.select_cols(keep[n]);
        RationalMatrix block = keep.count(n - 1) ? cols.select_rows(keep[n - 1])
                                                 : RationalMatrix(0, cols.cols());
        // the differential must preserve the weight for the piece to make sense
        std::vector<int> others;
        const auto& ws = X.weights(n - 1);
        for (int i = 0; i < X.dim(n - 1); ++i) {
            int wi = ws.empty() ? 0 : ws[i];
            if (wi != w) others.push_back(i);
        }
        if (!cols.select_rows(others).is_zero())
            throw DegreeMismatch("differential does not preserve weight " + std::to_string(w));
        if (!block.is_zero()) diffs[n] = std::move(block);
    }
    return ChainComplex::build(std::move(dims), std::move(diffs), std::move(labels));
}

bool complexes_equal(const ChainComplex& a, const ChainComplex& b) {
    if (a.dims() != b.dims()) return false;
    for (const auto& [n, d] : a.dims())
        if (!(a.diff(n) == b.diff(n))) return false;
    return true;
}

std::vector<std::pair<int, int>> flat_basis(const ChainComplex& X) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [n, d] : X.dims())
        for (int i = 0; i < d; ++i) out.emplace_back(n, i);
    return out;
}

int flat_index(const ChainComplex& X, int deg, int idx) {
    int off = 0;
    for (const auto& [n, d] : X.dims()) {
        if (n == deg) {
            if (idx < 0 || idx >= d) throw ShapeMismatch("flat_index: index out of range");
            return off + idx;
        }
        off += d;
    }
    throw ShapeMismatch("flat_index: empty degree " + std::to_string(deg));
}

RationalMatrix flat_diff(const ChainComplex& X) {
    int t = X.total_dim();
    RationalMatrix D(t, t);
    for (const auto& [n, dn] : X.dims()) {
        if (X.dim(n - 1) == 0) continue;
        RationalMatrix b = X.diff(n);
        if (b.rows() == 0) continue;
        for (int j = 0; j < dn; ++j)
            for (int i = 0; i < b.rows(); ++i) {
                Rat v = b.get(i, j);
                if (v != 0) D.set(flat_index(X, n - 1, i), flat_index(X, n, j), v);
            }
    }
    return D;
}

} // namespace opforge
