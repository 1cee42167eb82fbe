#include "opforge/symmod.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace opforge {

const SymArity SymModule::zero_arity_{};

// 1-based leaf-set rendering: {0,2} -> "13"; dot-separated past 9 leaves
std::string leaf_label(const std::vector<int>& s, int n) {
    std::ostringstream o;
    for (size_t t = 0; t < s.size(); ++t) {
        if (t && n > 9) o << ".";
        o << s[t] + 1;
    }
    return o.str();
}

RationalMatrix flat_act(const SymModule& M, int n, const Perm& p) {
    auto fb = flat_basis(M.cx(n));
    RationalMatrix out((int)fb.size(), (int)fb.size());
    std::map<int, int> off;
    for (int i = 0; i < (int)fb.size(); ++i) off.emplace(fb[i].first, i);
    for (const auto& [d, o] : off) {
        RationalMatrix A = M.act(n, p, d);
        for (const auto& [rc, v] : A.entries()) out.set(o + rc.first, o + rc.second, v);
    }
    return out;
}

namespace {

RationalMatrix degree_zero_compose(const RationalMatrix& a, const RationalMatrix& b) {
    return a * b;
}

std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int from) {
        if ((int)cur.size() == k) { out.push_back(cur); return; }
        for (int v = from; v <= n - (k - (int)cur.size()); ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

} // namespace

SymModule::SymModule(int max_arity, std::map<int, SymArity> comp, bool check)
    : max_arity_(max_arity), comp_(std::move(comp)) {
    for (auto it = comp_.begin(); it != comp_.end();) {
        if (it->second.cx.is_zero()) it = comp_.erase(it);
        else ++it;
    }
    if (check) validate();
}

bool SymModule::present(int n) const {
    if (n > max_arity_) throw ArityOverflow("arity " + std::to_string(n) + " beyond truncation bound " + std::to_string(max_arity_));
    return comp_.count(n) > 0;
}

const ChainComplex& SymModule::cx(int n) const { return arity(n).cx; }

const SymArity& SymModule::arity(int n) const {
    if (n > max_arity_) throw ArityOverflow("arity " + std::to_string(n) + " beyond truncation bound " + std::to_string(max_arity_));
    auto it = comp_.find(n);
    return it == comp_.end() ? zero_arity_ : it->second;
}

std::vector<int> SymModule::arities() const {
    std::vector<int> out;
    for (const auto& [n, a] : comp_) out.push_back(n);
    return out;
}

void SymModule::validate() const {
    for (const auto& [n, A] : comp_) {
        if (n < 0) throw Error("negative arity");
        if (n > max_arity_) throw Error("component arity exceeds max_arity");
        int ng = n >= 2 ? n - 1 : 0;
        if ((int)A.gens.size() != ng)
            throw Error("arity " + std::to_string(n) + ": need " + std::to_string(ng) + " action generators, got " + std::to_string(A.gens.size()));
        auto gen = [&](int i, int d) {
            auto it = A.gens[i].find(d);
            return it != A.gens[i].end() ? it->second : RationalMatrix::identity(A.cx.dim(d));
        };
        for (int i = 0; i < ng; ++i)
            for (const auto& [d, m] : A.gens[i])
                if (m.rows() != A.cx.dim(d) || m.cols() != A.cx.dim(d))
                    throw ShapeMismatch("action generator shape at arity " + std::to_string(n));
        for (const auto& [d, dim] : A.cx.dims()) {
            (void)dim;
            RationalMatrix dd = A.cx.diff(d);
            for (int i = 0; i < ng; ++i) {
                if (!(gen(i, d) * gen(i, d) == RationalMatrix::identity(A.cx.dim(d))))
                    throw Error("action generator not an involution at arity " + std::to_string(n));
                if (A.cx.dim(d - 1) > 0 && !(dd * gen(i, d) == gen(i, d - 1) * dd))
                    throw Error("action generator is not a chain map at arity " + std::to_string(n));
                for (int j = i + 2; j < ng; ++j)
                    if (!(gen(i, d) * gen(j, d) == gen(j, d) * gen(i, d)))
                        throw Error("distant generators fail to commute at arity " + std::to_string(n));
            }
            for (int i = 0; i + 1 < ng; ++i)
                if (!(gen(i, d) * gen(i + 1, d) * gen(i, d) == gen(i + 1, d) * gen(i, d) * gen(i + 1, d)))
                    throw Error("braid relation fails at arity " + std::to_string(n));
        }
    }
}

std::map<int, RationalMatrix> SymModule::act_full(int n, const Perm& p) const {
    if ((int)p.size() != n) throw ShapeMismatch("permutation size does not match arity");
    const SymArity& A = arity(n);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find({n, p});
        if (it != cache_.end()) return it->second;
    }
    std::vector<int> w = descent_word(p);
    std::map<int, RationalMatrix> out;
    for (const auto& [d, dim] : A.cx.dims()) {
        RationalMatrix m = RationalMatrix::identity(dim);
        for (int i : w) {
            auto it = A.gens[i].find(d);
            if (it != A.gens[i].end()) m = degree_zero_compose(m, it->second);
        }
        out[d] = std::move(m);
    }
    std::lock_guard<std::mutex> lk(mu_);
    cache_[{n, p}] = out;
    return out;
}

RationalMatrix SymModule::act(int n, const Perm& p, int d) const {
    auto full = act_full(n, p);
    auto it = full.find(d);
    int dim = arity(n).cx.dim(d);
    return it != full.end() ? it->second : RationalMatrix(dim, dim);
}

std::map<int, Rat> SymModule::character(int n, const Perm& p) const {
    std::map<int, Rat> out;
    for (auto& [d, m] : act_full(n, p)) {
        Rat tr = 0;
        for (int i = 0; i < m.rows(); ++i) tr += m.get(i, i);
        out[d] = tr;
    }
    return out;
}

SymModule unit_symmod(int max_arity) {
    std::map<int, SymArity> comp;
    comp[1] = SymArity{ChainComplex::build({{0, 1}}, {}, {{0, {"1"}}}), {}};
    return SymModule(max_arity, std::move(comp));
}

SymModule zero_symmod(int max_arity) { return SymModule(max_arity, {}); }

SymModule direct_sum_sym(const SymModule& M, const SymModule& N) {
    int maxa = std::min(M.max_arity(), N.max_arity());
    std::map<int, SymArity> comp;
    for (int n = 0; n <= maxa; ++n) {
        bool pm = M.present(n), pn = N.present(n);
        if (!pm && !pn) continue;
        SymArity A;
        A.cx = direct_sum(M.cx(n), N.cx(n));
        int ng = n >= 2 ? n - 1 : 0;
        A.gens.resize(ng);
        for (int i = 0; i < ng; ++i) {
            Perm s = adjacent_transposition(n, i);
            for (const auto& [d, dim] : A.cx.dims()) {
                (void)dim;
                A.gens[i][d] = RationalMatrix::direct_sum(M.act(n, s, d), N.act(n, s, d));
            }
        }
        comp[n] = std::move(A);
    }
    return SymModule(maxa, std::move(comp));
}

SymModule dual_sym(const SymModule& M) {
    std::map<int, SymArity> comp;
    for (int n : M.arities()) {
        SymArity A;
        A.cx = dual(M.cx(n));
        int ng = n >= 2 ? n - 1 : 0;
        A.gens.resize(ng);
        for (int i = 0; i < ng; ++i)
            for (const auto& [d, m] : M.arity(n).gens[i]) A.gens[i][-d] = m.transpose();
        comp[n] = std::move(A);
    }
    return SymModule(M.max_arity(), std::move(comp));
}

Coinvariants coinvariants(const ChainComplex& V, int n,
                          const std::function<RationalMatrix(const Perm&, int)>& act) {
    auto group = all_perms(n);
    Int fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    Rat inv_fact = Rat(1) / Rat(fact);

    bool want_weights = V.has_weights();
    std::map<int, RationalMatrix> incl, proj;
    std::map<int, int> dims;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, std::vector<int>> weights;
    for (const auto& [d, dim] : V.dims()) {
        RationalMatrix sum(dim, dim);
        for (const auto& p : group) sum = sum + act(p, d);
        RationalMatrix e = sum.scaled(inv_fact);
        if (!(e * e == e)) throw Error("averaging operator is not idempotent: the supplied action violates the group law");
        auto piv = image_pivot_cols(e);
        dims[d] = (int)piv.size();
        incl[d] = e.select_cols(piv);
        auto pr = solve(incl[d], e);
        if (!pr) throw Error("internal: projection solve failed");
        proj[d] = *pr;
        if (V.has_labels()) {
            for (int c : piv) labels[d].push_back(V.labels(d)[c]);
        }
        if (want_weights) {
            for (size_t ci = 0; ci < piv.size() && want_weights; ++ci) {
                int w = -1;
                for (const auto& [rc, v] : incl[d].entries()) {
                    (void)v;
                    if (rc.second != (int)ci) continue;
                    int rw = V.weight_of(d, rc.first);
                    if (w == -1) w = rw;
                    else if (w != rw) { want_weights = false; break; }
                }
                if (want_weights) weights[d].push_back(w == -1 ? 0 : w);
            }
        }
    }
    if (!want_weights) weights.clear();

    std::map<int, RationalMatrix> dC;
    for (const auto& [d, dim] : dims) {
        (void)dim;
        if (!dims.count(d - 1) || dims.at(d - 1) == 0 || dims.at(d) == 0) continue;
        RationalMatrix m = proj.at(d - 1) * V.diff(d) * incl.at(d);
        if (!m.is_zero()) dC[d] = std::move(m);
    }
    ChainComplex C = ChainComplex::build(dims, std::move(dC), std::move(labels), std::move(weights));
    std::map<int, RationalMatrix> pm, im;
    for (const auto& [d, m] : proj)
        if (m.rows() > 0 && m.cols() > 0) pm[d] = m;
    for (const auto& [d, m] : incl)
        if (m.rows() > 0 && m.cols() > 0) im[d] = m;
    return Coinvariants{C, make_chain_map(V, C, std::move(pm)), make_chain_map(C, V, std::move(im))};
}

Coinvariants coinvariants(const SymModule& M, int n) {
    return coinvariants(M.cx(n), n, [&](const Perm& p, int d) { return M.act(n, p, d); });
}

SymModule tensor_sym(const SymModule& M, const SymModule& N) {
    int maxa = M.max_arity() + N.max_arity();
    bool lb = true, wt = false;
    for (int i : M.arities()) {
        if (!M.cx(i).has_labels()) lb = false;
        if (M.cx(i).has_weights()) wt = true;
    }
    for (int j : N.arities()) {
        if (!N.cx(j).has_labels()) lb = false;
        if (N.cx(j).has_weights()) wt = true;
    }

    struct Elt {
        int i;
        std::vector<int> S, T;  // M leaves, N leaves
        int md, mi, nd, ni;
    };
    std::map<int, SymArity> comp;
    for (int n = 0; n <= maxa; ++n) {
        std::map<int, std::vector<Elt>> basis;
        std::map<int, std::map<std::vector<int>, int>> index;
        auto key_of = [](const Elt& z) {
            std::vector<int> k{z.i};
            k.insert(k.end(), z.S.begin(), z.S.end());
            k.push_back(z.md); k.push_back(z.mi); k.push_back(z.nd); k.push_back(z.ni);
            return k;
        };
        for (int i = 0; i <= n; ++i) {
            int j = n - i;
            if (i > M.max_arity() || j > N.max_arity()) continue;
            if (!M.present(i) || !N.present(j)) continue;
            for (const auto& S : subsets_of_size(n, i)) {
                std::vector<int> T;
                for (int v = 0; v < n; ++v)
                    if (!std::binary_search(S.begin(), S.end(), v)) T.push_back(v);
                for (const auto& [md, mdim] : M.cx(i).dims())
                    for (int mi = 0; mi < mdim; ++mi)
                        for (const auto& [nd, ndim] : N.cx(j).dims())
                            for (int ni = 0; ni < ndim; ++ni) {
                                Elt z{i, S, T, md, mi, nd, ni};
                                int d = md + nd;
                                index[d][key_of(z)] = (int)basis[d].size();
                                basis[d].push_back(std::move(z));
                            }
            }
        }
        if (basis.empty()) continue;

        std::map<int, int> dims;
        std::map<int, std::vector<std::string>> labels;
        std::map<int, std::vector<int>> weights;
        for (const auto& [d, v] : basis) {
            dims[d] = (int)v.size();
            for (const auto& z : v) {
                if (lb)
                    labels[d].push_back(leaf_label(z.S, n) + ":" + M.cx(z.i).labels(z.md)[z.mi] +
                                        "|" + leaf_label(z.T, n) + ":" + N.cx(n - z.i).labels(z.nd)[z.ni]);
                if (wt) {
                    int w = 0;
                    w += M.cx(z.i).weight_of(z.md, z.mi) + N.cx(n - z.i).weight_of(z.nd, z.ni);
                    weights[d].push_back(w);
                }
            }
        }

        // differential: d_M ⊗ id + (-1)^{|m|} id ⊗ d_N within each (i, S) block
        std::map<int, RationalMatrix> diffs;
        for (const auto& [d, v] : basis) {
            if (!basis.count(d - 1)) continue;
            RationalMatrix dm((int)basis.at(d - 1).size(), (int)v.size());
            for (int c = 0; c < (int)v.size(); ++c) {
                const Elt& z = v[c];
                RationalMatrix dM = M.cx(z.i).diff(z.md);
                for (const auto& [rc, val] : dM.entries())
                    if (rc.second == z.mi) {
                        Elt t = z; t.md -= 1; t.mi = rc.first;
                        dm.add_at(index.at(d - 1).at(key_of(t)), c, val);
                    }
                RationalMatrix dN = N.cx(n - z.i).diff(z.nd);
                Rat s = (z.md % 2 == 0) ? 1 : -1;
                for (const auto& [rc, val] : dN.entries())
                    if (rc.second == z.ni) {
                        Elt t = z; t.nd -= 1; t.ni = rc.first;
                        dm.add_at(index.at(d - 1).at(key_of(t)), c, s * val);
                    }
            }
            if (!dm.is_zero()) diffs[d] = std::move(dm);
        }

        SymArity A;
        A.cx = ChainComplex::build(dims, std::move(diffs), std::move(labels), std::move(weights));
        A.gens.resize(n >= 2 ? n - 1 : 0);
        for (int t = 0; t + 1 < n; ++t) {
            for (const auto& [d, v] : basis) {
                RationalMatrix g((int)v.size(), (int)v.size());
                for (int c = 0; c < (int)v.size(); ++c) {
                    const Elt& z = v[c];
                    bool inS0 = std::binary_search(z.S.begin(), z.S.end(), t);
                    bool inS1 = std::binary_search(z.S.begin(), z.S.end(), t + 1);
                    if (inS0 == inS1) {
                        // both leaves sit in one factor: local adjacent transposition there
                        const std::vector<int>& L = inS0 ? z.S : z.T;
                        int a = (int)(std::lower_bound(L.begin(), L.end(), t) - L.begin());
                        int ar = inS0 ? z.i : n - z.i;
                        RationalMatrix loc = inS0 ? M.act(ar, adjacent_transposition(ar, a), z.md)
                                                  : N.act(ar, adjacent_transposition(ar, a), z.nd);
                        for (const auto& [rc, val] : loc.entries())
                            if (rc.second == (inS0 ? z.mi : z.ni)) {
                                Elt u = z;
                                (inS0 ? u.mi : u.ni) = rc.first;
                                g.add_at(index.at(d).at(key_of(u)), c, val);
                            }
                    } else {
                        Elt u = z;
                        auto relabel = [&](std::vector<int>& L) {
                            for (int& x : L) {
                                if (x == t) x = t + 1;
                                else if (x == t + 1) x = t;
                            }
                            std::sort(L.begin(), L.end());
                        };
                        relabel(u.S);
                        relabel(u.T);
                        g.add_at(index.at(d).at(key_of(u)), c, 1);
                    }
                }
                if (!(g == RationalMatrix::identity(g.rows()))) A.gens[t][d] = std::move(g);
            }
        }
        comp[n] = std::move(A);
    }
    return SymModule(maxa, std::move(comp));
}

SymModule hadamard(const SymModule& M, const SymModule& N) {
    int maxa = std::min(M.max_arity(), N.max_arity());
    std::map<int, SymArity> comp;
    for (int n = 0; n <= maxa; ++n) {
        if (!M.present(n) || !N.present(n)) continue;
        SymArity A;
        A.cx = tensor(M.cx(n), N.cx(n));
        // block offsets by ascending M degree, mirroring tensor()
        std::map<int, std::map<int, int>> off;
        {
            std::map<int, int> dims;
            for (const auto& [p, dx] : M.cx(n).dims())
                for (const auto& [q, dy] : N.cx(n).dims()) {
                    off[p + q][p] = dims[p + q];
                    dims[p + q] += dx * dy;
                }
        }
        A.gens.resize(n >= 2 ? n - 1 : 0);
        for (int i = 0; i + 1 < n; ++i) {
            Perm s = adjacent_transposition(n, i);
            for (const auto& [d, blocks] : off) {
                RationalMatrix g(A.cx.dim(d), A.cx.dim(d));
                for (const auto& [p, o] : blocks) {
                    int q = d - p;
                    RationalMatrix gm = M.act(n, s, p), gn = N.act(n, s, q);
                    RationalMatrix kr = RationalMatrix::kron(gm, gn);
                    for (const auto& [rc, val] : kr.entries()) g.add_at(o + rc.first, o + rc.second, val);
                }
                if (!(g == RationalMatrix::identity(g.rows()))) A.gens[i][d] = std::move(g);
            }
        }
        comp[n] = std::move(A);
    }
    return SymModule(maxa, std::move(comp));
}

ChainComplex schur(const SymModule& M, const ChainComplex& V, int max_weight) {
    // flattened V basis: (degree, index, weight)
    struct Letter { int d, i, w; };
    std::vector<Letter> letters;
    bool vw = V.has_weights();
    for (const auto& [d, dim] : V.dims())
        for (int i = 0; i < dim; ++i) letters.push_back({d, i, vw ? V.weights(d)[i] : 1});

    struct Piece { ChainComplex cx; int arity; };
    std::vector<Coinvariants> pieces;
    std::vector<int> piece_arity;
    for (int n = 0; n <= std::min(max_weight, M.max_arity()); ++n) {
        if (!M.present(n)) continue;
        // ambient: M(n) ⊗ V^{⊗n}, basis (mdeg, mi, word of letter ids)
        struct AElt { int md, mi; std::vector<int> word; int w; };
        std::map<int, std::vector<AElt>> basis;
        std::map<int, std::map<std::vector<int>, int>> index;
        auto key_of = [](const AElt& z) {
            std::vector<int> k{z.md, z.mi};
            k.insert(k.end(), z.word.begin(), z.word.end());
            return k;
        };
        std::vector<int> word(n, 0);
        bool done = letters.empty() && n > 0;
        while (!done) {
            int wsum = 0, dsum = 0;
            for (int t = 0; t < n; ++t) {
                wsum += letters[word[t]].w;
                dsum += letters[word[t]].d;
            }
            if (wsum <= max_weight) {
                for (const auto& [md, mdim] : M.cx(n).dims())
                    for (int mi = 0; mi < mdim; ++mi) {
                        AElt z{md, mi, word, wsum};
                        int d = md + dsum;
                        index[d][key_of(z)] = (int)basis[d].size();
                        basis[d].push_back(std::move(z));
                    }
            }
            int t = n - 1;
            while (t >= 0 && word[t] + 1 == (int)letters.size()) word[t--] = 0;
            if (t < 0) done = true;
            else ++word[t];
        }
        if (basis.empty()) continue;

        std::map<int, int> dims;
        std::map<int, std::vector<std::string>> labels;
        std::map<int, std::vector<int>> weights;
        bool lb = M.cx(n).has_labels() && V.has_labels();
        for (const auto& [d, v] : basis) {
            dims[d] = (int)v.size();
            for (const auto& z : v) {
                weights[d].push_back(z.w);
                if (lb) {
                    std::ostringstream o;
                    o << M.cx(n).labels(z.md)[z.mi] << "[";
                    for (int t = 0; t < n; ++t)
                        o << (t ? "," : "") << V.labels(letters[z.word[t]].d)[letters[z.word[t]].i];
                    o << "]";
                    labels[d].push_back(o.str());
                }
            }
        }

        std::map<int, RationalMatrix> diffs;
        for (const auto& [d, v] : basis) {
            if (!basis.count(d - 1)) continue;
            RationalMatrix dm((int)basis.at(d - 1).size(), (int)v.size());
            for (int c = 0; c < (int)v.size(); ++c) {
                const AElt& z = v[c];
                RationalMatrix dM = M.cx(n).diff(z.md);
                for (const auto& [rc, val] : dM.entries())
                    if (rc.second == z.mi) {
                        AElt u = z; u.md -= 1; u.mi = rc.first;
                        dm.add_at(index.at(d - 1).at(key_of(u)), c, val);
                    }
                int pre = z.md;
                for (int t = 0; t < n; ++t) {
                    const Letter& L = letters[z.word[t]];
                    RationalMatrix dV = V.diff(L.d);
                    Rat s = (pre % 2 == 0) ? 1 : -1;
                    for (const auto& [rc, val] : dV.entries())
                        if (rc.second == L.i) {
                            // find the letter id of (L.d - 1, rc.first)
                            AElt u = z;
                            for (size_t li = 0; li < letters.size(); ++li)
                                if (letters[li].d == L.d - 1 && letters[li].i == rc.first) u.word[t] = (int)li;
                            auto it = index.at(d - 1).find(key_of(u));
                            if (it != index.at(d - 1).end()) dm.add_at(it->second, c, s * val);
                        }
                    pre += L.d;
                }
            }
            if (!dm.is_zero()) diffs[d] = std::move(dm);
        }

        ChainComplex amb = ChainComplex::build(dims, std::move(diffs), std::move(labels), std::move(weights));
        auto act = [&](const Perm& p, int d) {
            const auto& v = basis.at(d);
            RationalMatrix m((int)v.size(), (int)v.size());
            for (int c = 0; c < (int)v.size(); ++c) {
                const AElt& z = v[c];
                std::vector<int> degs(n);
                for (int t = 0; t < n; ++t) degs[t] = letters[z.word[t]].d;
                int eps = graded_place_sign(p, degs);
                std::vector<int> neww(n);
                for (int t = 0; t < n; ++t) neww[t] = z.word[p[t]];
                RationalMatrix mm = M.act(n, p, z.md);
                for (const auto& [rc, val] : mm.entries())
                    if (rc.second == z.mi) {
                        AElt u = z; u.mi = rc.first; u.word = neww;
                        m.add_at(index.at(d).at(key_of(u)), c, val * eps);
                    }
            }
            return m;
        };
        pieces.push_back(coinvariants(amb, n, act));
        piece_arity.push_back(n);
    }

    // assemble the direct sum over arities, ascending, block offsets per degree
    std::map<int, int> dims;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, std::vector<int>> weights;
    bool lb = true;
    for (const auto& p : pieces)
        if (!p.cx.is_zero() && !p.cx.has_labels()) lb = false;
    std::vector<std::map<int, int>> offs(pieces.size());
    for (size_t pi = 0; pi < pieces.size(); ++pi) {
        const ChainComplex& c = pieces[pi].cx;
        for (const auto& [d, dim] : c.dims()) {
            offs[pi][d] = dims[d];
            dims[d] += dim;
            for (int i = 0; i < dim; ++i) {
                if (lb) labels[d].push_back(c.labels(d)[i]);
                weights[d].push_back(c.has_weights() ? c.weights(d)[i] : piece_arity[pi]);
            }
        }
    }
    std::map<int, RationalMatrix> diffs;
    for (const auto& [d, dim] : dims) {
        if (!dims.count(d - 1)) continue;
        RationalMatrix dm(dims.at(d - 1), dim);
        for (size_t pi = 0; pi < pieces.size(); ++pi) {
            RationalMatrix pd = pieces[pi].cx.diff(d);
            for (const auto& [rc, val] : pd.entries())
                dm.add_at(offs[pi].at(d - 1) + rc.first, offs[pi].at(d) + rc.second, val);
        }
        if (!dm.is_zero()) diffs[d] = std::move(dm);
    }
    return ChainComplex::build(std::move(dims), std::move(diffs), std::move(labels), std::move(weights));
}

RationalMatrix SymMap::at(int arity, int sdeg, const SymModule& src, const SymModule& tgt) const {
    auto ai = comp.find(arity);
    if (ai != comp.end()) {
        auto di = ai->second.find(sdeg);
        if (di != ai->second.end()) return di->second;
    }
    return RationalMatrix(tgt.cx(arity).dim(sdeg + deg), src.cx(arity).dim(sdeg));
}

SymMap identity_sym_map(const SymModule& M) {
    SymMap f;
    f.deg = 0;
    for (int n : M.arities())
        for (const auto& [d, dim] : M.cx(n).dims()) f.comp[n][d] = RationalMatrix::identity(dim);
    return f;
}

} // namespace opforge
