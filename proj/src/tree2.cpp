#include "opforge/tree2.hpp"

#include <algorithm>
#include <sstream>

namespace opforge {

int TreeElt::degree() const {
    int d = odeg;
    for (const auto& s : slots) d += s.deg;
    return d;
}

std::vector<int> TreeElt::slot_degs() const {
    std::vector<int> d;
    for (const auto& s : slots) d.push_back(s.deg);
    return d;
}

std::vector<int> tree_key(const TreeElt& z) {
    std::vector<int> k{z.odeg, z.oidx, (int)z.slots.size()};
    for (const auto& s : z.slots) {
        k.push_back(s.color);
        k.push_back(s.deg);
        k.push_back(s.idx);
        k.push_back((int)s.leaves.size());
        k.insert(k.end(), s.leaves.begin(), s.leaves.end());
    }
    return k;
}

bool tree_canonical(const TreeElt& z) {
    for (size_t j = 0; j + 1 < z.slots.size(); ++j)
        if (z.slots[j].leaves[0] > z.slots[j + 1].leaves[0]) return false;
    return true;
}

int Tree2::idx_of(int deg, const TreeElt& z) const { return index.at(deg).at(tree_key(z)); }

std::map<int, Rat> tree2_project(const Tree2& t, const SymModule& outer, int deg,
                                 const TreeElt& z, const Rat& coeff) {
    std::map<int, Rat> out;
    if (coeff == 0) return out;
    int k = z.k();
    std::vector<int> mins;
    for (const auto& s : z.slots) mins.push_back(s.leaves[0]);
    Perm c = ranks(mins);
    Perm cinv = perm_inverse(c);
    TreeElt w = z;
    for (int j = 0; j < k; ++j) w.slots[j] = z.slots[cinv[j]];
    Rat eps = graded_place_sign(cinv, z.slot_degs());
    RationalMatrix rho = outer.act(k, c, z.odeg);
    for (const auto& [rc, v] : rho.entries())
        if (rc.second == z.oidx) {
            TreeElt u = w;
            u.oidx = rc.first;
            int ci = t.coinv_of.at(deg).at(t.idx_of(deg, u));
            Rat add = coeff * v * eps;
            auto [it, fresh] = out.try_emplace(ci, add);
            if (!fresh) {
                it->second += add;
                if (it->second == 0) out.erase(it);
            }
        }
    return out;
}

namespace {

Int factorial(int k) {
    Int f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

Tree2 build_tree2(const SymModule& M, const SymModule& N0, const SymModule* N1, int n) {
    Tree2 T;
    T.n = n;
    bool linear = N1 != nullptr;
    auto mod_of = [&](int color) -> const SymModule& { return color ? *N1 : N0; };

    bool lb = true, wt = false;
    auto scan_meta = [&](const SymModule& S) {
        for (int a : S.arities()) {
            if (!S.cx(a).has_labels()) lb = false;
            if (S.cx(a).has_weights()) wt = true;
        }
    };
    scan_meta(M);
    scan_meta(N0);
    if (linear) scan_meta(*N1);

    auto flat = [](const ChainComplex& c) {
        std::vector<std::pair<int, int>> v;
        for (const auto& [d, dim] : c.dims())
            for (int i = 0; i < dim; ++i) v.push_back({d, i});
        return v;
    };

    int kmax = std::min(n, M.max_arity());
    for (int k = 1; k <= kmax; ++k) {
        if (!M.present(k)) continue;
        std::vector<int> a(n, 0);
        while (true) {
            std::vector<std::vector<int>> lv(k);
            for (int l = 0; l < n; ++l) lv[a[l]].push_back(l);
            bool full = true;
            for (const auto& L : lv)
                if (L.empty()) { full = false; break; }
            if (full) {
                int dmax = linear ? k : 1;
                for (int dj = 0; dj < dmax; ++dj) {
                    bool good = true;
                    std::vector<std::vector<std::pair<int, int>>> fl(k);
                    for (int j = 0; j < k && good; ++j) {
                        int col = (linear && j == dj) ? 1 : 0;
                        const SymModule& mod = mod_of(col);
                        int aj = (int)lv[j].size();
                        if (aj > mod.max_arity() || !mod.present(aj)) { good = false; break; }
                        fl[j] = flat(mod.cx(aj));
                        if (fl[j].empty()) good = false;
                    }
                    if (!good) continue;
                    for (const auto& [odeg, odim] : M.cx(k).dims())
                        for (int oidx = 0; oidx < odim; ++oidx) {
                            std::vector<size_t> pos(k, 0);
                            while (true) {
                                TreeElt z;
                                z.odeg = odeg;
                                z.oidx = oidx;
                                z.slots.resize(k);
                                for (int j = 0; j < k; ++j) {
                                    z.slots[j].leaves = lv[j];
                                    z.slots[j].color = (linear && j == dj) ? 1 : 0;
                                    z.slots[j].deg = fl[j][pos[j]].first;
                                    z.slots[j].idx = fl[j][pos[j]].second;
                                }
                                int d = z.degree();
                                T.index[d][tree_key(z)] = (int)T.basis[d].size();
                                T.basis[d].push_back(std::move(z));
                                int j = k - 1;
                                while (j >= 0 && pos[j] + 1 == fl[j].size()) pos[j--] = 0;
                                if (j < 0) break;
                                ++pos[j];
                            }
                        }
                }
            }
            int l = n - 1;
            while (l >= 0 && a[l] + 1 == k) a[l--] = 0;
            if (l < 0) break;
            ++a[l];
        }
    }

    // canonical representatives, labels, weights
    std::map<int, int> dims;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, std::vector<int>> weights;
    auto weight_of = [&](const TreeElt& z) {
        int w = M.cx(z.k()).weight_of(z.odeg, z.oidx);
        for (const auto& s : z.slots)
            w += mod_of(s.color).cx((int)s.leaves.size()).weight_of(s.deg, s.idx);
        return w;
    };
    auto label_of = [&](const TreeElt& z) {
        std::ostringstream o;
        o << M.cx(z.k()).labels(z.odeg)[z.oidx] << "(";
        for (int j = 0; j < z.k(); ++j) {
            const Slot& s = z.slots[j];
            if (j) o << ",";
            if (s.color) o << "*";
            o << leaf_label(s.leaves, n) << ":"
              << mod_of(s.color).cx((int)s.leaves.size()).labels(s.deg)[s.idx];
        }
        o << ")";
        return o.str();
    };
    for (const auto& [d, v] : T.basis) {
        for (int i = 0; i < (int)v.size(); ++i) {
            if (!tree_canonical(v[i])) continue;
            T.coinv_of[d][i] = (int)T.canon[d].size();
            T.canon[d].push_back(i);
            if (lb) labels[d].push_back(label_of(v[i]));
            if (wt) weights[d].push_back(weight_of(v[i]));
        }
        dims[d] = (int)T.canon[d].size();
    }

    // incl = averaging idempotent on canonical representatives
    for (const auto& [d, cl] : T.canon) {
        RationalMatrix inc((int)T.basis.at(d).size(), (int)cl.size());
        for (int ci = 0; ci < (int)cl.size(); ++ci) {
            const TreeElt& z0 = T.basis.at(d)[cl[ci]];
            int k = z0.k();
            Rat scale = Rat(1) / Rat(factorial(k));
            for (const Perm& tau : all_perms(k)) {
                Perm ti = perm_inverse(tau);
                TreeElt w = z0;
                for (int j = 0; j < k; ++j) w.slots[j] = z0.slots[ti[j]];
                Rat eps = graded_place_sign(ti, z0.slot_degs());
                RationalMatrix rho = M.act(k, tau, z0.odeg);
                for (const auto& [rc, v] : rho.entries())
                    if (rc.second == z0.oidx) {
                        TreeElt u = w;
                        u.oidx = rc.first;
                        inc.add_at(T.idx_of(d, u), ci, v * eps * scale);
                    }
            }
        }
        T.incl[d] = std::move(inc);
    }

    // proj: unique slot permutation to the sorted tuple
    for (const auto& [d, v] : T.basis) {
        RationalMatrix pr((int)T.canon.at(d).size(), (int)v.size());
        for (int col = 0; col < (int)v.size(); ++col)
            for (const auto& [ci, val] : tree2_project(T, M, d, v[col], 1)) pr.add_at(ci, col, val);
        if (!(pr * T.incl.at(d) == RationalMatrix::identity((int)T.canon.at(d).size())))
            throw Error("internal: composite projection is not a retraction of the averaging map");
        T.proj[d] = std::move(pr);
    }

    // transported differential
    std::map<int, RationalMatrix> dC;
    for (const auto& [d, cl] : T.canon) {
        if (!T.canon.count(d - 1) || T.canon.at(d - 1).empty() || cl.empty()) continue;
        RationalMatrix m((int)T.canon.at(d - 1).size(), (int)cl.size());
        for (int ci = 0; ci < (int)cl.size(); ++ci) {
            const TreeElt& z0 = T.basis.at(d)[cl[ci]];
            RationalMatrix dM = M.cx(z0.k()).diff(z0.odeg);
            for (const auto& [rc, v] : dM.entries())
                if (rc.second == z0.oidx) {
                    TreeElt u = z0;
                    u.odeg -= 1;
                    u.oidx = rc.first;
                    for (const auto& [cj, val] : tree2_project(T, M, d - 1, u, v)) m.add_at(cj, ci, val);
                }
            int pre = z0.odeg;
            for (int j = 0; j < z0.k(); ++j) {
                const Slot& s = z0.slots[j];
                const SymModule& mod = mod_of(s.color);
                RationalMatrix dN = mod.cx((int)s.leaves.size()).diff(s.deg);
                Rat sign = (pre % 2 == 0) ? 1 : -1;
                for (const auto& [rc, v] : dN.entries())
                    if (rc.second == s.idx) {
                        TreeElt u = z0;
                        u.slots[j].deg -= 1;
                        u.slots[j].idx = rc.first;
                        for (const auto& [cj, val] : tree2_project(T, M, d - 1, u, sign * v))
                            m.add_at(cj, ci, val);
                    }
                pre += s.deg;
            }
        }
        if (!m.is_zero()) dC[d] = std::move(m);
    }
    T.coinv = ChainComplex::build(std::move(dims), std::move(dC), std::move(labels), std::move(weights));

    // transported Sigma_n generators
    T.gens.resize(n >= 2 ? n - 1 : 0);
    for (int t = 0; t + 1 < n; ++t) {
        for (const auto& [d, cl] : T.canon) {
            if (cl.empty()) continue;
            RationalMatrix g((int)cl.size(), (int)cl.size());
            for (int ci = 0; ci < (int)cl.size(); ++ci) {
                const TreeElt& z0 = T.basis.at(d)[cl[ci]];
                int j0 = -1, j1 = -1;
                for (int j = 0; j < z0.k(); ++j) {
                    if (std::binary_search(z0.slots[j].leaves.begin(), z0.slots[j].leaves.end(), t)) j0 = j;
                    if (std::binary_search(z0.slots[j].leaves.begin(), z0.slots[j].leaves.end(), t + 1)) j1 = j;
                }
                if (j0 == j1) {
                    const Slot& s = z0.slots[j0];
                    int aj = (int)s.leaves.size();
                    int p0 = (int)(std::lower_bound(s.leaves.begin(), s.leaves.end(), t) - s.leaves.begin());
                    RationalMatrix loc = mod_of(s.color).act(aj, adjacent_transposition(aj, p0), s.deg);
                    for (const auto& [rc, v] : loc.entries())
                        if (rc.second == s.idx) {
                            TreeElt u = z0;
                            u.slots[j0].idx = rc.first;
                            for (const auto& [cj, val] : tree2_project(T, M, d, u, v)) g.add_at(cj, ci, val);
                        }
                } else {
                    TreeElt u = z0;
                    for (int& x : u.slots[j0].leaves)
                        if (x == t) x = t + 1;
                    std::sort(u.slots[j0].leaves.begin(), u.slots[j0].leaves.end());
                    for (int& x : u.slots[j1].leaves)
                        if (x == t + 1) x = t;
                    std::sort(u.slots[j1].leaves.begin(), u.slots[j1].leaves.end());
                    for (const auto& [cj, val] : tree2_project(T, M, d, u, 1)) g.add_at(cj, ci, val);
                }
            }
            if (!(g == RationalMatrix::identity(g.rows()))) T.gens[t][d] = std::move(g);
        }
    }
    return T;
}

CompositeData composite_full(const SymModule& M, const SymModule& N, int max_arity, bool check) {
    if (N.max_arity() >= 0 && N.present(0)) throw NotReduced("inner module has arity-0 content");
    int maxa = std::min({max_arity, M.max_arity(), N.max_arity()});
    CompositeData out;
    std::map<int, SymArity> comp;
    for (int n = 1; n <= maxa; ++n) {
        Tree2 t = build_tree2(M, N, nullptr, n);
        if (!t.coinv.is_zero()) comp[n] = SymArity{t.coinv, t.gens};
        out.amb[n] = std::move(t);
    }
    out.mod = SymModule(std::max(maxa, 0), std::move(comp), check);
    return out;
}

SymModule composite(const SymModule& M, const SymModule& N, int max_arity) {
    return composite_full(M, N, max_arity).mod;
}

CompositeData inf_composite_full(const SymModule& M, const SymModule& N0, const SymModule& N1,
                                 int max_arity, bool check) {
    if (N0.max_arity() >= 0 && N0.present(0)) throw NotReduced("inner module has arity-0 content");
    if (N1.max_arity() >= 0 && N1.present(0)) throw NotReduced("inner module has arity-0 content");
    int maxa = std::min({max_arity, M.max_arity(), N0.max_arity(), N1.max_arity()});
    CompositeData out;
    std::map<int, SymArity> comp;
    for (int n = 1; n <= maxa; ++n) {
        Tree2 t = build_tree2(M, N0, &N1, n);
        if (!t.coinv.is_zero()) comp[n] = SymArity{t.coinv, t.gens};
        out.amb[n] = std::move(t);
    }
    out.mod = SymModule(std::max(maxa, 0), std::move(comp), check);
    return out;
}

SymModule inf_composite(const SymModule& M, const SymModule& N) {
    int maxa = std::min(M.max_arity(), N.max_arity());
    return inf_composite_full(M, unit_symmod(maxa), N, maxa).mod;
}

std::map<int, std::map<int, RationalMatrix>> inf_composite_map(
    const CompositeData& src, const CompositeData& tgt,
    const SymModule& M1, const SymModule& N1,
    const SymModule& M2, const SymModule& N2,
    const SymMap& f, const SymMap& g) {
    std::map<int, std::map<int, RationalMatrix>> out;
    for (const auto& [n, S] : src.amb) {
        if (!tgt.amb.count(n)) continue;
        const Tree2& Tt = tgt.amb.at(n);
        for (const auto& [d, cl] : S.canon) {
            int dout = d + f.deg + g.deg;
            int rows = Tt.canon.count(dout) ? (int)Tt.canon.at(dout).size() : 0;
            RationalMatrix m(rows, (int)cl.size());
            for (int ci = 0; rows && ci < (int)cl.size(); ++ci) {
                const TreeElt& z0 = S.basis.at(d)[cl[ci]];
                int k = z0.k();
                RationalMatrix fm = f.at(k, z0.odeg, M1, M2);
                for (const auto& [frc, fv] : fm.entries()) {
                    if (frc.second != z0.oidx) continue;
                    int pre = z0.odeg;
                    for (int j = 0; j < k; ++j) {
                        const Slot& sj = z0.slots[j];
                        int aj = (int)sj.leaves.size();
                        RationalMatrix gm = g.at(aj, sj.deg, N1, N2);
                        Rat sgn = (g.deg % 2 != 0 && pre % 2 != 0) ? -1 : 1;
                        for (const auto& [grc, gv] : gm.entries()) {
                            if (grc.second != sj.idx) continue;
                            TreeElt u = z0;
                            u.odeg = z0.odeg + f.deg;
                            u.oidx = frc.first;
                            u.slots[j].color = 1;
                            u.slots[j].deg = sj.deg + g.deg;
                            u.slots[j].idx = grc.first;
                            for (const auto& [cj, val] : tree2_project(Tt, M2, dout, u, fv * gv * sgn))
                                m.add_at(cj, ci, val);
                        }
                        pre += sj.deg;
                    }
                }
            }
            out[n][d] = std::move(m);
        }
    }
    return out;
}

} // namespace opforge
