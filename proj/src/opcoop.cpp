#include "opforge/opcoop.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "opforge/linalg.hpp"

namespace opforge {

namespace {

using Key = std::tuple<int, int, int>;

std::string key_str(const Key& k) {
    std::ostringstream os;
    os << "(" << std::get<0>(k) << "," << std::get<1>(k) << "," << std::get<2>(k) << ")";
    return os.str();
}

std::vector<Rat> dense_col(const RationalMatrix& A, int j) {
    std::vector<Rat> v((size_t)A.rows());
    for (int i = 0; i < A.rows(); ++i) v[i] = A.get(i, j);
    return v;
}

std::vector<Rat> basis_vec(int dim, int j) {
    std::vector<Rat> v((size_t)dim);
    v[j] = 1;
    return v;
}

bool vec_zero(const std::vector<Rat>& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

std::vector<Rat> vec_sub(std::vector<Rat> a, const std::vector<Rat>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] - b[i];
    return a;
}

// bilinear extension of o_i to dense flat vectors; absent keys act as zero
std::vector<Rat> circ(const Operad& P, int m, int n, int i, const std::vector<Rat>& u,
                      const std::vector<Rat>& v) {
    int N = m + n - 1;
    int tdim = P.mod.present(N) ? P.mod.cx(N).total_dim() : 0;
    std::vector<Rat> out((size_t)tdim);
    auto it = P.comp.find({m, n, i});
    if (it == P.comp.end()) return out;
    const RationalMatrix& C = it->second;
    int bn = (int)v.size();
    for (int a = 0; a < (int)u.size(); ++a) {
        if (u[a] == 0) continue;
        for (int b = 0; b < bn; ++b) {
            if (v[b] == 0) continue;
            Rat c = u[a] * v[b];
            int col = a * bn + b;
            for (int r = 0; r < tdim; ++r) {
                const Rat& e = C.get(r, col);
                if (e != 0) out[r] += c * e;
            }
        }
    }
    return out;
}

int marked_slot(const TreeElt& z) {
    for (int j = 0; j < z.k(); ++j)
        if (z.slots[j].color == 1) return j;
    throw Error("internal: tree element has no marked slot");
}

// concatenated leaf listing of the slots as a permutation (position -> leaf)
Perm leaf_listing(const TreeElt& z) {
    Perm L;
    for (const auto& s : z.slots) L.insert(L.end(), s.leaves.begin(), s.leaves.end());
    return L;
}

bool is_identity_perm(const Perm& p) {
    for (int i = 0; i < (int)p.size(); ++i)
        if (p[i] != i) return false;
    return true;
}

InfComposition gamma1_of(const Operad& P, bool check_mod) {
    const SymModule& M = P.mod;
    int maxa = M.max_arity();
    if (M.present(0)) throw NotReduced("gamma1: operad has an arity-0 component");
    InfComposition G;
    G.dom = inf_composite_full(M, unit_symmod(maxa), M, maxa, check_mod);
    G.map.deg = 0;
    for (const auto& [N, t] : G.dom.amb) {
        if (t.coinv.is_zero()) continue;
        std::vector<std::pair<int, int>> fbN;
        if (M.present(N)) fbN = flat_basis(M.cx(N));
        for (const auto& [d, cd] : t.coinv.dims()) {
            int pd = M.present(N) ? M.cx(N).dim(d) : 0;
            RationalMatrix out(pd, cd);
            for (int ci = 0; ci < cd && pd > 0; ++ci) {
                const TreeElt& z = t.basis.at(d)[t.canon.at(d)[ci]];
                int j0 = marked_slot(z);
                const Slot& s = z.slots[j0];
                int nb = (int)s.leaves.size();
                auto it = P.comp.find({z.k(), nb, j0 + 1});
                if (it == P.comp.end()) continue;
                int fa = flat_index(M.cx(z.k()), z.odeg, z.oidx);
                int fb = flat_index(M.cx(nb), s.deg, s.idx);
                int col = fa * M.cx(nb).total_dim() + fb;
                std::vector<Rat> v((size_t)pd);
                for (int r = 0; r < it->second.rows(); ++r) {
                    const Rat& e = it->second.get(r, col);
                    if (e != 0 && fbN[r].first == d) v[fbN[r].second] = e;
                }
                // e_z = rho(L^{-1}) e_{contiguous}: the assembled action of p
                // relabels leaves by p^{-1}
                Perm L = perm_inverse(leaf_listing(z));
                if (!is_identity_perm(L)) {
                    RationalMatrix A = M.act(N, L, d);
                    std::vector<Rat> w((size_t)pd);
                    for (int j = 0; j < pd; ++j) {
                        if (v[j] == 0) continue;
                        for (int r = 0; r < pd; ++r) {
                            const Rat& e = A.get(r, j);
                            if (e != 0) w[r] += e * v[j];
                        }
                    }
                    v = std::move(w);
                }
                for (int r = 0; r < pd; ++r)
                    if (v[r] != 0) out.set(r, ci, v[r]);
            }
            G.map.comp[N][d] = std::move(out);
        }
    }
    return G;
}

// lhs column c of  act_P(s) ∘ g,  rhs column of  g ∘ act_tree(s); both sparse
void check_gamma_square(const SymModule& M, int N, const Tree2& t, const SymMap& g,
                        const char* what) {
    if (!M.present(N)) return;
    static const RationalMatrix no_block(0, 0);
    // chain compatibility
    for (const auto& [d, cd] : t.coinv.dims()) {
        const RationalMatrix& gd = (g.comp.count(N) && g.comp.at(N).count(d))
                                       ? g.comp.at(N).at(d)
                                       : no_block;
        int pd = M.cx(N).dim(d);
        int pd1 = M.cx(N).dim(d - 1);
        RationalMatrix dP = M.cx(N).diff(d);
        RationalMatrix dT = t.coinv.diff(d);
        int cd1 = t.coinv.dim(d - 1);
        const RationalMatrix* g1 = (g.comp.count(N) && g.comp.at(N).count(d - 1))
                                       ? &g.comp.at(N).at(d - 1)
                                       : nullptr;
        for (int ci = 0; ci < cd; ++ci) {
            std::vector<Rat> lhs((size_t)pd1), rhs((size_t)pd1);
            if (pd > 0 && gd.rows() == pd)
                for (int r = 0; r < pd; ++r) {
                    const Rat& e = gd.get(r, ci);
                    if (e == 0) continue;
                    for (int q = 0; q < pd1; ++q) {
                        const Rat& f = dP.get(q, r);
                        if (f != 0) lhs[q] += f * e;
                    }
                }
            if (g1 && g1->rows() == pd1)
                for (int r = 0; r < cd1; ++r) {
                    const Rat& e = dT.get(r, ci);
                    if (e == 0) continue;
                    for (int q = 0; q < pd1; ++q) {
                        const Rat& f = g1->get(q, r);
                        if (f != 0) rhs[q] += f * e;
                    }
                }
            if (!vec_zero(vec_sub(lhs, rhs)))
                throw Error(std::string(what) + ": chain rule fails at arity " +
                            std::to_string(N) + ", degree " + std::to_string(d));
        }
    }
    // equivariance against the transported generators
    for (int gt = 0; gt + 1 < N; ++gt) {
        Perm s = adjacent_transposition(N, gt);
        for (const auto& [d, cd] : t.coinv.dims()) {
            if (!(g.comp.count(N) && g.comp.at(N).count(d))) continue;
            const RationalMatrix& gd = g.comp.at(N).at(d);
            int pd = M.cx(N).dim(d);
            if (pd == 0) continue;
            RationalMatrix aP = M.act(N, s, d);
            bool have = (int)t.gens.size() > gt && t.gens[gt].count(d);
            const RationalMatrix* aT = have ? &t.gens[gt].at(d) : nullptr;
            for (int ci = 0; ci < cd; ++ci) {
                std::vector<Rat> lhs((size_t)pd), rhs((size_t)pd);
                for (int r = 0; r < pd; ++r) {
                    const Rat& e = gd.get(r, ci);
                    if (e == 0) continue;
                    for (int q = 0; q < pd; ++q) {
                        const Rat& f = aP.get(q, r);
                        if (f != 0) lhs[q] += f * e;
                    }
                }
                if (aT) {
                    for (int r = 0; r < cd; ++r) {
                        const Rat& e = aT->get(r, ci);
                        if (e == 0) continue;
                        for (int q = 0; q < pd; ++q) {
                            const Rat& f = gd.get(q, r);
                            if (f != 0) rhs[q] += f * e;
                        }
                    }
                } else {
                    for (int q = 0; q < pd; ++q) rhs[q] = gd.get(q, ci);
                }
                if (!vec_zero(vec_sub(lhs, rhs)))
                    throw Error(std::string(what) + ": equivariance fails at arity " +
                                std::to_string(N) + ", degree " + std::to_string(d) +
                                ", generator s_" + std::to_string(gt + 1));
            }
        }
    }
}

void validate_operad(const Operad& P) {
    const SymModule& M = P.mod;
    int maxa = M.max_arity();
    if (!M.present(1)) throw ShapeMismatch("operad: P(1) is empty");
    auto fb1 = flat_basis(M.cx(1));
    if (P.unit.rows() != (int)fb1.size() || P.unit.cols() != 1)
        throw ShapeMismatch("operad: unit is not a column over P(1)");
    bool nz = false;
    for (int r = 0; r < P.unit.rows(); ++r)
        if (P.unit.get(r, 0) != 0) {
            if (fb1[r].first != 0) throw DegreeMismatch("operad: unit off degree 0");
            nz = true;
        }
    if (!nz) throw ShapeMismatch("operad: unit is zero");

    // key inventory and shapes
    auto arities = M.arities();
    for (int m : arities) {
        if (m < 1) continue;
        for (int n : arities) {
            if (m + n - 1 > maxa) continue;
            for (int i = 1; i <= m; ++i) {
                if (!P.comp.count({m, n, i}))
                    throw ShapeMismatch("operad: missing composition " + key_str({m, n, i}));
            }
        }
    }
    for (const auto& [k, C] : P.comp) {
        auto [m, n, i] = k;
        if (m < 1 || n < 0 || i < 1 || i > m || m + n - 1 > maxa || !M.present(m) ||
            !M.present(n))
            throw ShapeMismatch("operad: stray composition key " + key_str(k));
        int N = m + n - 1;
        int rows = M.present(N) ? M.cx(N).total_dim() : 0;
        int cols = M.cx(m).total_dim() * M.cx(n).total_dim();
        if (C.rows() != rows || C.cols() != cols)
            throw ShapeMismatch("operad: composition " + key_str(k) + " has shape " +
                                std::to_string(C.rows()) + "x" + std::to_string(C.cols()));
        if (rows == 0) continue;
        auto fm = flat_basis(M.cx(m));
        auto fn = flat_basis(M.cx(n));
        auto ft = flat_basis(M.cx(N));
        for (int a = 0; a < (int)fm.size(); ++a)
            for (int b = 0; b < (int)fn.size(); ++b)
                for (int r = 0; r < rows; ++r)
                    if (C.get(r, a * (int)fn.size() + b) != 0 &&
                        ft[r].first != fm[a].first + fn[b].first)
                        throw DegreeMismatch("operad: composition " + key_str(k) +
                                             " is not degree additive");
    }

    // chain rule
    for (const auto& [k, C] : P.comp) {
        auto [m, n, i] = k;
        int N = m + n - 1;
        if (!M.present(N)) continue;
        RationalMatrix Dm = flat_diff(M.cx(m)), Dn = flat_diff(M.cx(n)),
                       Dt = flat_diff(M.cx(N));
        auto fm = flat_basis(M.cx(m));
        int am = (int)fm.size(), bn = M.cx(n).total_dim();
        for (int a = 0; a < am; ++a)
            for (int b = 0; b < bn; ++b) {
                std::vector<Rat> lhs((size_t)Dt.rows());
                int col = a * bn + b;
                for (int r = 0; r < C.rows(); ++r) {
                    const Rat& e = C.get(r, col);
                    if (e == 0) continue;
                    for (int q = 0; q < Dt.rows(); ++q) {
                        const Rat& f = Dt.get(q, r);
                        if (f != 0) lhs[q] += f * e;
                    }
                }
                std::vector<Rat> rhs = circ(P, m, n, i, dense_col(Dm, a), basis_vec(bn, b));
                Rat sgn = (fm[a].first % 2 != 0) ? -1 : 1;
                std::vector<Rat> t2 = circ(P, m, n, i, basis_vec(am, a), dense_col(Dn, b));
                for (size_t r = 0; r < rhs.size(); ++r) rhs[r] += sgn * t2[r];
                if (!vec_zero(vec_sub(lhs, rhs)))
                    throw Error("operad: chain rule fails at " + key_str(k) + " on pair (" +
                                std::to_string(a) + "," + std::to_string(b) + ")");
            }
    }

    // unit laws
    std::vector<Rat> u = dense_col(P.unit, 0);
    for (int n : arities) {
        int dn = M.cx(n).total_dim();
        if (n >= 1)
            for (int i = 1; i <= n; ++i)
                for (int a = 0; a < dn; ++a)
                    if (!vec_zero(vec_sub(circ(P, n, 1, i, basis_vec(dn, a), u),
                                          basis_vec(dn, a))))
                        throw Error("operad: right unit law fails at arity " +
                                    std::to_string(n) + ", slot " + std::to_string(i));
        for (int a = 0; a < dn; ++a)
            if (!vec_zero(vec_sub(circ(P, 1, n, 1, u, basis_vec(dn, a)), basis_vec(dn, a))))
                throw Error("operad: left unit law fails at arity " + std::to_string(n));
    }

    // sequential and parallel associativity
    for (int l : arities) {
        if (l < 1) continue;
        for (int m : arities) {
            for (int n : arities) {
                if (l + m - 1 > maxa || l + m + n - 2 > maxa) continue;
                int dl = M.cx(l).total_dim(), dm = M.cx(m).total_dim(),
                    dn = M.cx(n).total_dim();
                auto fm = flat_basis(M.cx(m));
                auto fn = flat_basis(M.cx(n));
                for (int a = 0; a < dl; ++a)
                    for (int b = 0; b < dm; ++b)
                        for (int c = 0; c < dn; ++c) {
                            auto ea = basis_vec(dl, a), eb = basis_vec(dm, b),
                                 ec = basis_vec(dn, c);
                            if (m >= 1)
                                for (int i = 1; i <= l; ++i)
                                    for (int j = 1; j <= m; ++j) {
                                        auto lhs = circ(P, l + m - 1, n, i + j - 1,
                                                        circ(P, l, m, i, ea, eb), ec);
                                        auto rhs = circ(P, l, m + n - 1, i, ea,
                                                        circ(P, m, n, j, eb, ec));
                                        if (!vec_zero(vec_sub(lhs, rhs)))
                                            throw Error(
                                                "operad: sequential associativity fails "
                                                "at (l,m,n,i,j)=(" +
                                                std::to_string(l) + "," + std::to_string(m) +
                                                "," + std::to_string(n) + "," +
                                                std::to_string(i) + "," + std::to_string(j) +
                                                ")");
                                    }
                            // the disjoint-slot law is only an axiom where both
                            // bracketings stay inside the truncation
                            if (l + n - 1 > maxa) continue;
                            for (int i = 1; i <= l; ++i)
                                for (int kk = i + 1; kk <= l; ++kk) {
                                    auto lhs = circ(P, l + m - 1, n, kk + m - 1,
                                                    circ(P, l, m, i, ea, eb), ec);
                                    auto rhs = circ(P, l + n - 1, m, i,
                                                    circ(P, l, n, kk, ea, ec), eb);
                                    if ((fm[b].first % 2 != 0) && (fn[c].first % 2 != 0))
                                        for (auto& x : rhs) x = -x;
                                    if (!vec_zero(vec_sub(lhs, rhs)))
                                        throw Error(
                                            "operad: parallel associativity fails at "
                                            "(l,m,n,i,k)=(" +
                                            std::to_string(l) + "," + std::to_string(m) +
                                            "," + std::to_string(n) + "," +
                                            std::to_string(i) + "," + std::to_string(kk) +
                                            ")");
                                }
                        }
            }
        }
    }

    // equivariance through the assembled infinitesimal composition
    if (!M.present(0)) {
        InfComposition G = gamma1_of(P, false);
        for (const auto& [N, t] : G.dom.amb)
            check_gamma_square(M, N, t, G.map, "operad gamma1");
    }
}

void validate_cooperad(const Cooperad& C) {
    const SymModule& M = C.mod;
    int maxa = M.max_arity();
    if (!M.present(1)) throw ShapeMismatch("cooperad: C(1) is empty");
    if (M.present(0)) throw NotReduced("cooperad: arity-0 component");
    for (int n : M.arities())
        if (!M.cx(n).has_weights())
            throw ShapeMismatch("cooperad: component " + std::to_string(n) +
                                " lacks weight metadata");
    auto fb1 = flat_basis(M.cx(1));
    if (C.counit.rows() != 1 || C.counit.cols() != (int)fb1.size())
        throw ShapeMismatch("cooperad: counit is not a row on C(1)");

    // the coradical-weight-0 part: one dimensional, in arity 1 and degree 0,
    // the counit pairs with it and kills everything else
    int w0 = 0;
    for (int n : M.arities())
        for (const auto& [d, dn] : M.cx(n).dims())
            for (int i = 0; i < dn; ++i)
                if (M.cx(n).weight_of(d, i) == 0) {
                    if (n != 1 || d != 0)
                        throw ShapeMismatch("cooperad: weight-0 content off C(1) degree 0");
                    ++w0;
                }
    if (w0 != 1) throw ShapeMismatch("cooperad: weight-0 part is not one dimensional");
    bool saw = false;
    for (int r = 0; r < (int)fb1.size(); ++r) {
        const Rat& e = C.counit.get(0, r);
        int w = M.cx(1).weight_of(fb1[r].first, fb1[r].second);
        if (w == 0 && e != 0) saw = true;
        if (w != 0 && e != 0)
            throw ShapeMismatch("cooperad: counit does not vanish in positive weight");
    }
    if (!saw) throw ShapeMismatch("cooperad: counit vanishes on the weight-0 part");

    // key inventory, shapes, degree and weight additivity
    auto arities = M.arities();
    for (int m : arities)
        for (int n : arities)
            if (m + n - 1 <= maxa)
                for (int i = 1; i <= m; ++i)
                    if (!C.decomp.count({m, n, i}))
                        throw ShapeMismatch("cooperad: missing decomposition " +
                                            key_str({m, n, i}));
    for (const auto& [k, D] : C.decomp) {
        auto [m, n, i] = k;
        if (m < 1 || n < 1 || i < 1 || i > m || m + n - 1 > maxa || !M.present(m) ||
            !M.present(n))
            throw ShapeMismatch("cooperad: stray decomposition key " + key_str(k));
        int N = m + n - 1;
        if (!M.present(N)) {
            if (D.rows() != M.cx(m).total_dim() * M.cx(n).total_dim() || D.cols() != 0)
                throw ShapeMismatch("cooperad: decomposition " + key_str(k) + " shape");
            continue;
        }
        auto fm = flat_basis(M.cx(m));
        auto fn = flat_basis(M.cx(n));
        auto ft = flat_basis(M.cx(N));
        if (D.rows() != (int)(fm.size() * fn.size()) || D.cols() != (int)ft.size())
            throw ShapeMismatch("cooperad: decomposition " + key_str(k) + " shape");
        for (int c = 0; c < D.cols(); ++c)
            for (int a = 0; a < (int)fm.size(); ++a)
                for (int b = 0; b < (int)fn.size(); ++b) {
                    const Rat& e = D.get(a * (int)fn.size() + b, c);
                    if (e == 0) continue;
                    if (ft[c].first != fm[a].first + fn[b].first)
                        throw DegreeMismatch("cooperad: decomposition " + key_str(k) +
                                             " is not degree additive");
                    int wc = M.cx(N).weight_of(ft[c].first, ft[c].second);
                    int wa = M.cx(m).weight_of(fm[a].first, fm[a].second);
                    int wb = M.cx(n).weight_of(fn[b].first, fn[b].second);
                    if (wc != wa + wb)
                        throw Error("cooperad: decomposition " + key_str(k) +
                                    " is not weight additive");
                }
    }

    // counit laws: (eps⊗id)∘Delta_{(1,N,1)} = id and (id⊗eps)∘Delta_{(N,1,i)} = id
    for (int N : arities) {
        int dN = M.cx(N).total_dim();
        int d1 = M.cx(1).total_dim();
        {
            const RationalMatrix& D = C.decomp.at({1, N, 1});
            for (int c = 0; c < dN; ++c) {
                std::vector<Rat> v((size_t)dN);
                for (int a = 0; a < d1; ++a)
                    for (int b = 0; b < dN; ++b) {
                        const Rat& e = D.get(a * dN + b, c);
                        if (e != 0) v[b] += C.counit.get(0, a) * e;
                    }
                if (!vec_zero(vec_sub(v, basis_vec(dN, c))))
                    throw Error("cooperad: left counit law fails at arity " +
                                std::to_string(N));
            }
        }
        for (int i = 1; i <= N; ++i) {
            const RationalMatrix& D = C.decomp.at({N, 1, i});
            for (int c = 0; c < dN; ++c) {
                std::vector<Rat> v((size_t)dN);
                for (int a = 0; a < dN; ++a)
                    for (int b = 0; b < d1; ++b) {
                        const Rat& e = D.get(a * d1 + b, c);
                        if (e != 0) v[a] += e * C.counit.get(0, b);
                    }
                if (!vec_zero(vec_sub(v, basis_vec(dN, c))))
                    throw Error("cooperad: right counit law fails at arity " +
                                std::to_string(N) + ", slot " + std::to_string(i));
            }
        }
    }

    // chain rule: (d⊗1 + (-1)^{|a|} 1⊗d) ∘ Delta = Delta ∘ d
    for (const auto& [k, D] : C.decomp) {
        auto [m, n, i] = k;
        int N = m + n - 1;
        if (!M.present(N)) continue;
        RationalMatrix Dm = flat_diff(M.cx(m)), Dn = flat_diff(M.cx(n)),
                       Dt = flat_diff(M.cx(N));
        auto fm = flat_basis(M.cx(m));
        int am = (int)fm.size(), bn = M.cx(n).total_dim();
        for (int c = 0; c < D.cols(); ++c) {
            std::vector<Rat> lhs((size_t)D.rows()), rhs((size_t)D.rows());
            for (int a = 0; a < am; ++a)
                for (int b = 0; b < bn; ++b) {
                    const Rat& e = D.get(a * bn + b, c);
                    if (e == 0) continue;
                    for (int q = 0; q < am; ++q) {
                        const Rat& f = Dm.get(q, a);
                        if (f != 0) lhs[q * bn + b] += f * e;
                    }
                    Rat sgn = (fm[a].first % 2 != 0) ? -1 : 1;
                    for (int q = 0; q < bn; ++q) {
                        const Rat& f = Dn.get(q, b);
                        if (f != 0) lhs[a * bn + q] += sgn * f * e;
                    }
                }
            for (int r = 0; r < Dt.rows(); ++r) {
                const Rat& f = Dt.get(r, c);
                if (f == 0) continue;
                for (int q = 0; q < D.rows(); ++q) {
                    const Rat& e = D.get(q, r);
                    if (e != 0) rhs[q] += e * f;
                }
            }
            if (!vec_zero(vec_sub(lhs, rhs)))
                throw Error("cooperad: chain rule fails at " + key_str(k));
        }
    }

    // the full infinitesimal decomposition: chain map, equivariant, contiguous
    // components matching the stored decompositions, weight additive
    CompositeData cod = inf_composite_full(M, unit_symmod(maxa), M, maxa, false);
    for (const auto& [N, t] : cod.amb) {
        if (!M.present(N)) continue;
        // shapes
        for (const auto& [d, dn] : M.cx(N).dims()) {
            int cd = t.coinv.dim(d);
            bool have = C.d1.comp.count(N) && C.d1.comp.at(N).count(d);
            int rows = have ? C.d1.comp.at(N).at(d).rows() : 0;
            int cols = have ? C.d1.comp.at(N).at(d).cols() : 0;
            if (have && (rows != cd || cols != dn))
                throw ShapeMismatch("cooperad: Delta_(1) shape at arity " +
                                    std::to_string(N) + ", degree " + std::to_string(d));
            if (!have && cd > 0 && dn > 0) continue;  // treated as zero
        }
        // chain + equivariance: transpose-free direct check, columns indexed by C(N)
        for (const auto& [d, dn] : M.cx(N).dims()) {
            if (!(C.d1.comp.count(N) && C.d1.comp.at(N).count(d))) continue;
            const RationalMatrix& Dd = C.d1.comp.at(N).at(d);
            int cd = t.coinv.dim(d), cd1 = t.coinv.dim(d - 1);
            RationalMatrix dT = t.coinv.diff(d);
            RationalMatrix dC = M.cx(N).diff(d);
            const RationalMatrix* D1 = (C.d1.comp.count(N) && C.d1.comp.at(N).count(d - 1))
                                           ? &C.d1.comp.at(N).at(d - 1)
                                           : nullptr;
            for (int c = 0; c < dn; ++c) {
                std::vector<Rat> lhs((size_t)cd1), rhs((size_t)cd1);
                for (int r = 0; r < cd; ++r) {
                    const Rat& e = Dd.get(r, c);
                    if (e == 0) continue;
                    for (int q = 0; q < cd1; ++q) {
                        const Rat& f = dT.get(q, r);
                        if (f != 0) lhs[q] += f * e;
                    }
                }
                if (D1)
                    for (int r = 0; r < dC.rows(); ++r) {
                        const Rat& f = dC.get(r, c);
                        if (f == 0) continue;
                        for (int q = 0; q < cd1; ++q) {
                            const Rat& e = D1->get(q, r);
                            if (e != 0) rhs[q] += e * f;
                        }
                    }
                if (!vec_zero(vec_sub(lhs, rhs)))
                    throw Error("cooperad: Delta_(1) chain rule fails at arity " +
                                std::to_string(N) + ", degree " + std::to_string(d));
            }
            for (int gt = 0; gt + 1 < N; ++gt) {
                Perm s = adjacent_transposition(N, gt);
                RationalMatrix aC = M.act(N, s, d);
                bool have = (int)t.gens.size() > gt && t.gens[gt].count(d);
                for (int c = 0; c < dn; ++c) {
                    std::vector<Rat> lhs((size_t)cd), rhs((size_t)cd);
                    for (int r = 0; r < cd; ++r) {
                        const Rat& e = Dd.get(r, c);
                        if (e == 0) continue;
                        if (have) {
                            const RationalMatrix& aT = t.gens[gt].at(d);
                            for (int q = 0; q < cd; ++q) {
                                const Rat& f = aT.get(q, r);
                                if (f != 0) lhs[q] += f * e;
                            }
                        } else {
                            lhs[r] += e;
                        }
                    }
                    for (int r = 0; r < aC.rows(); ++r) {
                        const Rat& f = aC.get(r, c);
                        if (f == 0) continue;
                        for (int q = 0; q < cd; ++q) {
                            const Rat& e = Dd.get(q, r);
                            if (e != 0) rhs[q] += e * f;
                        }
                    }
                    if (!vec_zero(vec_sub(lhs, rhs)))
                        throw Error("cooperad: Delta_(1) equivariance fails at arity " +
                                    std::to_string(N) + ", generator s_" +
                                    std::to_string(gt + 1));
                }
            }
        }
        // contiguous components against decomp; weight additivity of every entry
        for (const auto& [d, cd] : t.coinv.dims()) {
            bool have = C.d1.comp.count(N) && C.d1.comp.at(N).count(d);
            for (int ci = 0; ci < cd; ++ci) {
                const TreeElt& z = t.basis.at(d)[t.canon.at(d)[ci]];
                int j0 = marked_slot(z);
                const Slot& s = z.slots[j0];
                int m = z.k(), n = (int)s.leaves.size();
                bool contig = is_identity_perm(leaf_listing(z));
                for (int c = 0; c < M.cx(N).dim(d); ++c) {
                    Rat v = have ? C.d1.comp.at(N).at(d).get(ci, c) : Rat(0);
                    if (v != 0) {
                        int wsrc = M.cx(N).weight_of(d, c);
                        int wtgt = M.cx(m).weight_of(z.odeg, z.oidx) +
                                   M.cx(n).weight_of(s.deg, s.idx);
                        if (wsrc != wtgt)
                            throw Error("cooperad: Delta_(1) is not weight additive at "
                                        "arity " +
                                        std::to_string(N));
                    }
                    if (!contig) continue;
                    const RationalMatrix& D = C.decomp.at({m, n, j0 + 1});
                    int fa = flat_index(M.cx(m), z.odeg, z.oidx);
                    int fb = flat_index(M.cx(n), s.deg, s.idx);
                    int fc = flat_index(M.cx(N), d, c);
                    if (!(D.get(fa * M.cx(n).total_dim() + fb, fc) == v))
                        throw Error("cooperad: Delta_(1) disagrees with decomposition " +
                                    key_str({m, n, j0 + 1}));
                }
            }
        }
    }
}

// ---- the associative operad: words and block substitution ----

const std::vector<Perm>& perms_of(int n) {
    static std::map<int, std::vector<Perm>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, all_perms(n)).first;
    return it->second;
}

int perm_rank(const Perm& p) {
    // lexicographic rank via the factorial number system
    int n = (int)p.size();
    std::vector<int> rest(n);
    for (int i = 0; i < n; ++i) rest[i] = i;
    int r = 0, fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    for (int i = 0; i < n; ++i) {
        fact = (n - i > 1) ? fact / (n - i) : 1;
        auto pos = std::find(rest.begin(), rest.end(), p[i]) - rest.begin();
        r += (int)pos * fact;
        rest.erase(rest.begin() + pos);
    }
    return r;
}

// word = product order of the inputs; e_alpha has word alpha^{-1}
std::vector<int> word_of(const Perm& alpha) { return perm_inverse(alpha); }
Perm alpha_of(const std::vector<int>& word) { return perm_inverse(word); }

std::vector<int> substituted_word(const std::vector<int>& wa, const std::vector<int>& wb,
                                  int i) {
    int n = (int)wb.size();
    int a = i - 1;
    std::vector<int> w;
    for (int l : wa) {
        if (l < a) w.push_back(l);
        else if (l > a) w.push_back(l + n - 1);
        else
            for (int r : wb) w.push_back(a + r);
    }
    return w;
}

RationalMatrix ass_comp_matrix(int m, int n, int i) {
    int fm = 1, fn = 1, ft = 1;
    for (int t = 2; t <= m; ++t) fm *= t;
    for (int t = 2; t <= n; ++t) fn *= t;
    for (int t = 2; t <= m + n - 1; ++t) ft *= t;
    RationalMatrix C(ft, fm * fn);
    const auto& pm = perms_of(m);
    const auto& pn = perms_of(n);
    for (int a = 0; a < fm; ++a)
        for (int b = 0; b < fn; ++b) {
            auto w = substituted_word(word_of(pm[a]), word_of(pn[b]), i);
            C.set(perm_rank(alpha_of(w)), a * fn + b, 1);
        }
    return C;
}

std::string word_label(const std::vector<int>& w) {
    std::ostringstream os;
    bool wide = (int)w.size() > 9;
    for (size_t t = 0; t < w.size(); ++t) {
        if (t && wide) os << ".";
        os << w[t] + 1;
    }
    return os.str();
}

SymModule ass_symmod(int maxa) {
    std::map<int, SymArity> comp;
    for (int n = 1; n <= maxa; ++n) {
        const auto& ps = perms_of(n);
        std::vector<std::string> lbl;
        for (const auto& p : ps) lbl.push_back(word_label(word_of(p)));
        ChainComplex cx =
            ChainComplex::build({{0, (int)ps.size()}}, {}, {{0, std::move(lbl)}});
        SymArity A{std::move(cx), {}};
        A.gens.resize(n >= 2 ? n - 1 : 0);
        for (int t = 0; t + 1 < n; ++t) {
            RationalMatrix g((int)ps.size(), (int)ps.size());
            Perm s = adjacent_transposition(n, t);
            for (int j = 0; j < (int)ps.size(); ++j)
                g.set(perm_rank(perm_compose(s, ps[j])), j, 1);
            A.gens[t][0] = std::move(g);
        }
        comp[n] = std::move(A);
    }
    return SymModule(maxa, std::move(comp));
}

// ---- Lie inside Ass: left-normed Dynkin brackets ----

// expansion of [[..[x_{l_0}, x_{l_1}], ..], x_{l_r}] as words with signs
std::map<std::vector<int>, Rat> dynkin_expansion(const std::vector<int>& letters) {
    std::map<std::vector<int>, Rat> e{{{letters[0]}, Rat(1)}};
    for (size_t t = 1; t < letters.size(); ++t) {
        std::map<std::vector<int>, Rat> out;
        for (const auto& [w, c] : e) {
            std::vector<int> left = w, right{letters[t]};
            std::vector<int> lw = left;
            lw.push_back(letters[t]);
            out[lw] += c;
            std::vector<int> rw{letters[t]};
            rw.insert(rw.end(), left.begin(), left.end());
            out[rw] -= c;
        }
        e = std::move(out);
    }
    return e;
}

RationalMatrix lie_incl_matrix(int n) {
    int fn = 1;
    for (int t = 2; t <= n; ++t) fn *= t;
    int dl = 1;
    for (int t = 2; t <= n - 1; ++t) dl *= t;
    RationalMatrix B(fn, dl);
    const auto& ps = perms_of(n - 1);
    for (int j = 0; j < (int)ps.size(); ++j) {
        std::vector<int> letters{0};
        for (int r = 0; r < n - 1; ++r) letters.push_back(1 + ps[j][r]);
        for (const auto& [w, c] : dynkin_expansion(letters))
            B.set(perm_rank(alpha_of(w)), j, c);
    }
    return B;
}

std::string bracket_label(const std::vector<int>& letters) {
    std::string s = std::to_string(letters[0] + 1);
    for (size_t t = 1; t < letters.size(); ++t)
        s = "[" + s + "," + std::to_string(letters[t] + 1) + "]";
    return s;
}

// ---- generic one-dimensional sign cooperads (S^c and friends) ----

Rat susp_delta_coeff(const TreeElt& z) {
    int j0 = marked_slot(z);
    int n = (int)z.slots[j0].leaves.size();
    int i = j0 + 1;
    Rat c = perm_sign(leaf_listing(z));
    if ((n - 1) % 2 != 0 && (i - 1) % 2 != 0) c = -c;
    return c;
}

} // namespace

Operad make_operad(SymModule mod, RationalMatrix unit,
                   std::map<std::tuple<int, int, int>, RationalMatrix> comp, bool check) {
    Operad P{std::move(mod), std::move(unit), std::move(comp)};
    if (check) validate_operad(P);
    return P;
}

Cooperad make_cooperad(SymModule mod, RationalMatrix counit,
                       std::map<std::tuple<int, int, int>, RationalMatrix> decomp,
                       SymMap d1, bool check) {
    Cooperad C{std::move(mod), std::move(counit), std::move(decomp), std::move(d1)};
    if (check) validate_cooperad(C);
    return C;
}

InfComposition gamma1(const Operad& P, bool check) { return gamma1_of(P, check); }

InfDecomposition delta1(const Cooperad& C, bool check) {
    InfDecomposition D;
    int maxa = C.mod.max_arity();
    D.cod = inf_composite_full(C.mod, unit_symmod(maxa), C.mod, maxa, check);
    D.map = C.d1;
    return D;
}

namespace {

// full splitting over a contiguous shape with inner arities ns, as the
// transpose schedule of the left-to-right gamma: peel the last inner first,
// each step a stored partial splitting kronned with the identity on the
// already-peeled tail.  No signs appear: every step acts on leading tensor
// factors and all maps have degree zero.
RationalMatrix peel_contiguous(const Cooperad& C, const std::vector<int>& ns) {
    const SymModule& M = C.mod;
    int k = (int)ns.size(), n = 0;
    for (int s : ns) n += s;
    RationalMatrix D = RationalMatrix::identity(M.cx(n).total_dim());
    int tail = 1;
    for (int s = k; s >= 1; --s) {
        int pre = 0;
        for (int r = 0; r + 1 < s; ++r) pre += ns[r];
        Key key{k - s + 1 + pre, ns[s - 1], 1 + pre};
        auto it = C.decomp.find(key);
        if (it == C.decomp.end())
            throw Error("full_decomposition: missing splitting " + key_str(key));
        D = RationalMatrix::kron(it->second, RationalMatrix::identity(tail)) * D;
        tail *= M.cx(ns[s - 1]).total_dim();
    }
    return D;
}

} // namespace

Decomposition full_decomposition(const Cooperad& C, bool check) {
    const SymModule& M = C.mod;
    int maxa = M.max_arity();
    Decomposition out;
    out.cod = composite_full(M, M, maxa, check);
    out.map.deg = 0;
    for (const auto& [n, t] : out.cod.amb) {
        if (t.coinv.is_zero() || !M.present(n)) continue;
        // splitting matrices cached by the leaf-set shape; the coefficient at
        // a tree with leaf listing L is the contiguous coefficient of rho(L)
        // applied to the source
        std::map<std::vector<std::vector<int>>, RationalMatrix> shapes;
        for (const auto& [d, cl] : t.canon) {
            int sd = M.cx(n).dim(d);
            if (sd == 0 || cl.empty()) continue;
            RationalMatrix mat((int)cl.size(), sd);
            for (int ci = 0; ci < (int)cl.size(); ++ci) {
                const TreeElt& z = t.basis.at(d)[cl[ci]];
                std::vector<std::vector<int>> shape;
                for (const auto& s : z.slots) shape.push_back(s.leaves);
                auto it = shapes.find(shape);
                if (it == shapes.end()) {
                    std::vector<int> ns;
                    for (const auto& s : z.slots) ns.push_back((int)s.leaves.size());
                    RationalMatrix S = peel_contiguous(C, ns);
                    Perm L = leaf_listing(z);
                    if (!is_identity_perm(L)) S = S * flat_act(M, n, L);
                    it = shapes.emplace(std::move(shape), std::move(S)).first;
                }
                int kidx = flat_index(M.cx(z.k()), z.odeg, z.oidx);
                for (const auto& s : z.slots) {
                    int nb = (int)s.leaves.size();
                    kidx = kidx * M.cx(nb).total_dim() + flat_index(M.cx(nb), s.deg, s.idx);
                }
                for (int j = 0; j < sd; ++j) {
                    Rat v = it->second.get(kidx, flat_index(M.cx(n), d, j));
                    if (v != 0) mat.set(ci, j, v);
                }
            }
            out.map.comp[n][d] = std::move(mat);
        }
    }
    return out;
}

Operad ass_operad(int max_arity) {
    SymModule M = ass_symmod(max_arity);
    std::map<Key, RationalMatrix> comp;
    for (int m = 1; m <= max_arity; ++m)
        for (int n = 1; m + n - 1 <= max_arity; ++n)
            for (int i = 1; i <= m; ++i) comp[{m, n, i}] = ass_comp_matrix(m, n, i);
    RationalMatrix unit(1, 1);
    unit.set(0, 0, 1);
    return make_operad(std::move(M), std::move(unit), std::move(comp));
}

namespace {

Operad trivial_operad(int lo_arity, int max_arity) {
    std::map<int, SymArity> comp;
    for (int n = lo_arity; n <= max_arity; ++n) {
        ChainComplex cx = ChainComplex::build({{0, 1}}, {}, {{0, {"c" + std::to_string(n)}}});
        SymArity A{std::move(cx), {}};
        A.gens.resize(n >= 2 ? n - 1 : 0);
        comp[n] = std::move(A);
    }
    SymModule M(max_arity, std::move(comp));
    std::map<Key, RationalMatrix> ops;
    RationalMatrix one(1, 1);
    one.set(0, 0, 1);
    for (int m = 1; m <= max_arity; ++m)
        for (int n = lo_arity; m + n - 1 <= max_arity; ++n) {
            if (m + n - 1 < lo_arity) continue;
            for (int i = 1; i <= m; ++i) ops[{m, n, i}] = one;
        }
    RationalMatrix unit(1, 1);
    unit.set(0, 0, 1);
    return make_operad(std::move(M), std::move(unit), std::move(ops));
}

} // namespace

Operad comm_operad(int max_arity) { return trivial_operad(0, max_arity); }
Operad comm_nu_operad(int max_arity) { return trivial_operad(1, max_arity); }

Operad lie_operad(int max_arity) {
    std::map<int, SymArity> comp;
    std::map<int, RationalMatrix> incl;
    for (int n = 1; n <= max_arity; ++n) {
        incl[n] = lie_incl_matrix(n);
        if (rank(incl[n]) != incl[n].cols())
            throw Error("internal: Dynkin elements are dependent at arity " +
                        std::to_string(n));
        std::vector<std::string> lbl;
        const auto& ps = perms_of(n - 1);
        for (const auto& p : ps) {
            std::vector<int> letters{0};
            for (int r = 0; r < n - 1; ++r) letters.push_back(1 + p[r]);
            lbl.push_back(bracket_label(letters));
        }
        ChainComplex cx = ChainComplex::build({{0, incl[n].cols()}}, {}, {{0, std::move(lbl)}});
        SymArity A{std::move(cx), {}};
        A.gens.resize(n >= 2 ? n - 1 : 0);
        for (int t = 0; t + 1 < n; ++t) {
            // rho_Ass(s_t) restricted to the bracket span, solved back
            RationalMatrix g(incl[n].rows(), incl[n].rows());
            Perm s = adjacent_transposition(n, t);
            const auto& ps_n = perms_of(n);
            for (int j = 0; j < (int)ps_n.size(); ++j)
                g.set(perm_rank(perm_compose(s, ps_n[j])), j, 1);
            auto sol = solve(incl[n], g * incl[n]);
            if (!sol)
                throw Error("internal: Lie is not closed under the action at arity " +
                            std::to_string(n));
            A.gens[t][0] = std::move(*sol);
        }
        comp[n] = std::move(A);
    }
    SymModule M(max_arity, std::move(comp));
    std::map<Key, RationalMatrix> ops;
    for (int m = 1; m <= max_arity; ++m)
        for (int n = 1; m + n - 1 <= max_arity; ++n) {
            for (int i = 1; i <= m; ++i) {
                RationalMatrix AC = ass_comp_matrix(m, n, i);
                // columns: Ass-compose the included brackets, then solve back
                int dm = incl[m].cols(), dn = incl[n].cols();
                RationalMatrix B(AC.rows(), dm * dn);
                for (int a = 0; a < dm; ++a)
                    for (int b = 0; b < dn; ++b)
                        for (int ra = 0; ra < incl[m].rows(); ++ra) {
                            const Rat& ca = incl[m].get(ra, a);
                            if (ca == 0) continue;
                            for (int rb = 0; rb < incl[n].rows(); ++rb) {
                                const Rat& cb = incl[n].get(rb, b);
                                if (cb == 0) continue;
                                int col = ra * incl[n].rows() + rb;
                                for (int r = 0; r < AC.rows(); ++r) {
                                    const Rat& e = AC.get(r, col);
                                    if (e != 0) B.set(r, a * dn + b,
                                                            B.get(r, a * dn + b) + ca * cb * e);
                                }
                            }
                        }
                auto sol = solve(incl[m + n - 1], B);
                if (!sol)
                    throw Error("internal: Lie is not closed under o_" + std::to_string(i) +
                                " at arities (" + std::to_string(m) + "," +
                                std::to_string(n) + ")");
                ops[{m, n, i}] = std::move(*sol);
            }
        }
    RationalMatrix unit(1, 1);
    unit.set(0, 0, 1);
    return make_operad(std::move(M), std::move(unit), std::move(ops));
}

namespace {

SymModule one_dim_sign_symmod(int maxa, bool graded, const char* stem) {
    // component n: one generator, degree n-1 when graded else 0, sign action,
    // coradical weight n-1
    std::map<int, SymArity> comp;
    for (int n = 1; n <= maxa; ++n) {
        int d = graded ? n - 1 : 0;
        ChainComplex cx = ChainComplex::build({{d, 1}}, {}, {{d, {stem + std::to_string(n)}}},
                                              {{d, {n - 1}}});
        SymArity A{std::move(cx), {}};
        A.gens.resize(n >= 2 ? n - 1 : 0);
        for (int t = 0; t + 1 < n; ++t) {
            RationalMatrix g(1, 1);
            g.set(0, 0, -1);
            A.gens[t][d] = std::move(g);
        }
        comp[n] = std::move(A);
    }
    return SymModule(maxa, std::move(comp));
}

} // namespace

Operad suspension_operad(int max_arity) {
    SymModule M = one_dim_sign_symmod(max_arity, true, "s");
    std::map<Key, RationalMatrix> ops;
    for (int m = 1; m <= max_arity; ++m)
        for (int n = 1; m + n - 1 <= max_arity; ++n)
            for (int i = 1; i <= m; ++i) {
                RationalMatrix c(1, 1);
                c.set(0, 0, ((n - 1) % 2 != 0 && (i - 1) % 2 != 0) ? -1 : 1);
                ops[{m, n, i}] = std::move(c);
            }
    RationalMatrix unit(1, 1);
    unit.set(0, 0, 1);
    return make_operad(std::move(M), std::move(unit), std::move(ops));
}

namespace {

Cooperad one_dim_cooperad(int maxa, bool graded, const char* stem, bool check) {
    SymModule M = graded ? one_dim_sign_symmod(maxa, true, stem) : SymModule();
    if (!graded) {
        std::map<int, SymArity> comp;
        for (int n = 1; n <= maxa; ++n) {
            ChainComplex cx = ChainComplex::build({{0, 1}}, {},
                                                  {{0, {stem + std::to_string(n)}}},
                                                  {{0, {n - 1}}});
            SymArity A{std::move(cx), {}};
            A.gens.resize(n >= 2 ? n - 1 : 0);
            comp[n] = std::move(A);
        }
        M = SymModule(maxa, std::move(comp));
    }
    std::map<Key, RationalMatrix> dec;
    for (int m = 1; m <= maxa; ++m)
        for (int n = 1; m + n - 1 <= maxa; ++n)
            for (int i = 1; i <= m; ++i) {
                RationalMatrix c(1, 1);
                c.set(0, 0, graded && ((n - 1) % 2 != 0 && (i - 1) % 2 != 0) ? -1 : 1);
                dec[{m, n, i}] = std::move(c);
            }
    SymMap d1;
    d1.deg = 0;
    CompositeData cod = inf_composite_full(M, unit_symmod(maxa), M, maxa, false);
    for (const auto& [N, t] : cod.amb) {
        for (const auto& [d, cd] : t.coinv.dims()) {
            int srcd = M.cx(N).dim(d);
            RationalMatrix out(cd, srcd);
            if (srcd == 1)
                for (int ci = 0; ci < cd; ++ci) {
                    const TreeElt& z = t.basis.at(d)[t.canon.at(d)[ci]];
                    out.set(ci, 0, graded ? susp_delta_coeff(z) : Rat(1));
                }
            d1.comp[N][d] = std::move(out);
        }
    }
    RationalMatrix counit(1, 1);
    counit.set(0, 0, 1);
    return make_cooperad(std::move(M), std::move(counit), std::move(dec), std::move(d1),
                         check);
}

} // namespace

Cooperad cocomm_nu_cooperad(int max_arity) {
    return one_dim_cooperad(max_arity, false, "d", true);
}

Cooperad suspension_cooperad(int max_arity) {
    return one_dim_cooperad(max_arity, true, "t", true);
}

bool suspension_iso_check(const Operad& P, const ChainComplex& V, int max_weight) {
    int maxa = P.mod.max_arity();
    SymModule S = suspension_operad(maxa).mod;
    ChainComplex L = schur(hadamard(S, P.mod), shift(V, 1), max_weight);
    ChainComplex R = schur(P.mod, V, max_weight);
    for (int w = 0; w <= max_weight; ++w) {
        ChainComplex Lw = weight_piece(L, w);
        ChainComplex Rw = shift(weight_piece(R, w), 1);
        if (Lw.dims() != Rw.dims()) return false;
        if (Lw.homology() != Rw.homology()) return false;
    }
    return true;
}

// ---- tensor algebra and coalgebra ----

namespace {

struct WordData {
    ChainComplex cx;
    std::vector<std::vector<int>> flat_words;            // aligned with flat_basis(cx)
    std::map<std::vector<int>, int> flat_of;
};

WordData word_complex(const ChainComplex& V, int W) {
    auto fb = flat_basis(V);
    int vd = (int)fb.size();
    std::map<int, std::vector<std::vector<int>>> per_deg;
    for (int w = 0; w <= W; ++w) {
        if (vd == 0 && w > 0) break;
        // all words of length w over the flat letters, lexicographic
        std::vector<int> word(w, 0);
        while (true) {
            int d = 0;
            for (int t = 0; t < w; ++t) d += fb[word[t]].first;
            per_deg[d].push_back(word);
            int t = w - 1;
            while (t >= 0 && word[t] == vd - 1) word[t--] = 0;
            if (t < 0) break;
            ++word[t];
        }
    }
    std::map<int, int> dims;
    std::map<int, std::vector<std::string>> labels;
    std::map<int, std::vector<int>> weights;
    std::map<std::vector<int>, std::pair<int, int>> pos;
    for (auto& [d, ws] : per_deg) {
        std::stable_sort(ws.begin(), ws.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); });
        dims[d] = (int)ws.size();
        for (int i = 0; i < (int)ws.size(); ++i) {
            pos[ws[i]] = {d, i};
            const auto& w = ws[i];
            std::string lbl;
            if (w.empty()) lbl = "1";
            else
                for (int l : w) {
                    const auto& vl = V.labels(fb[l].first);
                    lbl += vl.empty() ? "v" + std::to_string(l + 1) : vl[fb[l].second];
                }
            labels[d].push_back(lbl);
            weights[d].push_back((int)w.size());
        }
    }
    // differential: sum over letters with the prefix sign
    RationalMatrix DV = flat_diff(V);
    std::map<int, RationalMatrix> diffs;
    for (const auto& [d, ws] : per_deg) {
        if (!dims.count(d - 1)) continue;
        RationalMatrix dm(dims[d - 1], dims[d]);
        for (int j = 0; j < (int)ws.size(); ++j) {
            const auto& w = ws[j];
            int pre = 0;
            for (int t = 0; t < (int)w.size(); ++t) {
                for (int r = 0; r < vd; ++r) {
                    const Rat& e = DV.get(r, w[t]);
                    if (e == 0) continue;
                    std::vector<int> w2 = w;
                    w2[t] = r;
                    auto [d2, i2] = pos.at(w2);
                    Rat c = (pre % 2 != 0) ? -e : e;
                    dm.set(i2, j, dm.get(i2, j) + c);
                }
                pre += fb[w[t]].first;
            }
        }
        if (!dm.is_zero()) diffs[d] = std::move(dm);
    }
    WordData out;
    out.cx = ChainComplex::build(std::move(dims), std::move(diffs), std::move(labels),
                                 std::move(weights));
    for (const auto& [w, di] : pos) {
        out.flat_of[w] = flat_index(out.cx, di.first, di.second);
    }
    out.flat_words.resize((size_t)out.cx.total_dim());
    for (const auto& [w, f] : out.flat_of) out.flat_words[f] = w;
    return out;
}

SymModule arity_one_module(ChainComplex cx) {
    std::map<int, SymArity> comp;
    comp[1] = SymArity{std::move(cx), {}};
    return SymModule(1, std::move(comp));
}

} // namespace

Operad tensor_algebra(const ChainComplex& V, int max_weight) {
    WordData wd = word_complex(V, max_weight);
    int td = wd.cx.total_dim();
    RationalMatrix C(td, td * td);
    for (int a = 0; a < td; ++a)
        for (int b = 0; b < td; ++b) {
            std::vector<int> w = wd.flat_words[a];
            const auto& v = wd.flat_words[b];
            if ((int)(w.size() + v.size()) > max_weight) continue;
            w.insert(w.end(), v.begin(), v.end());
            C.set(wd.flat_of.at(w), a * td + b, 1);
        }
    RationalMatrix unit(td, 1);
    unit.set(wd.flat_of.at({}), 0, 1);
    std::map<Key, RationalMatrix> ops;
    ops[{1, 1, 1}] = std::move(C);
    return make_operad(arity_one_module(std::move(wd.cx)), std::move(unit), std::move(ops));
}

Operad tensor_algebra(const SymModule& V, int max_weight) {
    for (int n : V.arities())
        if (n != 1)
            throw ArityViolation("tensor_algebra: component in arity " + std::to_string(n));
    if (!V.present(1)) throw ArityViolation("tensor_algebra: arity-1 component is empty");
    return tensor_algebra(V.cx(1), max_weight);
}

Cooperad tensor_coalgebra(const ChainComplex& V, int max_weight) {
    WordData wd = word_complex(V, max_weight);
    int td = wd.cx.total_dim();
    RationalMatrix D(td * td, td);
    for (int c = 0; c < td; ++c) {
        const auto& w = wd.flat_words[c];
        for (size_t cut = 0; cut <= w.size(); ++cut) {
            std::vector<int> u(w.begin(), w.begin() + cut), v(w.begin() + cut, w.end());
            D.set(wd.flat_of.at(u) * td + wd.flat_of.at(v), c, 1);
        }
    }
    RationalMatrix counit(1, td);
    counit.set(0, wd.flat_of.at({}), 1);
    SymModule M = arity_one_module(wd.cx);
    // Delta_(1) on the arity-1 trees (outer word, marked slot word)
    CompositeData cod = inf_composite_full(M, unit_symmod(1), M, 1, false);
    SymMap d1;
    d1.deg = 0;
    const Tree2& t = cod.amb.at(1);
    auto fbc = flat_basis(M.cx(1));
    for (const auto& [d, cd] : t.coinv.dims()) {
        RationalMatrix out(cd, M.cx(1).dim(d));
        for (int ci = 0; ci < cd; ++ci) {
            const TreeElt& z = t.basis.at(d)[t.canon.at(d)[ci]];
            const Slot& s = z.slots[0];
            std::vector<int> w = wd.flat_words[flat_index(M.cx(1), z.odeg, z.oidx)];
            const auto& v = wd.flat_words[flat_index(M.cx(1), s.deg, s.idx)];
            w.insert(w.end(), v.begin(), v.end());
            if ((int)w.size() > max_weight) continue;
            int f = wd.flat_of.at(w);
            if (fbc[f].first == d) out.set(ci, fbc[f].second, 1);
        }
        d1.comp[1][d] = std::move(out);
    }
    std::map<Key, RationalMatrix> dec;
    dec[{1, 1, 1}] = std::move(D);
    return make_cooperad(std::move(M), std::move(counit), std::move(dec), std::move(d1));
}

Cooperad tensor_coalgebra(const SymModule& V, int max_weight) {
    for (int n : V.arities())
        if (n != 1)
            throw ArityViolation("tensor_coalgebra: component in arity " + std::to_string(n));
    if (!V.present(1)) throw ArityViolation("tensor_coalgebra: arity-1 component is empty");
    return tensor_coalgebra(V.cx(1), max_weight);
}

// ---- algebras over operads ----

namespace {

std::vector<int> word_at(int col, int n, int adim) {
    std::vector<int> w(n);
    for (int t = n - 1; t >= 0; --t) {
        w[t] = col % adim;
        col /= adim;
    }
    return w;
}

int word_col(const std::vector<int>& w, int adim) {
    int c = 0;
    for (int l : w) c = c * adim + l;
    return c;
}

// apply the structure map to basis p-element and dense word-coefficient data:
// st(e_p ⊗ word)
std::vector<Rat> st_apply(const RationalMatrix& st, int p, const std::vector<int>& word,
                          int adim) {
    int n = (int)word.size();
    int cols_per_p = 1;
    for (int t = 0; t < n; ++t) cols_per_p *= adim;
    return dense_col(st, p * cols_per_p + word_col(word, adim));
}

void validate_operad_algebra(const OperadAlgebra& A) {
    const SymModule& M = A.op.mod;
    auto fba = flat_basis(A.carrier);
    int ad = (int)fba.size();
    if (ad == 0) throw ShapeMismatch("operad algebra: empty carrier");
    for (int n : M.arities())
        if (!A.structure.count(n))
            throw ShapeMismatch("operad algebra: no structure map for arity " +
                                std::to_string(n));
    RationalMatrix DA = flat_diff(A.carrier);
    for (const auto& [n, st] : A.structure) {
        if (!M.present(n))
            throw ShapeMismatch("operad algebra: structure map for empty arity " +
                                std::to_string(n));
        auto fbp = flat_basis(M.cx(n));
        int pw = 1;
        for (int t = 0; t < n; ++t) pw *= ad;
        if (st.rows() != ad || st.cols() != (int)fbp.size() * pw)
            throw ShapeMismatch("operad algebra: structure shape at arity " +
                                std::to_string(n));
        // degree homogeneity and chain rule
        RationalMatrix DP = flat_diff(M.cx(n));
        for (int p = 0; p < (int)fbp.size(); ++p)
            for (int c = 0; c < pw; ++c) {
                auto w = word_at(c, n, ad);
                int deg = fbp[p].first;
                for (int l : w) deg += fba[l].first;
                auto v = dense_col(st, p * pw + c);
                for (int r = 0; r < ad; ++r)
                    if (v[r] != 0 && fba[r].first != deg)
                        throw DegreeMismatch("operad algebra: structure map not degree 0 "
                                             "at arity " +
                                             std::to_string(n));
                // d(st(p⊗w)) = st(dp⊗w) + sum_t ± st(p⊗..dw_t..)
                std::vector<Rat> lhs((size_t)ad);
                for (int r = 0; r < ad; ++r) {
                    if (v[r] == 0) continue;
                    for (int q = 0; q < ad; ++q) {
                        const Rat& f = DA.get(q, r);
                        if (f != 0) lhs[q] += f * v[r];
                    }
                }
                std::vector<Rat> rhs((size_t)ad);
                for (int r = 0; r < DP.rows(); ++r) {
                    const Rat& f = DP.get(r, p);
                    if (f == 0) continue;
                    auto u = st_apply(st, r, w, ad);
                    for (int q = 0; q < ad; ++q) rhs[q] += f * u[q];
                }
                int pre = fbp[p].first;
                for (int t = 0; t < n; ++t) {
                    Rat sgn = (pre % 2 != 0) ? -1 : 1;
                    for (int r = 0; r < ad; ++r) {
                        const Rat& f = DA.get(r, w[t]);
                        if (f == 0) continue;
                        auto w2 = w;
                        w2[t] = r;
                        auto u = st_apply(st, p, w2, ad);
                        for (int q = 0; q < ad; ++q) rhs[q] += sgn * f * u[q];
                    }
                    pre += fba[w[t]].first;
                }
                if (!vec_zero(vec_sub(lhs, rhs)))
                    throw Error("operad algebra: chain rule fails at arity " +
                                std::to_string(n));
            }
        // equivariance: st ∘ (rho(s)⊗place(s)) = st
        for (int gt = 0; gt + 1 < n; ++gt) {
            Perm s = adjacent_transposition(n, gt);
            for (int p = 0; p < (int)fbp.size(); ++p) {
                RationalMatrix aP = M.act(n, s, fbp[p].first);
                for (int c = 0; c < pw; ++c) {
                    auto w = word_at(c, n, ad);
                    std::vector<int> degs;
                    for (int l : w) degs.push_back(fba[l].first);
                    // place action: letters permuted by s with the Koszul sign
                    std::vector<int> w2(n);
                    for (int t = 0; t < n; ++t) w2[t] = w[s[t]];
                    Rat sgn = graded_place_sign(s, degs);
                    std::vector<Rat> lhs((size_t)ad);
                    for (int q = 0; q < aP.rows(); ++q) {
                        const Rat& f = aP.get(q, fbp[p].second);
                        if (f == 0) continue;
                        int qf = flat_index(M.cx(n), fbp[p].first, q);
                        auto u = st_apply(st, qf, w2, ad);
                        for (int r = 0; r < ad; ++r) lhs[r] += sgn * f * u[r];
                    }
                    auto rhs = st_apply(st, p, w, ad);
                    if (!vec_zero(vec_sub(lhs, rhs)))
                        throw Error("operad algebra: equivariance fails at arity " +
                                    std::to_string(n) + ", generator s_" +
                                    std::to_string(gt + 1));
                }
            }
        }
    }
    // unit law
    {
        const RationalMatrix& st1 = A.structure.at(1);
        auto u = dense_col(A.op.unit, 0);
        for (int a = 0; a < ad; ++a) {
            std::vector<Rat> v((size_t)ad);
            for (int r = 0; r < (int)u.size(); ++r) {
                if (u[r] == 0) continue;
                auto x = st_apply(st1, r, {a}, ad);
                for (int q = 0; q < ad; ++q) v[q] += u[r] * x[q];
            }
            if (!vec_zero(vec_sub(v, basis_vec(ad, a))))
                throw Error("operad algebra: unit law fails");
        }
    }
    // compatibility with the partial compositions
    for (const auto& [k, C] : A.op.comp) {
        auto [m, n, i] = k;
        int N = m + n - 1;
        if (!A.structure.count(N) || !A.structure.count(m) || !A.structure.count(n))
            continue;
        const RationalMatrix& stN = A.structure.at(N);
        const RationalMatrix& stm = A.structure.at(m);
        const RationalMatrix& stn = A.structure.at(n);
        auto fbm = flat_basis(M.cx(m));
        auto fbn = flat_basis(M.cx(n));
        int pwN = 1;
        for (int t = 0; t < N; ++t) pwN *= ad;
        for (int p = 0; p < (int)fbm.size(); ++p)
            for (int q = 0; q < (int)fbn.size(); ++q)
                for (int c = 0; c < pwN; ++c) {
                    auto w = word_at(c, N, ad);
                    // lhs: st((p o_i q) ⊗ w)
                    std::vector<Rat> lhs((size_t)ad);
                    int col = p * (int)fbn.size() + q;
                    for (int r = 0; r < C.rows(); ++r) {
                        const Rat& e = C.get(r, col);
                        if (e == 0) continue;
                        auto u = st_apply(stN, r, w, ad);
                        for (int x = 0; x < ad; ++x) lhs[x] += e * u[x];
                    }
                    // rhs: st(p ⊗ (.., st(q ⊗ block), ..)) with the Koszul sign
                    // of moving q past the first i-1 letters
                    std::vector<int> block(w.begin() + (i - 1), w.begin() + (i - 1) + n);
                    auto inner = st_apply(stn, q, block, ad);
                    int pre = 0;
                    for (int t = 0; t < i - 1; ++t) pre += fba[w[t]].first;
                    Rat sgn = (fbn[q].first % 2 != 0 && pre % 2 != 0) ? -1 : 1;
                    std::vector<Rat> rhs((size_t)ad);
                    for (int r = 0; r < ad; ++r) {
                        if (inner[r] == 0) continue;
                        std::vector<int> w2(w.begin(), w.begin() + (i - 1));
                        w2.push_back(r);
                        w2.insert(w2.end(), w.begin() + (i - 1) + n, w.end());
                        auto u = st_apply(stm, p, w2, ad);
                        for (int x = 0; x < ad; ++x) rhs[x] += sgn * inner[r] * u[x];
                    }
                    if (!vec_zero(vec_sub(lhs, rhs)))
                        throw Error("operad algebra: composition compatibility fails at " +
                                    key_str(k));
                }
    }
}

} // namespace

OperadAlgebra make_operad_algebra(Operad op, ChainComplex carrier,
                                  std::map<int, RationalMatrix> structure, bool check) {
    OperadAlgebra A{std::move(op), std::move(carrier), std::move(structure)};
    if (check) validate_operad_algebra(A);
    return A;
}

namespace {

void validate_cooperad_coalgebra(const CooperadCoalgebra& A) {
    const SymModule& M = A.coop.mod;
    if (!A.carrier.has_weights())
        throw ShapeMismatch("cooperad coalgebra: carrier lacks weight metadata");
    auto fba = flat_basis(A.carrier);
    int ad = (int)fba.size();
    for (int n : M.arities())
        if (!A.structure.count(n))
            throw ShapeMismatch("cooperad coalgebra: no structure map for arity " +
                                std::to_string(n));
    RationalMatrix DA = flat_diff(A.carrier);
    for (const auto& [n, st] : A.structure) {
        if (!M.present(n))
            throw ShapeMismatch("cooperad coalgebra: structure map for empty arity " +
                                std::to_string(n));
        auto fbc = flat_basis(M.cx(n));
        int pw = 1;
        for (int t = 0; t < n; ++t) pw *= ad;
        if (st.rows() != (int)fbc.size() * pw || st.cols() != ad)
            throw ShapeMismatch("cooperad coalgebra: structure shape at arity " +
                                std::to_string(n));
        for (int a = 0; a < ad; ++a) {
            int wa = A.carrier.weight_of(fba[a].first, fba[a].second);
            for (int p = 0; p < (int)fbc.size(); ++p)
                for (int c = 0; c < pw; ++c) {
                    const Rat& e = st.get(p * pw + c, a);
                    if (e == 0) continue;
                    auto w = word_at(c, n, ad);
                    int deg = fbc[p].first, wt = M.cx(n).weight_of(fbc[p].first, fbc[p].second);
                    for (int l : w) {
                        deg += fba[l].first;
                        wt += A.carrier.weight_of(fba[l].first, fba[l].second);
                    }
                    if (deg != fba[a].first)
                        throw DegreeMismatch("cooperad coalgebra: not degree 0 at arity " +
                                             std::to_string(n));
                    if (wt != wa)
                        throw Error("cooperad coalgebra: weight is not respected at arity " +
                                    std::to_string(n));
                }
        }
        // invariance: (rho(s)⊗place(s)) ∘ st = st
        for (int gt = 0; gt + 1 < n; ++gt) {
            Perm s = adjacent_transposition(n, gt);
            for (int a = 0; a < ad; ++a) {
                std::vector<Rat> moved((size_t)st.rows());
                for (int p = 0; p < (int)fbc.size(); ++p)
                    for (int c = 0; c < pw; ++c) {
                        const Rat& e = st.get(p * pw + c, a);
                        if (e == 0) continue;
                        auto w = word_at(c, n, ad);
                        std::vector<int> degs;
                        for (int l : w) degs.push_back(fba[l].first);
                        std::vector<int> w2(n);
                        for (int t = 0; t < n; ++t) w2[t] = w[s[t]];
                        Rat sgn = graded_place_sign(s, degs);
                        RationalMatrix aC = M.act(n, s, fbc[p].first);
                        for (int r = 0; r < aC.rows(); ++r) {
                            const Rat& f = aC.get(r, fbc[p].second);
                            if (f == 0) continue;
                            int rf = flat_index(M.cx(n), fbc[p].first, r);
                            moved[rf * pw + word_col(w2, ad)] += sgn * f * e;
                        }
                    }
                for (int r = 0; r < st.rows(); ++r)
                    if (!(moved[r] == st.get(r, a)))
                        throw Error("cooperad coalgebra: image is not invariant at arity " +
                                    std::to_string(n));
            }
        }
        // chain rule: (d_C⊗1 + ±1⊗d_A) ∘ st = st ∘ d_A
        RationalMatrix DC = flat_diff(M.cx(n));
        for (int a = 0; a < ad; ++a) {
            std::vector<Rat> lhs((size_t)st.rows()), rhs((size_t)st.rows());
            for (int p = 0; p < (int)fbc.size(); ++p)
                for (int c = 0; c < pw; ++c) {
                    const Rat& e = st.get(p * pw + c, a);
                    if (e == 0) continue;
                    auto w = word_at(c, n, ad);
                    for (int r = 0; r < DC.rows(); ++r) {
                        const Rat& f = DC.get(r, p);
                        if (f != 0) lhs[r * pw + c] += f * e;
                    }
                    int pre = fbc[p].first;
                    for (int t = 0; t < n; ++t) {
                        Rat sgn = (pre % 2 != 0) ? -1 : 1;
                        for (int r = 0; r < ad; ++r) {
                            const Rat& f = DA.get(r, w[t]);
                            if (f == 0) continue;
                            auto w2 = w;
                            w2[t] = r;
                            lhs[p * pw + word_col(w2, ad)] += sgn * f * e;
                        }
                        pre += fba[w[t]].first;
                    }
                }
            for (int r = 0; r < ad; ++r) {
                const Rat& f = DA.get(r, a);
                if (f == 0) continue;
                for (int q = 0; q < st.rows(); ++q) {
                    const Rat& e = st.get(q, r);
                    if (e != 0) rhs[q] += e * f;
                }
            }
            if (!vec_zero(vec_sub(lhs, rhs)))
                throw Error("cooperad coalgebra: chain rule fails at arity " +
                            std::to_string(n));
        }
    }
    // counit: (eps⊗id) ∘ st_1 = id
    {
        const RationalMatrix& st1 = A.structure.at(1);
        int d1 = M.cx(1).total_dim();
        for (int a = 0; a < ad; ++a) {
            std::vector<Rat> v((size_t)ad);
            for (int p = 0; p < d1; ++p)
                for (int b = 0; b < ad; ++b) {
                    const Rat& e = st1.get(p * ad + b, a);
                    if (e != 0) v[b] += A.coop.counit.get(0, p) * e;
                }
            if (!vec_zero(vec_sub(v, basis_vec(ad, a))))
                throw Error("cooperad coalgebra: counit law fails");
        }
    }
}

} // namespace

CooperadCoalgebra make_cooperad_coalgebra(Cooperad coop, ChainComplex carrier,
                                          std::map<int, RationalMatrix> structure,
                                          bool check) {
    CooperadCoalgebra A{std::move(coop), std::move(carrier), std::move(structure)};
    if (check) validate_cooperad_coalgebra(A);
    return A;
}

// ---- Lie algebras from structure constants ----

namespace {

using Bracket = std::map<std::pair<int, int>, std::vector<std::pair<int, Rat>>>;

std::vector<std::vector<Rat>> bracket_table(const ChainComplex& A, const Bracket& br) {
    auto fb = flat_basis(A);
    int ad = (int)fb.size();
    std::vector<std::vector<Rat>> tab((size_t)ad * ad, std::vector<Rat>((size_t)ad));
    std::vector<bool> given((size_t)ad * ad, false);
    for (const auto& [ij, terms] : br) {
        auto [i, j] = ij;
        if (i < 0 || i >= ad || j < 0 || j >= ad)
            throw ShapeMismatch("bracket constants reference basis element out of range");
        given[(size_t)i * ad + j] = true;
        for (const auto& [k, c] : terms) {
            if (k < 0 || k >= ad)
                throw ShapeMismatch("bracket constants reference basis element out of range");
            tab[(size_t)i * ad + j][k] += c;
            if (c != 0 && fb[k].first != fb[i].first + fb[j].first)
                throw DegreeMismatch("bracket of (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") is not degree additive");
        }
    }
    for (int i = 0; i < ad; ++i)
        for (int j = 0; j < ad; ++j) {
            if (given[(size_t)i * ad + j] && !given[(size_t)j * ad + i]) {
                // graded antisymmetry fill: [x_j,x_i] = -(-1)^{|i||j|}[x_i,x_j]
                Rat s = (fb[i].first % 2 != 0 && fb[j].first % 2 != 0) ? 1 : -1;
                for (int k = 0; k < ad; ++k) tab[(size_t)j * ad + i][k] = s * tab[(size_t)i * ad + j][k];
                given[(size_t)j * ad + i] = true;
            }
        }
    for (int i = 0; i < ad; ++i)
        for (int j = 0; j < ad; ++j) {
            // [x_j,x_i] = -(-1)^{|x_i||x_j|}[x_i,x_j]
            Rat s = (fb[i].first % 2 != 0 && fb[j].first % 2 != 0) ? 1 : -1;
            for (int k = 0; k < ad; ++k)
                if (Rat(tab[(size_t)j * ad + i][k] - s * tab[(size_t)i * ad + j][k]) != 0)
                    throw AntisymmetryFailure("antisymmetry fails on (" + std::to_string(i) +
                                              "," + std::to_string(j) + ")");
        }
    return tab;
}

std::vector<Rat> bracket_apply(const std::vector<std::vector<Rat>>& tab, int ad,
                               const std::vector<Rat>& x, const std::vector<Rat>& y) {
    std::vector<Rat> out((size_t)ad);
    for (int i = 0; i < ad; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < ad; ++j) {
            if (y[j] == 0) continue;
            const auto& t = tab[(size_t)i * ad + j];
            Rat c = x[i] * y[j];
            for (int k = 0; k < ad; ++k)
                if (t[k] != 0) out[k] += c * t[k];
        }
    }
    return out;
}

} // namespace

OperadAlgebra lie_algebra_from_constants(const ChainComplex& carrier, const Bracket& br,
                                         int max_arity) {
    auto fb = flat_basis(carrier);
    int ad = (int)fb.size();
    auto tab = bracket_table(carrier, br);
    // graded Jacobi in Leibniz form: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]
    for (int i = 0; i < ad; ++i)
        for (int j = 0; j < ad; ++j)
            for (int k = 0; k < ad; ++k) {
                auto ei = basis_vec(ad, i), ej = basis_vec(ad, j), ek = basis_vec(ad, k);
                auto lhs = bracket_apply(tab, ad, ei, bracket_apply(tab, ad, ej, ek));
                auto t1 = bracket_apply(tab, ad, bracket_apply(tab, ad, ei, ej), ek);
                auto t2 = bracket_apply(tab, ad, ej, bracket_apply(tab, ad, ei, ek));
                Rat s = (fb[i].first % 2 != 0 && fb[j].first % 2 != 0) ? -1 : 1;
                for (int r = 0; r < ad; ++r) t1[r] += s * t2[r];
                if (!vec_zero(vec_sub(lhs, t1)))
                    throw JacobiFailure("Jacobi fails on (" + std::to_string(i) + "," +
                                        std::to_string(j) + "," + std::to_string(k) + ")");
            }
    // Leibniz rule for the differential
    RationalMatrix DA = flat_diff(carrier);
    for (int i = 0; i < ad; ++i)
        for (int j = 0; j < ad; ++j) {
            auto ei = basis_vec(ad, i), ej = basis_vec(ad, j);
            auto b = bracket_apply(tab, ad, ei, ej);
            std::vector<Rat> lhs((size_t)ad);
            for (int r = 0; r < ad; ++r) {
                if (b[r] == 0) continue;
                for (int q = 0; q < ad; ++q) {
                    const Rat& f = DA.get(q, r);
                    if (f != 0) lhs[q] += f * b[r];
                }
            }
            auto rhs = bracket_apply(tab, ad, dense_col(DA, i), ej);
            Rat s = (fb[i].first % 2 != 0) ? -1 : 1;
            auto t2 = bracket_apply(tab, ad, ei, dense_col(DA, j));
            for (int r = 0; r < ad; ++r) rhs[r] += s * t2[r];
            if (!vec_zero(vec_sub(lhs, rhs)))
                throw LeibnizFailure("Leibniz rule fails on (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
        }
    Operad L = lie_operad(max_arity);
    std::map<int, RationalMatrix> st;
    for (int n : L.mod.arities()) {
        int dl = L.mod.cx(n).dim(0);
        int pw = 1;
        for (int t = 0; t < n; ++t) pw *= ad;
        RationalMatrix m(ad, dl * pw);
        const auto& ps = perms_of(n - 1);
        for (int p = 0; p < dl; ++p) {
            // the Dynkin element visits the letters in the order 0, sigma+1
            std::vector<int> L0{0};
            for (int r = 0; r < n - 1; ++r) L0.push_back(1 + ps[p][r]);
            for (int c = 0; c < pw; ++c) {
                auto w = word_at(c, n, ad);
                std::vector<int> degs;
                for (int l : w) degs.push_back(fb[l].first);
                Rat sgn = graded_place_sign(L0, degs);
                std::vector<Rat> v = basis_vec(ad, w[L0[0]]);
                for (int t = 1; t < n; ++t)
                    v = bracket_apply(tab, ad, v, basis_vec(ad, w[L0[t]]));
                for (int r = 0; r < ad; ++r)
                    if (v[r] != 0) m.set(r, p * pw + c, sgn * v[r]);
            }
        }
        st[n] = std::move(m);
    }
    return make_operad_algebra(std::move(L), carrier, std::move(st));
}

OperadAlgebra sl2_algebra(int max_arity) {
    ChainComplex A = ChainComplex::build({{0, 3}}, {}, {{0, {"e", "f", "h"}}});
    Bracket br;
    br[{0, 1}] = {{2, Rat(1)}};
    br[{2, 0}] = {{0, Rat(2)}};
    br[{2, 1}] = {{1, Rat(-2)}};
    return lie_algebra_from_constants(A, br, max_arity);
}

OperadAlgebra heisenberg3_algebra(int max_arity) {
    ChainComplex A = ChainComplex::build({{0, 3}}, {}, {{0, {"x", "y", "z"}}});
    Bracket br;
    br[{0, 1}] = {{2, Rat(1)}};
    return lie_algebra_from_constants(A, br, max_arity);
}

OperadAlgebra abelian_algebra(int dim, int max_arity) {
    if (dim < 1) throw ShapeMismatch("abelian_algebra: dimension must be positive");
    std::vector<std::string> lbl;
    for (int i = 0; i < dim; ++i) lbl.push_back("a" + std::to_string(i + 1));
    ChainComplex A = ChainComplex::build({{0, dim}}, {}, {{0, std::move(lbl)}});
    return lie_algebra_from_constants(A, {}, max_arity);
}

} // namespace opforge
