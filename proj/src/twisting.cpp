#include "opforge/twisting.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "opforge/linalg.hpp"

namespace opforge {

namespace {

int fdim(const SymModule& M, int n) { return M.present(n) ? M.cx(n).total_dim() : 0; }

std::vector<Rat> basis_vec(int dim, int j) {
    std::vector<Rat> v((size_t)dim);
    v[(size_t)j] = 1;
    return v;
}

int marked_slot(const TreeElt& z) {
    for (int j = 0; j < z.k(); ++j)
        if (z.slots[(size_t)j].color == 1) return j;
    throw Error("internal: tree element has no marked slot");
}

// bilinear o_i on dense flat vectors; absent keys act as zero
std::vector<Rat> circ(const Operad& P, int m, int n, int i, const std::vector<Rat>& u,
                      const std::vector<Rat>& v) {
    std::vector<Rat> out((size_t)fdim(P.mod, m + n - 1));
    auto it = P.comp.find({m, n, i});
    if (it == P.comp.end()) return out;
    int bn = (int)v.size();
    for (int a = 0; a < (int)u.size(); ++a) {
        if (u[(size_t)a] == 0) continue;
        for (int b = 0; b < bn; ++b) {
            if (v[(size_t)b] == 0) continue;
            Rat uv = u[(size_t)a] * v[(size_t)b];
            int col = a * bn + b;
            for (int r = 0; r < (int)out.size(); ++r) {
                const Rat& e = it->second.get(r, col);
                if (e != 0) out[(size_t)r] += uv * e;
            }
        }
    }
    return out;
}

std::vector<Rat> apply_flat_act(const SymModule& M, int n, const Perm& p,
                                const std::vector<Rat>& v) {
    RationalMatrix A = flat_act(M, n, p);
    std::vector<Rat> w(v.size());
    for (const auto& [rc, e] : A.entries())
        if (v[(size_t)rc.second] != 0) w[(size_t)rc.first] += e * v[(size_t)rc.second];
    return w;
}

bool is_identity_perm(const Perm& p) {
    for (int i = 0; i < (int)p.size(); ++i)
        if (p[i] != i) return false;
    return true;
}

const TreeElt& canon_tree(const Tree2& t, int d, int ci) {
    return t.basis.at(d)[(size_t)t.canon.at(d)[(size_t)ci]];
}

int coinv_index(const Tree2& t, int d, const TreeElt& z) {
    return t.coinv_of.at(d).at(t.idx_of(d, z));
}

const RationalMatrix* map_block(const std::map<int, std::map<int, RationalMatrix>>& m, int n,
                                int d) {
    auto it = m.find(n);
    if (it == m.end()) return nullptr;
    auto it2 = it->second.find(d);
    return it2 == it->second.end() ? nullptr : &it2->second;
}

// derivation part of the twisted differential on C∘P (and on any composite
// whose slots are P-decorated, such as the inner level of the two-sided
// product): the outer cooperad element sheds one piece through Delta_(1), a
// turns the shed piece into an operad element, and left-to-right composition
// absorbs the P-decorations standing under it.  One matrix per arity and
// source degree, between the coinvariant bases.
std::map<int, std::map<int, RationalMatrix>> right_twist(const Cooperad& C, const Operad& P,
                                                         const ConvolutionElement& a,
                                                         const CompositeData& B,
                                                         const InfDecomposition& D) {
    std::map<int, std::map<int, RationalMatrix>> out;
    for (const auto& [n, t] : B.amb) {
        for (const auto& [d, cl] : t.canon) {
            int rows = t.coinv.dim(d + a.degree);
            if (rows == 0 || cl.empty()) continue;
            RationalMatrix m(rows, (int)cl.size());
            for (int ci = 0; ci < (int)cl.size(); ++ci) {
                const TreeElt& z = t.basis.at(d)[(size_t)cl[ci]];
                int k = z.k();
                const RationalMatrix* d1m = map_block(C.d1.comp, k, z.odeg);
                if (!d1m) continue;
                const Tree2& tk = D.cod.amb.at(k);
                for (int r = 0; r < d1m->rows(); ++r) {
                    Rat lam = d1m->get(r, z.oidx);
                    if (lam == 0) continue;
                    const TreeElt& y = canon_tree(tk, z.odeg, r);
                    int j0 = marked_slot(y);
                    const Slot& ys = y.slots[(size_t)j0];
                    int mm = (int)ys.leaves.size();
                    auto ita = a.comp.find(mm);
                    if (ita == a.comp.end()) continue;
                    auto acol =
                        ita->second.col_dense(flat_index(C.mod.cx(mm), ys.deg, ys.idx));
                    auto fbm = flat_basis(P.mod.cx(mm));
                    for (int rq = 0; rq < (int)acol.size(); ++rq) {
                        if (acol[(size_t)rq] == 0) continue;
                        int qdeg = fbm[(size_t)rq].first;
                        // compose q with the blocks under the shed piece,
                        // left to right, then relabel to the ascending order
                        // of the union
                        std::vector<Rat> cur = basis_vec((int)acol.size(), rq);
                        int curar = mm, pos = 1;
                        std::vector<int> listing;
                        for (int s : ys.leaves) {
                            const Slot& ps = z.slots[(size_t)s];
                            int nt = (int)ps.leaves.size();
                            cur = circ(P, curar, nt, pos,
                                       cur,
                                       basis_vec(fdim(P.mod, nt),
                                                 flat_index(P.mod.cx(nt), ps.deg, ps.idx)));
                            curar += nt - 1;
                            pos += nt;
                            listing.insert(listing.end(), ps.leaves.begin(), ps.leaves.end());
                        }
                        Perm tau = ranks(listing);
                        if (!is_identity_perm(tau))
                            cur = apply_flat_act(P.mod, curar, perm_inverse(tau), cur);
                        // a passes the remaining outer; then the regrouping
                        // sign with q already in place of the shed piece
                        std::vector<int> degs((size_t)y.k(), 0);
                        degs[(size_t)j0] = qdeg;
                        for (const auto& ps : z.slots) degs.push_back(ps.deg);
                        Perm pi;
                        for (int s2 = 0; s2 < y.k(); ++s2) {
                            pi.push_back(s2);
                            for (int t2 : y.slots[(size_t)s2].leaves) pi.push_back(y.k() + t2);
                        }
                        int sgn = graded_place_sign(pi, degs);
                        if (a.degree % 2 != 0 && y.odeg % 2 != 0) sgn = -sgn;
                        Rat base = lam * acol[(size_t)rq] * sgn;
                        auto fbc = flat_basis(P.mod.cx(curar));
                        std::vector<int> uni = listing;
                        std::sort(uni.begin(), uni.end());
                        for (int rc = 0; rc < (int)cur.size(); ++rc) {
                            if (cur[(size_t)rc] == 0) continue;
                            TreeElt w;
                            w.odeg = y.odeg;
                            w.oidx = y.oidx;
                            for (int s2 = 0; s2 < y.k(); ++s2) {
                                if (s2 == j0) {
                                    Slot ns;
                                    ns.leaves = uni;
                                    ns.deg = fbc[(size_t)rc].first;
                                    ns.idx = fbc[(size_t)rc].second;
                                    w.slots.push_back(std::move(ns));
                                } else {
                                    w.slots.push_back(
                                        z.slots[(size_t)y.slots[(size_t)s2].leaves[0]]);
                                }
                            }
                            m.add_at(coinv_index(t, d + a.degree, w), ci,
                                     base * cur[(size_t)rc]);
                        }
                    }
                }
            }
            if (!m.is_zero()) out[n][d] = std::move(m);
        }
    }
    return out;
}

// derivation part of the twisted differential on P∘C: one slot splits through
// the full decomposition, a turns the top of the split into an operad element
// which composes into the root, and the lower pieces become new slots
std::map<int, std::map<int, RationalMatrix>> left_twist(const Operad& P, const Cooperad& C,
                                                        const ConvolutionElement& a,
                                                        const CompositeData& A,
                                                        const Decomposition& FD) {
    std::map<int, std::map<int, RationalMatrix>> out;
    for (const auto& [n, t] : A.amb) {
        for (const auto& [d, cl] : t.canon) {
            int rows = t.coinv.dim(d + a.degree);
            if (rows == 0 || cl.empty()) continue;
            RationalMatrix m(rows, (int)cl.size());
            for (int ci = 0; ci < (int)cl.size(); ++ci) {
                const TreeElt& z = t.basis.at(d)[(size_t)cl[ci]];
                int k = z.k();
                std::vector<Rat> pv = basis_vec(
                    fdim(P.mod, k), flat_index(P.mod.cx(k), z.odeg, z.oidx));
                for (int ts = 0; ts < k; ++ts) {
                    const Slot& cs = z.slots[(size_t)ts];
                    int rr = (int)cs.leaves.size();
                    int pre = 0;
                    for (int s = 0; s < ts; ++s) pre += z.slots[(size_t)s].deg;
                    const RationalMatrix* fdm = map_block(FD.map.comp, rr, cs.deg);
                    if (!fdm) continue;
                    const Tree2& tr = FD.cod.amb.at(rr);
                    for (int r = 0; r < fdm->rows(); ++r) {
                        Rat lam = fdm->get(r, cs.idx);
                        if (lam == 0) continue;
                        const TreeElt& y = canon_tree(tr, cs.deg, r);
                        int mm = y.k();
                        auto ita = a.comp.find(mm);
                        if (ita == a.comp.end()) continue;
                        auto acol =
                            ita->second.col_dense(flat_index(C.mod.cx(mm), y.odeg, y.oidx));
                        for (int rq = 0; rq < (int)acol.size(); ++rq) {
                            if (acol[(size_t)rq] == 0) continue;
                            std::vector<Rat> pout =
                                circ(P, k, mm, ts + 1, pv, basis_vec((int)acol.size(), rq));
                            // a passes the root and the earlier slots; its
                            // image then moves back over the earlier slots
                            int sgn = 1;
                            if (a.degree % 2 != 0 && z.odeg % 2 != 0) sgn = -sgn;
                            if (y.odeg % 2 != 0 && pre % 2 != 0) sgn = -sgn;
                            Rat base = lam * acol[(size_t)rq] * sgn;
                            auto fbo = flat_basis(P.mod.cx(k + mm - 1));
                            for (int rc = 0; rc < (int)pout.size(); ++rc) {
                                if (pout[(size_t)rc] == 0) continue;
                                TreeElt w;
                                w.odeg = fbo[(size_t)rc].first;
                                w.oidx = fbo[(size_t)rc].second;
                                for (int s = 0; s < ts; ++s)
                                    w.slots.push_back(z.slots[(size_t)s]);
                                for (int j = 0; j < mm; ++j) {
                                    Slot ns;
                                    for (int v : y.slots[(size_t)j].leaves)
                                        ns.leaves.push_back(cs.leaves[(size_t)v]);
                                    ns.deg = y.slots[(size_t)j].deg;
                                    ns.idx = y.slots[(size_t)j].idx;
                                    w.slots.push_back(std::move(ns));
                                }
                                for (int s = ts + 1; s < k; ++s)
                                    w.slots.push_back(z.slots[(size_t)s]);
                                for (const auto& [pos2, val] :
                                     tree2_project(t, P.mod, d + a.degree, w,
                                                   base * pout[(size_t)rc]))
                                    m.add_at(pos2, ci, val);
                            }
                        }
                    }
                }
            }
            if (!m.is_zero()) out[n][d] = std::move(m);
        }
    }
    return out;
}

// two-sided derivation parts on P∘(C∘P): the right part replaces one inner
// composite by its right twist; the left part splits the top of one inner
// composite, a absorbs it into the root, and the lower pieces become new
// inner composites
std::map<int, std::map<int, RationalMatrix>> two_sided_twist(
    const Operad& P, const Cooperad& C, const ConvolutionElement& a, const CompositeData& U,
    const CompositeData& B, const std::map<int, std::map<int, RationalMatrix>>& rt,
    const Decomposition& FD) {
    std::map<int, std::map<int, RationalMatrix>> out;
    for (const auto& [n, t] : U.amb) {
        for (const auto& [d, cl] : t.canon) {
            int rows = t.coinv.dim(d + a.degree);
            if (rows == 0 || cl.empty()) continue;
            RationalMatrix m(rows, (int)cl.size());
            for (int ci = 0; ci < (int)cl.size(); ++ci) {
                const TreeElt& z = t.basis.at(d)[(size_t)cl[ci]];
                int k = z.k();
                std::vector<Rat> pv = basis_vec(
                    fdim(P.mod, k), flat_index(P.mod.cx(k), z.odeg, z.oidx));
                for (int ts = 0; ts < k; ++ts) {
                    const Slot& bs = z.slots[(size_t)ts];
                    int nb = (int)bs.leaves.size();
                    int pre = 0;
                    for (int s = 0; s < ts; ++s) pre += z.slots[(size_t)s].deg;
                    bool apass = a.degree % 2 != 0 && (z.odeg + pre) % 2 != 0;
                    // right part: the twist of the slot, the sign of moving
                    // the degree-|a| operation past the root and the earlier
                    // slots
                    if (const RationalMatrix* rtm = map_block(rt, nb, bs.deg)) {
                        for (int r2 = 0; r2 < rtm->rows(); ++r2) {
                            Rat val = rtm->get(r2, bs.idx);
                            if (val == 0) continue;
                            if (apass) val = -val;
                            TreeElt w = z;
                            w.slots[(size_t)ts].deg = bs.deg + a.degree;
                            w.slots[(size_t)ts].idx = r2;
                            m.add_at(coinv_index(t, d + a.degree, w), ci, val);
                        }
                    }
                    // left part
                    const TreeElt& bt = canon_tree(B.amb.at(nb), bs.deg, bs.idx);
                    int rr = bt.k();
                    const RationalMatrix* fdm = map_block(FD.map.comp, rr, bt.odeg);
                    if (!fdm) continue;
                    const Tree2& tr = FD.cod.amb.at(rr);
                    for (int r = 0; r < fdm->rows(); ++r) {
                        Rat lam = fdm->get(r, bt.oidx);
                        if (lam == 0) continue;
                        const TreeElt& y = canon_tree(tr, bt.odeg, r);
                        int mm = y.k();
                        auto ita = a.comp.find(mm);
                        if (ita == a.comp.end()) continue;
                        auto acol =
                            ita->second.col_dense(flat_index(C.mod.cx(mm), y.odeg, y.oidx));
                        // regrouping sign: the split tops interleave with
                        // their blocks of inner operations
                        std::vector<int> degs;
                        for (const auto& ys : y.slots) degs.push_back(ys.deg);
                        for (const auto& qs : bt.slots) degs.push_back(qs.deg);
                        Perm pi;
                        for (int j = 0; j < mm; ++j) {
                            pi.push_back(j);
                            for (int v : y.slots[(size_t)j].leaves) pi.push_back(mm + v);
                        }
                        int gsgn = graded_place_sign(pi, degs);
                        // the sub-composites and the new slots they decorate
                        std::vector<Slot> nslots((size_t)mm);
                        int subfail = 0;
                        for (int j = 0; j < mm && !subfail; ++j) {
                            std::vector<int> W;
                            for (int v : y.slots[(size_t)j].leaves) {
                                const auto& lv = bt.slots[(size_t)v].leaves;
                                W.insert(W.end(), lv.begin(), lv.end());
                            }
                            std::sort(W.begin(), W.end());
                            TreeElt sub;
                            sub.odeg = y.slots[(size_t)j].deg;
                            sub.oidx = y.slots[(size_t)j].idx;
                            for (int v : y.slots[(size_t)j].leaves) {
                                Slot ss;
                                for (int x : bt.slots[(size_t)v].leaves)
                                    ss.leaves.push_back(
                                        (int)(std::lower_bound(W.begin(), W.end(), x) -
                                              W.begin()));
                                ss.deg = bt.slots[(size_t)v].deg;
                                ss.idx = bt.slots[(size_t)v].idx;
                                sub.slots.push_back(std::move(ss));
                            }
                            Slot& us = nslots[(size_t)j];
                            for (int x : W) us.leaves.push_back(bs.leaves[(size_t)x]);
                            us.deg = sub.degree();
                            us.idx = coinv_index(B.amb.at((int)W.size()), us.deg, sub);
                        }
                        for (int rq = 0; rq < (int)acol.size(); ++rq) {
                            if (acol[(size_t)rq] == 0) continue;
                            std::vector<Rat> pout =
                                circ(P, k, mm, ts + 1, pv, basis_vec((int)acol.size(), rq));
                            int sgn = gsgn;
                            if (apass) sgn = -sgn;
                            if ((y.odeg + a.degree) % 2 != 0 && pre % 2 != 0) sgn = -sgn;
                            // the left part enters the differential with a
                            // minus sign
                            Rat base = -lam * acol[(size_t)rq] * sgn;
                            auto fbo = flat_basis(P.mod.cx(k + mm - 1));
                            for (int rc = 0; rc < (int)pout.size(); ++rc) {
                                if (pout[(size_t)rc] == 0) continue;
                                TreeElt w;
                                w.odeg = fbo[(size_t)rc].first;
                                w.oidx = fbo[(size_t)rc].second;
                                for (int s = 0; s < ts; ++s)
                                    w.slots.push_back(z.slots[(size_t)s]);
                                for (int j = 0; j < mm; ++j) w.slots.push_back(nslots[(size_t)j]);
                                for (int s = ts + 1; s < k; ++s)
                                    w.slots.push_back(z.slots[(size_t)s]);
                                for (const auto& [pos2, val2] :
                                     tree2_project(t, P.mod, d + a.degree, w,
                                                   base * pout[(size_t)rc]))
                                    m.add_at(pos2, ci, val2);
                            }
                        }
                    }
                }
            }
            if (!m.is_zero()) out[n][d] = std::move(m);
        }
    }
    return out;
}

// rebuild the coinvariant complex with the twist added to the differential;
// labels and weights carry over, and the constructor re-checks d^2 = 0
ChainComplex twisted_complex(const ChainComplex& base,
                             const std::map<int, RationalMatrix>* tw) {
    std::map<int, int> dims = base.dims();
    std::map<int, RationalMatrix> diffs;
    std::map<int, std::vector<std::string>> lbl;
    std::map<int, std::vector<int>> wts;
    for (const auto& [dd, dim] : dims) {
        RationalMatrix M = base.diff(dd);
        if (tw) {
            auto it = tw->find(dd);
            if (it != tw->end()) M = M + it->second;
        }
        if (M.rows() > 0 && !M.is_zero()) diffs[dd] = std::move(M);
        if (!base.labels(dd).empty()) lbl[dd] = base.labels(dd);
        if (!base.weights(dd).empty()) wts[dd] = base.weights(dd);
    }
    return ChainComplex::build(std::move(dims), std::move(diffs), std::move(lbl),
                               std::move(wts));
}

void require_twisting(const Cooperad& C, const Operad& P, const ConvolutionElement& alpha) {
    MCCertificate cert = is_twisting(C, P, alpha);
    if (!cert.ok) {
        std::ostringstream os;
        os << "twisted product needs a Maurer-Cartan element; residual at arit"
           << (cert.residual.size() > 1 ? "ies" : "y");
        for (const auto& [n, r] : cert.residual) os << " " << n;
        throw NotTwisting(os.str());
    }
}

std::map<int, int> nonzero(const std::map<int, int>& h) {
    std::map<int, int> out;
    for (const auto& [d, v] : h)
        if (v != 0) out[d] = v;
    return out;
}

// homology dims, weight piece by weight piece when capped (wcap < 0: plain)
std::map<int, int> h_capped(const ChainComplex& X, int wcap) {
    if (wcap < 0 || !X.has_weights()) return nonzero(X.homology());
    std::map<int, int> out;
    for (int w : X.weight_set()) {
        if (w > wcap) continue;
        for (const auto& [d, v] : weight_piece(X, w).homology())
            if (v != 0) out[d] += v;
    }
    return out;
}

} // namespace

ConvolutionElement make_convolution_element(const Cooperad& C, const Operad& P, int degree,
                                            std::map<int, RationalMatrix> comp) {
    ConvolutionElement f;
    f.degree = degree;
    for (auto& [n, m] : comp) {
        if (n < 1)
            throw ArityViolation("convolution element: component at arity " +
                                 std::to_string(n));
        int fc = fdim(C.mod, n), fp = fdim(P.mod, n);
        if (m.rows() != fp || m.cols() != fc) {
            std::ostringstream os;
            os << "convolution element: arity " << n << " block is " << m.rows() << "x"
               << m.cols() << ", expected " << fp << "x" << fc;
            throw ShapeMismatch(os.str());
        }
        if (m.is_zero()) continue;
        auto fbc = flat_basis(C.mod.cx(n));
        auto fbp = flat_basis(P.mod.cx(n));
        for (const auto& [rc, v] : m.entries())
            if (fbp[(size_t)rc.first].first != fbc[(size_t)rc.second].first + degree) {
                std::ostringstream os;
                os << "convolution element: arity " << n << " entry ("
                   << fbp[(size_t)rc.first].first << " <- " << fbc[(size_t)rc.second].first
                   << ") off the declared degree " << degree;
                throw DegreeMismatch(os.str());
            }
        for (int t = 0; t + 1 < n; ++t) {
            Perm s = adjacent_transposition(n, t);
            if (!(flat_act(P.mod, n, s) * m == m * flat_act(C.mod, n, s)))
                throw Error("convolution element: not equivariant at arity " +
                            std::to_string(n));
        }
        f.comp[n] = std::move(m);
    }
    return f;
}

ConvolutionElement star(const Cooperad& C, const Operad& P, const ConvolutionElement& f,
                        const ConvolutionElement& g) {
    int maxa = std::min(C.mod.max_arity(), P.mod.max_arity());
    InfDecomposition D = delta1(C, false);
    InfComposition G = gamma1(P, false);
    ConvolutionElement out;
    out.degree = f.degree + g.degree;
    for (int n = 1; n <= maxa; ++n) {
        if (!C.mod.present(n) || !P.mod.present(n)) continue;
        auto itD = D.cod.amb.find(n);
        auto itG = G.dom.amb.find(n);
        if (itD == D.cod.amb.end() || itG == G.dom.amb.end()) continue;
        const Tree2& tc = itD->second;
        const Tree2& tp = itG->second;
        const ChainComplex& cn = C.mod.cx(n);
        const ChainComplex& pn = P.mod.cx(n);
        RationalMatrix on(pn.total_dim(), cn.total_dim());
        for (const auto& [d, dim] : cn.dims()) {
            const RationalMatrix* d1m = map_block(C.d1.comp, n, d);
            if (!d1m) continue;
            for (int j = 0; j < dim; ++j) {
                int colflat = flat_index(cn, d, j);
                for (int ci = 0; ci < d1m->rows(); ++ci) {
                    Rat lam = d1m->get(ci, j);
                    if (lam == 0) continue;
                    const TreeElt& z = canon_tree(tc, d, ci);
                    int k = z.k();
                    int j0 = marked_slot(z);
                    const Slot& s = z.slots[(size_t)j0];
                    int nb = (int)s.leaves.size();
                    auto itf = f.comp.find(k);
                    auto itg = g.comp.find(nb);
                    if (itf == f.comp.end() || itg == g.comp.end()) continue;
                    auto fcol = itf->second.col_dense(flat_index(C.mod.cx(k), z.odeg, z.oidx));
                    auto gcol = itg->second.col_dense(flat_index(C.mod.cx(nb), s.deg, s.idx));
                    bool neg = g.degree % 2 != 0 && z.odeg % 2 != 0;
                    auto fbk = flat_basis(P.mod.cx(k));
                    auto fbn = flat_basis(P.mod.cx(nb));
                    int dy = d + f.degree + g.degree;
                    const RationalMatrix* gm = map_block(G.map.comp, n, dy);
                    if (!gm) continue;
                    for (int rf = 0; rf < (int)fcol.size(); ++rf) {
                        if (fcol[(size_t)rf] == 0) continue;
                        for (int rg = 0; rg < (int)gcol.size(); ++rg) {
                            if (gcol[(size_t)rg] == 0) continue;
                            TreeElt y = z;
                            y.odeg = fbk[(size_t)rf].first;
                            y.oidx = fbk[(size_t)rf].second;
                            y.slots[(size_t)j0].deg = fbn[(size_t)rg].first;
                            y.slots[(size_t)j0].idx = fbn[(size_t)rg].second;
                            int ci2 = coinv_index(tp, dy, y);
                            Rat c = lam * fcol[(size_t)rf] * gcol[(size_t)rg];
                            if (neg) c = -c;
                            for (int r = 0; r < gm->rows(); ++r) {
                                const Rat& e = gm->get(r, ci2);
                                if (e != 0) on.add_at(flat_index(pn, dy, r), colflat, c * e);
                            }
                        }
                    }
                }
            }
        }
        if (!on.is_zero()) out.comp[n] = std::move(on);
    }
    return out;
}

ConvolutionElement differential(const Cooperad& C, const Operad& P,
                                const ConvolutionElement& f) {
    ConvolutionElement out;
    out.degree = f.degree - 1;
    for (const auto& [n, fn] : f.comp) {
        RationalMatrix r = flat_diff(P.mod.cx(n)) * fn;
        RationalMatrix s = fn * flat_diff(C.mod.cx(n));
        r = f.degree % 2 != 0 ? r + s : r - s;
        if (!r.is_zero()) out.comp[n] = std::move(r);
    }
    return out;
}

MCCertificate is_twisting(const Cooperad& C, const Operad& P, const ConvolutionElement& alpha) {
    if (alpha.degree != -1)
        throw DegreeMismatch("is_twisting: alpha has degree " + std::to_string(alpha.degree) +
                             ", want -1");
    ConvolutionElement da = differential(C, P, alpha);
    ConvolutionElement aa = star(C, P, alpha, alpha);
    MCCertificate cert;
    cert.ok = true;
    std::set<int> ns;
    for (const auto& [n, m] : da.comp) ns.insert(n);
    for (const auto& [n, m] : aa.comp) ns.insert(n);
    for (int n : ns) {
        RationalMatrix R(fdim(P.mod, n), fdim(C.mod, n));
        auto it = da.comp.find(n);
        if (it != da.comp.end()) R = R + it->second;
        it = aa.comp.find(n);
        if (it != aa.comp.end()) R = R + it->second;
        if (!R.is_zero()) {
            cert.ok = false;
            cert.residual[n] = std::move(R);
        }
    }
    return cert;
}

TwistingMorphism make_twisting_morphism(Cooperad source, Operad target,
                                        ConvolutionElement alpha) {
    if (alpha.degree != -1)
        throw NotTwisting("twisting morphism must have degree -1, got " +
                          std::to_string(alpha.degree));
    alpha = make_convolution_element(source, target, alpha.degree, std::move(alpha.comp));
    for (const auto& [n, m] : alpha.comp) {
        auto fbc = flat_basis(source.mod.cx(n));
        for (const auto& [rc, v] : m.entries())
            if (source.mod.cx(n).weight_of(fbc[(size_t)rc.second].first,
                                           fbc[(size_t)rc.second].second) == 0)
                throw NotTwisting("alpha does not vanish on weight 0 at arity " +
                                  std::to_string(n));
    }
    MCCertificate cert = is_twisting(source, target, alpha);
    if (!cert.ok) {
        std::ostringstream os;
        os << "Maurer-Cartan residual nonzero at arit"
           << (cert.residual.size() > 1 ? "ies" : "y");
        for (const auto& [n, r] : cert.residual) os << " " << n;
        throw NotTwisting(os.str());
    }
    return TwistingMorphism{std::move(source), std::move(target), std::move(alpha)};
}

TwistingMorphism kappa(int max_arity) {
    if (max_arity < 2) throw ArityViolation("kappa needs max_arity >= 2");
    Cooperad C = suspension_cooperad(max_arity);
    Operad P = lie_operad(max_arity);
    RationalMatrix a2(fdim(P.mod, 2), fdim(C.mod, 2));
    a2.set(0, 0, 1);
    std::map<int, RationalMatrix> comp;
    comp[2] = std::move(a2);
    ConvolutionElement alpha = make_convolution_element(C, P, -1, std::move(comp));
    return make_twisting_morphism(std::move(C), std::move(P), std::move(alpha));
}

TwistingMorphism free_cofree_twist(const ChainComplex& V, int max_weight) {
    if (max_weight < 0)
        throw Error("free_cofree_twist: negative weight bound");
    if (!V.is_zero() && (V.lo() != 0 || V.hi() != 0))
        throw DegreeMismatch("free_cofree_twist: V must be concentrated in degree 0");
    Operad P = tensor_algebra(V, max_weight);
    Cooperad C = tensor_coalgebra(shift(V, -1), std::min(1, max_weight));
    const ChainComplex& cc = C.mod.cx(1);
    const ChainComplex& pc = P.mod.cx(1);
    std::vector<int> cw, pw;
    auto fbc = flat_basis(cc);
    for (int i = 0; i < (int)fbc.size(); ++i)
        if (cc.weight_of(fbc[(size_t)i].first, fbc[(size_t)i].second) == 1) cw.push_back(i);
    auto fbp = flat_basis(pc);
    for (int i = 0; i < (int)fbp.size(); ++i)
        if (pc.weight_of(fbp[(size_t)i].first, fbp[(size_t)i].second) == 1) pw.push_back(i);
    if (cw.size() != pw.size())
        throw Error("internal: weight-1 components of the pair do not match");
    RationalMatrix a1(pc.total_dim(), cc.total_dim());
    for (size_t i = 0; i < cw.size(); ++i) a1.set(pw[i], cw[i], 1);
    std::map<int, RationalMatrix> comp;
    comp[1] = std::move(a1);
    ConvolutionElement alpha = make_convolution_element(C, P, -1, std::move(comp));
    return make_twisting_morphism(std::move(C), std::move(P), std::move(alpha));
}

TwistedComplexes twisted_right(const Cooperad& C, const Operad& P,
                               const ConvolutionElement& alpha, int max_arity) {
    require_twisting(C, P, alpha);
    TwistedComplexes out;
    out.mod = composite_full(C.mod, P.mod, max_arity, false);
    InfDecomposition D = delta1(C, false);
    out.twist = right_twist(C, P, alpha, out.mod, D);
    for (const auto& [n, t] : out.mod.amb) {
        auto it = out.twist.find(n);
        out.cx.emplace(n, twisted_complex(t.coinv, it == out.twist.end() ? nullptr
                                                                         : &it->second));
    }
    return out;
}

TwistedComplexes twisted_left(const Operad& P, const Cooperad& C,
                              const ConvolutionElement& alpha, int max_arity) {
    require_twisting(C, P, alpha);
    TwistedComplexes out;
    out.mod = composite_full(P.mod, C.mod, max_arity, false);
    Decomposition FD = full_decomposition(C, false);
    out.twist = left_twist(P, C, alpha, out.mod, FD);
    for (const auto& [n, t] : out.mod.amb) {
        auto it = out.twist.find(n);
        out.cx.emplace(n, twisted_complex(t.coinv, it == out.twist.end() ? nullptr
                                                                         : &it->second));
    }
    return out;
}

TwistedComplexes two_sided(const Operad& P, const Cooperad& C,
                           const ConvolutionElement& alpha, int max_arity) {
    require_twisting(C, P, alpha);
    CompositeData B = composite_full(C.mod, P.mod, max_arity, false);
    InfDecomposition D = delta1(C, false);
    auto rt = right_twist(C, P, alpha, B, D);
    Decomposition FD = full_decomposition(C, false);
    TwistedComplexes out;
    out.mod = composite_full(P.mod, B.mod, max_arity, false);
    out.twist = two_sided_twist(P, C, alpha, out.mod, B, rt, FD);
    for (const auto& [n, t] : out.mod.amb) {
        auto it = out.twist.find(n);
        out.cx.emplace(n, twisted_complex(t.coinv, it == out.twist.end() ? nullptr
                                                                         : &it->second));
    }
    return out;
}

bool twisted_square_check(const Cooperad& C, const Operad& P, const ConvolutionElement& alpha,
                          int max_arity) {
    if (alpha.degree != -1)
        throw DegreeMismatch("twisted_square_check: alpha must have degree -1");
    ConvolutionElement res;
    res.degree = -2;
    {
        MCCertificate cert = is_twisting(C, P, alpha);
        for (auto& [n, R] : cert.residual) res.comp[n] = std::move(R);
    }
    auto square_matches = [](const Tree2& t,
                             const std::map<int, std::map<int, RationalMatrix>>& tw, int n,
                             const std::map<int, std::map<int, RationalMatrix>>& sq) {
        for (const auto& [dd, dim] : t.coinv.dims()) {
            RationalMatrix A1 = t.coinv.diff(dd);
            if (const RationalMatrix* p = map_block(tw, n, dd)) A1 = A1 + *p;
            RationalMatrix A0(t.coinv.dim(dd - 2), t.coinv.dim(dd - 1));
            {
                RationalMatrix D0 = t.coinv.diff(dd - 1);
                if (D0.rows() == A0.rows() && D0.cols() == A0.cols()) A0 = A0 + D0;
                if (const RationalMatrix* p = map_block(tw, n, dd - 1)) A0 = A0 + *p;
            }
            RationalMatrix S(t.coinv.dim(dd - 2), dim);
            if (const RationalMatrix* p = map_block(sq, n, dd)) S = S + *p;
            if (!(A0 * A1 == S)) return false;
        }
        return true;
    };
    {
        CompositeData B = composite_full(C.mod, P.mod, max_arity, false);
        InfDecomposition D = delta1(C, false);
        auto T = right_twist(C, P, alpha, B, D);
        auto S = right_twist(C, P, res, B, D);
        for (const auto& [n, t] : B.amb)
            if (!square_matches(t, T, n, S)) return false;
    }
    {
        CompositeData A = composite_full(P.mod, C.mod, max_arity, false);
        Decomposition FD = full_decomposition(C, false);
        auto T = left_twist(P, C, alpha, A, FD);
        auto S = left_twist(P, C, res, A, FD);
        for (const auto& [n, t] : A.amb)
            if (!square_matches(t, T, n, S)) return false;
    }
    return true;
}

KoszulReport koszul_check(const TwistingMorphism& tm, int max_arity, int max_weight) {
    KoszulReport rep;
    TwistedComplexes R = twisted_right(tm.source, tm.target, tm.alpha, max_arity);
    TwistedComplexes L = twisted_left(tm.target, tm.source, tm.alpha, max_arity);
    TwistedComplexes U = two_sided(tm.target, tm.source, tm.alpha, max_arity);
    rep.ok = true;
    for (int n = 1; n <= max_arity; ++n) {
        KoszulArityVerdict v;
        std::map<int, int> hi;
        if (n == 1) hi[0] = 1;
        if (R.cx.count(n)) v.h_c_circ_p = h_capped(R.cx.at(n), max_weight);
        if (L.cx.count(n)) v.h_p_circ_c = h_capped(L.cx.at(n), max_weight);
        if (U.cx.count(n)) v.h_two_sided = h_capped(U.cx.at(n), max_weight);
        if (tm.target.mod.present(n)) v.h_target = h_capped(tm.target.mod.cx(n), max_weight);
        v.c_circ_p = v.h_c_circ_p == hi;
        v.p_circ_c = v.h_p_circ_c == hi;
        v.two_sided = v.h_two_sided == v.h_target;
        v.agree = v.c_circ_p == v.p_circ_c && v.p_circ_c == v.two_sided;
        if (!(v.c_circ_p && v.p_circ_c && v.two_sided)) rep.ok = false;
        rep.arity.emplace(n, std::move(v));
    }
    return rep;
}

} // namespace opforge
