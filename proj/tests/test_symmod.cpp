#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "opforge/json_io.hpp"
#include "opforge/tree2.hpp"

using namespace opforge;
using opforge::testing::Rng;

namespace {

RationalMatrix dense(const std::vector<std::vector<Rat>>& rows) {
    RationalMatrix m((int)rows.size(), rows.empty() ? 0 : (int)rows[0].size());
    for (int r = 0; r < (int)rows.size(); ++r)
        for (int c = 0; c < (int)rows[r].size(); ++c)
            if (rows[r][c] != 0) m.set(r, c, rows[r][c]);
    return m;
}

RationalMatrix swap_mat(int n, int i) {
    RationalMatrix r(n, n);
    for (int t = 0; t < n; ++t)
        if (t != i && t != i + 1) r.set(t, t, 1);
    r.set(i, i + 1, 1);
    r.set(i + 1, i, 1);
    return r;
}

// one-dimensional trivial component in degree 0 at each listed arity
SymModule trivial_module(int max_arity, const std::vector<int>& arities) {
    std::map<int, SymArity> comp;
    for (int n : arities) {
        SymArity A;
        A.cx = ChainComplex::build({{0, 1}}, {}, {{0, {"c" + std::to_string(n)}}});
        A.gens.resize(n >= 2 ? n - 1 : 0);
        comp[n] = std::move(A);
    }
    return SymModule(max_arity, std::move(comp));
}

SymModule sgn_module(int max_arity, const std::vector<int>& arities) {
    std::map<int, SymArity> comp;
    for (int n : arities) {
        SymArity A;
        A.cx = ChainComplex::build({{0, 1}}, {}, {{0, {"s" + std::to_string(n)}}});
        A.gens.resize(n >= 2 ? n - 1 : 0);
        for (auto& g : A.gens) g[0] = dense({{-1}});
        comp[n] = std::move(A);
    }
    return SymModule(max_arity, std::move(comp));
}

// regular representations Q[Sigma_n] in degree 0, e_sigma . tau = e_{sigma tau}
SymModule regular_module(int max_arity) {
    std::map<int, SymArity> comp;
    for (int n = 1; n <= max_arity; ++n) {
        auto G = all_perms(n);
        std::map<Perm, int> idx;
        for (int i = 0; i < (int)G.size(); ++i) idx[G[i]] = i;
        std::vector<std::string> lb;
        for (const auto& p : G) {
            std::string s;
            for (int v : p) s += std::to_string(v + 1);
            lb.push_back(s);
        }
        SymArity A;
        A.cx = ChainComplex::build({{0, (int)G.size()}}, {}, {{0, lb}});
        A.gens.resize(n >= 2 ? n - 1 : 0);
        for (int i = 0; i + 1 < n; ++i) {
            Perm s = adjacent_transposition(n, i);
            RationalMatrix g((int)G.size(), (int)G.size());
            for (const auto& p : G) g.set(idx.at(perm_compose(s, p)), idx.at(p), 1);
            A.gens[i][0] = std::move(g);
        }
        comp[n] = std::move(A);
    }
    return SymModule(max_arity, std::move(comp));
}

// (complex) ⊗ (trivial / sign / standard permutation rep), hit with a random
// unitriangular basis change in every degree
SymModule rand_sym_module(Rng& g, int max_arity, int hi_present) {
    std::map<int, SymArity> comp;
    for (int n = 1; n <= hi_present; ++n) {
        if (n > 1 && g() % 4 == 0) continue;
        int rt = (int)(g() % 3);
        int rdim = rt == 2 ? n : 1;
        int shape = (int)(g() % 3);
        ChainComplex X = shape == 0 ? sphere(1, 0) : shape == 1 ? sphere(1, 1) : disk(1, 1);
        std::map<int, int> dims;
        for (const auto& [d, xd] : X.dims()) dims[d] = xd * rdim;
        std::map<int, RationalMatrix> diffs;
        for (const auto& [d, dm] : X.diffs())
            diffs[d] = RationalMatrix::kron(dm, RationalMatrix::identity(rdim));
        SymArity A;
        A.cx = ChainComplex::build(dims, std::move(diffs));
        A.gens.resize(n >= 2 ? n - 1 : 0);
        for (int i = 0; i + 1 < n; ++i) {
            RationalMatrix r = rt == 0   ? RationalMatrix::identity(1)
                               : rt == 1 ? dense({{-1}})
                                         : swap_mat(n, i);
            for (const auto& [d, xd] : X.dims())
                A.gens[i][d] = RationalMatrix::kron(RationalMatrix::identity(xd), r);
        }
        std::map<int, RationalMatrix> Gm, Gi;
        for (const auto& [d, dm] : A.cx.dims()) {
            Gm[d] = testing::rand_unitriangular(g, dm);
            Gi[d] = testing::unitriangular_inverse(Gm[d]);
        }
        std::map<int, RationalMatrix> nd;
        for (const auto& [d, m] : A.cx.diffs()) nd[d] = Gm.at(d - 1) * m * Gi.at(d);
        for (auto& gm : A.gens) {
            std::map<int, RationalMatrix> ng;
            for (const auto& [d, m] : gm) ng[d] = Gm.at(d) * m * Gi.at(d);
            gm = std::move(ng);
        }
        A.cx = ChainComplex::build(A.cx.dims(), std::move(nd));
        comp[n] = std::move(A);
    }
    return SymModule(max_arity, std::move(comp));
}

bool same_characters(const SymModule& A, const SymModule& B, int n) {
    if (A.cx(n).dims() != B.cx(n).dims()) return false;
    for (const auto& p : all_perms(n))
        if (A.character(n, p) != B.character(n, p)) return false;
    return true;
}

std::map<int, int> weight_dims(const ChainComplex& X, int w) { return weight_piece(X, w).dims(); }

} // namespace

TEST_CASE("composition order: rho(a then b) = rho(a) rho(b) on the regular representation") {
    SymModule R = regular_module(3);
    auto G = all_perms(3);
    for (const auto& a : G)
        for (const auto& b : G) {
            CHECK(R.act(3, perm_compose(a, b), 0) == R.act(3, a, 0) * R.act(3, b, 0));
        }
    // multiplicativity of signs rides along
    for (const auto& a : G)
        for (const auto& b : G) CHECK(perm_sign(perm_compose(a, b)) == perm_sign(a) * perm_sign(b));
}

TEST_CASE("descent words rebuild their permutation") {
    for (const auto& p : all_perms(4)) {
        Perm acc = perm_identity(4);
        for (int i : descent_word(p)) acc = perm_compose(acc, adjacent_transposition(4, i));
        CHECK(acc == p);
    }
    CHECK(descent_word(perm_identity(5)).empty());
}

TEST_CASE("ranks and graded place signs") {
    CHECK(ranks({5, 2, 9}) == Perm{1, 0, 2});
    CHECK(ranks({3, 1, 0, 2}) == Perm{3, 1, 0, 2});
    // swapping two odd slots costs a sign, odd past even does not
    Perm sw{1, 0};
    CHECK(graded_place_sign(sw, {1, 1}) == -1);
    CHECK(graded_place_sign(sw, {1, 0}) == 1);
    CHECK(graded_place_sign(sw, {2, 1}) == 1);
    CHECK(graded_place_sign(perm_identity(3), {1, 1, 1}) == 1);
    // 3-cycle moving one odd element past two odds: two inversions with odd pairs
    Perm cyc{2, 0, 1};
    CHECK(graded_place_sign(cyc, {1, 1, 1}) == 1);
    CHECK(graded_place_sign(cyc, {0, 1, 1}) == -1);
}

TEST_CASE("module construction rejects bad generator data") {
    // braid relation violated
    {
        std::map<int, SymArity> comp;
        SymArity A;
        A.cx = ChainComplex::build({{0, 2}}, {});
        A.gens.resize(2);
        A.gens[0][0] = dense({{1, 0}, {0, -1}});
        A.gens[1][0] = dense({{0, 1}, {1, 0}});
        comp[3] = std::move(A);
        CHECK_THROWS_AS(SymModule(3, std::move(comp)), Error);
    }
    // not an involution
    {
        std::map<int, SymArity> comp;
        SymArity A;
        A.cx = ChainComplex::build({{0, 2}}, {});
        A.gens.resize(1);
        A.gens[0][0] = dense({{1, 1}, {0, 1}});
        comp[2] = std::move(A);
        CHECK_THROWS_AS(SymModule(2, std::move(comp)), Error);
    }
    // generator fails to commute with the differential
    {
        std::map<int, SymArity> comp;
        SymArity A;
        A.cx = disk(1, 1);
        A.gens.resize(1);
        A.gens[0][1] = dense({{-1}});
        comp[2] = std::move(A);
        CHECK_THROWS_AS(SymModule(2, std::move(comp)), Error);
    }
    // wrong generator count
    {
        std::map<int, SymArity> comp;
        comp[3] = SymArity{ChainComplex::build({{0, 1}}, {}), {}};
        CHECK_THROWS_AS(SymModule(3, std::move(comp)), Error);
    }
}

TEST_CASE("arity access beyond the truncation bound throws") {
    SymModule M = trivial_module(3, {1, 2, 3});
    CHECK(M.present(3));
    CHECK_THROWS_AS(M.present(4), ArityOverflow);
    CHECK_THROWS_AS(M.cx(5), ArityOverflow);
}

TEST_CASE("coinvariants of the basic Sigma_2 modules") {
    // trivial action on Q^3: nothing to divide out
    {
        std::map<int, SymArity> comp;
        SymArity A;
        A.cx = ChainComplex::build({{0, 3}}, {});
        A.gens.resize(1);
        comp[2] = std::move(A);
        SymModule M(2, std::move(comp));
        Coinvariants c = coinvariants(M, 2);
        CHECK(c.cx.dim(0) == 3);
        CHECK(c.incl.at(0) == RationalMatrix::identity(3));
        CHECK(c.proj.at(0) == RationalMatrix::identity(3));
    }
    // regular Q[Sigma_2] drops to one dimension
    {
        SymModule R = regular_module(2);
        Coinvariants c = coinvariants(R, 2);
        CHECK(c.cx.dim(0) == 1);
        CHECK(c.incl.at(0) == dense({{Rat(1, 2)}, {Rat(1, 2)}}));
        CHECK(c.proj.at(0) == dense({{1, 1}}));
        CHECK(c.proj.at(0) * c.incl.at(0) == RationalMatrix::identity(1));
    }
    // sign representation has no coinvariants
    {
        SymModule S = sgn_module(2, {2});
        Coinvariants c = coinvariants(S, 2);
        CHECK(c.cx.is_zero());
    }
    // a fake action (group law broken) is rejected through e^2 != e
    {
        ChainComplex V = ChainComplex::build({{0, 1}}, {});
        CHECK_THROWS_AS(coinvariants(V, 2,
                                     [](const Perm& p, int) {
                                         RationalMatrix m(1, 1);
                                         m.set(0, 0, p == perm_identity(2) ? Rat(1) : Rat(2));
                                         return m;
                                     }),
                        Error);
    }
}

TEST_CASE("Day tensor: unit square has the two cosets at arity 2") {
    SymModule I = unit_symmod(1);
    SymModule T = tensor_sym(I, I);
    CHECK(T.max_arity() == 2);
    CHECK(T.cx(2).dim(0) == 2);
    CHECK(T.cx(2).labels(0) == std::vector<std::string>{"1:1|2:1", "2:1|1:1"});
    CHECK(T.act(2, adjacent_transposition(2, 0), 0) == dense({{0, 1}, {1, 0}}));
    CHECK_THROWS_AS(T.cx(3), ArityOverflow);
}

TEST_CASE("Day tensor dimensions carry the binomial weights") {
    SymModule A = trivial_module(2, {1, 2});
    SymModule T = tensor_sym(A, A);
    CHECK(T.cx(2).dim(0) == 2);   // (1,1) split: binom(2,1)
    CHECK(T.cx(3).dim(0) == 6);   // (1,2)+(2,1): 3+3
    CHECK(T.cx(4).dim(0) == 6);   // (2,2): binom(4,2)
}

TEST_CASE("Day tensor with an arity-0 factor reproduces the other factor") {
    std::map<int, SymArity> comp;
    comp[0] = SymArity{ChainComplex::build({{0, 1}}, {}, {{0, {"u"}}}), {}};
    SymModule U(0, std::move(comp));
    SymModule R = regular_module(3);
    SymModule T = tensor_sym(U, R);
    for (int n = 1; n <= 3; ++n) {
        REQUIRE(T.cx(n).dims() == R.cx(n).dims());
        for (const auto& p : all_perms(n)) CHECK(T.act(n, p, 0) == R.act(n, p, 0));
    }
    // no arity-0 content on the R side, so none in the product either
    CHECK(!T.present(0));
}

TEST_CASE("composite unit laws hold on the nose") {
    Rng g(2024);
    for (int trial = 0; trial < 3; ++trial) {
        SymModule N = rand_sym_module(g, 3, 3);
        SymModule L = composite(unit_symmod(3), N, 3);
        SymModule R = composite(N, unit_symmod(3), 3);
        for (int n = 1; n <= 3; ++n) {
            CHECK(L.cx(n).dims() == N.cx(n).dims());
            CHECK(R.cx(n).dims() == N.cx(n).dims());
            for (const auto& [d, dim] : N.cx(n).dims()) {
                (void)dim;
                CHECK(L.cx(n).diff(d) == N.cx(n).diff(d));
                CHECK(R.cx(n).diff(d) == N.cx(n).diff(d));
                for (int i = 0; i + 1 < n; ++i) {
                    Perm s = adjacent_transposition(n, i);
                    CHECK(L.act(n, s, d) == N.act(n, s, d));
                    CHECK(R.act(n, s, d) == N.act(n, s, d));
                }
            }
        }
    }
}

TEST_CASE("composite of one-dimensional trivial components counts set partitions") {
    SymModule C = trivial_module(4, {1, 2, 3, 4});
    SymModule CC = composite(C, C, 4);
    CHECK(CC.cx(1).dim(0) == 1);
    CHECK(CC.cx(2).dim(0) == 2);
    CHECK(CC.cx(3).dim(0) == 5);
    CHECK(CC.cx(4).dim(0) == 15);
}

TEST_CASE("composite of regular representations") {
    SymModule A = regular_module(3);
    SymModule AA = composite(A, A, 3);
    CHECK(AA.cx(1).dim(0) == 1);
    CHECK(AA.cx(2).dim(0) == 4);
    CHECK(AA.cx(3).dim(0) == 24);
    SymModule C = trivial_module(3, {1, 2, 3});
    CHECK(composite(C, A, 3).cx(3).dim(0) == 13);
    CHECK(composite(A, C, 3).cx(3).dim(0) == 13);
}

TEST_CASE("composite respects the inner sign twist in its action") {
    // M(1) trivial, M(2) = sgn: (M∘M)(2) is two copies of sgn
    SymModule M = sgn_module(2, {1, 2});
    SymModule MM = composite(M, M, 2);
    CHECK(MM.cx(2).dim(0) == 2);
    CHECK(MM.character(2, adjacent_transposition(2, 0)).at(0) == Rat(-2));
    // and at arity 3 the dimension count survives the twist
    SymModule M3 = sgn_module(3, {1, 2});
    CHECK(composite(M3, M3, 3).cx(3).dim(0) == 3);
}

TEST_CASE("composite sees the Koszul sign of odd slot contents") {
    // inner content in degree 1: swapping the two slots is the sign rep
    std::map<int, SymArity> comp;
    comp[1] = SymArity{ChainComplex::build({{1, 1}}, {}, {{1, {"x"}}}), {}};
    SymModule N(2, std::move(comp));
    SymModule T = composite(trivial_module(2, {2}), N, 2);
    CHECK(T.cx(2).dim(2) == 1);
    CHECK(T.character(2, adjacent_transposition(2, 0)).at(2) == Rat(-1));
}

TEST_CASE("composite differential follows the two-slot sign rule") {
    std::map<int, SymArity> comp;
    comp[1] = SymArity{disk(1, 1), {}};
    SymModule D(1, std::move(comp));
    SymModule T = composite(D, D, 1);
    // one slot: d(b1(b1)) = b0(b1) - b1(b0)
    CHECK(T.cx(1).dims() == std::map<int, int>{{0, 1}, {1, 2}, {2, 1}});
    CHECK(T.cx(1).diff(2) == dense({{1}, {-1}}));
    CHECK(T.cx(1).diff(1) == dense({{1, 1}}));
    CHECK(T.cx(1).homology() == std::map<int, int>{{0, 0}, {1, 0}, {2, 0}});
}

TEST_CASE("composite refuses non-reduced inner modules") {
    std::map<int, SymArity> comp;
    comp[0] = SymArity{ChainComplex::build({{0, 1}}, {}), {}};
    comp[1] = SymArity{ChainComplex::build({{0, 1}}, {}), {}};
    SymModule U(1, std::move(comp));
    SymModule M = trivial_module(1, {1});
    CHECK_THROWS_AS(composite(M, U, 1), NotReduced);
    CHECK_THROWS_AS(inf_composite(M, U), NotReduced);
}

TEST_CASE("composite associativity: regular representations, both ways frozen") {
    SymModule A = regular_module(3);
    SymModule L = composite(composite(A, A, 3), A, 3);
    SymModule R = composite(A, composite(A, A, 3), 3);
    CHECK(L.cx(1).dim(0) == 1);
    CHECK(L.cx(2).dim(0) == 6);
    CHECK(L.cx(3).dim(0) == 54);
    for (int n = 1; n <= 3; ++n) CHECK(same_characters(L, R, n));
}

TEST_CASE("composite associativity on random modules up to arity 4") {
    Rng g(4711);
    for (int trial = 0; trial < 2; ++trial) {
        SymModule M = rand_sym_module(g, 4, 2);
        SymModule N = rand_sym_module(g, 4, 2);
        SymModule P = rand_sym_module(g, 4, 2);
        SymModule L = composite(composite(M, N, 4), P, 4);
        SymModule R = composite(M, composite(N, P, 4), 4);
        for (int n = 1; n <= 4; ++n) {
            REQUIRE(L.cx(n).dims() == R.cx(n).dims());
            CHECK(same_characters(L, R, n));
        }
    }
}

TEST_CASE("averaging operator of a composite action is idempotent") {
    Rng g(99);
    SymModule M = rand_sym_module(g, 3, 2);
    SymModule N = rand_sym_module(g, 3, 2);
    SymModule T = composite(M, N, 3);
    for (int n = 2; n <= 3; ++n) {
        if (!T.present(n)) continue;
        for (const auto& [d, dim] : T.cx(n).dims()) {
            RationalMatrix e(dim, dim);
            for (const auto& p : all_perms(n)) e = e + T.act(n, p, d);
            Int f = 1;
            for (int i = 2; i <= n; ++i) f *= i;
            e = e.scaled(Rat(1) / Rat(f));
            CHECK(e * e == e);
        }
    }
}

TEST_CASE("infinitesimal composite against the unit recovers the module") {
    Rng g(31);
    SymModule N = rand_sym_module(g, 3, 3);
    SymModule T = inf_composite(unit_symmod(3), N);
    for (int n = 1; n <= 3; ++n) {
        CHECK(T.cx(n).dims() == N.cx(n).dims());
        for (const auto& [d, dim] : N.cx(n).dims()) {
            (void)dim;
            CHECK(T.cx(n).diff(d) == N.cx(n).diff(d));
            for (int i = 0; i + 1 < n; ++i)
                CHECK(T.act(n, adjacent_transposition(n, i), d) == N.act(n, adjacent_transposition(n, i), d));
        }
    }
}

TEST_CASE("infinitesimal composite counts marked partitions into a block and singletons") {
    SymModule C = trivial_module(4, {1, 2, 3, 4});
    SymModule T = inf_composite(C, C);
    CHECK(T.cx(1).dim(0) == 1);
    CHECK(T.cx(2).dim(0) == 3);
    CHECK(T.cx(3).dim(0) == 7);
    CHECK(T.cx(4).dim(0) == 15);
}

TEST_CASE("infinitesimal composite is linear in the distinguished argument") {
    Rng g(77);
    SymModule M = rand_sym_module(g, 3, 2);
    SymModule N1 = rand_sym_module(g, 3, 2);
    SymModule N2 = rand_sym_module(g, 3, 2);
    SymModule S = inf_composite(M, direct_sum_sym(N1, N2));
    // dimensions split degreewise; content mixes N1 and N2 slots only linearly
    // in the distinguished one, the unit elsewhere
    SymModule A = inf_composite(M, N1);
    SymModule B = inf_composite(M, N2);
    for (int n = 1; n <= 3; ++n) {
        std::map<int, int> want;
        for (const auto& [d, dim] : A.cx(n).dims()) want[d] += dim;
        for (const auto& [d, dim] : B.cx(n).dims()) want[d] += dim;
        CHECK(S.cx(n).dims() == want);
    }
}

TEST_CASE("infinitesimal composite of maps: the two-slot sign pattern") {
    // M trivial at arity 2; N1 = Q in degree 1, N2 = Q in degree 0; g: N1 -> N2
    // of degree -1.  On m(x,x) the slot terms pick up (+1, -1).
    SymModule M = trivial_module(2, {2});
    std::map<int, SymArity> c1, c2;
    c1[1] = SymArity{ChainComplex::build({{1, 1}}, {}, {{1, {"x"}}}), {}};
    c2[1] = SymArity{ChainComplex::build({{0, 1}}, {}, {{0, {"y"}}}), {}};
    SymModule N1(2, std::move(c1)), N2(2, std::move(c2));
    CompositeData src = composite_full(M, N1, 2);
    CompositeData tgt = inf_composite_full(M, N1, N2, 2);
    SymMap f = identity_sym_map(M);
    SymMap gm;
    gm.deg = -1;
    gm.comp[1][1] = dense({{1}});
    auto out = inf_composite_map(src, tgt, M, N1, M, N2, f, gm);
    REQUIRE(out.count(2));
    REQUIRE(out.at(2).count(2));
    CHECK(out.at(2).at(2) == dense({{1}, {-1}}));
    // and with an even map no sign appears
    std::map<int, SymArity> c3;
    c3[1] = SymArity{ChainComplex::build({{1, 2}}, {}, {{1, {"x", "x'"}}}), {}};
    SymModule N3(2, std::move(c3));
    CompositeData tgt0 = inf_composite_full(M, N1, N3, 2);
    SymMap g0;
    g0.deg = 0;
    g0.comp[1][1] = dense({{1}, {0}});
    auto out0 = inf_composite_map(src, tgt0, M, N1, M, N3, f, g0);
    REQUIRE(out0.count(2));
    // source m(x,x) degree 2 -> both slots replaced, coefficient +1 each
    const RationalMatrix& m0 = out0.at(2).at(2);
    CHECK(m0.get(0, 0) == Rat(1));
    bool found = false;
    for (const auto& [rc, v] : m0.entries())
        if (v == Rat(1) && rc.first != 0) found = true;
    CHECK(found);
}

TEST_CASE("hadamard tensor multiplies dimensions and composes characters") {
    Rng g(5);
    SymModule M = rand_sym_module(g, 3, 3);
    SymModule N = rand_sym_module(g, 3, 3);
    SymModule H = hadamard(M, N);
    for (int n = 1; n <= 3; ++n) {
        if (!M.present(n) || !N.present(n)) {
            CHECK(!H.present(n));
            continue;
        }
        CHECK(H.cx(n).total_dim() == M.cx(n).total_dim() * N.cx(n).total_dim());
        for (const auto& p : all_perms(n)) {
            auto cm = M.character(n, p), cn = N.character(n, p), ch = H.character(n, p);
            for (const auto& [d, v] : ch) {
                Rat want = 0;
                for (const auto& [dm, vm] : cm)
                    if (cn.count(d - dm)) want += vm * cn.at(d - dm);
                CHECK(v == want);
            }
        }
    }
}

TEST_CASE("hadamard: sign squared is trivial, trivial is a unit") {
    SymModule S = sgn_module(3, {1, 2, 3});
    SymModule H = hadamard(S, S);
    for (int n = 2; n <= 3; ++n)
        for (int i = 0; i + 1 < n; ++i)
            CHECK(H.act(n, adjacent_transposition(n, i), 0) == RationalMatrix::identity(1));
    SymModule R = regular_module(3);
    SymModule HR = hadamard(trivial_module(3, {1, 2, 3}), R);
    for (int n = 1; n <= 3; ++n) {
        CHECK(HR.cx(n).dims() == R.cx(n).dims());
        for (const auto& p : all_perms(n)) CHECK(HR.act(n, p, 0) == R.act(n, p, 0));
    }
}

TEST_CASE("schur functor of the unit is the identity") {
    Rng g(12);
    auto rc = testing::rand_complex(g);
    ChainComplex S = schur(unit_symmod(1), rc.X, 1);
    CHECK(complexes_equal(S, rc.X));
    for (const auto& [d, dim] : S.dims())
        for (int i = 0; i < dim; ++i) CHECK(S.weights(d)[i] == 1);
}

TEST_CASE("schur of trivial components gives symmetric power dimensions") {
    SymModule C = trivial_module(3, {1, 2, 3});
    ChainComplex V = ChainComplex::build({{0, 3}}, {});
    ChainComplex S = schur(C, V, 3);
    CHECK(weight_dims(S, 1) == std::map<int, int>{{0, 3}});
    CHECK(weight_dims(S, 2) == std::map<int, int>{{0, 6}});
    CHECK(weight_dims(S, 3) == std::map<int, int>{{0, 10}});
}

TEST_CASE("schur tracks Koszul signs of odd letters") {
    ChainComplex odd1 = ChainComplex::build({{1, 1}}, {});
    ChainComplex odd2 = ChainComplex::build({{1, 2}}, {});
    // Sym^2 of one odd line vanishes; of two odd lines it is the exterior square
    CHECK(schur(trivial_module(2, {2}), odd1, 2).is_zero());
    ChainComplex L = schur(trivial_module(2, {2}), odd2, 2);
    CHECK(L.dims() == std::map<int, int>{{2, 1}});
    // the sign component turns symmetric into exterior: sgn ⊗ odd²  has coinvariants
    ChainComplex W = schur(sgn_module(2, {2}), odd1, 2);
    CHECK(W.dims() == std::map<int, int>{{2, 1}});
    // sgn on two even letters is the exterior square again
    ChainComplex E = schur(sgn_module(2, {2}), ChainComplex::build({{0, 2}}, {}), 2);
    CHECK(E.dims() == std::map<int, int>{{0, 1}});
}

TEST_CASE("schur of a super line: one even and one odd generator") {
    SymModule C = trivial_module(3, {1, 2, 3});
    ChainComplex V = ChainComplex::build({{0, 1}, {1, 1}}, {});
    ChainComplex S = schur(C, V, 3);
    for (int w = 1; w <= 3; ++w)
        CHECK(weight_dims(S, w) == std::map<int, int>{{0, 1}, {1, 1}});
}

TEST_CASE("schur is monoidal for the Day tensor at the level of dimensions") {
    Rng g(321);
    for (int trial = 0; trial < 2; ++trial) {
        SymModule M = rand_sym_module(g, 2, 2);
        SymModule N = rand_sym_module(g, 2, 2);
        ChainComplex V = ChainComplex::build({{0, 1}, {1, 1}}, {});
        int W = 4;
        ChainComplex lhs = schur(tensor_sym(M, N), V, W);
        ChainComplex a = schur(M, V, W), b = schur(N, V, W);
        for (int w = 1; w <= W; ++w) {
            std::map<int, int> want;
            for (int i = 0; i <= w; ++i) {
                auto da = weight_dims(a, i), db = weight_dims(b, w - i);
                for (const auto& [p, dp] : da)
                    for (const auto& [q, dq] : db) want[p + q] += dp * dq;
            }
            std::map<int, int> got = weight_dims(lhs, w);
            for (auto it = want.begin(); it != want.end();) {
                if (it->second == 0) it = want.erase(it);
                else ++it;
            }
            CHECK(got == want);
        }
    }
}

TEST_CASE("schur turns composite into composition") {
    Rng g(55);
    for (int trial = 0; trial < 2; ++trial) {
        SymModule M = rand_sym_module(g, 4, 2);
        SymModule N = rand_sym_module(g, 4, 2);
        ChainComplex V = ChainComplex::build({{0, 1}, {1, 1}}, {});
        int W = 4;
        ChainComplex inner = schur(N, V, W);
        ChainComplex lhs = schur(composite(M, N, 4), V, W);
        ChainComplex rhs = schur(M, inner, W);
        for (int w = 1; w <= W; ++w) CHECK(weight_dims(lhs, w) == weight_dims(rhs, w));
    }
}

TEST_CASE("dual module flips degrees and keeps characters") {
    SymModule R = regular_module(3);
    SymModule D = dual_sym(R);
    for (int n = 1; n <= 3; ++n) {
        CHECK(D.cx(n).dim(0) == R.cx(n).dim(0));
        for (const auto& p : all_perms(n)) CHECK(D.character(n, p) == R.character(n, p));
    }
    // graded content moves to the negated degree
    std::map<int, SymArity> comp;
    comp[2] = SymArity{ChainComplex::build({{1, 1}}, {}), {std::map<int, RationalMatrix>{{1, dense({{-1}})}}}};
    SymModule M(2, std::move(comp));
    SymModule DM = dual_sym(M);
    CHECK(DM.cx(2).dim(-1) == 1);
    CHECK(DM.act(2, adjacent_transposition(2, 0), -1) == dense({{-1}}));
}

TEST_CASE("sigma-module JSON round trip and validation") {
    Rng g(808);
    SymModule M = rand_sym_module(g, 3, 3);
    Json j = sym_module_to_json(M);
    SymModule M2 = sym_module_from_json(j);
    CHECK(M2.max_arity() == M.max_arity());
    for (int n : M.arities()) {
        REQUIRE(M2.present(n));
        CHECK(complexes_equal(M2.cx(n), M.cx(n)));
        for (int i = 0; i + 1 < n; ++i)
            for (const auto& [d, dim] : M.cx(n).dims()) {
                (void)dim;
                CHECK(M2.act(n, adjacent_transposition(n, i), d) == M.act(n, adjacent_transposition(n, i), d));
            }
    }
    // weights survive
    {
        std::map<int, SymArity> comp;
        comp[1] = SymArity{ChainComplex::build({{0, 1}}, {}, {}, {{0, {4}}}), {}};
        SymModule W(1, std::move(comp));
        SymModule W2 = sym_module_from_json(sym_module_to_json(W));
        CHECK(W2.cx(1).weights(0) == std::vector<int>{4});
    }
    // corrupting a generator into a non-involution is caught on read
    Json bad = sym_module_to_json(regular_module(2));
    bad["components"]["2"]["generators"][0]["0"] = matrix_to_json(dense({{1, 1}, {0, 1}}));
    CHECK_THROWS_AS(sym_module_from_json(bad), Error);
    // generator count must match the arity
    Json bad2 = sym_module_to_json(regular_module(2));
    bad2["components"]["2"]["generators"] = Json::array();
    CHECK_THROWS_AS(sym_module_from_json(bad2), ParseError);
}
