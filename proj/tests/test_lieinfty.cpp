#include <doctest.h>

#include "pw/lieinfty.hpp"
#include "support.hpp"

using namespace pw;

namespace {

// dim of invariant symmetric (order 2) or alternating (order 3) tensors,
// computed on the full tensor power with dense elimination.
std::size_t brute_invariants(const LieAlgebra& g, int order)
{
    const auto n = g.dim;
    std::size_t vars = order == 2 ? n * n : n * n * n;
    auto idx2 = [&](std::size_t i, std::size_t j) { return i * n + j; };
    auto idx3 = [&](std::size_t i, std::size_t j, std::size_t k) { return (i * n + j) * n + k; };
    std::vector<std::vector<Rational>> rows;
    auto row = [&] { return std::vector<Rational>(vars); };
    if (order == 2) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                auto r = row();
                r[idx2(i, j)] += 1;
                r[idx2(j, i)] -= 1;
                rows.push_back(r);
            }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    auto r = row();
                    for (std::size_t i = 0; i < n; ++i) r[idx2(i, l)] += g.c[a][i][k];
                    for (std::size_t j = 0; j < n; ++j) r[idx2(k, j)] += g.c[a][j][l];
                    rows.push_back(r);
                }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    auto r = row();
                    r[idx3(i, j, k)] += 1;
                    r[idx3(j, i, k)] += 1;
                    rows.push_back(r);
                    auto s = row();
                    s[idx3(i, j, k)] += 1;
                    s[idx3(i, k, j)] += 1;
                    rows.push_back(s);
                }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y)
                    for (std::size_t z = 0; z < n; ++z) {
                        auto r = row();
                        for (std::size_t i = 0; i < n; ++i) {
                            r[idx3(i, y, z)] += g.c[a][i][x];
                            r[idx3(x, i, z)] += g.c[a][i][y];
                            r[idx3(x, y, i)] += g.c[a][i][z];
                        }
                        rows.push_back(r);
                    }
    }
    return vars - reference::rank(SparseMatrix::from_dense(rows));
}

std::size_t binom(std::size_t n, std::size_t k)
{
    std::size_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

TEST_CASE("validate_lie")
{
    CHECK(validate_lie(LieAlgebra::abelian(3)).ok());
    CHECK(validate_lie(LieAlgebra::sl2()).ok());
    CHECK(validate_lie(LieAlgebra::nonabelian2()).ok());

    auto g = LieAlgebra::sl2();
    g.set(0, 1, {1, 0, 1});  // [e,f] = h + e
    auto r = validate_lie(g);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0] == "jacobi (1,2,3)");

    auto h = LieAlgebra::sl2();
    h.c[0][1][2] += 1;
    CHECK(validate_lie(h).failures.front() == "antisymmetry (1,2)");
}

TEST_CASE("Chevalley-Eilenberg mixed algebra")
{
    auto ab = ce_algebra(LieAlgebra::abelian(3));
    for (const auto& e : ab.eps) CHECK(e.is_zero());
    CHECK(ce(LieAlgebra::abelian(3)).eps().is_zero());

    auto m = ce_algebra(LieAlgebra::sl2());
    // [e,f] = h: eps(t_h) = -t_e t_f; [h,e] = 2e: eps(t_e) = -2 t_h t_e = 2 t_e t_h
    CHECK(m.eps[2] == -m.alg.mul(m.alg.var(0), m.alg.var(1)));
    CHECK(m.eps[0] == Rational(2) * m.alg.mul(m.alg.var(0), m.alg.var(2)));
    CHECK(validate_mixed_algebra(m).ok());

    auto c = ce(LieAlgebra::sl2());
    CHECK(c.dim() == 8);
    CHECK(validate_mixed(c).ok());
    auto h = realization(c, 3).complex.homology_dims();
    CHECK(h[0] == 1);
    CHECK(h[1] == 0);
    CHECK(h[2] == 0);
    CHECK(h[3] == 1);
}

TEST_CASE("ce passes validate_mixed iff the constants satisfy Jacobi")
{
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> small(-2, 2);
    std::uniform_int_distribution<std::size_t> pick(0, 3);
    int valid = 0, invalid = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto g = testsupport::random_lie4(rng);
        REQUIRE(validate_lie(g).ok());
        CHECK(validate_mixed(ce(g)).ok());
        auto i = pick(rng), j = pick(rng);
        if (i == j) continue;
        auto v = g.c[i][j];
        v[pick(rng)] += small(rng);
        g.set(i, j, v);
        bool lie = validate_lie(g).ok();
        CHECK(validate_mixed(ce(g)).ok() == lie);
        (lie ? valid : invalid) += 1;
    }
    CHECK(invalid > 0);
}

TEST_CASE("lie_from_mixed inverts ce")
{
    std::vector<LieAlgebra> gs = {LieAlgebra::sl2(), LieAlgebra::nonabelian2(), LieAlgebra::abelian(4),
                                  LieAlgebra::abelian(3)};
    std::mt19937 rng(77);
    for (int i = 0; i < 10; ++i) gs.push_back(testsupport::random_lie4(rng));
    for (const auto& g : gs) {
        auto back = lie_from_mixed(ce_algebra(g));
        CHECK(back.report.ok());
        CHECK(back.g.c == g.c);
        auto b = ce_algebra(g);
        CHECK(ce_algebra(lie_from_mixed(b).g).eps == b.eps);
    }

    // eps = 0 gives the abelian algebra
    auto zero = ce_algebra(LieAlgebra::abelian(2));
    CHECK(lie_from_mixed(zero).g.c == LieAlgebra::abelian(2).c);

    MixedAlgebra bad;
    bad.alg = FreeAlgebra({{"u", 0, 1, 1}});
    bad.d = {Poly{}};
    bad.eps = {Poly{}};
    CHECK_THROWS_AS(lie_from_mixed(bad), NotFreeOnV);
    auto cubic = ce_algebra(LieAlgebra::abelian(3));
    cubic.eps[0] = cubic.alg.mul(cubic.alg.var(0), cubic.alg.mul(cubic.alg.var(1), cubic.alg.var(2)));
    CHECK_THROWS_AS(lie_from_mixed(cubic), NotFreeOnV);
}

namespace {

// a, c odd of degree 1, b of degree 0, d b = a + c, binary brackets failing
// Jacobi.
LInftyStructure three_dim_example()
{
    auto s = LInftyStructure::make({{"a", 1}, {"b", 0}, {"c", 1}});
    const auto& A = s.alg;
    s.d[1] = A.var("a") + A.var("c");
    s.brackets[2] = {Poly{}, -A.mul(A.var("b"), A.var("c")), A.mul(A.var("a"), A.var("c"))};
    return s;
}

}  // namespace

TEST_CASE("weak mixed structures")
{
    auto c = ce(LieAlgebra::sl2());
    WeakMixedStructure strict{c.basis(), c.d(), {c.eps()}};
    auto r = weak_mixed_validate(strict);
    CHECK(r.ok);
    CHECK_FALSE(r.inconclusive);
    CHECK(r.checked_up_to == 0);

    auto s = three_dim_example();
    auto w = linfty_to_weak_mixed(s, 4);
    REQUIRE(w.eps.size() == 1);
    auto fail = weak_mixed_validate(w);
    CHECK_FALSE(fail.ok);
    CHECK(fail.failing_index == 0);

    // bounded check: only i = -1 is inside the bound
    auto bounded = w;
    bounded.bound = 0;
    auto rb = weak_mixed_validate(bounded);
    CHECK(rb.ok);
    CHECK(rb.inconclusive);

    auto eps1 = solve_weak_correction(w, 0);
    REQUIRE(eps1.has_value());
    auto corrected = w;
    corrected.eps.push_back(*eps1);
    corrected.bound = 1;
    auto rc = weak_mixed_validate(corrected);
    CHECK(rc.ok);
    CHECK(rc.checked_up_to == 0);

    // wrong bidegree
    auto skewed = strict;
    skewed.eps = {c.eps(), c.eps()};  // eps_1 must raise weight by 2
    CHECK_THROWS_AS(weak_mixed_validate(skewed), BidegreeMismatch);
}

TEST_CASE("L-infinity structures")
{
    // A strict Lie structure on L = g^v[-1] reduces to ce.
    auto g = LieAlgebra::sl2();
    auto m = ce_algebra(g);
    auto s = LInftyStructure::make(m.alg.gens());
    s.brackets[2] = m.eps;
    auto w = linfty_to_weak_mixed(s, 3);
    auto c = ce(g);
    REQUIRE(w.eps.size() == 1);
    CHECK(w.eps[0] == c.eps());
    CHECK(w.d.is_zero());
    CHECK(linfty_validate(s, 2).ok);

    auto zero = LInftyStructure::make({{"u", 0}, {"v", 1}});
    zero.brackets[2] = {Poly{}, Poly{}};
    zero.brackets[3] = {Poly{}, Poly{}};
    CHECK(linfty_validate(zero, 4).ok);
    CHECK(weak_mixed_validate(linfty_to_weak_mixed(zero, 3)).ok);

    auto ex = three_dim_example();
    auto r0 = linfty_validate(ex, 2);
    CHECK_FALSE(r0.ok);
    CHECK(r0.failing_index == 0);
    auto b3 = solve_linfty_correction(ex, 3);
    REQUIRE(b3.has_value());
    ex.brackets[3] = *b3;
    const auto& A = ex.alg;
    CHECK_FALSE((*b3)[0].is_zero());
    CHECK(A.weight((*b3)[0]) == 3);
    auto r = linfty_validate(ex, 5);
    CHECK(r.ok);
    CHECK_FALSE(r.inconclusive);
    CHECK(weak_mixed_validate(linfty_to_weak_mixed(ex, 5)).ok);
}

TEST_CASE("linfty_validate agrees with the materialized weak mixed check")
{
    std::mt19937 rng(12);
    std::uniform_int_distribution<int> deg(-1, 2), co(-1, 1);
    int passes = 0, fails = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto s = LInftyStructure::make({{"a", deg(rng)}, {"b", deg(rng)}, {"c", deg(rng)}});
        const auto& A = s.alg;
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t l = 0; l < 3; ++l)
                if (l != j && A.gen(l).degree == A.gen(j).degree + 1 && co(rng)) s.d[j] += A.var(l);
        for (int k = 2; k <= 3; ++k) {
            std::vector<Poly> imgs(3);
            for (std::size_t j = 0; j < 3; ++j) {
                MonomialWindow win;
                win.max_size = k;
                win.min_weight = win.max_weight = k;
                win.min_degree = win.max_degree = A.gen(j).degree + 1;
                for (const auto& mono : A.monomials(win))
                    if (int c = co(rng)) imgs[j].add_term(mono, c);
            }
            s.brackets[k] = imgs;
        }
        auto gen = linfty_validate(s, 5);
        auto mat = weak_mixed_validate(linfty_to_weak_mixed(s, 6, 5));
        CHECK(gen.ok == mat.ok);
        if (!gen.ok && mat.ok == gen.ok) CHECK(gen.failing_index == mat.failing_index);
        (gen.ok ? passes : fails) += 1;
    }
    CHECK(passes > 0);
    CHECK(fails > 0);
}

TEST_CASE("invariant tensors")
{
    for (std::size_t n = 1; n <= 5; ++n) {
        auto g = LieAlgebra::abelian(n);
        CHECK(invariants(g, TensorKind::sym2).size() == n * (n + 1) / 2);
        CHECK(invariants(g, TensorKind::wedge3).size() == binom(n, 3));
    }
    auto sl2 = LieAlgebra::sl2();
    auto s2 = invariants(sl2, TensorKind::sym2);
    auto w3 = invariants(sl2, TensorKind::wedge3);
    CHECK(s2.size() == 1);
    CHECK(w3.size() == 1);

    std::mt19937 rng(5);
    std::vector<LieAlgebra> gs = {sl2, LieAlgebra::nonabelian2(), LieAlgebra::abelian(3)};
    for (int i = 0; i < 8; ++i) gs.push_back(testsupport::random_lie4(rng));
    for (const auto& g : gs) {
        for (auto kind : {TensorKind::sym2, TensorKind::wedge3}) {
            auto inv = invariants(g, kind);
            CHECK(inv.size() == brute_invariants(g, kind == TensorKind::sym2 ? 2 : 3));
            for (const auto& t : inv) CHECK(is_invariant(g, t));
        }
    }
}

TEST_CASE("Killing tensor and Z")
{
    auto sl2 = LieAlgebra::sl2();
    auto t = killing_tensor(sl2);
    CHECK(is_invariant(sl2, t));
    // Killing form of sl2: K(e,f) = 4, K(h,h) = 8; the dual tensor is ef/4 + h^2/8
    auto basis = tensor_basis(TensorKind::sym2, 3);
    for (std::size_t b = 0; b < basis.size(); ++b) {
        Rational expect = 0;
        if (basis[b] == std::vector<std::size_t>{0, 1}) expect = Rational(1, 2);
        if (basis[b] == std::vector<std::size_t>{2, 2}) expect = Rational(1, 8);
        CHECK(t.coeffs[b] == expect);
    }

    auto z = z_from_t(sl2, t);
    CHECK_FALSE(z.is_zero());
    auto line = invariants(sl2, TensorKind::wedge3);
    REQUIRE(line.size() == 1);
    CHECK(rank_of({SparseVector::from_dense(z.coeffs), SparseVector::from_dense(line[0].coeffs)}) == 1);

    auto ab = LieAlgebra::abelian(3);
    InvariantTensor any{TensorKind::sym2, {1, 2, 3, 4, 5, 6}};
    CHECK(z_from_t(ab, any).is_zero());
    InvariantTensor zero{TensorKind::sym2, std::vector<Rational>(6)};
    CHECK(z_from_t(sl2, zero).is_zero());

    InvariantTensor bad{TensorKind::sym2, {1, 0, 0, 0, 0, 0}};  // e^2
    CHECK_THROWS_AS(z_from_t(sl2, bad), NotInvariant);

    std::mt19937 rng(3);
    for (int i = 0; i < 6; ++i) {
        auto g = testsupport::random_lie4(rng);
        auto span_w3 = invariants(g, TensorKind::wedge3);
        for (const auto& tt : invariants(g, TensorKind::sym2)) {
            auto zz = z_from_t(g, tt);
            std::vector<SparseVector> vs;
            for (const auto& v : span_w3) vs.push_back(SparseVector::from_dense(v.coeffs));
            auto r = rank_of(vs);
            vs.push_back(SparseVector::from_dense(zz.coeffs));
            CHECK(rank_of(vs) == r);
        }
    }
}

TEST_CASE("semi_strict_check")
{
    auto sl2 = LieAlgebra::sl2();
    InvariantTensor zero{TensorKind::wedge3, {0}};
    CHECK(semi_strict_check(sl2, zero).ok());
    auto z = z_from_t(sl2, killing_tensor(sl2));
    CHECK(semi_strict_check(sl2, z).ok());

    // wedge^3 of sl2 is invariant for dimension reasons; a non-unimodular
    // algebra has a non-invariant top form.
    auto g = LieAlgebra::zero(3);
    g.set(0, 1, {0, 1, 0});
    g.set(0, 2, {0, 0, 1});
    InvariantTensor top{TensorKind::wedge3, {1}};
    auto r = semi_strict_check(g, top);
    CHECK_FALSE(r.invariant);
    CHECK_FALSE(r.mc_ok);
    CHECK(r.mc.failing_index == 0);

    std::mt19937 rng(21);
    std::uniform_int_distribution<int> small(-2, 2);
    for (int i = 0; i < 10; ++i) {
        auto h = testsupport::random_lie4(rng);
        InvariantTensor zz{TensorKind::wedge3, {}};
        for (int k = 0; k < 4; ++k) zz.coeffs.push_back(small(rng));
        auto rep = semi_strict_check(h, zz);
        CHECK(rep.invariant == rep.mc_ok);
    }
}
