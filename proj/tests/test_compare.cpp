#include <doctest.h>

#include "pw/compare.hpp"
#include "support.hpp"

using namespace pw;

namespace {

FreeCDGA x_e(bool with_d)
{
    auto tmp = FreeCDGA::make({{"x", 0}, {"e", -1}});
    if (!with_d) return tmp;
    Poly x2 = tmp.alg.mul(tmp.alg.var("x"), tmp.alg.var("x"));
    return FreeCDGA::make({{"x", 0}, {"e", -1}}, {{"e", x2}});
}

Poly prod(const FreeAlgebra& a, std::initializer_list<std::string> names, const Rational& c = 1)
{
    Poly p = a.constant(c);
    for (const auto& n : names) p = a.mul(p, a.var(n));
    return p;
}

Matrix mat_mul(const Matrix& a, const Matrix& b)
{
    Matrix c(a.size(), std::vector<Rational>(b[0].size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

ClosedFormTower tower_of(int n, const Poly& omega, const MixedAlgebra& dr)
{
    ClosedFormTower t;
    t.n = n;
    for (const auto& [m, c] : omega.terms()) t.components[dr.alg.weight(m)].add_term(m, c);
    return t;
}

}  // namespace

TEST_CASE("phi_pi on the shifted plane with d(e) = x^2")
{
    auto b = x_e(true);
    Polyvectors pol(b, 0);
    Poly pi = prod(pol.alg(), {"@x", "@e"});
    auto phi = phi_pi(b, pi, -1);
    CHECK(phi.nondegenerate);
    auto rep = check_phi(phi, 7, 3);
    CHECK(rep.checked > 20);
    CHECK(rep.chain_map());
    CHECK(rep.generator_iso);
    CHECK(rep.bidegree_iso());
    // phi(dx) = [pi, x] is a symbol of e, phi(de) one of x
    CHECK(phi.images[phi.dr.alg.index("dx")] == prod(pol.alg(), {"@e"}));
    CHECK(phi.images[phi.dr.alg.index("de")] == prod(pol.alg(), {"@x"}));
}

TEST_CASE("phi_pi is a chain map on random constant bivectors")
{
    std::mt19937 rng(12);
    auto b = FreeCDGA::polynomial_ring({"a", "b", "c", "d"});
    Polyvectors pol(b, 1);
    int done = 0;
    while (done < 6) {
        Poly pi;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j)
                pi += testsupport::small_rational(rng) * pol.mul(pol.xi(i), pol.xi(j));
        auto phi = phi_pi(b, pi, 0, false);
        auto rep = check_phi(phi, 3, 2);
        CHECK(rep.chain_map());
        CHECK(rep.generator_iso == phi.nondegenerate);
        CHECK(rep.bidegree_iso() == phi.nondegenerate);
        ++done;
    }
}

TEST_CASE("phi_pi rejects degenerate and non-Poisson input")
{
    auto b = FreeCDGA::polynomial_ring({"x", "y"});
    Polyvectors pol(b, 1);
    CHECK_THROWS_AS(phi_pi(b, Poly{}, 0), Degenerate);
    Poly pi = prod(pol.alg(), {"x", "@x", "@y"});
    CHECK_THROWS_AS(phi_pi(b, pi, 0), Degenerate);
    auto phi = phi_pi(b, pi, 0, false);
    CHECK(check_phi(phi, 5, 3).chain_map());
    CHECK_FALSE(check_phi(phi, 5, 3).bidegree_iso());
}

TEST_CASE("dualization on the plane and on a block diagonal bivector")
{
    auto b = FreeCDGA::polynomial_ring({"x", "y"});
    Polyvectors pol(b, 1);
    Poly pi = prod(pol.alg(), {"@x", "@y"});
    auto w = poisson_to_form(b, pi, 0);
    auto dr = de_rham(b);
    CHECK(w.omega == prod(dr.alg, {"dx", "dy"}));
    CHECK(validate_symplectic(w).ok());
    CHECK(symplectic_to_poisson(w) == pi);

    auto b4 = FreeCDGA::polynomial_ring({"a", "b", "c", "d"});
    Polyvectors pol4(b4, 1);
    Poly pi4 = prod(pol4.alg(), {"@a", "@b"}) + prod(pol4.alg(), {"@c", "@d"}, 2);
    auto w4 = poisson_to_form(b4, pi4, 0);
    auto dr4 = de_rham(b4);
    CHECK(w4.omega == prod(dr4.alg, {"da", "db"}) + prod(dr4.alg, {"dc", "dd"}, Rational(1, 2)));
    CHECK(symplectic_to_poisson(w4) == pi4);
}

TEST_CASE("Theta of the dual form is the inverse transpose")
{
    std::mt19937 rng(5);
    auto b = FreeCDGA::polynomial_ring({"a", "b", "c", "d"});
    Polyvectors pol(b, 1);
    int trials = 0;
    while (trials < 10) {
        Poly pi;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j)
                pi += testsupport::small_rational(rng) * pol.mul(pol.xi(i), pol.xi(j));
        if (!nondegeneracy(pol, pi).nondegenerate) continue;
        ++trials;
        auto tp = theta_of_bivector(pol, pi);
        auto w = poisson_to_form(b, pi, 0);
        CHECK(validate_symplectic(w).ok());
        CHECK(mat_mul(transpose(w.theta), tp) == mat_mul(tp, transpose(w.theta)));
        auto id = mat_mul(transpose(w.theta), tp);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK(id[i][j] == Rational(i == j ? 1 : 0));
        CHECK(symplectic_to_poisson(w) == pi);
    }

    // mixed degrees: x_i of degree 0, e_i of degree -1, n = -1
    auto bm = FreeCDGA::make({{"x1", 0}, {"x2", 0}, {"e1", -1}, {"e2", -1}});
    Polyvectors polm(bm, 0);
    trials = 0;
    while (trials < 5) {
        Poly pi;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 2; j < 4; ++j)
                pi += testsupport::small_rational(rng) * polm.mul(polm.xi(i), polm.xi(j));
        if (!nondegeneracy(polm, pi).nondegenerate) continue;
        ++trials;
        auto w = poisson_to_form(bm, pi, -1);
        CHECK(validate_symplectic(w).ok());
        CHECK(symplectic_to_poisson(w) == pi);
    }
}

TEST_CASE("degenerate forms are rejected")
{
    auto b = FreeCDGA::polynomial_ring({"x", "y"});
    auto dr = de_rham(b);
    auto w = make_symplectic(b, 0, prod(dr.alg, {"x", "dx", "dy"}));
    CHECK_FALSE(validate_symplectic(w).pairing_failures.empty());
    CHECK_THROWS_AS(symplectic_to_poisson(w), Degenerate);
    CHECK_THROWS_AS(symplectic_to_poisson(make_symplectic(b, 0, Poly{})), Degenerate);
}

TEST_CASE("strictification on minimal algebras")
{
    struct Case {
        FreeCDGA b;
        int n;
        std::vector<std::pair<std::string, std::string>> pairs;
    };
    std::vector<Case> cases = {
        {FreeCDGA::polynomial_ring({"x", "y"}), 0, {{"dx", "dy"}}},
        {x_e(true), -1, {{"dx", "de"}}},
        {x_e(false), -1, {{"dx", "de"}}},
        {FreeCDGA::polynomial_ring({"a", "b", "c", "d"}), 0, {{"da", "db"}, {"dc", "dd"}}},
        {FreeCDGA::make({{"u", 1}, {"v", -1}}), 0, {{"du", "dv"}}},
    };
    for (const auto& c : cases) {
        auto dr = de_rham(c.b);
        Poly omega;
        for (const auto& [p, q] : c.pairs) omega += prod(dr.alg, {p, q});
        auto t = tower_of(c.n, omega, dr);
        CHECK(tower_residuals(dr, t, 3).empty());
        auto r = strictify_closed_two_form(c.b, t, 3, 6);
        CHECK(r.identity_gauge);
        CHECK(r.strict_form == omega);
        CHECK(gauge_residual(c.b, t, r, 3).empty());
    }
}

TEST_CASE("strictification undoes a random gauge push")
{
    std::mt19937 rng(8);
    auto b = x_e(true);
    auto dr = de_rham(b);
    const int wmax = 3, size = 7;
    Poly omega = prod(dr.alg, {"dx", "de"});
    MonomialWindow win;
    win.max_size = size - 2;
    win.min_weight = 2;
    win.max_weight = wmax;
    win.min_degree = 0;
    win.max_degree = 0;
    auto mons = dr.alg.monomials(win);
    REQUIRE(!mons.empty());
    for (int trial = 0; trial < 5; ++trial) {
        Poly h = testsupport::random_element(rng, dr.alg, mons, 3);
        if (h.is_zero()) continue;
        Poly pushed = omega + dr.apply_total(h);
        auto t = tower_of(-1, pushed, dr);
        for (auto it = t.components.begin(); it != t.components.end();)
            it = it->first > wmax ? t.components.erase(it) : std::next(it);
        CHECK(tower_residuals(dr, t, wmax).empty());
        auto r = strictify_closed_two_form(b, t, wmax, size);
        CHECK(gauge_residual(b, t, r, wmax).empty());
        CHECK(dr.apply_d(r.strict_form).is_zero());
        CHECK(dr.apply_eps(r.strict_form).is_zero());
        CHECK(same_class(b, t, r.strict, wmax, size));
        CHECK(same_class(b, t, tower_of(-1, omega, dr), wmax, size));
    }
    auto other = tower_of(-1, prod(dr.alg, {"x", "dx", "de"}), dr);
    CHECK_FALSE(same_class(b, tower_of(-1, omega, dr), other, wmax, size));
}

TEST_CASE("strictification errors")
{
    auto tmp = FreeCDGA::make({{"x", 0}, {"e", -1}});
    auto nonmin = FreeCDGA::make({{"x", 0}, {"e", -1}}, {{"e", tmp.alg.var("x")}});
    auto dr = de_rham(nonmin);
    CHECK_THROWS_AS(strictify_closed_two_form(nonmin, tower_of(-1, prod(dr.alg, {"dx", "de"}), dr), 2, 4),
                    NotMinimal);

    auto b = x_e(true);
    auto drb = de_rham(b);
    auto t = tower_of(-1, prod(drb.alg, {"x", "x", "x", "dx", "de"}), drb);
    try {
        strictify_closed_two_form(b, t, 3, 3);
        FAIL("expected GaugeNotFound");
    } catch (const GaugeNotFound& e) {
        CHECK(e.window_too_small);
    }
}

TEST_CASE("leading term of a Maurer-Cartan tower")
{
    auto b = x_e(true);
    Polyvectors pol(b, 0);
    Poly q = prod(pol.alg(), {"@x", "@e"});
    Poly p0 = q + prod(pol.alg(), {"x", "@x", "@e"});
    MaurerCartanTower tower{-1, {p0}, 2};
    CHECK(mc_check(pol, tower).ok);
    auto rep = darboux_leading_term(pol, tower);
    CHECK(rep.q == q);
    CHECK(rep.ok());
    CHECK(rep.residual_tower[0] == p0 - q);

    MaurerCartanTower flat{-1, {Poly{}}, 1};
    CHECK_THROWS_AS(darboux_leading_term(pol, flat), Degenerate);
}

TEST_CASE("an obstructed leading term")
{
    // [p0,p0] != 0 and d = 0, so no p1 exists and equation 0 fails both in
    // the original and in the rewritten tower
    auto b = FreeCDGA::polynomial_ring({"a", "b", "c", "d"});
    Polyvectors pol(b, 1);
    Poly p0 = prod(pol.alg(), {"@a", "@b"}) + prod(pol.alg(), {"@c", "@d"}) + prod(pol.alg(), {"a", "@c", "@d"});
    REQUIRE_FALSE(pol.bracket(p0, p0).is_zero());
    MaurerCartanTower tower{0, {p0}, 1};
    auto mc = mc_check(pol, tower);
    CHECK_FALSE(mc.ok);
    CHECK(mc.failing_index == 0);
    auto rep = darboux_leading_term(pol, tower);
    CHECK(rep.dq_zero);
    CHECK(rep.qq_zero);
    CHECK_FALSE(rep.rewritten.ok);
    CHECK(rep.rewritten.failing_index == 0);
    CHECK_FALSE(rep.ok());
}
