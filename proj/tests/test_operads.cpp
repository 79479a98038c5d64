#include <doctest.h>

#include "pw/operads.hpp"
#include "pw/polyvec.hpp"
#include "support.hpp"

using namespace pw;

namespace {

// unsigned Stirling numbers of the first kind, c(k, j)
std::size_t stirling1(int k, int j)
{
    if (k == 0) return j == 0 ? 1 : 0;
    if (j == 0) return 0;
    return static_cast<std::size_t>(k - 1) * stirling1(k - 1, j) + stirling1(k - 1, j - 1);
}

HbarVector unit_vector(const ReesComponent& c, std::size_t a)
{
    HbarVector v(c.dim());
    v[a][0] = 1;
    return v;
}

int sgn(int e) { return (e % 2 + 2) % 2 ? -1 : 1; }

}  // namespace

TEST_CASE("multilinear dimensions and weights")
{
    std::size_t fact = 1;
    for (int k = 1; k <= 4; ++k) {
        fact *= static_cast<std::size_t>(k);
        CHECK(multilinear_basis(OperadKind::as, k).dim() == fact);
        CHECK(multilinear_basis(OperadKind::lie, k).dim() == fact / static_cast<std::size_t>(k));
        for (int n : {0, 1, 2, 3}) {
            auto p = multilinear_basis(OperadKind::pn, k, n);
            CHECK(p.dim() == fact);
            auto dist = p.weight_distribution();
            for (int j = 1; j <= k; ++j) CHECK(dist[j - k] == stirling1(k, j));
            for (std::size_t b = 0; b < p.dim(); ++b) CHECK(p.degrees[b] == -p.weights[b] * (1 - n));
        }
    }
    auto p3 = multilinear_basis(OperadKind::pn, 3, 1);
    CHECK(p3.weight_distribution() == std::map<int, std::size_t>{{-2, 2}, {-1, 3}, {0, 1}});
    CHECK(multilinear_basis(OperadKind::as, 2).words == std::vector<std::string>{"x1*x2", "x2*x1"});
    CHECK_THROWS_AS(multilinear_basis(OperadKind::pn, 5), ArityTooLarge);
    CHECK_THROWS_AS(rees_bd1(5), ArityTooLarge);
    CHECK_THROWS_AS(ArnoldAlgebra(1, 5), ArityTooLarge);
}

TEST_CASE("free P_n satisfies its relations and graded Jacobi")
{
    for (int n : {0, 1, 2, 3}) {
        FreePn p(n);
        for (const auto& rel : pn_relations(n)) CHECK(evaluate(p, rel.terms).empty());
        // Jacobi on elements of mixed degree
        const int s = p.bracket_degree();
        auto a = p.gen(1), b = p.bracket(p.gen(2), p.gen(3)), c = p.gen(4);
        int da = 0, db = s;
        auto lhs = p.bracket(a, p.bracket(b, c));
        auto rhs = p.bracket(p.bracket(a, b), c);
        for (const auto& [k, v] : p.bracket(b, p.bracket(a, c))) rhs[k] += sgn((da + s) * (db + s)) * v;
        std::erase_if(rhs, [](const auto& kv) { return kv.second == 0; });
        CHECK(lhs == rhs);
        // Leibniz with an element of degree s
        auto l1 = p.bracket(a, p.mul(b, c));
        auto l2 = p.mul(p.bracket(a, b), c);
        for (const auto& [k, v] : p.mul(b, p.bracket(a, c))) l2[k] += sgn((da + s) * db) * v;
        std::erase_if(l2, [](const auto& kv) { return kv.second == 0; });
        CHECK(l1 == l2);
    }
}

TEST_CASE("BD1 at arities 2 and 3 specializes to P1 and As")
{
    auto r1 = rees_bd1(1), r2 = rees_bd1(2), r3 = rees_bd1(3);
    CHECK(r2.dim() == 2);
    CHECK(r3.dim() == 6);
    CHECK(r2.filtration == std::vector<int>{2, 1});
    for (int k = 1; k <= 4; ++k)
        CHECK(rees_bd1(k).dim() == multilinear_basis(OperadKind::pn, k, 1).dim());

    std::size_t checked = 0;
    for (std::size_t a = 0; a < r2.dim(); ++a)
        for (std::size_t b = 0; b < r2.dim(); ++b)
            for (int i = 1; i <= 2; ++i) {
                auto c = rees_compose(r2, a, i, r2, b, r3);
                CHECK(specialize(c, 0) == p1_compose(r2, a, i, r2, b, r3));
                // hbar = 1 is As on words, computed independently
                auto at1 = specialize(c, 1);
                AsElement expect = as_compose(r2.sym[a], i, r2.sym[b], 2), got;
                for (std::size_t r = 0; r < r3.dim(); ++r)
                    for (const auto& [w, v] : r3.sym[r]) got[w] += at1[r] * v;
                std::erase_if(got, [](const auto& kv) { return kv.second == 0; });
                CHECK(got == expect);
                ++checked;
            }
    CHECK(checked == 8);

    // the product x1 x2 composed into itself has a bracket correction in hbar
    auto c = rees_compose(r2, 0, 1, r2, 1, r3);
    bool has_hbar = false;
    for (const auto& p : c)
        for (const auto& [e, v] : p) has_hbar = has_hbar || e > 0;
    CHECK_FALSE(has_hbar);
    auto unit = rees_compose(r1, 0, 1, r2, 1, r2);
    CHECK(unit == unit_vector(r2, 1));
}

TEST_CASE("Rees composition is associative over Q[hbar]")
{
    auto r2 = rees_bd1(2), r3 = rees_bd1(3), r4 = rees_bd1(4);
    std::size_t checked = 0;
    for (std::size_t a = 0; a < r2.dim(); ++a)
        for (std::size_t b = 0; b < r2.dim(); ++b)
            for (std::size_t c = 0; c < r2.dim(); ++c) {
                auto x = unit_vector(r2, a), y = unit_vector(r2, b), z = unit_vector(r2, c);
                for (int i = 1; i <= 2; ++i) {
                    auto xy = rees_compose(r2, x, i, r2, y, r3);
                    // sequential
                    for (int j = i; j <= i + 1; ++j) {
                        auto lhs = rees_compose(r3, xy, j, r2, z, r4);
                        auto yz = rees_compose(r2, y, j - i + 1, r2, z, r3);
                        auto rhs = rees_compose(r2, x, i, r3, yz, r4);
                        CHECK(lhs == rhs);
                        ++checked;
                    }
                    // parallel
                    for (int j = 1; j < i; ++j) {
                        auto lhs = rees_compose(r3, xy, j, r2, z, r4);
                        auto xz = rees_compose(r2, x, j, r2, z, r3);
                        auto rhs = rees_compose(r3, xz, i + 1, r2, y, r4);
                        CHECK(lhs == rhs);
                        ++checked;
                    }
                }
            }
    CHECK(checked == 40);
}

TEST_CASE("BD0 differential")
{
    auto r = bd0_check();
    CHECK(r.d_bracket_zero);
    CHECK(r.d_product_is_hbar_bracket);
    CHECK(r.d_squared_zero);
    CHECK(r.derivation_ok);
    CHECK(r.trees_checked == 53);
    CHECK(r.failures.empty());

    // d on the associativity word, expanded by hand
    using T = OpTree;
    auto assoc = T::prod(T::prod(T::leaf(1), T::leaf(2)), T::leaf(3));
    auto d = bd0_differential(assoc);
    REQUIRE(d.size() == 2);
    CHECK(d[0].second == T::br(T::prod(T::leaf(1), T::leaf(2)), T::leaf(3)));
    CHECK(d[1].second == T::prod(T::br(T::leaf(1), T::leaf(2)), T::leaf(3)));
    // under a bracket the inner differential picks up a sign
    auto d2 = bd0_differential(T::br(T::prod(T::leaf(1), T::leaf(2)), T::leaf(3)));
    REQUIRE(d2.size() == 1);
    CHECK(d2[0].first == -1);
}

TEST_CASE("Hopf coproduct of P_n")
{
    for (int n : {0, 1, 2, 3, 4}) {
        auto r = hopf_coproduct_check(n);
        CHECK(r.coassociative);
        CHECK(r.cocommutative);
        CHECK(r.relations_hold);
        CHECK(r.relations_respected);
        CHECK(r.relations_checked == 4 + 18);
        CHECK(r.failures.empty());
    }
    CHECK(hopf_coproduct_check(1, 2).relations_checked == 4);
}

TEST_CASE("Arnold algebras")
{
    for (int n : {1, 2, 3}) {
        ArnoldAlgebra a2(n, 2);
        CHECK(a2.hilbert() == std::map<int, std::size_t>{{0, 1}, {n, 1}});
        CHECK(a2.mul(a2.a(1, 2), a2.a(1, 2)).is_zero());
        CHECK(a2.a(2, 1) == Rational(sgn(n + 1)) * a2.a(1, 2));

        ArnoldAlgebra a3(n, 3);
        CHECK(a3.hilbert() == std::map<int, std::size_t>{{0, 1}, {n, 3}, {2 * n, 2}});
        CHECK(a3.pieces()[2].monomials == 3);
        CHECK(a3.pieces()[2].relation_rank == 1);
        Poly rel = a3.alg().mul(a3.a(1, 2), a3.a(2, 3)) + a3.alg().mul(a3.a(2, 3), a3.a(3, 1)) +
                   a3.alg().mul(a3.a(3, 1), a3.a(1, 2));
        CHECK(a3.reduce(rel).is_zero());
        CHECK_FALSE(a3.reduce(a3.alg().mul(a3.a(1, 2), a3.a(2, 3))).is_zero());

        // (1+q)(1+2q)(1+3q) at four points
        ArnoldAlgebra a4(n, 4);
        CHECK(a4.hilbert() == std::map<int, std::size_t>{{0, 1}, {n, 6}, {2 * n, 11}, {3 * n, 6}});
    }
}

TEST_CASE("Weyl structure map")
{
    // odd theta_1, theta_2 dual to a 2-dim V, t = identity, n = 2
    auto b = FreeCDGA::make({{"t1", 1}, {"t2", 1}});
    Matrix id{{1, 0}, {0, 1}};
    const auto& alg = b.alg;
    auto w = weyl_structure_map(b, id, 2, {alg.var("t1"), alg.var("t2")});
    Exponents a12{1};
    // t(theta_1, theta_2) = 0 for the identity pairing, t(theta_1, theta_1) = 1
    CHECK(w.coefficient(a12).is_zero());
    CHECK(w.unit_coefficient() == alg.mul(alg.var("t1"), alg.var("t2")));
    auto wd = weyl_structure_map(b, id, 2, {alg.var("t1"), alg.var("t1")});
    CHECK(wd.coefficient(a12) == alg.one());
    CHECK(wd.unit_coefficient().is_zero());
    Matrix off{{0, 1}, {1, 0}};
    CHECK(weyl_structure_map(b, off, 2, {alg.var("t1"), alg.var("t2")}).coefficient(a12) == alg.one());

    // t = 0 gives the plain product
    Matrix zero{{0, 0}, {0, 0}};
    auto w0 = weyl_structure_map(b, zero, 2, {alg.var("t1"), alg.var("t2"), alg.var("t1")});
    CHECK(w0.components.empty());  // theta_1 theta_2 theta_1 = 0
    auto w1 = weyl_structure_map(b, zero, 2, {alg.var("t1"), alg.var("t2")});
    CHECK(w1.components.size() == 1);
    CHECK(w1.unit_coefficient() == alg.mul(alg.var("t1"), alg.var("t2")));

    CHECK_THROWS_AS(weyl_structure_map(b, id, 1, {alg.var("t1"), alg.var("t2")}), Error);
}

TEST_CASE("Weyl bracket matches the polyvector bracket")
{
    struct Case {
        FreeCDGA b;
        Matrix t;
        int n;
    };
    std::vector<Case> cases = {
        {FreeCDGA::make({{"t1", 1}, {"t2", 1}}), {{1, 0}, {0, 1}}, 2},
        {FreeCDGA::make({{"t1", 1}, {"t2", 1}}), {{2, 1}, {1, -1}}, 2},
        {FreeCDGA::polynomial_ring({"p", "q"}), {{0, 1}, {-1, 0}}, 0},
        {FreeCDGA::make({{"u", 0}, {"v", 1}}), {{0, 1}, {1, 0}}, 1},
    };
    std::mt19937 rng(21);
    int idx = 0;
    for (const auto& c : cases) {
        INFO("case " << idx++);
        Polyvectors pol(c.b, c.n + 1);
        BracketTable table;
        const auto& g = c.b.alg.gens();
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) table[{g[i].name, g[j].name}] = c.b.alg.constant(c.t[i][j]);
        auto pi = poisson_from_brackets(pol, table, 8);
        REQUIRE(pi.has_value());
        MonomialWindow win;
        win.max_size = 3;
        auto mons = c.b.alg.monomials(win);
        Exponents a12{1};
        for (int trial = 0; trial < 8; ++trial) {
            // homogeneous inputs: single monomials with random coefficients
            Poly x, y;
            x.add_term(mons[rng() % mons.size()], testsupport::small_rational(rng) + 5);
            y.add_term(mons[rng() % mons.size()], testsupport::small_rational(rng) + 5);
            auto w = weyl_structure_map(c.b, c.t, c.n, {x, y});
            Poly br = pol.to_base(pol.bracket(pol.bracket(*pi, pol.from_base(x)), pol.from_base(y)));
            INFO(c.b.alg.str(x) << " , " << c.b.alg.str(y) << " weyl " << c.b.alg.str(w.coefficient(a12))
                                 << " pol " << c.b.alg.str(br));
            CHECK(w.coefficient(a12) == br);
            CHECK(w.unit_coefficient() == c.b.alg.mul(x, y));
            // transposition: the derived bracket is antisymmetric on degrees shifted by n+1
            auto ws = weyl_structure_map(c.b, c.t, c.n, {y, x});
            int dx = *c.b.alg.degree(x), dy = *c.b.alg.degree(y);
            CHECK(ws.coefficient(a12) == Rational(sgn((dx + c.n + 1) * (dy + c.n + 1))) * w.coefficient(a12));
        }
    }
}
