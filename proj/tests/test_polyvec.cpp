#include <doctest.h>

#include "pw/polyvec.hpp"
#include "support.hpp"

using namespace pw;
using testsupport::SchoutenOracle;

namespace {

FreeCDGA plane(int dx = 0, int dy = 0)
{
    return FreeCDGA::make({{"x", dx}, {"y", dy}});
}

int sgn(int e) { return (e & 1) ? -1 : 1; }

}  // namespace

TEST_CASE("polyvector bases")
{
    Polyvectors line(FreeCDGA::polynomial_ring({"x"}), 0);
    CHECK(line.alg().gen(1).name == "@x");
    CHECK(line.alg().gen(1).degree == 0);
    for (int w = 0; w <= 2; ++w) CHECK(line.basis(w, 0, w).size() == 1);  // {1},{@x},{@x^2}

    Polyvectors point(FreeCDGA::make({}), 3);
    CHECK(point.basis(0, 0, 4).size() == 1);
    CHECK(point.basis(1, 3, 4).empty());

    // Pol(Q[x,y],1): weight 2 is f(x,y) @x@y; biderivations are determined
    // by their value on (x,y), so the count is the number of coefficients.
    Polyvectors pl(plane(), 1);
    int c = pl.alg().gen(2).size + pl.alg().gen(3).size;
    for (int s = c; s <= c + 3; ++s) {
        std::size_t coeffs = 0;
        for (int k = 0; k <= s - c; ++k) coeffs += static_cast<std::size_t>(k + 1);
        CHECK(pl.basis(2, 2, s).size() == coeffs);
    }
}

TEST_CASE("Schouten bracket small cases")
{
    Polyvectors line(FreeCDGA::polynomial_ring({"x"}), 0);
    CHECK(line.bracket(line.xi(0), line.x(0)) == line.alg().one());

    Polyvectors pl(plane(), 1);
    Poly pi = pl.mul(pl.x(0), pl.mul(pl.xi(0), pl.xi(1)));
    CHECK(pl.bracket(pi, pi).is_zero());
    auto rep = check_strict_poisson(pl, pi);
    CHECK(rep.ok());
    // {x,y} = [[pi,x],y] = -x: the induced bracket reads the word @x@y with
    // the Koszul sign of pulling @x past @y.
    CHECK(rep.brackets.at({"x", "y"}) == -pl.base().alg.var("x"));
}

TEST_CASE("bracket matches the biderivation oracle")
{
    std::mt19937 rng(31);
    for (int trial = 0; trial < 12; ++trial) {
        auto b = testsupport::random_cdga(rng, 3, -2, 2);
        for (int n = -1; n <= 2; ++n) {
            Polyvectors pol(b, n);
            SchoutenOracle oracle(pol);
            MonomialWindow w;
            w.max_size = 2 * pol.alg().gen(pol.alg().ngens() - 1).size + 2;
            auto mons = pol.alg().monomials(w);
            for (int k = 0; k < 6; ++k) {
                auto p = testsupport::random_element(rng, pol.alg(), mons, 3);
                auto q = testsupport::random_element(rng, pol.alg(), mons, 3);
                CHECK(pol.bracket(p, q) == oracle(p, q));
            }
        }
    }
}

TEST_CASE("Schouten identities on random homogeneous triples")
{
    std::mt19937 rng(4);
    int checked = 0;
    for (int trial = 0; trial < 10; ++trial) {
        auto b = testsupport::random_cdga(rng, 3, -2, 2);
        for (int n = 0; n <= 2; ++n) {
            Polyvectors pol(b, n);
            MonomialWindow w;
            w.max_size = 2 * pol.alg().gen(pol.alg().ngens() - 1).size + 2;
            auto mons = pol.alg().monomials(w);
            std::uniform_int_distribution<std::size_t> pick(0, mons.size() - 1);
            for (int k = 0; k < 5; ++k) {
                // homogeneous elements: single monomials with rational coefficients
                Poly P, Q, R;
                P.add_term(mons[pick(rng)], testsupport::small_rational(rng) + 5);
                Q.add_term(mons[pick(rng)], testsupport::small_rational(rng) + 5);
                R.add_term(mons[pick(rng)], testsupport::small_rational(rng) + 5);
                int p = *pol.degree(P), q = *pol.degree(Q), r = *pol.degree(R);
                // antisymmetry
                CHECK(pol.bracket(P, Q) == Rational(-sgn((p + n) * (q + n))) * pol.bracket(Q, P));
                // Jacobi
                CHECK(pol.bracket(P, pol.bracket(Q, R)) ==
                      pol.bracket(pol.bracket(P, Q), R) + Rational(sgn((p + n) * (q + n))) * pol.bracket(Q, pol.bracket(P, R)));
                // Leibniz in the second slot
                CHECK(pol.bracket(P, pol.mul(Q, R)) ==
                      pol.mul(pol.bracket(P, Q), R) + Rational(sgn((p + n) * q)) * pol.mul(Q, pol.bracket(P, R)));
                // weight bookkeeping
                auto br = pol.bracket(P, Q);
                if (!br.is_zero()) CHECK(*pol.weight(br) == *pol.weight(P) + *pol.weight(Q) - 1);
                ++checked;
            }
            // d_Pol squares to zero and is a derivation of the bracket
            for (int k = 0; k < 3; ++k) {
                Poly P;
                P.add_term(mons[pick(rng)], 1);
                CHECK(pol.d(pol.d(P)).is_zero());
            }
        }
    }
    CHECK(checked == 150);
}

TEST_CASE("check_strict_poisson")
{
    Polyvectors pl(plane(), 1);
    auto zero = check_strict_poisson(pl, Poly{});
    CHECK(zero.ok());
    CHECK(zero.brackets.empty());

    Poly pi = pl.mul(pl.xi(0), pl.xi(1));
    auto r = check_strict_poisson(pl, pi);
    CHECK(r.ok());
    CHECK(r.brackets.at({"x", "y"}) == pl.base().alg.constant(-1));
    CHECK(r.brackets.at({"y", "x"}) == pl.base().alg.constant(1));

    CHECK_THROWS_AS(check_strict_poisson(pl, pl.xi(0)), BidegreeError);

    // x @x@y + y @y@z on Q[x,y,z] fails Jacobi
    Polyvectors sp(FreeCDGA::polynomial_ring({"x", "y", "z"}), 1);
    Poly bad = sp.mul(sp.x(0), sp.mul(sp.xi(0), sp.xi(1))) + sp.mul(sp.x(1), sp.mul(sp.xi(1), sp.xi(2)));
    auto rb = check_strict_poisson(sp, bad);
    CHECK_FALSE(rb.ok());
    CHECK_FALSE(rb.jacobi_residual.is_zero());
}

TEST_CASE("strict Poisson structures correspond to bracket tables")
{
    Polyvectors sp(FreeCDGA::polynomial_ring({"x", "y", "z"}), 1);
    const auto& a = sp.base().alg;
    // so(3)-type linear bracket {x,y}=z, {y,z}=x, {z,x}=y
    BracketTable t;
    t[{"x", "y"}] = a.var("z");
    t[{"y", "z"}] = a.var("x");
    t[{"z", "x"}] = a.var("y");
    t[{"y", "x"}] = -a.var("z");
    t[{"z", "y"}] = -a.var("x");
    t[{"x", "z"}] = -a.var("y");
    auto pi = poisson_from_brackets(sp, t, 6);
    REQUIRE(pi.has_value());
    auto r = check_strict_poisson(sp, *pi);
    CHECK(r.ok());
    CHECK(r.brackets == t);

    // A non-antisymmetric table has no bivector.
    BracketTable sym;
    sym[{"x", "y"}] = a.one();
    sym[{"y", "x"}] = a.one();
    CHECK_FALSE(poisson_from_brackets(sp, sym, 6).has_value());
}

TEST_CASE("mc_check and nondegeneracy")
{
    Polyvectors pl(plane(), 1);
    Poly pi = pl.mul(pl.xi(0), pl.xi(1));
    MaurerCartanTower strict{0, {pi}};
    CHECK(mc_check(pl, strict).ok);

    // x (deg 0), xi (deg n): @x@xi is non-degenerate, x @x@xi is not.
    for (int n = -2; n <= 2; ++n) {
        auto b = FreeCDGA::make({{"x", 0}, {"xi", n}});
        Polyvectors pol(b, n + 1);
        Poly q = pol.mul(pol.xi(0), pol.xi(1));
        auto nd = nondegeneracy(pol, q);
        CHECK(nd.nondegenerate);
        CHECK(abs(nd.theta[0][1]) == 1);
        CHECK_FALSE(nondegeneracy(pol, pol.mul(pol.x(0), q)).nondegenerate);
    }
}
