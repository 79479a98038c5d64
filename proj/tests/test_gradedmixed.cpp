#include <doctest.h>

#include "pw/gradedmixed.hpp"
#include "support.hpp"

using namespace pw;
using testsupport::random_mixed;

namespace {

GradedMixedComplex with_maps(const GradedMixedComplex& base, std::vector<SparseMatrix::Triplet> d,
                             std::vector<SparseMatrix::Triplet> eps)
{
    auto n = base.dim();
    return {base.basis(), SparseMatrix(n, n, d), SparseMatrix(n, n, eps)};
}

}  // namespace

TEST_CASE("validate_mixed basics")
{
    // d-only complex with eps = 0
    GradedMixedComplex e({{"a", 0, 0}, {"b", 0, 1}}, SparseMatrix(2, 2, {{1, 0, 1}}), SparseMatrix::zero(2, 2));
    CHECK(validate_mixed(e).ok());
    CHECK(validate_mixed(cell_model(3)).ok());
}

TEST_CASE("cell model variants")
{
    // Z_2: x0 x1 x2 | y0 y1 y2 at indices 0..5
    auto z = cell_model(2);
    auto eps2 = with_maps(z, {{3, 1, 1}, {4, 2, 1}}, {{3, 0, 1}, {4, 1, 2}, {5, 2, 1}});
    CHECK(validate_mixed(eps2).ok());
    // d(x2) = y0 leaves the bidegree of x2; the error names the witness.
    try {
        (void)with_maps(z, {{3, 1, 1}, {3, 2, 1}}, {{3, 0, 1}, {4, 1, 1}, {5, 2, 1}});
        FAIL("expected BidegreeMismatch");
    } catch (const BidegreeMismatch& ex) {
        CHECK(std::string(ex.what()).find("d(x2)") != std::string::npos);
    }
    // Bidegree-correct but inconsistent maps are reported with witnesses.
    GradedMixedComplex bad({{"a", 0, 0}, {"b", 0, 1}, {"c", 1, 1}, {"f", 1, 2}},
                           SparseMatrix(4, 4, {{1, 0, 1}, {3, 2, 1}}), SparseMatrix(4, 4, {{2, 0, 1}, {3, 1, 1}}));
    auto r = validate_mixed(bad);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].identity == "d*eps+eps*d");
    CHECK(r.violations[0].witness == "a");
}

TEST_CASE("tensor")
{
    auto z0 = cell_model(0);
    auto t = tensor(z0, z0);
    CHECK(t.dim(1, 1) == 2);
    CHECK(validate_mixed(t).ok());

    std::mt19937 rng(5);
    auto e = random_mixed(rng, 0, 3);
    auto u = tensor(e, GradedMixedComplex::unit());
    CHECK(u.d() == e.d());
    CHECK(u.eps() == e.eps());

    for (int i = 0; i < 20; ++i) {
        auto a = random_mixed(rng, 0, 2, 3);
        auto b = random_mixed(rng, -1, 2, 3);
        REQUIRE(validate_mixed(a).ok());
        REQUIRE(validate_mixed(b).ok());
        CHECK(validate_mixed(tensor(a, b)).ok());
    }
    // Associativity: (a b) c and a (b c) have identical structure constants
    // in the lexicographic basis.
    auto a = random_mixed(rng, 0, 1, 2), b = random_mixed(rng, 0, 1, 2), c = random_mixed(rng, 0, 1, 2);
    auto l = tensor(tensor(a, b), c), r = tensor(a, tensor(b, c));
    CHECK(l.d() == r.d());
    CHECK(l.eps() == r.eps());
}

TEST_CASE("shift")
{
    std::mt19937 rng(11);
    auto e = random_mixed(rng, 0, 3);
    CHECK(shift(e, 0, 0) == e);
    auto s = shift(shift(e, 1, 2), -3, 1);
    CHECK(s == shift(e, -2, 3));
    CHECK(validate_mixed(shift(e, 1, 1)).ok());

    auto k = shift(GradedMixedComplex::unit(), -1, -2);
    REQUIRE(k.dim() == 1);
    CHECK(k.basis()[0].weight == 2);
    CHECK(k.basis()[0].degree == 1);

    // Weight shift by q discards weights < q in the realization.
    for (int q = 1; q <= 2; ++q) {
        auto shifted = realization(shift(e, 0, q), 2).complex;
        std::size_t total = 0, expect = 0;
        for (const auto& [m, b] : shifted.basis) total += b.size();
        for (const auto& b : e.basis())
            if (b.weight >= q && b.weight <= 2 + q) ++expect;
        CHECK(total == expect);
    }
}

TEST_CASE("realization of the cell model")
{
    for (int m = 0; m <= 4; ++m) {
        auto h = realization(cell_model(m), m).complex.homology_dims();
        CHECK(h[0] == 1);
        CHECK(h[1] == 0);
        // One more weight brings y_m in and the truncation becomes acyclic.
        auto h2 = realization(cell_model(m), m + 1).complex.homology_dims();
        CHECK(h2[0] == 0);
        CHECK(h2[1] == 0);
    }
    auto k1 = GradedMixedComplex::unit(1, 0);
    auto h = realization(k1, 3).complex.homology_dims();
    CHECK(h[0] == 1);
}

TEST_CASE("realization agrees with the Hom complex out of the cell model")
{
    std::mt19937 rng(2024);
    for (int i = 0; i < 10; ++i) {
        auto e = random_mixed(rng, 0, 4);
        auto real = realization(e, 4).complex.homology_dims();
        auto hom = testsupport::hom_complex_homology(cell_model(4), e);
        for (const auto& [k, dim] : hom) CHECK(dim == (real.count(k) ? real[k] : 0));
        for (const auto& [k, dim] : real) CHECK(dim == (hom.count(k) ? hom[k] : 0));
    }
}

TEST_CASE("Tate realization")
{
    std::mt19937 rng(3);
    auto e = random_mixed(rng, 0, 3);
    for (int i = 0; i <= 3; ++i) {
        auto t = tate_realization(e, i, 3);
        auto r = realization(e, 3);
        CHECK(t.stage.complex.basis == r.complex.basis);
        for (const auto& [m, f] : t.comparison) CHECK(f == SparseMatrix::identity(f.rows()));
        CHECK(is_quasi_isomorphism(r.complex, t.stage.complex, t.comparison));
    }

    auto km1 = GradedMixedComplex::unit(-1, 0);
    CHECK(realization(km1, 3).complex.basis.empty());
    auto t1 = tate_realization(km1, 1, 3);
    CHECK(t1.stage.complex.homology_dims()[0] == 1);

    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_mixed(rng, -2, 2);
        auto h2 = tate_realization(f, 2, 2).stage.complex.homology_dims();
        for (int i = 3; i <= 5; ++i) CHECK(tate_realization(f, i, 2).stage.complex.homology_dims() == h2);
    }
}
