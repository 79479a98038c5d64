#pragma once

// Finite-dimensional Lie algebras, Chevalley-Eilenberg mixed algebras, weak
// mixed structures, L-infinity structures given by co-brackets, and
// invariant tensors in Sym^2 and wedge^3.

#include "pw/freecdga.hpp"
#include "pw/polyvec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pw {

class NotFreeOnV : public Error {
public:
    using Error::Error;
};

class NotInvariant : public Error {
public:
    using Error::Error;
};

struct LieAlgebra {
    std::size_t dim = 0;
    std::vector<std::string> names;  // e1..en unless given
    // c[i][j][k]: [e_i, e_j] = sum_k c[i][j][k] e_k
    std::vector<std::vector<std::vector<Rational>>> c;

    static LieAlgebra zero(std::size_t n);
    static LieAlgebra abelian(std::size_t n) { return zero(n); }
    static LieAlgebra sl2();              // e, f, h with [h,e]=2e, [h,f]=-2f, [e,f]=h
    static LieAlgebra nonabelian2();      // [x,y] = y
    void set(std::size_t i, std::size_t j, std::vector<Rational> v);  // sets [e_i,e_j] and [e_j,e_i]
    [[nodiscard]] std::vector<Rational> bracket(const std::vector<Rational>& a, const std::vector<Rational>& b) const;
    friend bool operator==(const LieAlgebra&, const LieAlgebra&) = default;
};

struct LieReport {
    std::vector<std::string> failures;  // "antisymmetry (i,j)" or "jacobi (i,j,k)"
    [[nodiscard]] bool ok() const { return failures.empty(); }
};

LieReport validate_lie(const LieAlgebra& g);

/// Sym(g^v[-1]) on odd generators t1..tn (degree 1, weight 1), d = 0 and
/// eps(t_k) = -sum_{i<j} c[i][j][k] t_i t_j.
MixedAlgebra ce_algebra(const LieAlgebra& g);
GradedMixedComplex ce(const LieAlgebra& g);

struct LieFromMixed {
    LieAlgebra g;
    LieReport report;
};

/// Reads the bracket off eps on the generators. Throws NotFreeOnV unless all
/// generators are odd of degree 1 and weight 1, d = 0 and eps is quadratic.
LieFromMixed lie_from_mixed(const MixedAlgebra& b);

// ---- weak mixed structures ----

struct WeakMixedStructure {
    std::vector<BasisElement> basis;
    SparseMatrix d;
    std::vector<SparseMatrix> eps;  // eps_i raises weight by i+1 and degree by 1
    int bound = -1;                 // equations i = -1 .. bound-1; -1 means eps.size()
};

struct WeakMixedReport {
    bool ok = true;               // every equation within the bound holds
    int failing_index = 0;
    std::string witness;          // basis label of a nonzero residual column
    int checked_up_to = -2;
    bool inconclusive = false;    // a nonzero equation exists beyond the bound
};

/// Equation i: [d, eps_{i+1}] + 1/2 sum_{a+b=i} [eps_a, eps_b] = 0, brackets
/// of odd operators being anticommutators. Throws BidegreeMismatch if some
/// eps_i has the wrong bidegree.
WeakMixedReport weak_mixed_validate(const WeakMixedStructure& w);

/// eps_{i+1} solving equation i given eps_0..eps_i; nullopt if none exists.
std::optional<SparseMatrix> solve_weak_correction(const WeakMixedStructure& w, int i);

// ---- L-infinity structures by co-brackets ----

struct LInftyStructure {
    FreeAlgebra alg;                          // basis of L, every generator of weight 1
    std::vector<Poly> d;                      // d(e_j), linear
    std::map<int, std::vector<Poly>> brackets;  // k -> images of e_j in Sym^k(L), degree |e_j|+1

    static LInftyStructure make(std::vector<Generator> gens, const std::map<std::string, Poly>& d = {});
    /// Derivation whose images are bracket k (zero if absent).
    [[nodiscard]] std::vector<Poly> eps(int i) const;
};

/// The L-infinity equations on generators, as the weak mixed equations of the
/// derivations eps_i = extension of bracket_{i+2} on Sym(L).
WeakMixedReport linfty_validate(const LInftyStructure& s, int bound);

/// Bracket k solving equation k-3 given the lower brackets; nullopt if none.
std::optional<std::vector<Poly>> solve_linfty_correction(const LInftyStructure& s, int k);

/// Matrices of d and every eps_i on Sym(L) in weights 0..wmax (images of
/// higher weight are dropped, a quotient since everything raises weight).
WeakMixedStructure linfty_to_weak_mixed(const LInftyStructure& s, int wmax, int bound = -1);

// ---- invariant tensors ----

enum class TensorKind { sym2, wedge3 };

struct InvariantTensor {
    TensorKind kind = TensorKind::sym2;
    std::vector<Rational> coeffs;  // over tensor_basis(kind, dim)
    [[nodiscard]] bool is_zero() const;
};

/// Sorted index tuples: i<=j for Sym^2, i<j<k for wedge^3.
std::vector<std::vector<std::size_t>> tensor_basis(TensorKind kind, std::size_t dim);

/// Coefficient vector of ad_{e_a} t for every a, concatenated.
std::vector<Rational> adjoint_residual(const LieAlgebra& g, const InvariantTensor& t);
bool is_invariant(const LieAlgebra& g, const InvariantTensor& t);

/// Basis of the kernel of the adjoint action.
std::vector<InvariantTensor> invariants(const LieAlgebra& g, TensorKind kind);

/// The dual of the Killing form (Casimir) in Sym^2 g. Throws Error if the
/// Killing form is degenerate.
InvariantTensor killing_tensor(const LieAlgebra& g);

/// Z = Alt [t^{12}, t^{23}]. Throws NotInvariant if t is not invariant.
InvariantTensor z_from_t(const LieAlgebra& g, const InvariantTensor& t);

struct SemiStrictReport {
    bool invariant = false;   // ad-action kills Z
    bool mc_ok = false;       // tower (0, Z) in Pol(CE(g), 2)
    MCReport mc;
    [[nodiscard]] bool ok() const { return invariant && mc_ok; }
};

/// CE(g) as a cdga with d = d_CE (odd generators of degree 1).
FreeCDGA ce_cdga(const LieAlgebra& g);
/// Z as a constant weight-3 element of Pol(ce_cdga(g), 2).
Poly wedge3_polyvector(const Polyvectors& pol, const InvariantTensor& z);
SemiStrictReport semi_strict_check(const LieAlgebra& g, const InvariantTensor& z);

}  // namespace pw
