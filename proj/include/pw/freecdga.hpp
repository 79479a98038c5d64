#pragma once

// Free cdgas, mixed algebras (d and eps given on generators), Kaehler
// differentials, strict de Rham algebras, closed-form towers, Koszul
// complexes and the affine D-functor.

#include "pw/gradedmixed.hpp"
#include "pw/poly.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace pw {

class NotRegular : public Error {
public:
    using Error::Error;
};

struct FreeCDGA {
    FreeAlgebra alg;
    std::vector<Poly> d;             // d(g_i), one entry per generator
    std::set<std::string> base;      // generators of the base A for relative constructions
    bool size_homogeneous = true;    // d preserves the auxiliary size grading

    /// Builds the algebra, assigning generator sizes so that d is
    /// size-homogeneous when possible. `d` is keyed by generator name.
    static FreeCDGA make(std::vector<Generator> gens, const std::map<std::string, Poly>& d = {},
                         std::set<std::string> base = {});
    /// Polynomial ring on degree-0 generators with d = 0.
    static FreeCDGA polynomial_ring(const std::vector<std::string>& names);

    [[nodiscard]] Poly differential(const Poly& p) const { return alg.apply_derivation(d, p); }
};

struct CdgaReport {
    std::vector<std::string> failures;  // human-readable, each names a witness
    [[nodiscard]] bool ok() const { return failures.empty(); }
};

/// Bidegree of d on generators, d^2 = 0 on generators, and Leibniz
/// consistency on all quadratic generator monomials. Throws SignError if the
/// derivation extension disagrees with the Leibniz rule.
CdgaReport validate_cdga(const FreeCDGA& b);

/// Algebra with two odd derivations: d (weight 0) and eps (weight +1).
struct MixedAlgebra {
    FreeAlgebra alg;
    std::vector<Poly> d;
    std::vector<Poly> eps;
    bool size_homogeneous = true;

    [[nodiscard]] Poly apply_d(const Poly& p) const { return alg.apply_derivation(d, p); }
    [[nodiscard]] Poly apply_eps(const Poly& p) const { return alg.apply_derivation(eps, p); }
    [[nodiscard]] Poly apply_total(const Poly& p) const { return apply_d(p) + apply_eps(p); }
};

/// d^2, eps^2, d eps + eps d on generators (sufficient: all are derivations).
MixedReport validate_mixed_algebra(const MixedAlgebra& m);

struct Materialized {
    GradedMixedComplex complex;
    std::vector<Exponents> monomials;  // basis order
    [[nodiscard]] SparseVector coordinates(const Poly& p) const;  // throws if p leaves the basis
    [[nodiscard]] Poly element(const SparseVector& v) const;
};

/// Monomial basis inside the window; images leaving the weight or degree
/// window are dropped (a subquotient). Throws WindowTooSmall if an image
/// leaves the size window.
Materialized materialize(const MixedAlgebra& m, const MonomialWindow& w);

struct KaehlerModule {
    FreeAlgebra alg;                 // generators of B followed by the symbols dg
    std::vector<std::size_t> symbols;  // index in alg of dg for each non-base generator
    std::vector<Poly> d_symbol;      // d(dg) = U(d g), linear in the symbols
    [[nodiscard]] std::size_t rank() const { return symbols.size(); }
};

KaehlerModule kaehler(const FreeCDGA& b);

/// DR(B/A) with dg of degree |g|+1, weight w(g)+1, same size as g.
/// eps(g) = dg, eps(dg) = 0, d(dg) = -eps(d g). Base generators get no dg.
MixedAlgebra de_rham(const FreeCDGA& b);

struct ClosedFormTower {
    int p = 2;
    int n = 0;
    std::map<int, Poly> components;  // weight j -> omega_j in DR(B)
};

struct HodgeStage {
    int m = 0;                       // weights p..m
    std::size_t classes = 0;         // dim H^{n+p}
    long euler = 0;                  // Euler characteristic of the stage
    long layer_euler = 0;            // Euler characteristic of DR(m) with d alone
};

struct ClosedFormResult {
    std::size_t dimension = 0;
    std::vector<ClosedFormTower> representatives;
    std::vector<HodgeStage> stages;
    bool euler_accounting_ok = true;  // chi(stage m) = chi(stage m-1) + chi(layer m)
};

ClosedFormResult closed_form_classes(const FreeCDGA& b, int p, int n, int wmax, int max_size);

/// Residuals d omega_j + eps omega_{j-1}, keyed by weight; empty iff valid.
std::map<int, Poly> tower_residuals(const MixedAlgebra& dr, const ClosedFormTower& w, int wmax);
Poly underlying_form(const ClosedFormTower& w);

struct KoszulResult {
    FreeCDGA algebra;
    std::map<int, std::size_t> homotopy;  // i -> dim pi_i = H^{-i}, size window
    int max_size = 0;
};

/// K(B, f_1^{n_1}, ..., f_p^{n_p}) with odd X_i of degree -1, dX_i = f_i^{n_i}.
KoszulResult koszul(const FreeCDGA& b, const std::vector<Poly>& fs, const std::vector<unsigned>& powers,
                    int max_size);

struct IdealMembership {
    bool member = false;
    std::vector<Poly> cofactors;  // g = sum c_i f_i when member
};

/// Homogeneous membership test: searches cofactors of matching size.
IdealMembership ideal_member(const FreeAlgebra& alg, const std::vector<Poly>& fs, const Poly& g);

struct CotangentTransition {
    unsigned stage = 0;                        // map K_{stage+1} -> K_stage
    std::vector<std::vector<Poly>> matrix;     // on the basis dX_1..dX_p
    bool nonzero_before = false;
    bool zero_after_base_change = false;
    std::vector<std::vector<IdealMembership>> certificates;
};

std::vector<CotangentTransition> koszul_tower_cotangent(const FreeCDGA& b, const std::vector<Poly>& fs,
                                                        unsigned stages);

struct DFunctorResult {
    MixedAlgebra algebra;                      // DR(K(B,I)/B)
    std::map<int, std::size_t> weight0_homology;  // degree -> dim, size window
    std::vector<std::pair<int, std::size_t>> convergence;  // (W, dim H^0 of realization)
    int max_size = 0;
};

/// Throws NotRegular if the Koszul complex has higher homology in the probe
/// window.
DFunctorResult d_functor(const FreeCDGA& b, const std::vector<Poly>& ideal, int wmax, int max_size);

/// Realization of a mixed algebra in weights 0..wmax with sizes <= max_size.
Realization realize_algebra(const MixedAlgebra& m, int wmax, int max_size);

}  // namespace pw
