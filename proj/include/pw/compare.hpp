#pragma once

// Strict affine comparison between non-degenerate Poisson bivectors and
// closed 2-forms: the map phi_pi, dualization both ways, strictification of
// closed 2-form towers and leading-term extraction for MC towers.

#include "pw/freecdga.hpp"
#include "pw/polyvec.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pw {

class Degenerate : public Error {
public:
    using Error::Error;
};

class NotMinimal : public Error {
public:
    using Error::Error;
};

class GaugeNotFound : public Error {
public:
    using Error::Error;
    std::size_t residual_class = 0;  // dim of the class of the input in the truncated complex
    bool window_too_small = false;
};

/// Inverse of a square matrix; nullopt if singular.
std::optional<Matrix> invert(const Matrix& m);
Matrix transpose(const Matrix& m);

/// Theta of a constant weight-2 element: second right derivatives by the
/// symbols dual to generators i and j, at the augmentation.
Matrix theta_of_form(const MixedAlgebra& dr, const FreeCDGA& b, const Poly& omega);

/// phi_pi : DR(B) -> (Pol(B,n+1), [pi,-]), identity on B and dg -> [pi, g].
struct PhiPi {
    MixedAlgebra dr;
    Polyvectors pol;
    Poly pi;
    std::vector<Poly> images;  // image of every DR generator
    bool nondegenerate = false;

    [[nodiscard]] Poly apply(const Poly& form) const { return dr.alg.substitute(pol.alg(), images, form); }
};

/// Throws Degenerate when pi fails the non-degeneracy test and
/// require_nondegenerate is set.
PhiPi phi_pi(const FreeCDGA& b, const Poly& pi, int n, bool require_nondegenerate = true);

struct PhiReport {
    std::size_t checked = 0;
    std::vector<std::string> chain_failures;  // basis labels where the chain identity fails
    bool generator_iso = false;               // matrix on dg -> symbols invertible degree by degree
    struct Rank {
        std::size_t source = 0;  // DR monomials in the slot
        std::size_t target = 0;  // polyvector monomials in the slot
        std::size_t rank = 0;    // rank of phi on the slot
    };
    std::map<std::pair<int, int>, Rank> ranks;  // (weight, degree)
    [[nodiscard]] bool chain_map() const { return chain_failures.empty(); }
    [[nodiscard]] bool bidegree_iso() const;
};

/// Chain identity phi (d + eps) = (d + [pi,-]) phi on every DR monomial of
/// size <= max_size, and ranks of phi on monomials with at most `length`
/// factors, per (weight, degree).
PhiReport check_phi(const PhiPi& phi, int max_size, int length);

struct SymplecticForm {
    FreeCDGA b;
    int n = 0;
    Poly omega;    // in de_rham(b).alg
    Matrix theta;  // theta_of_form at the augmentation
};

struct SymplecticReport {
    bool d_closed = false;
    bool eps_closed = false;
    std::vector<std::string> pairing_failures;
    [[nodiscard]] bool ok() const { return d_closed && eps_closed && pairing_failures.empty(); }
};

SymplecticForm make_symplectic(const FreeCDGA& b, int n, const Poly& omega);
SymplecticReport validate_symplectic(const SymplecticForm& w);

/// Constant omega with Theta_omega = Theta_pi^{-T}, equivalently
/// phi_pi(omega) = pi. pi must be strict, constant and non-degenerate.
SymplecticForm poisson_to_form(const FreeCDGA& b, const Poly& pi, int n);

/// Constant pi in Pol(B, n+1) with Theta_pi = Theta_omega^{-T}.
Poly symplectic_to_poisson(const SymplecticForm& w);

// ---- strictification of closed 2-form towers ----

struct StrictifyResult {
    Poly f;                          // weight 0
    Poly eta;                        // weight 1
    Poly strict_form;                // eps(eta)
    ClosedFormTower strict;          // (eps eta, 0, 0, ...)
    std::map<int, Poly> homotopy;    // weights >= 2: omega - eps eta = (d + eps) h
    bool identity_gauge = false;
};

/// B must be minimal (d vanishes at the augmentation modulo I^2). Solves
/// (d + eps) theta = omega in the total de Rham complex of weights 0..wmax
/// and sizes <= max_size; f = theta_0, eta = theta_1.
StrictifyResult strictify_closed_two_form(const FreeCDGA& b, const ClosedFormTower& omega, int wmax, int max_size);

/// Checks omega_a - omega_b = (d + eps) h for some h in weights 2..wmax.
bool same_class(const FreeCDGA& b, const ClosedFormTower& a, const ClosedFormTower& c, int wmax, int max_size);

/// Residual omega - strict - (d + eps) h, by weight; empty iff the homotopy
/// is exact.
std::map<int, Poly> gauge_residual(const FreeCDGA& b, const ClosedFormTower& omega, const StrictifyResult& r,
                                   int wmax);

// ---- leading term of an MC tower ----

struct DarbouxReport {
    Poly q;
    bool dq_zero = false;
    bool qq_zero = false;
    std::vector<Poly> residual_tower;  // pi' = p - q
    MCReport rewritten;                // d pi'_{i+1} + [q, pi'_i] + 1/2 sum [pi'_a, pi'_b]
    [[nodiscard]] bool ok() const { return dq_zero && qq_zero && rewritten.ok; }
};

/// Throws Degenerate if p_0 fails non-degeneracy; the MC check itself is
/// reported, not assumed.
DarbouxReport darboux_leading_term(const Polyvectors& pol, const MaurerCartanTower& tower);

}  // namespace pw
