#pragma once

// Shifted polyvectors Pol(B,n) = Sym_B(T_B[-n]) with the Schouten bracket of
// degree -n, strict and weak (Maurer-Cartan tower) shifted Poisson
// structures, and non-degeneracy at the augmentation.

#include "pw/freecdga.hpp"

#include <map>
#include <string>
#include <vector>

namespace pw {

class BidegreeError : public Error {
public:
    using Error::Error;
};

class ShiftMismatch : public Error {
public:
    using Error::Error;
};

class Polyvectors {
public:
    /// Pol(B,n). The symbol dual to generator g is named "@g", has degree
    /// n - |g|, polyvector weight 1 and size c - s(g) with c > max size.
    Polyvectors(FreeCDGA b, int n);

    [[nodiscard]] const FreeCDGA& base() const { return b_; }
    [[nodiscard]] int shift() const { return n_; }
    [[nodiscard]] const FreeAlgebra& alg() const { return alg_; }
    [[nodiscard]] std::size_t nbase() const { return b_.alg.ngens(); }
    [[nodiscard]] std::size_t xi_index(std::size_t i) const { return nbase() + i; }
    [[nodiscard]] Poly x(std::size_t i) const { return alg_.var(i); }
    [[nodiscard]] Poly xi(std::size_t i) const { return alg_.var(xi_index(i)); }
    [[nodiscard]] Poly from_base(const Poly& f) const { return alg_.embed(b_.alg, f); }
    /// Part of p with no symbols, read back in B.
    [[nodiscard]] Poly to_base(const Poly& p) const;

    [[nodiscard]] Poly mul(const Poly& a, const Poly& b) const { return alg_.mul(a, b); }
    [[nodiscard]] Poly bracket(const Poly& p, const Poly& q) const;
    /// Internal differential [Q_d, -], Q_d = sum_i d(x_i) @x_i.
    [[nodiscard]] Poly d(const Poly& p) const { return alg_.apply_derivation(d_images_, p); }

    [[nodiscard]] int weight(const Exponents& m) const { return alg_.weight(m); }
    [[nodiscard]] std::optional<int> weight(const Poly& p) const { return alg_.weight(p); }
    [[nodiscard]] std::optional<int> degree(const Poly& p) const { return alg_.degree(p); }
    /// Constant part at the augmentation (all base generators -> 0).
    [[nodiscard]] Poly at_augmentation(const Poly& p) const;

    /// Monomial basis of the (weight, degree) slot with size <= max_size.
    [[nodiscard]] std::vector<Exponents> basis(int weight, int degree, int max_size) const;

    [[nodiscard]] std::string str(const Poly& p) const { return alg_.str(p); }

private:
    FreeCDGA b_;
    int n_;
    FreeAlgebra alg_;
    std::vector<Poly> d_images_;
};

/// Induced bracket {f,g} = [[pi,f],g] on the generators of B.
using BracketTable = std::map<std::pair<std::string, std::string>, Poly>;

struct PoissonReport {
    Poly d_residual;        // d pi
    Poly jacobi_residual;   // [pi, pi]
    BracketTable brackets;  // values in B
    [[nodiscard]] bool ok() const { return d_residual.is_zero() && jacobi_residual.is_zero(); }
};

/// pol must be Pol(B, n+1); pi of weight 2 and degree n+2 (BidegreeError).
PoissonReport check_strict_poisson(const Polyvectors& pol, const Poly& pi);

/// Weight-2 element of degree n+2 whose induced bracket on generators is the
/// table (solved linearly in the size window); nullopt if none exists.
std::optional<Poly> poisson_from_brackets(const Polyvectors& pol, const BracketTable& table, int max_size);

struct MaurerCartanTower {
    int n = 0;                    // components live in Pol(B, n+1)
    std::vector<Poly> components; // p_0, p_1, ...
    int bound = -1;               // equations i = -1 .. bound-1; -1 means components.size()
};

struct MCReport {
    bool ok = true;
    int failing_index = 0;   // first i with nonzero residual
    Poly residual;
    int checked_up_to = -1;  // largest i verified
};

/// Checks d p_{i+1} + 1/2 sum_{a+b=i} [p_a, p_b] = 0; components beyond the
/// list are zero.
MCReport mc_check(const Polyvectors& pol, const MaurerCartanTower& tower);

struct Nondegeneracy {
    bool nondegenerate = false;
    std::vector<std::vector<Rational>> theta;  // theta[i][j] = constant part of {x_i, x_j}
    std::vector<std::string> failures;         // per degree block
};

/// Theta from the constant part of the leading term, tested degree by
/// degree: the block pairing degree a with degree n - a must be invertible.
Nondegeneracy nondegeneracy(const Polyvectors& pol, const Poly& p0);

/// Constant part of {x_i, x_j} = [[p, x_i], x_j].
std::vector<std::vector<Rational>> theta_of_bivector(const Polyvectors& pol, const Poly& p);

/// Degree blocks of a pairing on generators of the given degrees that fail
/// to be square and invertible; block a is paired with block n - a.
std::vector<std::string> pairing_failures(const std::vector<std::vector<Rational>>& theta,
                                          const std::vector<int>& degrees, int n);

}  // namespace pw
