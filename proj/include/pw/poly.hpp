#pragma once

// Free graded-commutative polynomial algebras on finitely many bigraded
// generators. Signs come from cohomological degree only.

#include "pw/exactlin.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pw {

class SignError : public Error {
public:
    using Error::Error;
};

class WindowTooSmall : public Error {
public:
    using Error::Error;
};

struct Generator {
    std::string name;
    int degree = 0;
    int weight = 0;
    int size = 1;  // auxiliary positive grading used for finite windows
};

using Exponents = std::vector<int>;

/// Degree-lexicographic order: total exponent first, then lexicographic
/// with earlier generators dominating.
struct DegLex {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

class Poly {
public:
    using Terms = std::map<Exponents, Rational, DegLex>;

    Poly() = default;
    explicit Poly(Terms t);

    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t nterms() const { return terms_.size(); }
    [[nodiscard]] Rational coeff(const Exponents& m) const;

    void add_term(const Exponents& m, const Rational& c);

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Rational& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
    friend Poly operator-(Poly a) { return a *= Rational(-1); }
    friend bool operator==(const Poly& a, const Poly& b) = default;

private:
    Terms terms_;
};

struct MonomialWindow {
    int max_size = 6;
    int min_weight = -1000;
    int max_weight = 1000;
    int min_degree = -1000;
    int max_degree = 1000;
};

class FreeAlgebra {
public:
    FreeAlgebra() = default;
    explicit FreeAlgebra(std::vector<Generator> gens);

    [[nodiscard]] std::size_t ngens() const { return gens_.size(); }
    [[nodiscard]] const std::vector<Generator>& gens() const { return gens_; }
    [[nodiscard]] const Generator& gen(std::size_t i) const { return gens_[i]; }
    [[nodiscard]] std::optional<std::size_t> find(const std::string& name) const;
    [[nodiscard]] std::size_t index(const std::string& name) const;  // throws
    [[nodiscard]] bool odd(std::size_t i) const { return (gens_[i].degree & 1) != 0; }

    [[nodiscard]] Exponents unit_exponents() const { return Exponents(gens_.size(), 0); }
    [[nodiscard]] Poly one() const { return constant(1); }
    [[nodiscard]] Poly constant(const Rational& c) const;
    [[nodiscard]] Poly var(std::size_t i) const;
    [[nodiscard]] Poly var(const std::string& name) const { return var(index(name)); }

    [[nodiscard]] int degree(const Exponents& m) const;
    [[nodiscard]] int weight(const Exponents& m) const;
    [[nodiscard]] int size(const Exponents& m) const;
    [[nodiscard]] bool odd_monomial(const Exponents& m) const { return (degree(m) & 1) != 0; }

    /// Homogeneous degree/weight of p; nullopt for zero or inhomogeneous p.
    [[nodiscard]] std::optional<int> degree(const Poly& p) const;
    [[nodiscard]] std::optional<int> weight(const Poly& p) const;
    [[nodiscard]] std::optional<int> size(const Poly& p) const;

    /// Sign of m1*m2 after reordering to canonical form; 0 if an odd
    /// generator would repeat.
    [[nodiscard]] int mul_sign(const Exponents& a, const Exponents& b) const;
    [[nodiscard]] Poly mul(const Poly& a, const Poly& b) const;
    [[nodiscard]] Poly pow(const Poly& a, unsigned k) const;

    /// d/dg_k acting from the left (resp. right).
    [[nodiscard]] Poly left_derivative(std::size_t k, const Poly& p) const;
    [[nodiscard]] Poly right_derivative(std::size_t k, const Poly& p) const;

    /// Derivation D with D(g_k) = images[k]; any parity. images may be shorter
    /// than ngens (missing entries mean zero).
    [[nodiscard]] Poly apply_derivation(const std::vector<Poly>& images, const Poly& p) const;

    /// Algebra map sending g_k to images[k] in `target`.
    [[nodiscard]] Poly substitute(const FreeAlgebra& target, const std::vector<Poly>& images, const Poly& p) const;

    /// Re-embed a polynomial from another algebra whose generators all occur
    /// here by name.
    [[nodiscard]] Poly embed(const FreeAlgebra& source, const Poly& p) const;

    /// All monomials inside the window, sorted by DegLex.
    [[nodiscard]] std::vector<Exponents> monomials(const MonomialWindow& w) const;

    [[nodiscard]] std::string str(const Exponents& m) const;
    [[nodiscard]] std::string str(const Poly& p) const;

private:
    std::vector<Generator> gens_;
    std::map<std::string, std::size_t> by_name_;
};

}  // namespace pw
