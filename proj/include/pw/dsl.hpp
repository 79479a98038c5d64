#pragma once

// Manifest language: named blocks of `key = value, value, ...;` entries whose
// values are polynomial expressions over generators, polyvector symbols @x
// and de Rham symbols dx. Parsing is syntactic plus name resolution; the
// builders turn blocks into workbench objects.

#include "pw/compare.hpp"
#include "pw/freecdga.hpp"
#include "pw/gradedmixed.hpp"
#include "pw/lieinfty.hpp"
#include "pw/polyvec.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pw::dsl {

struct Span {
    int line = 1;
    int column = 1;
};

class ParseError : public Error {
public:
    ParseError(Span at, std::vector<std::string> expected, const std::string& found);
    Span at;
    std::vector<std::string> expected;
    std::string found;
};

class DuplicateName : public Error {
public:
    DuplicateName(Span at, const std::string& name);
    Span at;
    std::string name;
};

class UnresolvedReference : public Error {
public:
    UnresolvedReference(Span at, const std::string& name);
    Span at;
    std::string name;
};

struct Expr;

struct Factor {
    enum class Kind { number, name, symbol, group };
    Kind kind = Kind::number;
    Rational value;                // number
    std::string name;              // name, symbol (without the @)
    std::shared_ptr<Expr> group;   // parenthesized sum
    int power = 1;
    Span span;
    friend bool operator==(const Factor& a, const Factor& b);
};

struct Term {
    int sign = 1;
    std::vector<Factor> factors;
    friend bool operator==(const Term&, const Term&) = default;
};

struct Expr {
    std::vector<Term> terms;
    Span span;
    friend bool operator==(const Expr& a, const Expr& b) { return a.terms == b.terms; }
    /// The bare name when the expression is a single name factor.
    [[nodiscard]] std::optional<std::string> as_name() const;
};

struct Entry {
    std::string key;
    std::vector<int> indices;  // key[i][j]
    std::optional<std::string> arg;  // key(name)
    std::vector<Expr> values;
    Span span;
    [[nodiscard]] std::string canonical_key() const;
    friend bool operator==(const Entry& a, const Entry& b)
    {
        return a.key == b.key && a.indices == b.indices && a.arg == b.arg && a.values == b.values;
    }
};

struct Block {
    std::string kind;  // algebra, lie, poisson, form, ideal, mixed, options
    std::string name;
    std::vector<Entry> entries;
    Span span;
    [[nodiscard]] const Entry* find(const std::string& canonical_key) const;
    [[nodiscard]] std::vector<const Entry*> all(const std::string& key) const;
    friend bool operator==(const Block& a, const Block& b)
    {
        return a.kind == b.kind && a.name == b.name && a.entries == b.entries;
    }
};

struct Manifest {
    std::vector<Block> blocks;
    [[nodiscard]] const Block* find(const std::string& name) const;
    /// The named block, or the only block of that kind when name is empty.
    [[nodiscard]] const Block& pick(const std::string& kind, const std::string& name = {}) const;
    friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Total: returns a resolved manifest or throws ParseError, DuplicateName or
/// UnresolvedReference.
Manifest parse(const std::string& source);
std::string serialize(const Manifest& m);
std::string serialize(const Expr& e);

// ---- builders ----

/// algebra block: gen(x) = degree[, weight]; d(x) = ...; eps(x) = ...; base = x, y.
FreeCDGA build_cdga(const Manifest& m, const Block& b);
bool has_eps(const Block& b);
/// The algebra block with its eps entries as a mixed algebra.
MixedAlgebra build_mixed_algebra(const Manifest& m, const Block& b);

/// lie block: preset = sl2 | nonabelian2 | abelian; dim = n; names = ...;
/// bracket[i][j] = c_1, ..., c_n (1-based).
LieAlgebra build_lie(const Block& b);

struct PoissonData {
    FreeCDGA base;
    int shift = 0;
    Polyvectors pol;  // Pol(B, shift+1)
    MaurerCartanTower tower;
};

/// poisson block: on = B; shift = n; p0 = ...; p1 = ...; bound = k.
PoissonData build_poisson(const Manifest& m, const Block& b);

struct FormData {
    FreeCDGA base;
    MixedAlgebra dr;
    ClosedFormTower tower;  // p = 2
};

/// form block: on = B; shift = n; w2 = ...; w3 = ...
FormData build_form(const Manifest& m, const Block& b);

struct IdealData {
    FreeCDGA base;
    std::vector<Poly> generators;
    std::vector<unsigned> powers;
};

/// ideal block: on = B; f1 = ...; power1 = k.
IdealData build_ideal(const Manifest& m, const Block& b);

/// mixed block: elem(x) = weight, degree; d(x) = ...; eps(x) = ... (linear).
GradedMixedComplex build_mixed(const Block& b);
/// A mixed block reproducing e exactly under build_mixed.
Block mixed_block(const GradedMixedComplex& e, const std::string& name);

/// Evaluates an expression in an algebra; names are looked up verbatim,
/// symbols as "@name".
Poly evaluate(const FreeAlgebra& alg, const Expr& e);
/// Integer or rational constant expression.
Rational constant(const Expr& e);
int integer(const Expr& e);

}  // namespace pw::dsl
