#pragma once

// Arity components of As, Lie and P_n, the Rees operad BD_1 of the PBW
// filtration, BD_0, the Hopf coproduct of P_n, Arnold algebras and the Weyl
// structure map of a constant tensor.

#include "pw/freecdga.hpp"

#include <map>
#include <string>
#include <vector>

namespace pw {

class ArityTooLarge : public Error {
public:
    using Error::Error;
};

inline constexpr int max_operad_arity = 4;

enum class OperadKind { as, lie, pn };

struct MultilinearSpace {
    OperadKind kind = OperadKind::as;
    int n = 1;
    int arity = 0;
    std::vector<std::string> words;
    std::vector<int> degrees;
    std::vector<int> weights;  // minus the number of brackets
    [[nodiscard]] std::size_t dim() const { return words.size(); }
    [[nodiscard]] std::map<int, std::size_t> weight_distribution() const;
};

/// Throws ArityTooLarge beyond max_operad_arity (and Error for arity < 1).
MultilinearSpace multilinear_basis(OperadKind kind, int arity, int n = 1);

// ---- multilinear words ----

using Word = std::vector<int>;
using AsElement = std::map<Word, Rational>;

/// Partial composition in As: letter i of nu (arity k) is replaced by the
/// word of mu (arity l) shifted by i-1; later letters shift by l-1.
AsElement as_compose(const AsElement& nu, int i, const AsElement& mu, int arity_mu);

// ---- free P_n algebras ----

/// Right-normed Lie word on a block of labels: words[index] of the block size,
/// read on the sorted labels.
struct LieFactor {
    std::vector<int> labels;
    std::size_t index = 0;
    friend auto operator<=>(const LieFactor&, const LieFactor&) = default;
};

using PnKey = std::vector<LieFactor>;  // factors sorted by smallest label
using PnElement = std::map<PnKey, Rational>;

/// Multilinear part of the free P_n algebra on degree-0 labels. The bracket
/// has degree 1-n and is the graded commutator of the tensor algebra on
/// letters of degree 1-n; Lie factors are products of the Sym part.
class FreePn {
public:
    explicit FreePn(int n);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int bracket_degree() const { return 1 - n_; }

    [[nodiscard]] PnElement gen(int label) const;
    [[nodiscard]] PnElement mul(const PnElement& a, const PnElement& b) const;
    [[nodiscard]] PnElement bracket(const PnElement& a, const PnElement& b) const;

    [[nodiscard]] int degree(const PnKey& k) const;
    [[nodiscard]] int weight(const PnKey& k) const;
    [[nodiscard]] std::vector<PnKey> basis(int arity) const;

    /// Substitutes images[label-1] for every label.
    [[nodiscard]] PnElement evaluate(const PnElement& nu, const std::vector<PnElement>& images) const;
    [[nodiscard]] PnElement compose(const PnElement& nu, int arity_nu, int i, const PnElement& mu, int arity_mu) const;

    /// Lie factor as a commutator polynomial in the tensor algebra.
    [[nodiscard]] AsElement to_as(const LieFactor& f) const;
    /// Right-normed position sequences forming the Lie basis of size k.
    [[nodiscard]] const std::vector<Word>& lie_words(std::size_t k) const { return lie_words_.at(k); }

    [[nodiscard]] std::string str(const PnKey& k) const;
    [[nodiscard]] std::string str(const PnElement& e) const;

private:
    [[nodiscard]] PnElement bracket_keys(const PnKey& f, const PnKey& g) const;
    [[nodiscard]] PnElement bracket_factors(const LieFactor& f, const LieFactor& g) const;
    [[nodiscard]] PnElement mul_keys(const PnKey& f, const PnKey& g) const;
    [[nodiscard]] int sign_of_commute(int a, int b) const;

    int n_;
    std::map<std::size_t, std::vector<Word>> lie_words_;
    std::map<std::size_t, SparseMatrix> lie_matrix_;   // words of positions x Lie basis
    std::map<std::size_t, std::map<Word, std::size_t>> word_index_;
};

// ---- BD_1 as the Rees operad of the PBW filtration ----

using HbarPoly = std::map<int, Rational>;  // power of hbar -> coefficient

struct ReesComponent {
    int arity = 0;
    std::vector<PnKey> basis;      // P_1 basis, the associated graded
    std::vector<int> filtration;   // number of Lie factors
    std::vector<AsElement> sym;    // symmetrized product of the factors in As
    Matrix to_sym;                 // As word coordinates -> sym coordinates
    std::vector<Word> words;
    [[nodiscard]] std::size_t dim() const { return basis.size(); }
    [[nodiscard]] std::vector<Rational> coordinates(const AsElement& a) const;
};

/// Free Q[hbar]-module on hbar^{m(P)} sym_P.
ReesComponent rees_bd1(int arity);

using HbarVector = std::vector<HbarPoly>;  // coordinates over a Rees basis

/// e_a o_i e_b = hbar^{m(a)+m(b)-1} sym_a o_i sym_b expanded in the target
/// basis. Throws Error if a negative power of hbar would appear.
HbarVector rees_compose(const ReesComponent& p, std::size_t a, int i, const ReesComponent& q, std::size_t b,
                        const ReesComponent& target);
HbarVector rees_compose(const ReesComponent& p, const HbarVector& x, int i, const ReesComponent& q,
                        const HbarVector& y, const ReesComponent& target);
std::vector<Rational> specialize(const HbarVector& v, const Rational& hbar);

/// Structure constants of P_1 on the basis of the target component.
std::vector<Rational> p1_compose(const ReesComponent& p, std::size_t a, int i, const ReesComponent& q, std::size_t b,
                                 const ReesComponent& target);

// ---- operation trees ----

struct OpTree {
    enum class Kind { leaf, product, bracket };
    Kind kind = Kind::leaf;
    int label = 0;
    std::vector<OpTree> children;

    static OpTree leaf(int l) { return {Kind::leaf, l, {}}; }
    static OpTree prod(OpTree a, OpTree b) { return {Kind::product, 0, {std::move(a), std::move(b)}}; }
    static OpTree br(OpTree a, OpTree b) { return {Kind::bracket, 0, {std::move(a), std::move(b)}}; }
    [[nodiscard]] std::string str() const;
    friend bool operator==(const OpTree&, const OpTree&) = default;
};

using TreeCombination = std::vector<std::pair<Rational, OpTree>>;

struct NamedRelation {
    std::string name;
    TreeCombination terms;
};

/// Commutativity, antisymmetry, associativity, Leibniz and Jacobi of P_n on
/// every ordering of the labels. Trees are evaluated with the operadic Koszul
/// convention: bracket(u, v) = (-1)^{(1-n)|u|} {u, v}.
std::vector<NamedRelation> pn_relations(int n);
PnElement evaluate_tree(const FreePn& p, const OpTree& t);
PnElement evaluate(const FreePn& p, const TreeCombination& c);

struct BD0Report {
    bool d_bracket_zero = false;          // d{,} = 0
    bool d_product_is_hbar_bracket = false;  // d(.) = hbar {,}
    bool d_squared_zero = false;          // on every tree of arity <= 3
    bool derivation_ok = false;           // d of every P_0 relation vanishes in P_0[hbar]
    std::size_t trees_checked = 0;
    std::size_t relations_checked = 0;
    std::vector<std::string> failures;
    [[nodiscard]] bool ok() const
    {
        return d_bracket_zero && d_product_is_hbar_bracket && d_squared_zero && derivation_ok;
    }
};

/// d on a tree: sum over product nodes, replaced by hbar times a bracket,
/// with the Koszul sign of the odd nodes preceding it in preorder.
TreeCombination bd0_differential(const OpTree& t);
BD0Report bd0_check();

struct HopfReport {
    int n = 1;
    bool coassociative = false;
    bool cocommutative = false;
    bool relations_hold = false;       // relation words vanish in P_n
    bool relations_respected = false;  // their coproducts vanish in P_n (x) P_n
    std::size_t relations_checked = 0;
    std::vector<std::string> failures;
    [[nodiscard]] bool ok() const { return coassociative && cocommutative && relations_hold && relations_respected; }
};

HopfReport hopf_coproduct_check(int n, int max_arity = 3);

// ---- Arnold algebras ----

/// Graded-commutative algebra on a_ij (i<j) of degree n with a_ji =
/// (-1)^{n+1} a_ij, a_ij^2 = 0 and a_ij a_jk + a_jk a_ki + a_ki a_ij = 0.
class ArnoldAlgebra {
public:
    ArnoldAlgebra(int n, int arity);

    struct Piece {
        int length = 0;
        std::size_t monomials = 0;     // square-free monomials
        std::size_t relation_rank = 0; // rank of the relation span
        std::vector<Exponents> basis;  // non-pivot monomials
    };

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int arity() const { return arity_; }
    [[nodiscard]] const FreeAlgebra& alg() const { return alg_; }
    [[nodiscard]] const std::vector<Piece>& pieces() const { return pieces_; }
    [[nodiscard]] Poly a(int i, int j) const;
    [[nodiscard]] Poly mul(const Poly& x, const Poly& y) const { return reduce(alg_.mul(x, y)); }
    /// Normal form: squares dropped, relations reduced onto the basis.
    [[nodiscard]] Poly reduce(const Poly& p) const;
    [[nodiscard]] std::map<int, std::size_t> hilbert() const;  // degree -> dim

private:
    int n_;
    int arity_;
    FreeAlgebra alg_;
    std::vector<Piece> pieces_;
    std::map<int, std::vector<std::pair<std::size_t, std::vector<std::pair<std::size_t, Rational>>>>> pivots_;
    std::map<int, std::vector<Exponents>> monomials_;
};

struct WeylImage {
    ArnoldAlgebra arnold;
    std::map<Exponents, Poly, DegLex> components;  // Arnold basis monomial -> coefficient in B
    [[nodiscard]] Poly coefficient(const Exponents& m) const;
    [[nodiscard]] Poly unit_coefficient() const;
};

/// m o exp(a) on inputs[0] (x) ... (x) inputs[k-1], a = sum_{i<j} D^{ij} a_ij,
/// D^{ij} = sum t^{kl} d_l^{(j)} s_i d_k^{(i)} with left derivatives, d_k^{(i)}
/// acting first and s_i = (-1)^{(n+1)|slot i|}. The a_12 coefficient is then
/// the derived bracket [[pi, x], y] of Pol(B, n+1). Requires |x_k| + |x_l| = n
/// wherever t^{kl} != 0.
WeylImage weyl_structure_map(const FreeCDGA& b, const Matrix& t, int n, const std::vector<Poly>& inputs);

}  // namespace pw
