#pragma once

// Graded mixed complexes: weight x degree bigraded vector spaces with a
// differential d (weight 0, degree +1) and a mixed differential eps
// (weight +1, degree +1). Convention: d*eps + eps*d = 0.

#include "pw/exactlin.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace pw {

class BidegreeMismatch : public Error {
public:
    using Error::Error;
};

struct BasisElement {
    std::string label;
    int weight = 0;
    int degree = 0;
    friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

/// Cochain complex with finitely many nonzero degrees.
struct ChainComplex {
    std::map<int, std::vector<std::string>> basis;  // degree -> labels
    std::map<int, SparseMatrix> d;                  // d[m] : C^m -> C^{m+1}

    [[nodiscard]] std::size_t dim(int m) const;
    [[nodiscard]] SparseMatrix differential(int m) const;  // zero if absent
    [[nodiscard]] HomologyResult homology_at(int m) const;
    /// Homology dimension for every degree carrying a basis.
    [[nodiscard]] std::map<int, std::size_t> homology_dims() const;
    [[nodiscard]] long euler_characteristic() const;
};

class GradedMixedComplex {
public:
    GradedMixedComplex() = default;
    /// d and eps are square in the basis; column j is the image of basis[j].
    /// Throws BidegreeMismatch if an image leaves its target bidegree.
    GradedMixedComplex(std::vector<BasisElement> basis, SparseMatrix d, SparseMatrix eps);

    /// Unit object k(q)[n]-style: one basis element at (weight, degree).
    static GradedMixedComplex unit(int weight = 0, int degree = 0, const std::string& label = "1");

    [[nodiscard]] std::size_t dim() const { return basis_.size(); }
    [[nodiscard]] const std::vector<BasisElement>& basis() const { return basis_; }
    [[nodiscard]] const SparseMatrix& d() const { return d_; }
    [[nodiscard]] const SparseMatrix& eps() const { return eps_; }
    [[nodiscard]] std::set<std::pair<int, int>> support() const;  // (weight, degree)
    [[nodiscard]] std::vector<std::size_t> indices(int weight, int degree) const;
    [[nodiscard]] std::size_t dim(int weight, int degree) const { return indices(weight, degree).size(); }
    [[nodiscard]] int min_weight() const;
    [[nodiscard]] int max_weight() const;

    friend bool operator==(const GradedMixedComplex& a, const GradedMixedComplex& b);

private:
    std::vector<BasisElement> basis_;
    SparseMatrix d_;
    SparseMatrix eps_;
};

struct Violation {
    std::string identity;  // "d^2", "eps^2" or "d*eps+eps*d"
    std::string witness;   // basis label
};

struct MixedReport {
    std::vector<Violation> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

MixedReport validate_mixed(const GradedMixedComplex& e);

GradedMixedComplex tensor(const GradedMixedComplex& e, const GradedMixedComplex& f);

/// E[n]((q)): bidegree (p, m) moves to (p - q, m - n); d picks up (-1)^n.
GradedMixedComplex shift(const GradedMixedComplex& e, int n, int q);

/// Z_m: x_0..x_m in degree 0 (weight n), y_0..y_m in degree 1 (weight n+1),
/// d x_n = y_{n-1}, eps x_n = y_n.
GradedMixedComplex cell_model(int m);

/// Restriction to weights [lo, hi] as a subquotient (images outside dropped).
GradedMixedComplex weight_window(const GradedMixedComplex& e, int lo, int hi);

struct Realization {
    ChainComplex complex;
    std::map<int, std::vector<std::size_t>> source;  // degree -> basis indices of E
};

/// (+)_{lo<=p<=hi} E(p) with total differential d + eps.
Realization total_complex(const GradedMixedComplex& e, int lo, int hi);

/// (+)_{0<=p<=wmax} E(p) with total differential d + eps.
Realization realization(const GradedMixedComplex& e, int wmax);

struct TateStage {
    Realization stage;                        // weights -i .. wmax
    std::map<int, SparseMatrix> comparison;   // degree -> matrix realization^m -> stage^m
};

TateStage tate_realization(const GradedMixedComplex& e, int stage, int wmax);

/// Checks comparison maps are chain maps and induce isomorphisms on homology.
bool is_quasi_isomorphism(const ChainComplex& src, const ChainComplex& dst, const std::map<int, SparseMatrix>& f);

}  // namespace pw
