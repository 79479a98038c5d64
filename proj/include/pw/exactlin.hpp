#pragma once

// Exact linear algebra over Q (and Q[h]) used by every homology, kernel and
// invariant computation in the workbench.

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pw {

using Rational = mpq_class;
using Integer = mpz_class;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CompositionNonzero : public Error {
public:
    using Error::Error;
};

class NoSolution : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

/// Sparse vector with strictly increasing indices and no stored zeros.
class SparseVector {
public:
    using Entry = std::pair<std::size_t, Rational>;

    SparseVector() = default;
    explicit SparseVector(std::vector<Entry> entries);  // sums duplicates, drops zeros

    static SparseVector unit(std::size_t i, const Rational& c = 1);
    static SparseVector from_dense(std::span<const Rational> dense);

    [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }
    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] std::size_t nnz() const { return entries_.size(); }
    [[nodiscard]] Rational at(std::size_t i) const;
    [[nodiscard]] std::vector<Rational> to_dense(std::size_t n) const;

    SparseVector& operator+=(const SparseVector& o);
    SparseVector& operator-=(const SparseVector& o);
    SparseVector& operator*=(const Rational& c);
    friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
    friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }
    friend SparseVector operator*(const Rational& c, SparseVector a) { return a *= c; }
    friend bool operator==(const SparseVector& a, const SparseVector& b) = default;

    [[nodiscard]] Rational dot(const SparseVector& o) const;

private:
    std::vector<Entry> entries_;
};

/// Row-echelon data of a matrix: primitive integer rows, fully reduced.
struct Echelon {
    std::size_t cols = 0;
    std::vector<std::size_t> pivots;  // pivot column of each row, increasing
    std::vector<std::vector<std::pair<std::size_t, Integer>>> rows;
    [[nodiscard]] std::size_t rank() const { return pivots.size(); }
};

enum class Exec { serial, parallel };

/// Process-wide default for the elimination kernel.
void set_default_exec(Exec e);
Exec default_exec();

/// Fraction-free elimination of integer rows. Each row operation is
/// r <- a*r - b*p followed by division by the row content.
Echelon eliminate(std::vector<std::vector<std::pair<std::size_t, Integer>>> rows,
                  std::size_t cols, Exec exec);

/// Immutable sparse matrix over Q; echelon form computed lazily and shared.
class SparseMatrix {
public:
    struct Triplet {
        std::size_t row;
        std::size_t col;
        Rational value;
    };

    SparseMatrix() : SparseMatrix(0, 0) {}
    SparseMatrix(std::size_t rows, std::size_t cols);
    /// Rejects duplicate (row,col) keys; zero values are dropped.
    SparseMatrix(std::size_t rows, std::size_t cols, const std::vector<Triplet>& entries);
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<SparseVector> row_data);

    static SparseMatrix identity(std::size_t n);
    static SparseMatrix zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& d);
    static SparseMatrix from_columns(std::size_t rows, const std::vector<SparseVector>& cols);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] const SparseVector& row(std::size_t i) const { return data_[i]; }
    [[nodiscard]] Rational at(std::size_t i, std::size_t j) const { return data_[i].at(j); }
    [[nodiscard]] std::size_t nnz() const;
    [[nodiscard]] bool is_zero() const { return nnz() == 0; }
    [[nodiscard]] std::vector<Triplet> triplets() const;

    [[nodiscard]] SparseMatrix transpose() const;
    [[nodiscard]] SparseVector apply(const SparseVector& v) const;
    [[nodiscard]] std::vector<SparseVector> columns() const;
    [[nodiscard]] SparseMatrix operator*(const SparseMatrix& o) const;
    [[nodiscard]] SparseMatrix operator+(const SparseMatrix& o) const;
    [[nodiscard]] SparseMatrix operator-(const SparseMatrix& o) const;
    [[nodiscard]] SparseMatrix scaled(const Rational& c) const;
    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

    [[nodiscard]] const Echelon& echelon() const;
    [[nodiscard]] std::size_t rank() const { return echelon().rank(); }

private:
    struct Cache;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<SparseVector> data_;
    std::shared_ptr<Cache> cache_;
};

/// Basis of ker M. An empty (0-row) matrix yields the standard basis.
std::vector<SparseVector> kernel_basis(const SparseMatrix& m);

struct HomologyResult {
    std::size_t dimension = 0;
    std::vector<SparseVector> representatives;
};

/// Homology at the middle term of  C --d_in--> D --d_out--> E.
/// Throws CompositionNonzero unless d_out * d_in == 0.
HomologyResult homology(const SparseMatrix& d_in, const SparseMatrix& d_out);

struct LinearSolution {
    SparseVector particular;
    std::vector<SparseVector> kernel;
};

std::optional<LinearSolution> try_solve_linear(const SparseMatrix& m, const SparseVector& b);
/// Throws NoSolution when b is not in the image of m.
LinearSolution solve_linear(const SparseMatrix& m, const SparseVector& b);

/// Incrementally maintained span of rational vectors (reduced echelon form).
class Span {
public:
    Span() = default;
    /// Returns true if v was independent of the current span (and adds it).
    bool add(const SparseVector& v);
    [[nodiscard]] bool contains(const SparseVector& v) const;
    [[nodiscard]] std::size_t dimension() const { return pivots_.size(); }

private:
    [[nodiscard]] std::vector<std::pair<std::size_t, Integer>> reduce(const SparseVector& v) const;
    std::vector<std::size_t> pivots_;
    std::vector<std::vector<std::pair<std::size_t, Integer>>> rows_;
};

using Matrix = std::vector<std::vector<Rational>>;

/// Rank of a family of vectors.
std::size_t rank_of(const std::vector<SparseVector>& vs);

// ---------------------------------------------------------------------------
// Q[h]

/// Univariate polynomial over Q in canonical form (no trailing zeros).
class QPoly {
public:
    QPoly() = default;
    QPoly(const Rational& c);  // NOLINT: constants convert implicitly
    static QPoly monomial(const Rational& c, std::size_t power);
    static QPoly h() { return monomial(1, 1); }

    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
    [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] Rational coeff(std::size_t k) const;
    [[nodiscard]] const std::vector<Rational>& coeffs() const { return coeffs_; }
    [[nodiscard]] Rational eval(const Rational& x) const;

    QPoly& operator+=(const QPoly& o);
    QPoly& operator-=(const QPoly& o);
    friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
    friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
    friend QPoly operator*(const QPoly& a, const QPoly& b);
    friend bool operator==(const QPoly& a, const QPoly& b) = default;

    [[nodiscard]] std::string str(const std::string& var = "h") const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

/// Sparse matrix with Q[h] coefficients; zero entries are never stored.
class PolySparseMatrix {
public:
    struct Triplet {
        std::size_t row;
        std::size_t col;
        QPoly value;
    };

    PolySparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
    PolySparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] const std::vector<Triplet>& entries() const { return entries_; }
    [[nodiscard]] QPoly at(std::size_t i, std::size_t j) const;
    [[nodiscard]] SparseMatrix specialize(const Rational& h) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Triplet> entries_;  // sorted by (row, col)
};

namespace reference {
/// Dense Gauss-Jordan over Q. Slow; kept as an independent check of the
/// sparse elimination kernel.
std::size_t rank(const SparseMatrix& m);
std::vector<SparseVector> kernel(const SparseMatrix& m);
}  // namespace reference

}  // namespace pw
