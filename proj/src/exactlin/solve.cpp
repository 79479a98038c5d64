#include "pw/exactlin.hpp"

#include <algorithm>

namespace pw {

namespace {

using IntRow = std::vector<std::pair<std::size_t, Integer>>;

IntRow to_int_row(const SparseVector& v)
{
    Integer den = 1;
    for (const auto& e : v.entries()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.second.get_den_mpz_t());
    IntRow r;
    r.reserve(v.nnz());
    for (const auto& [j, c] : v.entries()) r.emplace_back(j, Integer(c.get_num() * (den / c.get_den())));
    return r;
}

SparseVector primitive(SparseVector v)
{
    if (v.empty()) return v;
    Integer den = 1;
    Integer num = 0;
    for (const auto& e : v.entries()) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.second.get_den_mpz_t());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), e.second.get_num_mpz_t());
    }
    Rational scale(den, num);
    scale.canonicalize();
    if (v.entries().front().second < 0) scale = -scale;
    v *= scale;
    return v;
}

}  // namespace

std::vector<SparseVector> kernel_basis(const SparseMatrix& m)
{
    const auto& ech = m.echelon();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : ech.pivots) is_pivot[p] = true;

    // Column f -> list of (pivot row, coefficient at f).
    std::vector<std::vector<std::pair<std::size_t, Integer>>> by_col(m.cols());
    for (std::size_t r = 0; r < ech.rows.size(); ++r)
        for (const auto& [j, c] : ech.rows[r])
            if (!is_pivot[j]) by_col[j].emplace_back(r, c);

    std::vector<SparseVector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<SparseVector::Entry> e;
        e.emplace_back(f, Rational(1));
        for (const auto& [r, c] : by_col[f]) {
            Rational lead(ech.rows[r].front().second);
            e.emplace_back(ech.pivots[r], Rational(-c) / lead);
        }
        basis.push_back(primitive(SparseVector(std::move(e))));
    }
    return basis;
}

HomologyResult homology(const SparseMatrix& d_in, const SparseMatrix& d_out)
{
    if (d_in.rows() != d_out.cols()) throw DimensionMismatch("homology: incompatible differentials");
    if (!(d_out * d_in).is_zero()) throw CompositionNonzero("homology: d_out * d_in != 0");

    HomologyResult res;
    Span span;
    for (const auto& c : d_in.columns()) span.add(c);
    for (const auto& v : kernel_basis(d_out))
        if (span.add(v)) res.representatives.push_back(v);
    res.dimension = res.representatives.size();
    return res;
}

std::optional<LinearSolution> try_solve_linear(const SparseMatrix& m, const SparseVector& b)
{
    if (!b.empty() && b.entries().back().first >= m.rows()) throw DimensionMismatch("rhs too long");
    // Eliminate the augmented system [M | b]; column cols() holds b.
    const std::size_t n = m.cols();
    std::vector<IntRow> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto entries = m.row(i).entries();
        Rational bi = b.at(i);
        if (bi != 0) entries.emplace_back(n, bi);
        if (entries.empty()) continue;
        rows.push_back(to_int_row(SparseVector(std::move(entries))));
    }
    Echelon ech = eliminate(std::move(rows), n + 1, default_exec());
    if (!ech.pivots.empty() && ech.pivots.back() == n) return std::nullopt;

    std::vector<SparseVector::Entry> x;
    for (std::size_t r = 0; r < ech.rows.size(); ++r) {
        const auto& row = ech.rows[r];
        if (row.back().first != n) continue;
        x.emplace_back(ech.pivots[r], Rational(row.back().second) / Rational(row.front().second));
    }
    return LinearSolution{SparseVector(std::move(x)), kernel_basis(m)};
}

LinearSolution solve_linear(const SparseMatrix& m, const SparseVector& b)
{
    auto s = try_solve_linear(m, b);
    if (!s) throw NoSolution("solve_linear: right-hand side not in the image");
    return *std::move(s);
}

// --- Span ------------------------------------------------------------------

std::vector<std::pair<std::size_t, Integer>> Span::reduce(const SparseVector& v) const
{
    IntRow r = to_int_row(v);
    for (std::size_t k = 0; k < pivots_.size() && !r.empty(); ++k) {
        auto it = std::lower_bound(r.begin(), r.end(), pivots_[k],
                                   [](const auto& e, std::size_t c) { return e.first < c; });
        if (it == r.end() || it->first != pivots_[k]) continue;
        const auto& p = rows_[k];
        Integer a = p.front().second;
        Integer b = it->second;
        Integer g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        a /= g;
        b /= g;
        IntRow out;
        std::size_t i = 0, j = 0;
        while (i < r.size() || j < p.size()) {
            if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
                out.emplace_back(r[i].first, a * r[i].second);
                ++i;
            } else if (i == r.size() || p[j].first < r[i].first) {
                out.emplace_back(p[j].first, -b * p[j].second);
                ++j;
            } else {
                Integer t = a * r[i].second - b * p[j].second;
                if (t != 0) out.emplace_back(r[i].first, std::move(t));
                ++i;
                ++j;
            }
        }
        r = std::move(out);
        if (!r.empty()) {
            Integer g2 = 0;
            for (const auto& e : r) mpz_gcd(g2.get_mpz_t(), g2.get_mpz_t(), e.second.get_mpz_t());
            if (g2 != 1)
                for (auto& e : r) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g2.get_mpz_t());
        }
    }
    return r;
}

bool Span::add(const SparseVector& v)
{
    IntRow r = reduce(v);
    if (r.empty()) return false;
    const std::size_t piv = r.front().first;
    // Keep the basis reduced: clear the new pivot column from existing rows.
    for (auto& row : rows_) {
        auto it = std::lower_bound(row.begin(), row.end(), piv,
                                   [](const auto& e, std::size_t c) { return e.first < c; });
        if (it == row.end() || it->first != piv) continue;
        Integer a = r.front().second;
        Integer b = it->second;
        IntRow out;
        std::size_t i = 0, j = 0;
        while (i < row.size() || j < r.size()) {
            if (j == r.size() || (i < row.size() && row[i].first < r[j].first)) {
                out.emplace_back(row[i].first, a * row[i].second);
                ++i;
            } else if (i == row.size() || r[j].first < row[i].first) {
                out.emplace_back(r[j].first, -b * r[j].second);
                ++j;
            } else {
                Integer t = a * row[i].second - b * r[j].second;
                if (t != 0) out.emplace_back(row[i].first, std::move(t));
                ++i;
                ++j;
            }
        }
        row = std::move(out);
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
    auto idx = pos - pivots_.begin();
    pivots_.insert(pos, piv);
    rows_.insert(rows_.begin() + idx, std::move(r));
    return true;
}

bool Span::contains(const SparseVector& v) const { return reduce(v).empty(); }

std::size_t rank_of(const std::vector<SparseVector>& vs)
{
    Span s;
    for (const auto& v : vs) s.add(v);
    return s.dimension();
}

// --- dense reference ---------------------------------------------------------

namespace reference {

namespace {
std::vector<std::vector<Rational>> rref(const SparseMatrix& m, std::vector<std::size_t>& pivots)
{
    std::vector<std::vector<Rational>> a(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) a[i] = m.row(i).to_dense(m.cols());
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && a[p][c] == 0) ++p;
        if (p == m.rows()) continue;
        std::swap(a[p], a[r]);
        Rational inv = 1 / a[r][c];
        for (auto& x : a[r]) x *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (std::size_t j = c; j < m.cols(); ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    a.resize(r);
    return a;
}
}  // namespace

std::size_t rank(const SparseMatrix& m)
{
    std::vector<std::size_t> piv;
    return rref(m, piv).size();
}

std::vector<SparseVector> kernel(const SparseMatrix& m)
{
    std::vector<std::size_t> piv;
    auto a = rref(m, piv);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : piv) is_pivot[p] = true;
    std::vector<SparseVector> out;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(m.cols());
        v[f] = 1;
        for (std::size_t r = 0; r < a.size(); ++r) v[piv[r]] = -a[r][f];
        out.push_back(SparseVector::from_dense(v));
    }
    return out;
}

}  // namespace reference

}  // namespace pw
