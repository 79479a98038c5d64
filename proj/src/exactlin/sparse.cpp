#include "pw/exactlin.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace pw {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text)
{
    Rational q;
    if (q.set_str(text, 10) != 0) throw Error("not a rational literal: " + text);
    if (q.get_den() == 0) throw Error("zero denominator: " + text);
    q.canonicalize();
    return q;
}

// --- SparseVector ----------------------------------------------------------

SparseVector::SparseVector(std::vector<Entry> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (auto& [i, c] : entries) {
        if (!entries_.empty() && entries_.back().first == i)
            entries_.back().second += c;
        else
            entries_.emplace_back(i, std::move(c));
    }
    std::erase_if(entries_, [](const Entry& e) { return e.second == 0; });
}

SparseVector SparseVector::unit(std::size_t i, const Rational& c)
{
    SparseVector v;
    if (c != 0) v.entries_.emplace_back(i, c);
    return v;
}

SparseVector SparseVector::from_dense(std::span<const Rational> dense)
{
    SparseVector v;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i] != 0) v.entries_.emplace_back(i, dense[i]);
    return v;
}

Rational SparseVector::at(std::size_t i) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, std::size_t k) { return e.first < k; });
    if (it != entries_.end() && it->first == i) return it->second;
    return 0;
}

std::vector<Rational> SparseVector::to_dense(std::size_t n) const
{
    std::vector<Rational> d(n);
    for (const auto& [i, c] : entries_)
        if (i < n) d[i] = c;
    return d;
}

namespace {
void axpy_merge(std::vector<SparseVector::Entry>& out, const std::vector<SparseVector::Entry>& a,
                const std::vector<SparseVector::Entry>& b, int sign)
{
    out.clear();
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, sign > 0 ? b[j].second : Rational(-b[j].second));
            ++j;
        } else {
            Rational s = sign > 0 ? Rational(a[i].second + b[j].second) : Rational(a[i].second - b[j].second);
            if (s != 0) out.emplace_back(a[i].first, std::move(s));
            ++i;
            ++j;
        }
    }
}
}  // namespace

SparseVector& SparseVector::operator+=(const SparseVector& o)
{
    std::vector<Entry> out;
    axpy_merge(out, entries_, o.entries_, +1);
    entries_ = std::move(out);
    return *this;
}

SparseVector& SparseVector::operator-=(const SparseVector& o)
{
    std::vector<Entry> out;
    axpy_merge(out, entries_, o.entries_, -1);
    entries_ = std::move(out);
    return *this;
}

SparseVector& SparseVector::operator*=(const Rational& c)
{
    if (c == 0) {
        entries_.clear();
        return *this;
    }
    for (auto& e : entries_) e.second *= c;
    return *this;
}

Rational SparseVector::dot(const SparseVector& o) const
{
    Rational s = 0;
    std::size_t i = 0, j = 0;
    while (i < entries_.size() && j < o.entries_.size()) {
        if (entries_[i].first < o.entries_[j].first)
            ++i;
        else if (o.entries_[j].first < entries_[i].first)
            ++j;
        else
            s += entries_[i++].second * o.entries_[j++].second;
    }
    return s;
}

// --- SparseMatrix ----------------------------------------------------------

struct SparseMatrix::Cache {
    std::once_flag once;
    Echelon echelon;
};

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows), cache_(std::make_shared<Cache>())
{
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, const std::vector<Triplet>& entries)
    : SparseMatrix(rows, cols)
{
    std::vector<std::vector<SparseVector::Entry>> acc(rows);
    for (const auto& t : entries) {
        if (t.row >= rows || t.col >= cols) throw DimensionMismatch("triplet outside matrix bounds");
        acc[t.row].emplace_back(t.col, t.value);
    }
    for (std::size_t i = 0; i < rows; ++i) {
        auto& r = acc[i];
        std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 1; k < r.size(); ++k)
            if (r[k].first == r[k - 1].first) throw Error("duplicate (row,col) key in sparse matrix");
        data_[i] = SparseVector(std::move(r));
    }
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<SparseVector> row_data)
    : rows_(rows), cols_(cols), data_(std::move(row_data)), cache_(std::make_shared<Cache>())
{
    if (data_.size() != rows) throw DimensionMismatch("row count mismatch");
    for (const auto& r : data_)
        if (!r.empty() && r.entries().back().first >= cols)
            throw DimensionMismatch("row entry outside column range");
}

SparseMatrix SparseMatrix::identity(std::size_t n)
{
    std::vector<SparseVector> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = SparseVector::unit(i);
    return {n, n, std::move(rows)};
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& d)
{
    const std::size_t r = d.size();
    const std::size_t c = r ? d.front().size() : 0;
    std::vector<SparseVector> rows;
    rows.reserve(r);
    for (const auto& row : d) {
        if (row.size() != c) throw DimensionMismatch("ragged dense matrix");
        rows.push_back(SparseVector::from_dense(row));
    }
    return {r, c, std::move(rows)};
}

SparseMatrix SparseMatrix::from_columns(std::size_t rows, const std::vector<SparseVector>& cols)
{
    std::vector<std::vector<SparseVector::Entry>> acc(rows);
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [i, c] : cols[j].entries()) {
            if (i >= rows) throw DimensionMismatch("column entry outside row range");
            acc[i].emplace_back(j, c);
        }
    std::vector<SparseVector> data;
    data.reserve(rows);
    for (auto& a : acc) data.emplace_back(std::move(a));
    return {rows, cols.size(), std::move(data)};
}

std::size_t SparseMatrix::nnz() const
{
    std::size_t n = 0;
    for (const auto& r : data_) n += r.nnz();
    return n;
}

std::vector<SparseMatrix::Triplet> SparseMatrix::triplets() const
{
    std::vector<Triplet> out;
    for (std::size_t i = 0; i < rows_; ++i)
        for (const auto& [j, c] : data_[i].entries()) out.push_back({i, j, c});
    return out;
}

SparseMatrix SparseMatrix::transpose() const
{
    std::vector<std::vector<SparseVector::Entry>> acc(cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (const auto& [j, c] : data_[i].entries()) acc[j].emplace_back(i, c);
    std::vector<SparseVector> data;
    data.reserve(cols_);
    for (auto& a : acc) data.emplace_back(std::move(a));
    return {cols_, rows_, std::move(data)};
}

SparseVector SparseMatrix::apply(const SparseVector& v) const
{
    if (!v.empty() && v.entries().back().first >= cols_) throw DimensionMismatch("vector too long");
    std::vector<SparseVector::Entry> out;
    for (std::size_t i = 0; i < rows_; ++i) {
        Rational s = data_[i].dot(v);
        if (s != 0) out.emplace_back(i, std::move(s));
    }
    return SparseVector(std::move(out));
}

std::vector<SparseVector> SparseMatrix::columns() const
{
    auto t = transpose();
    std::vector<SparseVector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(t.row(j));
    return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const
{
    if (cols_ != o.rows_) throw DimensionMismatch("matrix product dimension mismatch");
    std::vector<SparseVector> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::map<std::size_t, Rational> acc;
        for (const auto& [k, a] : data_[i].entries())
            for (const auto& [j, b] : o.data_[k].entries()) acc[j] += a * b;
        std::vector<SparseVector::Entry> e(acc.begin(), acc.end());
        out[i] = SparseVector(std::move(e));
    }
    return {rows_, o.cols_, std::move(out)};
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum dimension mismatch");
    std::vector<SparseVector> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = data_[i] + o.data_[i];
    return {rows_, cols_, std::move(out)};
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix difference dimension mismatch");
    std::vector<SparseVector> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = data_[i] - o.data_[i];
    return {rows_, cols_, std::move(out)};
}

SparseMatrix SparseMatrix::scaled(const Rational& c) const
{
    std::vector<SparseVector> out(data_);
    for (auto& r : out) r *= c;
    return {rows_, cols_, std::move(out)};
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b)
{
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

const Echelon& SparseMatrix::echelon() const
{
    std::call_once(cache_->once, [this] {
        std::vector<std::vector<std::pair<std::size_t, Integer>>> rows;
        rows.reserve(rows_);
        for (const auto& r : data_) {
            if (r.empty()) continue;
            Integer den = 1;
            for (const auto& e : r.entries()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), e.second.get_den_mpz_t());
            std::vector<std::pair<std::size_t, Integer>> ir;
            ir.reserve(r.nnz());
            for (const auto& [j, c] : r.entries()) ir.emplace_back(j, Integer(c.get_num() * (den / c.get_den())));
            rows.push_back(std::move(ir));
        }
        cache_->echelon = eliminate(std::move(rows), cols_, default_exec());
    });
    return cache_->echelon;
}

// --- QPoly -------------------------------------------------------------------

QPoly::QPoly(const Rational& c)
{
    if (c != 0) coeffs_.push_back(c);
}

QPoly QPoly::monomial(const Rational& c, std::size_t power)
{
    QPoly p;
    if (c == 0) return p;
    p.coeffs_.assign(power + 1, Rational(0));
    p.coeffs_[power] = c;
    return p;
}

Rational QPoly::coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

Rational QPoly::eval(const Rational& x) const
{
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

void QPoly::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

QPoly& QPoly::operator+=(const QPoly& o)
{
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
}

QPoly& QPoly::operator-=(const QPoly& o)
{
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
}

QPoly operator*(const QPoly& a, const QPoly& b)
{
    QPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    r.trim();
    return r;
}

std::string QPoly::str(const std::string& var) const
{
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0) continue;
        if (!s.empty()) s += " + ";
        s += to_string(coeffs_[k]);
        if (k >= 1) s += "*" + var;
        if (k >= 2) s += "^" + std::to_string(k);
    }
    return s;
}

// --- PolySparseMatrix --------------------------------------------------------

PolySparseMatrix::PolySparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols)
{
    std::map<std::pair<std::size_t, std::size_t>, QPoly> acc;
    for (auto& t : entries) {
        if (t.row >= rows || t.col >= cols) throw DimensionMismatch("triplet outside matrix bounds");
        acc[{t.row, t.col}] += t.value;
    }
    for (auto& [k, v] : acc)
        if (!v.is_zero()) entries_.push_back({k.first, k.second, std::move(v)});
}

QPoly PolySparseMatrix::at(std::size_t i, std::size_t j) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(i, j),
                               [](const Triplet& t, const std::pair<std::size_t, std::size_t>& k) {
                                   return std::make_pair(t.row, t.col) < k;
                               });
    if (it != entries_.end() && it->row == i && it->col == j) return it->value;
    return {};
}

SparseMatrix PolySparseMatrix::specialize(const Rational& h) const
{
    std::vector<SparseMatrix::Triplet> t;
    for (const auto& e : entries_) {
        Rational v = e.value.eval(h);
        if (v != 0) t.push_back({e.row, e.col, v});
    }
    return {rows_, cols_, t};
}

}  // namespace pw
