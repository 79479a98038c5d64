#include "pw/gradedmixed.hpp"

#include <algorithm>

namespace pw {

// --- ChainComplex ------------------------------------------------------------

std::size_t ChainComplex::dim(int m) const
{
    auto it = basis.find(m);
    return it == basis.end() ? 0 : it->second.size();
}

SparseMatrix ChainComplex::differential(int m) const
{
    auto it = d.find(m);
    if (it != d.end()) return it->second;
    return SparseMatrix::zero(dim(m + 1), dim(m));
}

HomologyResult ChainComplex::homology_at(int m) const
{
    return homology(differential(m - 1), differential(m));
}

std::map<int, std::size_t> ChainComplex::homology_dims() const
{
    std::map<int, std::size_t> out;
    for (const auto& [m, b] : basis) out[m] = homology_at(m).dimension;
    return out;
}

long ChainComplex::euler_characteristic() const
{
    long chi = 0;
    for (const auto& [m, b] : basis) chi += (m % 2 == 0 ? 1 : -1) * static_cast<long>(b.size());
    return chi;
}

// --- GradedMixedComplex --------------------------------------------------------

namespace {

void check_bidegree(const std::vector<BasisElement>& basis, const SparseMatrix& m, int dw, int dd,
                    const char* name)
{
    for (const auto& t : m.triplets()) {
        const auto& src = basis[t.col];
        const auto& dst = basis[t.row];
        if (dst.weight != src.weight + dw || dst.degree != src.degree + dd)
            throw BidegreeMismatch(std::string(name) + "(" + src.label + ") has a component on " + dst.label +
                                   " outside bidegree (" + std::to_string(src.weight + dw) + "," +
                                   std::to_string(src.degree + dd) + ")");
    }
}

}  // namespace

GradedMixedComplex::GradedMixedComplex(std::vector<BasisElement> basis, SparseMatrix d, SparseMatrix eps)
    : basis_(std::move(basis)), d_(std::move(d)), eps_(std::move(eps))
{
    const auto n = basis_.size();
    if (d_.rows() != n || d_.cols() != n || eps_.rows() != n || eps_.cols() != n)
        throw DimensionMismatch("mixed complex maps must be square in the basis");
    check_bidegree(basis_, d_, 0, 1, "d");
    check_bidegree(basis_, eps_, 1, 1, "eps");
}

GradedMixedComplex GradedMixedComplex::unit(int weight, int degree, const std::string& label)
{
    return {{{label, weight, degree}}, SparseMatrix::zero(1, 1), SparseMatrix::zero(1, 1)};
}

std::set<std::pair<int, int>> GradedMixedComplex::support() const
{
    std::set<std::pair<int, int>> s;
    for (const auto& b : basis_) s.emplace(b.weight, b.degree);
    return s;
}

std::vector<std::size_t> GradedMixedComplex::indices(int weight, int degree) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i].weight == weight && basis_[i].degree == degree) out.push_back(i);
    return out;
}

int GradedMixedComplex::min_weight() const
{
    int w = 0;
    bool first = true;
    for (const auto& b : basis_) {
        w = first ? b.weight : std::min(w, b.weight);
        first = false;
    }
    return w;
}

int GradedMixedComplex::max_weight() const
{
    int w = 0;
    bool first = true;
    for (const auto& b : basis_) {
        w = first ? b.weight : std::max(w, b.weight);
        first = false;
    }
    return w;
}

bool operator==(const GradedMixedComplex& a, const GradedMixedComplex& b)
{
    return a.basis_ == b.basis_ && a.d_ == b.d_ && a.eps_ == b.eps_;
}

MixedReport validate_mixed(const GradedMixedComplex& e)
{
    MixedReport r;
    auto scan = [&](const SparseMatrix& m, const char* name) {
        std::set<std::size_t> cols;
        for (const auto& t : m.triplets()) cols.insert(t.col);
        for (auto c : cols) r.violations.push_back({name, e.basis()[c].label});
    };
    scan(e.d() * e.d(), "d^2");
    scan(e.eps() * e.eps(), "eps^2");
    scan(e.d() * e.eps() + e.eps() * e.d(), "d*eps+eps*d");
    return r;
}

GradedMixedComplex tensor(const GradedMixedComplex& e, const GradedMixedComplex& f)
{
    const auto n = e.dim(), k = f.dim();
    std::vector<BasisElement> basis;
    basis.reserve(n * k);
    for (const auto& a : e.basis())
        for (const auto& b : f.basis())
            basis.push_back({a.label + "⊗" + b.label, a.weight + b.weight, a.degree + b.degree});

    auto build = [&](const SparseMatrix& me, const SparseMatrix& mf) {
        std::vector<SparseMatrix::Triplet> t;
        // m(a (x) b) = m(a) (x) b + (-1)^{|a|} a (x) m(b)
        for (const auto& x : me.triplets())
            for (std::size_t j = 0; j < k; ++j) t.push_back({x.row * k + j, x.col * k + j, x.value});
        std::vector<SparseMatrix::Triplet> second;
        for (std::size_t i = 0; i < n; ++i) {
            int sign = (e.basis()[i].degree & 1) ? -1 : 1;
            for (const auto& y : mf.triplets()) second.push_back({i * k + y.row, i * k + y.col, sign * y.value});
        }
        SparseMatrix a(n * k, n * k, t);
        SparseMatrix b(n * k, n * k, second);
        return a + b;
    };
    return {std::move(basis), build(e.d(), f.d()), build(e.eps(), f.eps())};
}

GradedMixedComplex shift(const GradedMixedComplex& e, int n, int q)
{
    std::vector<BasisElement> basis = e.basis();
    for (auto& b : basis) {
        b.weight -= q;
        b.degree -= n;
    }
    return {std::move(basis), (n & 1) ? e.d().scaled(-1) : e.d(), e.eps()};
}

GradedMixedComplex cell_model(int m)
{
    if (m < -1) throw Error("cell model truncation must be >= -1");
    const auto count = static_cast<std::size_t>(m + 1);
    std::vector<BasisElement> basis;
    for (int i = 0; i <= m; ++i) basis.push_back({"x" + std::to_string(i), i, 0});
    for (int i = 0; i <= m; ++i) basis.push_back({"y" + std::to_string(i), i + 1, 1});
    std::vector<SparseMatrix::Triplet> d, eps;
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0) d.push_back({count + i - 1, i, 1});
        eps.push_back({count + i, i, 1});
    }
    return {std::move(basis), SparseMatrix(2 * count, 2 * count, d), SparseMatrix(2 * count, 2 * count, eps)};
}

GradedMixedComplex weight_window(const GradedMixedComplex& e, int lo, int hi)
{
    std::vector<std::size_t> keep;
    std::vector<long> pos(e.dim(), -1);
    for (std::size_t i = 0; i < e.dim(); ++i)
        if (e.basis()[i].weight >= lo && e.basis()[i].weight <= hi) {
            pos[i] = static_cast<long>(keep.size());
            keep.push_back(i);
        }
    std::vector<BasisElement> basis;
    for (auto i : keep) basis.push_back(e.basis()[i]);
    auto restrict = [&](const SparseMatrix& m) {
        std::vector<SparseMatrix::Triplet> t;
        for (const auto& x : m.triplets())
            if (pos[x.row] >= 0 && pos[x.col] >= 0)
                t.push_back({static_cast<std::size_t>(pos[x.row]), static_cast<std::size_t>(pos[x.col]), x.value});
        return SparseMatrix(keep.size(), keep.size(), t);
    };
    return {std::move(basis), restrict(e.d()), restrict(e.eps())};
}

Realization total_complex(const GradedMixedComplex& e, int lo, int hi)
{
    Realization r;
    std::vector<std::pair<int, std::size_t>> place(e.dim(), {0, 0});
    std::vector<bool> inside(e.dim(), false);
    for (std::size_t i = 0; i < e.dim(); ++i) {
        const auto& b = e.basis()[i];
        if (b.weight < lo || b.weight > hi) continue;
        auto& src = r.source[b.degree];
        place[i] = {b.degree, src.size()};
        inside[i] = true;
        src.push_back(i);
        r.complex.basis[b.degree].push_back(b.label);
    }
    std::map<int, std::vector<SparseMatrix::Triplet>> trip;
    auto add = [&](const SparseMatrix& m) {
        for (const auto& t : m.triplets()) {
            if (!inside[t.col] || !inside[t.row]) continue;
            trip[place[t.col].first].push_back({place[t.row].second, place[t.col].second, t.value});
        }
    };
    add(e.d());
    add(e.eps());
    for (const auto& [m, b] : r.complex.basis) {
        auto& t = trip[m];
        // d and eps can hit the same entry; merge before building.
        std::map<std::pair<std::size_t, std::size_t>, Rational> acc;
        for (const auto& x : t) acc[{x.row, x.col}] += x.value;
        std::vector<SparseMatrix::Triplet> merged;
        for (const auto& [rc, v] : acc) merged.push_back({rc.first, rc.second, v});
        r.complex.d[m] = SparseMatrix(r.complex.dim(m + 1), b.size(), merged);
    }
    return r;
}

Realization realization(const GradedMixedComplex& e, int wmax) { return total_complex(e, 0, wmax); }

TateStage tate_realization(const GradedMixedComplex& e, int stage, int wmax)
{
    if (stage < 0) throw Error("Tate stage must be >= 0");
    TateStage out;
    out.stage = total_complex(e, -stage, wmax);
    Realization base = total_complex(e, 0, wmax);
    for (const auto& [m, src] : base.source) {
        const auto& dst = out.stage.source[m];
        std::vector<SparseMatrix::Triplet> t;
        for (std::size_t j = 0; j < src.size(); ++j) {
            auto it = std::find(dst.begin(), dst.end(), src[j]);
            t.push_back({static_cast<std::size_t>(it - dst.begin()), j, 1});
        }
        out.comparison[m] = SparseMatrix(dst.size(), src.size(), t);
    }
    return out;
}

bool is_quasi_isomorphism(const ChainComplex& src, const ChainComplex& dst, const std::map<int, SparseMatrix>& f)
{
    std::set<int> degrees;
    for (const auto& [m, b] : src.basis) degrees.insert(m);
    for (const auto& [m, b] : dst.basis) degrees.insert(m);
    auto map_at = [&](int m) {
        auto it = f.find(m);
        return it != f.end() ? it->second : SparseMatrix::zero(dst.dim(m), src.dim(m));
    };
    for (int m : degrees) {
        if (!(dst.differential(m) * map_at(m) == map_at(m + 1) * src.differential(m))) return false;
        auto hs = src.homology_at(m);
        auto hd = dst.homology_at(m);
        if (hs.dimension != hd.dimension) return false;
        Span span;
        for (const auto& c : dst.differential(m - 1).columns()) span.add(c);
        for (const auto& v : hs.representatives)
            if (!span.add(map_at(m).apply(v))) return false;
    }
    return true;
}

}  // namespace pw
