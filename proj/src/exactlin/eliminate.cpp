#include "pw/exactlin.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pw {

namespace {

using IntRow = std::vector<std::pair<std::size_t, Integer>>;

std::atomic<Exec> g_exec{Exec::parallel};

// Rows smaller than this are not worth a parallel region.
constexpr std::size_t kParallelThreshold = 16;

void make_primitive(IntRow& r)
{
    if (r.empty()) return;
    Integer g = 0;
    for (const auto& e : r) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 1) break;
    }
    if (r.front().second < 0) g = -g;
    if (g != 1)
        for (auto& e : r) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

Integer coeff_at(const IntRow& r, std::size_t col)
{
    auto it = std::lower_bound(r.begin(), r.end(), col,
                               [](const auto& e, std::size_t c) { return e.first < c; });
    if (it != r.end() && it->first == col) return it->second;
    return 0;
}

// r <- a*r - b*p, with a = p[col], b = r[col]; cancels column col.
void cancel(IntRow& r, const IntRow& p, std::size_t col)
{
    Integer a = coeff_at(p, col);
    Integer b = coeff_at(r, col);
    if (b == 0) return;
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(b.get_mpz_t(), b.get_mpz_t(), g.get_mpz_t());

    IntRow out;
    out.reserve(r.size() + p.size());
    std::size_t i = 0, j = 0;
    Integer tmp;
    while (i < r.size() || j < p.size()) {
        if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
            out.emplace_back(r[i].first, a * r[i].second);
            ++i;
        } else if (i == r.size() || p[j].first < r[i].first) {
            out.emplace_back(p[j].first, -b * p[j].second);
            ++j;
        } else {
            tmp = a * r[i].second - b * p[j].second;
            if (tmp != 0) out.emplace_back(r[i].first, tmp);
            ++i;
            ++j;
        }
    }
    r = std::move(out);
    make_primitive(r);
}

void update_rows(std::vector<IntRow>& rows, const std::vector<std::size_t>& targets, const IntRow& pivot,
                 std::size_t col, Exec exec)
{
    const auto n = static_cast<long>(targets.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel && targets.size() >= kParallelThreshold)
    for (long t = 0; t < n; ++t) cancel(rows[targets[static_cast<std::size_t>(t)]], pivot, col);
}

}  // namespace

void set_default_exec(Exec e) { g_exec.store(e); }
Exec default_exec() { return g_exec.load(); }

Echelon eliminate(std::vector<IntRow> rows, std::size_t cols, Exec exec)
{
    for (auto& r : rows) make_primitive(r);
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!rows[i].empty()) active.push_back(i);

    Echelon ech;
    ech.cols = cols;
    std::vector<std::size_t> order;  // indices of pivot rows in pivot order

    std::vector<std::size_t> group;
    while (!active.empty()) {
        std::size_t col = std::numeric_limits<std::size_t>::max();
        for (auto i : active) col = std::min(col, rows[i].front().first);
        group.clear();
        for (auto i : active)
            if (rows[i].front().first == col) group.push_back(i);

        // Markowitz-style choice: shortest row, then smallest leading entry.
        std::size_t best = group.front();
        for (auto i : group) {
            const auto& a = rows[i];
            const auto& b = rows[best];
            if (a.size() < b.size() ||
                (a.size() == b.size() && mpz_cmpabs(a.front().second.get_mpz_t(), b.front().second.get_mpz_t()) < 0))
                best = i;
        }
        std::vector<std::size_t> targets;
        for (auto i : group)
            if (i != best) targets.push_back(i);
        update_rows(rows, targets, rows[best], col, exec);

        order.push_back(best);
        ech.pivots.push_back(col);
        std::erase_if(active, [&](std::size_t i) { return i == best || rows[i].empty(); });
    }

    // Back substitution to reduced echelon form.
    for (std::size_t k = order.size(); k-- > 0;) {
        std::vector<std::size_t> targets;
        for (std::size_t j = 0; j < k; ++j)
            if (coeff_at(rows[order[j]], ech.pivots[k]) != 0) targets.push_back(order[j]);
        update_rows(rows, targets, rows[order[k]], ech.pivots[k], exec);
    }

    ech.rows.reserve(order.size());
    for (auto i : order) ech.rows.push_back(std::move(rows[i]));
    return ech;
}

}  // namespace pw
