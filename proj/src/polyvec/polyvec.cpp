#include "pw/polyvec.hpp"

#include <algorithm>

namespace pw {

Polyvectors::Polyvectors(FreeCDGA b, int n) : b_(std::move(b)), n_(n)
{
    std::vector<Generator> gens = b_.alg.gens();
    int c = 1;
    for (const auto& g : gens) c = std::max(c, g.size + 1);
    for (auto& g : gens) g.weight = 0;
    for (const auto& g : b_.alg.gens()) gens.push_back({"@" + g.name, n - g.degree, 1, c - g.size});
    alg_ = FreeAlgebra(std::move(gens));

    const auto k = nbase();
    Poly q;
    for (std::size_t j = 0; j < k; ++j) q += mul(from_base(b_.d[j]), xi(j));
    d_images_.assign(alg_.ngens(), Poly{});
    for (std::size_t j = 0; j < k; ++j) {
        d_images_[j] = from_base(b_.d[j]);
        d_images_[xi_index(j)] = bracket(q, xi(j));
    }
}

Poly Polyvectors::to_base(const Poly& p) const
{
    Poly out;
    const auto k = nbase();
    for (const auto& [m, c] : p.terms()) {
        bool pure = true;
        for (std::size_t j = k; j < m.size(); ++j) pure = pure && m[j] == 0;
        if (!pure) continue;
        out.add_term(Exponents(m.begin(), m.begin() + static_cast<long>(k)), c);
    }
    return out;
}

Poly Polyvectors::at_augmentation(const Poly& p) const
{
    Poly out;
    const auto k = nbase();
    for (const auto& [m, c] : p.terms()) {
        bool constant = true;
        for (std::size_t j = 0; j < k; ++j) constant = constant && m[j] == 0;
        if (constant) out.add_term(m, c);
    }
    return out;
}

Poly Polyvectors::bracket(const Poly& p, const Poly& q) const
{
    // [P,Q] = sum_i (P <-d/d@x_i)(d/dx_i-> Q) - (-1)^{|x_i|(n+1)} (P <-d/dx_i)(d/d@x_i-> Q)
    Poly out;
    for (std::size_t i = 0; i < nbase(); ++i) {
        const std::size_t s = xi_index(i);
        Poly a = alg_.right_derivative(s, p);
        if (!a.is_zero()) {
            Poly b = alg_.left_derivative(i, q);
            if (!b.is_zero()) out += mul(a, b);
        }
        Poly c = alg_.right_derivative(i, p);
        if (!c.is_zero()) {
            Poly e = alg_.left_derivative(s, q);
            if (!e.is_zero()) {
                Poly t = mul(c, e);
                int parity = (b_.alg.gen(i).degree * (n_ + 1)) & 1;
                out += parity ? t : -t;
            }
        }
    }
    return out;
}

std::vector<Exponents> Polyvectors::basis(int weight, int degree, int max_size) const
{
    MonomialWindow w;
    w.max_size = max_size;
    w.min_weight = w.max_weight = weight;
    w.min_degree = w.max_degree = degree;
    return alg_.monomials(w);
}

namespace {

void require_bidegree(const Polyvectors& pol, const Poly& p, int weight, int degree, const std::string& what)
{
    if (p.is_zero()) return;
    auto w = pol.weight(p);
    auto d = pol.degree(p);
    if (!w || *w != weight || !d || *d != degree)
        throw BidegreeError(what + " must have weight " + std::to_string(weight) + " and degree " +
                            std::to_string(degree));
}

}  // namespace

PoissonReport check_strict_poisson(const Polyvectors& pol, const Poly& pi)
{
    // pol is Pol(B, n+1), so pi sits in degree n+2 = shift+1.
    require_bidegree(pol, pi, 2, pol.shift() + 1, "pi");
    PoissonReport r;
    r.d_residual = pol.d(pi);
    r.jacobi_residual = pol.bracket(pi, pi);
    const auto& gens = pol.base().alg.gens();
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = 0; j < gens.size(); ++j) {
            Poly v = pol.to_base(pol.bracket(pol.bracket(pi, pol.x(i)), pol.x(j)));
            if (!v.is_zero()) r.brackets[{gens[i].name, gens[j].name}] = v;
        }
    return r;
}

std::optional<Poly> poisson_from_brackets(const Polyvectors& pol, const BracketTable& table, int max_size)
{
    const auto& b = pol.base().alg;
    auto unknowns = pol.basis(2, pol.shift() + 1, max_size);
    std::map<std::tuple<std::size_t, std::size_t, Exponents>, std::size_t> row_of;
    auto row = [&](std::size_t i, std::size_t j, const Exponents& m) {
        auto [it, ins] = row_of.emplace(std::make_tuple(i, j, m), row_of.size());
        return it->second;
    };
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& [k, v] : table) pairs.emplace_back(b.index(k.first), b.index(k.second));

    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        Poly mono;
        mono.add_term(unknowns[u], 1);
        for (const auto& [i, j] : pairs) {
            Poly v = pol.to_base(pol.bracket(pol.bracket(mono, pol.x(i)), pol.x(j)));
            for (const auto& [m, c] : v.terms()) t.push_back({row(i, j, m), u, c});
        }
    }
    std::vector<SparseVector::Entry> rhs;
    for (const auto& [k, v] : table)
        for (const auto& [m, c] : v.terms()) rhs.emplace_back(row(b.index(k.first), b.index(k.second), m), c);
    SparseMatrix mat(row_of.size(), unknowns.size(), t);
    auto sol = try_solve_linear(mat, SparseVector(std::move(rhs)));
    if (!sol) return std::nullopt;
    Poly pi;
    for (const auto& [u, c] : sol->particular.entries()) pi.add_term(unknowns[u], c);
    return pi;
}

MCReport mc_check(const Polyvectors& pol, const MaurerCartanTower& tower)
{
    const int degree = pol.shift() + 1;
    const auto& p = tower.components;
    for (std::size_t i = 0; i < p.size(); ++i)
        require_bidegree(pol, p[i], static_cast<int>(i) + 2, degree, "p_" + std::to_string(i));
    const int bound = tower.bound < 0 ? static_cast<int>(p.size()) : tower.bound;
    auto comp = [&](int i) { return i >= 0 && i < static_cast<int>(p.size()) ? p[static_cast<std::size_t>(i)] : Poly{}; };

    MCReport r;
    for (int i = -1; i < bound; ++i) {
        Poly res = pol.d(comp(i + 1));
        for (int a = 0; a <= i; ++a) {
            Poly pa = comp(a), pb = comp(i - a);
            if (pa.is_zero() || pb.is_zero()) continue;
            res += Rational(1, 2) * pol.bracket(pa, pb);
        }
        if (!res.is_zero()) {
            r.ok = false;
            r.failing_index = i;
            r.residual = res;
            return r;
        }
        r.checked_up_to = i;
    }
    return r;
}

std::vector<std::vector<Rational>> theta_of_bivector(const Polyvectors& pol, const Poly& p)
{
    const auto& b = pol.base().alg;
    const auto k = b.ngens();
    std::vector<std::vector<Rational>> theta(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i) {
        Poly first = pol.bracket(p, pol.x(i));
        if (first.is_zero()) continue;
        for (std::size_t j = 0; j < k; ++j)
            theta[i][j] = pol.to_base(pol.bracket(first, pol.x(j))).coeff(b.unit_exponents());
    }
    return theta;
}

std::vector<std::string> pairing_failures(const std::vector<std::vector<Rational>>& theta,
                                          const std::vector<int>& degrees, int n)
{
    std::vector<std::string> failures;
    std::map<int, std::vector<std::size_t>> by_degree;
    for (std::size_t i = 0; i < degrees.size(); ++i) by_degree[degrees[i]].push_back(i);
    for (const auto& [a, rows] : by_degree) {
        auto it = by_degree.find(n - a);
        std::vector<std::size_t> cols = it == by_degree.end() ? std::vector<std::size_t>{} : it->second;
        std::vector<std::vector<Rational>> block(rows.size(), std::vector<Rational>(cols.size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < cols.size(); ++c) block[r][c] = theta[rows[r]][cols[c]];
        std::size_t rank = rows.empty() || cols.empty() ? 0 : SparseMatrix::from_dense(block).rank();
        if (rows.size() != cols.size() || rank != rows.size())
            failures.push_back("degree " + std::to_string(a) + " against degree " + std::to_string(n - a) + ": rank " +
                               std::to_string(rank) + " of " + std::to_string(rows.size()) + "x" +
                               std::to_string(cols.size()));
    }
    return failures;
}

Nondegeneracy nondegeneracy(const Polyvectors& pol, const Poly& p0)
{
    Nondegeneracy out;
    out.theta = theta_of_bivector(pol, p0);
    std::vector<int> degrees;
    for (const auto& g : pol.base().alg.gens()) degrees.push_back(g.degree);
    out.failures = pairing_failures(out.theta, degrees, pol.shift() - 1);
    out.nondegenerate = out.failures.empty();
    return out;
}

}  // namespace pw
