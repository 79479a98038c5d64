#pragma once

// Shared generators and independent oracles for the test and acceptance
// binaries.

#include "pw/freecdga.hpp"
#include "pw/gradedmixed.hpp"

#include <random>

namespace testsupport {

using namespace pw;

inline Rational small_rational(std::mt19937& rng)
{
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

/// Random valid mixed complex with weights in [wlo, whi]: a direct sum of
/// small valid blocks conjugated by a random unipotent change of basis that
/// preserves bidegrees.
inline GradedMixedComplex random_mixed(std::mt19937& rng, int wlo, int whi, int blocks = 6)
{
    std::uniform_int_distribution<int> wdist(wlo, whi), mdist(-2, 2), kind(0, 4);
    std::vector<BasisElement> basis;
    std::vector<SparseMatrix::Triplet> d, e;
    auto add = [&](int w, int m) {
        basis.push_back({"b" + std::to_string(basis.size()), w, m});
        return basis.size() - 1;
    };
    for (int b = 0; b < blocks; ++b) {
        int w = wdist(rng), m = mdist(rng);
        switch (kind(rng)) {
        case 0:
            add(w, m);
            break;
        case 1: {
            auto a = add(w, m), c = add(w, m + 1);
            d.push_back({c, a, 1});
            break;
        }
        case 2: {
            if (w + 1 > whi) {
                add(w, m);
                break;
            }
            auto a = add(w, m), c = add(w + 1, m + 1);
            e.push_back({c, a, 1});
            break;
        }
        case 3: {
            if (w + 1 > whi) {
                add(w, m);
                break;
            }
            // d a = b, eps a = c, eps b = f, d c = -f
            auto a = add(w, m), bb = add(w, m + 1), c = add(w + 1, m + 1), f = add(w + 1, m + 2);
            d.push_back({bb, a, 1});
            e.push_back({c, a, 1});
            e.push_back({f, bb, 1});
            d.push_back({f, c, -1});
            break;
        }
        default: {
            // shifted piece of a cell model: x_0..x_k, y_0..y_k
            int k = std::min(2, whi - w - 1);
            if (k < 0) {
                add(w, m);
                break;
            }
            std::vector<std::size_t> xs, ys;
            for (int i = 0; i <= k; ++i) xs.push_back(add(w + i, m));
            for (int i = 0; i <= k; ++i) ys.push_back(add(w + i + 1, m + 1));
            for (int i = 0; i <= k; ++i) {
                if (i > 0) d.push_back({ys[static_cast<std::size_t>(i - 1)], xs[static_cast<std::size_t>(i)], 1});
                e.push_back({ys[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(i)], 1});
            }
            break;
        }
        }
    }
    const auto n = basis.size();
    SparseMatrix dm(n, n, d), em(n, n, e);
    // Unipotent conjugation within each bidegree.
    std::vector<SparseMatrix::Triplet> nil;
    std::uniform_int_distribution<int> coin(0, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (basis[i].weight == basis[j].weight && basis[i].degree == basis[j].degree && coin(rng) == 0)
                nil.push_back({i, j, small_rational(rng)});
    SparseMatrix N(n, n, nil);
    SparseMatrix g = SparseMatrix::identity(n) + N;
    SparseMatrix ginv = SparseMatrix::identity(n);
    SparseMatrix power = SparseMatrix::identity(n);
    for (std::size_t k = 1; k <= n && !power.is_zero(); ++k) {
        power = power * N.scaled(-1);
        ginv = ginv + power;
    }
    return {basis, g * dm * ginv, g * em * ginv};
}

/// Homology dimensions of the complex of eps-compatible, weight-preserving
/// maps Z -> E, built directly from the enriched-hom description:
/// Hom^k = {f : f eps_Z = (-1)^k eps_E f}, delta f = d_E f - (-1)^k f d_Z.
inline std::map<int, std::size_t> hom_complex_homology(const GradedMixedComplex& z, const GradedMixedComplex& e)
{
    int kmin = 1000, kmax = -1000;
    for (const auto& a : z.basis())
        for (const auto& b : e.basis())
            if (a.weight == b.weight) {
                kmin = std::min(kmin, b.degree - a.degree);
                kmax = std::max(kmax, b.degree - a.degree);
            }
    if (kmin > kmax) return {};

    // Coordinates of all bidegree-compatible maps of degree k: pairs (src, dst).
    auto slots = [&](int k) {
        std::vector<std::pair<std::size_t, std::size_t>> s;
        for (std::size_t i = 0; i < z.dim(); ++i)
            for (std::size_t j = 0; j < e.dim(); ++j)
                if (e.basis()[j].weight == z.basis()[i].weight && e.basis()[j].degree == z.basis()[i].degree + k)
                    s.emplace_back(i, j);
        return s;
    };
    auto to_matrix = [&](const std::vector<std::pair<std::size_t, std::size_t>>& s, const SparseVector& v) {
        std::vector<SparseMatrix::Triplet> t;
        for (const auto& [idx, c] : v.entries()) t.push_back({s[idx].second, s[idx].first, c});
        return SparseMatrix(e.dim(), z.dim(), t);
    };
    auto to_vector = [&](const std::vector<std::pair<std::size_t, std::size_t>>& s, const SparseMatrix& f) {
        std::vector<SparseVector::Entry> out;
        for (std::size_t idx = 0; idx < s.size(); ++idx) {
            Rational c = f.at(s[idx].second, s[idx].first);
            if (c != 0) out.emplace_back(idx, c);
        }
        return SparseVector(std::move(out));
    };
    // Compatible maps of degree k: kernel of f -> f eps_Z - (-1)^k eps_E f.
    std::map<int, std::vector<SparseVector>> hom;
    std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> all;
    for (int k = kmin - 1; k <= kmax + 1; ++k) {
        all[k] = slots(k);
        const auto& s = all[k];
        std::vector<SparseMatrix::Triplet> t;
        for (std::size_t idx = 0; idx < s.size(); ++idx) {
            SparseMatrix f = to_matrix(s, SparseVector::unit(idx));
            SparseMatrix c = f * z.eps() - (e.eps() * f).scaled((k & 1) ? -1 : 1);
            for (const auto& x : c.triplets()) t.push_back({x.row * z.dim() + x.col, idx, x.value});
        }
        SparseMatrix constraint(e.dim() * z.dim(), s.size(), t);
        hom[k] = kernel_basis(constraint);
    }
    auto delta_rank = [&](int k) {
        std::vector<SparseVector> images;
        for (const auto& v : hom[k]) {
            SparseMatrix f = to_matrix(all[k], v);
            SparseMatrix df = e.d() * f - (f * z.d()).scaled((k & 1) ? -1 : 1);
            images.push_back(to_vector(all[k + 1], df));
        }
        return rank_of(images);
    };
    std::map<int, std::size_t> out;
    for (int k = kmin; k <= kmax; ++k) out[k] = hom[k].size() - delta_rank(k) - delta_rank(k - 1);
    return out;
}

/// Random valid FreeCDGA: generator i gets d(g_i) drawn from the d-cycles
/// among monomials in earlier generators of the right bidegree and size.
inline FreeCDGA random_cdga(std::mt19937& rng, int max_gens = 4, int dlo = -3, int dhi = 3)
{
    std::uniform_int_distribution<int> ng(1, max_gens), deg(dlo, dhi), sz(1, 2), coin(0, 1);
    const int n = ng(rng);
    std::vector<Generator> gens;
    for (int i = 0; i < n; ++i) gens.push_back({"g" + std::to_string(i), deg(rng), 0, sz(rng)});
    FreeAlgebra alg(gens);
    std::vector<Poly> d(static_cast<std::size_t>(n));
    for (int i = 1; i < n; ++i) {
        if (coin(rng)) continue;
        const auto& g = gens[static_cast<std::size_t>(i)];
        MonomialWindow w;
        w.max_size = g.size;
        w.min_degree = w.max_degree = g.degree + 1;
        std::vector<Exponents> cand;
        for (const auto& m : alg.monomials(w)) {
            bool early = alg.size(m) == g.size;
            for (int j = i; j < n; ++j) early = early && m[static_cast<std::size_t>(j)] == 0;
            if (early) cand.push_back(m);
        }
        if (cand.empty()) continue;
        // d on the candidate span, as a matrix into coefficients.
        std::map<Exponents, std::size_t, DegLex> rows;
        std::vector<SparseMatrix::Triplet> t;
        for (std::size_t c = 0; c < cand.size(); ++c) {
            Poly mono;
            mono.add_term(cand[c], 1);
            Poly img = alg.apply_derivation(d, mono);
            for (const auto& [m, v] : img.terms()) {
                auto [it, ins] = rows.emplace(m, rows.size());
                t.push_back({it->second, c, v});
            }
        }
        auto cycles = kernel_basis(SparseMatrix(rows.size(), cand.size(), t));
        Poly di;
        for (const auto& v : cycles) {
            Rational r = small_rational(rng);
            for (const auto& [idx, c] : v.entries()) di.add_term(cand[idx], r * c);
        }
        d[static_cast<std::size_t>(i)] = di;
    }
    std::map<std::string, Poly> dm;
    for (int i = 0; i < n; ++i) dm[gens[static_cast<std::size_t>(i)].name] = d[static_cast<std::size_t>(i)];
    auto b = FreeCDGA::make(gens, dm);
    return b;
}

}  // namespace testsupport

#include "pw/polyvec.hpp"

namespace testsupport {

/// Schouten bracket from the generator table alone, extended by the
/// biderivation rules
///   [P, gR] = [P,g] R + (-1)^{(|P|+n)|g|} g [P,R]
///   [gR, Q] = g [R,Q] + (-1)^{|R|(|Q|+n)} [g,Q] R.
class SchoutenOracle {
public:
    explicit SchoutenOracle(const Polyvectors& pol) : pol_(pol), a_(pol.alg()) {}

    Poly operator()(const Poly& p, const Poly& q) const
    {
        Poly out;
        for (const auto& [mp, cp] : p.terms())
            for (const auto& [mq, cq] : q.terms()) out += (cp * cq) * mono(mp, mq);
        return out;
    }

private:
    static int first(const Exponents& m)
    {
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) return static_cast<int>(i);
        return -1;
    }
    static int total(const Exponents& m)
    {
        int t = 0;
        for (int e : m) t += e;
        return t;
    }
    Poly gen_bracket(std::size_t i, std::size_t j) const
    {
        const auto k = pol_.nbase();
        const int n = pol_.shift();
        if (i >= k && j < k && i - k == j) return a_.one();
        if (i < k && j >= k && j - k == i) {
            int dx = a_.gen(i).degree, dxi = a_.gen(j).degree;
            return ((dx + n) * (dxi + n)) & 1 ? a_.one() : -a_.one();
        }
        return {};
    }
    Poly mono(const Exponents& mp, const Exponents& mq) const
    {
        int fp = first(mp), fq = first(mq);
        if (fp < 0 || fq < 0) return {};
        const int n = pol_.shift();
        Poly P, Q;
        P.add_term(mp, 1);
        Q.add_term(mq, 1);
        if (total(mq) > 1) {
            auto g = static_cast<std::size_t>(fq);
            Exponents rest = mq;
            --rest[g];
            Poly R;
            R.add_term(rest, 1);
            Poly G = a_.var(g);
            int sign = (((a_.degree(mp) + n) * a_.gen(g).degree) & 1) ? -1 : 1;
            return a_.mul(mono(mp, a_.var(g).terms().begin()->first), R) +
                   Rational(sign) * a_.mul(G, mono(mp, rest));
        }
        if (total(mp) > 1) {
            auto g = static_cast<std::size_t>(fp);
            Exponents rest = mp;
            --rest[g];
            Poly R;
            R.add_term(rest, 1);
            Poly G = a_.var(g);
            int sign = ((a_.degree(rest) * (a_.degree(mq) + n)) & 1) ? -1 : 1;
            return a_.mul(G, mono(rest, mq)) + Rational(sign) * a_.mul(mono(a_.var(g).terms().begin()->first, mq), R);
        }
        return gen_bracket(static_cast<std::size_t>(fp), static_cast<std::size_t>(fq));
    }

    const Polyvectors& pol_;
    const FreeAlgebra& a_;
};

inline Poly random_element(std::mt19937& rng, const FreeAlgebra& a, const std::vector<Exponents>& basis, int terms)
{
    Poly p;
    if (basis.empty()) return p;
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    for (int t = 0; t < terms; ++t) p.add_term(basis[pick(rng)], small_rational(rng));
    (void)a;
    return p;
}

}  // namespace testsupport

#include "pw/lieinfty.hpp"

namespace testsupport {

/// Transports the structure constants of g along the basis f_a = sum_i P_ia e_i.
inline LieAlgebra change_basis(const LieAlgebra& g, const std::vector<std::vector<Rational>>& p)
{
    const auto n = g.dim;
    auto pm = SparseMatrix::from_dense(p);
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
    for (std::size_t col = 0; col < n; ++col) {
        auto sol = solve_linear(pm, SparseVector::unit(col));
        for (std::size_t r = 0; r < n; ++r) inv[r][col] = sol.particular.at(r);
    }
    auto out = LieAlgebra::zero(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            std::vector<Rational> fa(n), fb(n);
            for (std::size_t i = 0; i < n; ++i) {
                fa[i] = p[i][a];
                fb[i] = p[i][b];
            }
            auto br = g.bracket(fa, fb);
            for (std::size_t c = 0; c < n; ++c) {
                Rational s = 0;
                for (std::size_t k = 0; k < n; ++k) s += inv[c][k] * br[k];
                out.c[a][b][c] = s;
            }
        }
    return out;
}

/// Random Lie algebra of dimension 4: a semidirect product Q x_A Q^3, sl2+Q or
/// a sum of two 2-dim algebras, in a random unipotent basis.
inline LieAlgebra random_lie4(std::mt19937& rng)
{
    std::uniform_int_distribution<int> kind(0, 2), small(-2, 2);
    auto g = LieAlgebra::zero(4);
    switch (kind(rng)) {
    case 0:
        for (std::size_t i = 1; i < 4; ++i) {
            std::vector<Rational> v(4);
            for (std::size_t j = 1; j < 4; ++j) v[j] = small(rng);
            g.set(0, i, v);
        }
        break;
    case 1: {
        auto s = LieAlgebra::sl2();
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                for (std::size_t k = 0; k < 3; ++k) g.c[i][j][k] = s.c[i][j][k];
        break;
    }
    default:
        g.set(0, 1, {0, 1, 0, 0});
        g.set(2, 3, {0, 0, Rational(small(rng)), 1});
        break;
    }
    std::vector<std::vector<Rational>> p(4, std::vector<Rational>(4));
    for (std::size_t i = 0; i < 4; ++i) {
        p[i][i] = 1;
        for (std::size_t j = i + 1; j < 4; ++j) p[i][j] = small(rng);
    }
    std::vector<std::vector<Rational>> q(4, std::vector<Rational>(4));
    for (std::size_t i = 0; i < 4; ++i) {
        q[i][i] = 1;
        for (std::size_t j = 0; j < i; ++j) q[i][j] = small(rng);
    }
    std::vector<std::vector<Rational>> pq(4, std::vector<Rational>(4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 4; ++k) pq[i][j] += p[i][k] * q[k][j];
    return change_basis(g, pq);
}

}  // namespace testsupport
