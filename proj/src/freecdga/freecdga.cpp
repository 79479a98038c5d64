#include "pw/freecdga.hpp"

#include <algorithm>
#include <numeric>

namespace pw {

namespace {

// Positive integer sizes making every d(g) size-homogeneous of size s(g).
std::optional<std::vector<int>> homogeneous_sizes(const std::vector<Generator>& gens, const std::vector<Poly>& d)
{
    const std::size_t n = gens.size();
    std::vector<SparseVector> rows;
    for (std::size_t g = 0; g < n && g < d.size(); ++g) {
        for (const auto& [m, c] : d[g].terms()) {
            std::vector<Rational> r(n);
            for (std::size_t j = 0; j < n; ++j) r[j] = m[j];
            r[g] -= 1;
            auto v = SparseVector::from_dense(r);
            if (!v.empty()) rows.push_back(v);
        }
    }
    if (rows.empty()) return std::vector<int>(n, 1);
    auto kernel = kernel_basis(SparseMatrix(rows.size(), n, rows));
    if (kernel.empty()) return std::nullopt;

    auto try_combo = [&](const std::vector<int>& coeffs) -> std::optional<std::vector<int>> {
        std::vector<Rational> s(n);
        for (std::size_t k = 0; k < kernel.size(); ++k)
            for (const auto& [j, c] : kernel[k].entries()) s[j] += coeffs[k] * c;
        Integer den = 1;
        for (const auto& x : s) {
            if (x <= 0) return std::nullopt;
            den = lcm(den, Integer(x.get_den()));
        }
        std::vector<Integer> z(n);
        Integer g = 0;
        for (std::size_t j = 0; j < n; ++j) {
            z[j] = s[j].get_num() * (den / s[j].get_den());
            g = gcd(g, z[j]);
        }
        std::vector<int> out(n);
        for (std::size_t j = 0; j < n; ++j) out[j] = static_cast<int>(Integer(z[j] / g).get_si());
        return out;
    };

    // Small search over combinations of kernel vectors.
    const std::size_t k = kernel.size();
    if (k > 6) {
        std::vector<int> ones(k, 1);
        return try_combo(ones);
    }
    std::vector<int> coeffs(k, -3);
    while (true) {
        if (auto r = try_combo(coeffs)) return r;
        std::size_t i = 0;
        while (i < k && coeffs[i] == 3) coeffs[i++] = -3;
        if (i == k) break;
        ++coeffs[i];
    }
    return std::nullopt;
}

std::vector<Generator> with_sizes(std::vector<Generator> gens, const std::vector<int>& sizes)
{
    for (std::size_t i = 0; i < gens.size(); ++i) gens[i].size = sizes[i];
    return gens;
}

std::string fresh_name(const FreeAlgebra& alg, const std::string& want)
{
    std::string name = want;
    while (alg.find(name)) name += "'";
    return name;
}

}  // namespace

FreeCDGA FreeCDGA::make(std::vector<Generator> gens, const std::map<std::string, Poly>& d, std::set<std::string> base)
{
    FreeAlgebra probe(gens);
    std::vector<Poly> dv(gens.size());
    for (const auto& [name, p] : d) dv[probe.index(name)] = p;
    for (const auto& b : base) (void)probe.index(b);

    FreeCDGA out;
    auto sizes = homogeneous_sizes(gens, dv);
    out.size_homogeneous = sizes.has_value();
    if (!sizes) sizes = std::vector<int>(gens.size(), 1);
    out.alg = FreeAlgebra(with_sizes(std::move(gens), *sizes));
    out.d = std::move(dv);
    out.base = std::move(base);
    return out;
}

FreeCDGA FreeCDGA::polynomial_ring(const std::vector<std::string>& names)
{
    std::vector<Generator> gens;
    for (const auto& n : names) gens.push_back({n, 0, 0, 1});
    return make(std::move(gens));
}

CdgaReport validate_cdga(const FreeCDGA& b)
{
    CdgaReport r;
    const auto& a = b.alg;
    for (std::size_t i = 0; i < a.ngens(); ++i) {
        const auto& g = a.gen(i);
        const Poly& dg = b.d[i];
        if (!dg.is_zero()) {
            auto deg = a.degree(dg);
            auto wt = a.weight(dg);
            if (!deg || *deg != g.degree + 1 || !wt || *wt != g.weight)
                r.failures.push_back("d(" + g.name + ") = " + a.str(dg) + " is not of bidegree (weight " +
                                     std::to_string(g.weight) + ", degree " + std::to_string(g.degree + 1) + ")");
        }
        Poly dd = b.differential(dg);
        if (!dd.is_zero()) r.failures.push_back("d^2(" + g.name + ") = " + a.str(dd));
        if (b.base.count(g.name)) {
            for (const auto& [m, c] : dg.terms())
                for (std::size_t j = 0; j < m.size(); ++j)
                    if (m[j] && !b.base.count(a.gen(j).name))
                        r.failures.push_back("d(" + g.name + ") leaves the base subalgebra");
        }
    }
    // Leibniz consistency of the derivation extension on quadratic monomials.
    for (std::size_t i = 0; i < a.ngens(); ++i) {
        for (std::size_t j = i; j < a.ngens(); ++j) {
            Poly gi = a.var(i), gj = a.var(j);
            Poly prod = a.mul(gi, gj);
            if (prod.is_zero()) continue;
            Poly lhs = b.differential(prod);
            Poly rhs = a.mul(b.d[i], gj);
            Poly second = a.mul(gi, b.d[j]);
            if (a.odd(i)) second *= Rational(-1);
            rhs += second;
            if (!(lhs == rhs)) throw SignError("Leibniz mismatch on " + a.str(prod));
        }
    }
    return r;
}

MixedReport validate_mixed_algebra(const MixedAlgebra& m)
{
    MixedReport r;
    for (std::size_t i = 0; i < m.alg.ngens(); ++i) {
        const auto& name = m.alg.gen(i).name;
        Poly g = m.alg.var(i);
        if (!m.apply_d(m.apply_d(g)).is_zero()) r.violations.push_back({"d^2", name});
        if (!m.apply_eps(m.apply_eps(g)).is_zero()) r.violations.push_back({"eps^2", name});
        if (!(m.apply_d(m.apply_eps(g)) + m.apply_eps(m.apply_d(g))).is_zero())
            r.violations.push_back({"d*eps+eps*d", name});
    }
    return r;
}

SparseVector Materialized::coordinates(const Poly& p) const
{
    std::vector<SparseVector::Entry> e;
    for (const auto& [m, c] : p.terms()) {
        auto it = std::lower_bound(monomials.begin(), monomials.end(), m, DegLex{});
        if (it == monomials.end() || *it != m) throw WindowTooSmall("element leaves the materialized window");
        e.emplace_back(static_cast<std::size_t>(it - monomials.begin()), c);
    }
    return SparseVector(std::move(e));
}

Poly Materialized::element(const SparseVector& v) const
{
    Poly p;
    for (const auto& [i, c] : v.entries()) p.add_term(monomials[i], c);
    return p;
}

Materialized materialize(const MixedAlgebra& m, const MonomialWindow& w)
{
    Materialized out;
    out.monomials = m.alg.monomials(w);
    const auto n = out.monomials.size();
    std::vector<BasisElement> basis;
    basis.reserve(n);
    for (const auto& e : out.monomials) basis.push_back({m.alg.str(e), m.alg.weight(e), m.alg.degree(e)});

    auto build = [&](const std::vector<Poly>& images) {
        std::vector<SparseMatrix::Triplet> t;
        for (std::size_t j = 0; j < n; ++j) {
            Poly src;
            src.add_term(out.monomials[j], 1);
            Poly img = m.alg.apply_derivation(images, src);
            for (const auto& [mono, c] : img.terms()) {
                int wt = m.alg.weight(mono), dg = m.alg.degree(mono);
                if (wt > w.max_weight || dg > w.max_degree || wt < w.min_weight || dg < w.min_degree) continue;
                if (m.alg.size(mono) > w.max_size)
                    throw WindowTooSmall("image of " + basis[j].label + " leaves the size window");
                auto it = std::lower_bound(out.monomials.begin(), out.monomials.end(), mono, DegLex{});
                t.push_back({static_cast<std::size_t>(it - out.monomials.begin()), j, c});
            }
        }
        return SparseMatrix(n, n, t);
    };
    out.complex = GradedMixedComplex(std::move(basis), build(m.d), build(m.eps));
    return out;
}

KaehlerModule kaehler(const FreeCDGA& b)
{
    KaehlerModule k;
    std::vector<Generator> gens = b.alg.gens();
    std::vector<std::size_t> owners;
    for (std::size_t i = 0; i < b.alg.ngens(); ++i) {
        const auto& g = b.alg.gen(i);
        if (b.base.count(g.name)) continue;
        gens.push_back({"d" + g.name, g.degree, g.weight, g.size});
        owners.push_back(i);
    }
    k.alg = FreeAlgebra(gens);
    std::vector<Poly> universal(k.alg.ngens());
    for (std::size_t s = 0; s < owners.size(); ++s) {
        std::size_t idx = b.alg.ngens() + s;
        k.symbols.push_back(idx);
        universal[owners[s]] = k.alg.var(idx);
    }
    for (std::size_t s = 0; s < owners.size(); ++s) {
        Poly dg = k.alg.embed(b.alg, b.d[owners[s]]);
        k.d_symbol.push_back(k.alg.apply_derivation(universal, dg));
    }
    return k;
}

MixedAlgebra de_rham(const FreeCDGA& b)
{
    std::vector<Generator> gens = b.alg.gens();
    std::vector<std::size_t> owners;
    for (std::size_t i = 0; i < b.alg.ngens(); ++i) {
        const auto& g = b.alg.gen(i);
        if (b.base.count(g.name)) continue;
        std::string name = "d" + g.name;
        for (const auto& other : gens)
            if (other.name == name) throw Error("generator name " + name + " clashes with a de Rham symbol");
        gens.push_back({name, g.degree + 1, g.weight + 1, g.size});
        owners.push_back(i);
    }
    MixedAlgebra m;
    m.alg = FreeAlgebra(gens);
    m.size_homogeneous = b.size_homogeneous;
    const auto n = m.alg.ngens();
    m.d.assign(n, Poly{});
    m.eps.assign(n, Poly{});
    for (std::size_t i = 0; i < b.alg.ngens(); ++i) m.d[i] = m.alg.embed(b.alg, b.d[i]);
    for (std::size_t s = 0; s < owners.size(); ++s) m.eps[owners[s]] = m.alg.var(b.alg.ngens() + s);
    for (std::size_t s = 0; s < owners.size(); ++s)
        m.d[b.alg.ngens() + s] = -m.apply_eps(m.d[owners[s]]);
    return m;
}

Realization realize_algebra(const MixedAlgebra& m, int wmax, int max_size)
{
    MonomialWindow w;
    w.max_size = max_size;
    w.min_weight = 0;
    w.max_weight = wmax;
    return realization(materialize(m, w).complex, wmax);
}

ClosedFormResult closed_form_classes(const FreeCDGA& b, int p, int n, int wmax, int max_size)
{
    if (!b.size_homogeneous) throw WindowTooSmall("d is not homogeneous for any size grading; window not faithful");
    ClosedFormResult res;
    MixedAlgebra dr = de_rham(b);
    MonomialWindow w;
    w.max_size = max_size;
    w.min_weight = p;
    w.max_weight = wmax;
    Materialized mat = materialize(dr, w);
    const int target = n + p;

    if (wmax >= p) {
        Realization tot = total_complex(mat.complex, p, wmax);
        auto h = tot.complex.homology_at(target);
        res.dimension = h.dimension;
        for (const auto& v : h.representatives) {
            ClosedFormTower t;
            t.p = p;
            t.n = n;
            const auto& src = tot.source[target];
            for (const auto& [i, c] : v.entries()) {
                const auto& mono = mat.monomials[src[i]];
                t.components[dr.alg.weight(mono)].add_term(mono, c);
            }
            res.representatives.push_back(std::move(t));
        }
    }

    // Hodge tower: stage m keeps weights p..m; stage m-1 is its quotient by
    // the layer DR(m) with d alone.
    std::map<int, std::size_t> previous;
    for (int m = p; m <= wmax; ++m) {
        Realization stage = total_complex(mat.complex, p, m);
        Realization layer = total_complex(weight_window(mat.complex, m, m), m, m);
        HodgeStage hs;
        hs.m = m;
        hs.classes = stage.complex.homology_at(target).dimension;
        hs.euler = stage.complex.euler_characteristic();
        hs.layer_euler = layer.complex.euler_characteristic();
        auto dims = stage.complex.homology_dims();
        auto layer_dims = layer.complex.homology_dims();
        if (m > p) {
            if (hs.euler != res.stages.back().euler + hs.layer_euler) res.euler_accounting_ok = false;
            // Exactness of the long exact sequence bounds each stage.
            for (const auto& [k, dim] : dims) {
                std::size_t bound = (previous.count(k) ? previous[k] : 0) + (layer_dims.count(k) ? layer_dims[k] : 0);
                if (dim > bound) res.euler_accounting_ok = false;
            }
        }
        previous = dims;
        res.stages.push_back(hs);
    }
    return res;
}

std::map<int, Poly> tower_residuals(const MixedAlgebra& dr, const ClosedFormTower& w, int wmax)
{
    Poly total;
    for (const auto& [j, c] : w.components) total += dr.apply_total(c);
    std::map<int, Poly> out;
    for (const auto& [m, c] : total.terms()) {
        int wt = dr.alg.weight(m);
        if (wt <= wmax) out[wt].add_term(m, c);
    }
    return out;
}

Poly underlying_form(const ClosedFormTower& w)
{
    auto it = w.components.find(w.p);
    return it == w.components.end() ? Poly{} : it->second;
}

namespace {

std::vector<Generator> koszul_generators(const FreeCDGA& b, std::size_t count)
{
    std::vector<Generator> gens = b.alg.gens();
    FreeAlgebra probe(gens);
    for (std::size_t i = 0; i < count; ++i) {
        std::string name = fresh_name(probe, count == 1 ? "X" : "X" + std::to_string(i + 1));
        gens.push_back({name, -1, 0, 1});
        probe = FreeAlgebra(gens);
    }
    return gens;
}

FreeCDGA koszul_algebra(const FreeCDGA& b, const std::vector<Poly>& fs, const std::vector<unsigned>& powers)
{
    for (std::size_t i = 0; i < b.alg.ngens(); ++i)
        if (b.alg.gen(i).degree != 0 || !b.d[i].is_zero())
            throw Error("Koszul construction expects a polynomial ring in degree 0");
    auto gens = koszul_generators(b, fs.size());
    FreeAlgebra big(gens);
    std::map<std::string, Poly> d;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        unsigned k = i < powers.size() ? powers[i] : 1;
        d[gens[b.alg.ngens() + i].name] = big.pow(big.embed(b.alg, fs[i]), k);
    }
    std::set<std::string> base;
    for (const auto& g : b.alg.gens()) base.insert(g.name);
    return FreeCDGA::make(gens, d, base);
}

ChainComplex plain_complex(const FreeCDGA& k, int max_size)
{
    if (!k.size_homogeneous) throw WindowTooSmall("d is not homogeneous for any size grading; window not faithful");
    MixedAlgebra m;
    m.alg = k.alg;
    m.d = k.d;
    m.eps.assign(k.alg.ngens(), Poly{});
    MonomialWindow w;
    w.max_size = max_size;
    auto mat = materialize(m, w);
    return total_complex(mat.complex, mat.complex.min_weight(), mat.complex.max_weight()).complex;
}

}  // namespace

KoszulResult koszul(const FreeCDGA& b, const std::vector<Poly>& fs, const std::vector<unsigned>& powers,
                    int max_size)
{
    KoszulResult r;
    r.algebra = koszul_algebra(b, fs, powers);
    r.max_size = max_size;
    ChainComplex c = plain_complex(r.algebra, max_size);
    for (int i = 0; i <= static_cast<int>(fs.size()); ++i) r.homotopy[i] = c.homology_at(-i).dimension;
    return r;
}

IdealMembership ideal_member(const FreeAlgebra& alg, const std::vector<Poly>& fs, const Poly& g)
{
    IdealMembership res;
    res.cofactors.assign(fs.size(), Poly{});
    if (g.is_zero()) {
        res.member = true;
        return res;
    }
    // Split g by size; the ideal is assumed generated by size-homogeneous fs.
    std::map<int, Poly> parts;
    for (const auto& [m, c] : g.terms()) parts[alg.size(m)].add_term(m, c);
    for (const auto& [s, part] : parts) {
        std::vector<std::pair<std::size_t, Poly>> columns;  // (which f, monomial cofactor)
        std::vector<Poly> products;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            auto fsz = alg.size(fs[i]);
            if (!fsz || *fsz > s) continue;
            MonomialWindow w;
            w.max_size = s - *fsz;
            for (const auto& m : alg.monomials(w)) {
                if (alg.size(m) != s - *fsz) continue;
                Poly mono;
                mono.add_term(m, 1);
                Poly prod = alg.mul(mono, fs[i]);
                if (prod.is_zero()) continue;
                columns.emplace_back(i, mono);
                products.push_back(std::move(prod));
            }
        }
        std::map<Exponents, std::size_t, DegLex> row_of;
        auto row = [&](const Exponents& m) {
            auto [it, ins] = row_of.emplace(m, row_of.size());
            return it->second;
        };
        std::vector<SparseMatrix::Triplet> t;
        for (std::size_t j = 0; j < products.size(); ++j)
            for (const auto& [m, c] : products[j].terms()) t.push_back({row(m), j, c});
        std::vector<SparseVector::Entry> rhs;
        for (const auto& [m, c] : part.terms()) rhs.emplace_back(row(m), c);
        SparseMatrix mat(row_of.size(), products.size(), t);
        auto sol = try_solve_linear(mat, SparseVector(std::move(rhs)));
        if (!sol) {
            res.member = false;
            res.cofactors.clear();
            return res;
        }
        for (const auto& [j, c] : sol->particular.entries())
            res.cofactors[columns[j].first] += c * columns[j].second;
    }
    res.member = true;
    return res;
}

std::vector<CotangentTransition> koszul_tower_cotangent(const FreeCDGA& b, const std::vector<Poly>& fs,
                                                        unsigned stages)
{
    std::vector<CotangentTransition> out;
    const std::size_t p = fs.size();
    for (unsigned n = 1; n <= stages; ++n) {
        FreeCDGA lower = koszul_algebra(b, fs, std::vector<unsigned>(p, n));
        FreeCDGA upper = koszul_algebra(b, fs, std::vector<unsigned>(p, n + 1));
        // Stage map K_{n+1} -> K_n: identity on B, X_i -> f_i X_i.
        std::vector<Poly> images;
        for (std::size_t i = 0; i < b.alg.ngens(); ++i) images.push_back(lower.alg.var(i));
        for (std::size_t i = 0; i < p; ++i)
            images.push_back(lower.alg.mul(lower.alg.embed(b.alg, fs[i]), lower.alg.var(b.alg.ngens() + i)));
        for (std::size_t i = 0; i < upper.alg.ngens(); ++i) {
            Poly lhs = upper.alg.substitute(lower.alg, images, upper.d[i]);
            Poly rhs = lower.differential(images[i]);
            if (!(lhs == rhs)) throw Error("Koszul stage map is not a chain map");
        }
        KaehlerModule om = kaehler(lower);
        std::vector<Poly> universal(om.alg.ngens());
        for (std::size_t s = 0; s < om.symbols.size(); ++s) universal[b.alg.ngens() + s] = om.alg.var(om.symbols[s]);

        CotangentTransition tr;
        tr.stage = n;
        tr.matrix.assign(p, std::vector<Poly>(p));
        tr.certificates.assign(p, std::vector<IdealMembership>(p));
        tr.zero_after_base_change = true;
        for (std::size_t i = 0; i < p; ++i) {
            Poly img = om.alg.apply_derivation(universal, om.alg.embed(lower.alg, images[b.alg.ngens() + i]));
            for (std::size_t j = 0; j < p; ++j) {
                Poly coeff = om.alg.left_derivative(om.symbols[j], img);
                // Base change along K_n -> B/(f): the X's go to zero.
                Poly reduced;
                for (const auto& [m, c] : coeff.terms()) {
                    bool has_x = false;
                    for (std::size_t k = b.alg.ngens(); k < m.size(); ++k) has_x = has_x || m[k] != 0;
                    if (has_x) continue;
                    Exponents e(m.begin(), m.begin() + static_cast<long>(b.alg.ngens()));
                    reduced.add_term(e, c);
                }
                // Column j of the matrix is the image of dX_j.
                tr.matrix[j][i] = reduced;
                if (!reduced.is_zero()) tr.nonzero_before = true;
                tr.certificates[j][i] = ideal_member(b.alg, fs, reduced);
                if (!tr.certificates[j][i].member) tr.zero_after_base_change = false;
            }
        }
        out.push_back(std::move(tr));
    }
    return out;
}

DFunctorResult d_functor(const FreeCDGA& b, const std::vector<Poly>& ideal, int wmax, int max_size)
{
    DFunctorResult r;
    r.max_size = max_size;
    FreeCDGA k = koszul_algebra(b, ideal, std::vector<unsigned>(ideal.size(), 1));
    ChainComplex c = plain_complex(k, max_size);
    for (const auto& [m, basis] : c.basis) r.weight0_homology[m] = c.homology_at(m).dimension;
    for (const auto& [m, dim] : r.weight0_homology)
        if (m < 0 && dim != 0)
            throw NotRegular("Koszul complex has homology in degree " + std::to_string(m) + " (probe window size " +
                             std::to_string(max_size) + ")");
    r.algebra = de_rham(k);
    for (int w = 0; w <= wmax; ++w) r.convergence.emplace_back(w, realize_algebra(r.algebra, w, max_size).complex.homology_at(0).dimension);
    return r;
}

}  // namespace pw
