#include "pw/lieinfty.hpp"

#include <algorithm>
#include <numeric>

namespace pw {

namespace {

using Cube = std::vector<std::vector<std::vector<Rational>>>;

Cube zero_cube(std::size_t n)
{
    return Cube(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)));
}

std::string triple(std::size_t i, std::size_t j, std::size_t k)
{
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")";
}

}  // namespace

LieAlgebra LieAlgebra::zero(std::size_t n)
{
    LieAlgebra g;
    g.dim = n;
    for (std::size_t i = 0; i < n; ++i) g.names.push_back("e" + std::to_string(i + 1));
    g.c = zero_cube(n);
    return g;
}

LieAlgebra LieAlgebra::sl2()
{
    auto g = zero(3);
    g.names = {"e", "f", "h"};
    g.set(2, 0, {2, 0, 0});
    g.set(2, 1, {0, -2, 0});
    g.set(0, 1, {0, 0, 1});
    return g;
}

LieAlgebra LieAlgebra::nonabelian2()
{
    auto g = zero(2);
    g.names = {"x", "y"};
    g.set(0, 1, {0, 1});
    return g;
}

void LieAlgebra::set(std::size_t i, std::size_t j, std::vector<Rational> v)
{
    v.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        c[i][j][k] = v[k];
        if (i != j) c[j][i][k] = -v[k];
    }
}

std::vector<Rational> LieAlgebra::bracket(const std::vector<Rational>& a, const std::vector<Rational>& b) const
{
    std::vector<Rational> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < dim; ++j) {
            if (b[j] == 0) continue;
            for (std::size_t k = 0; k < dim; ++k) out[k] += a[i] * b[j] * c[i][j][k];
        }
    }
    return out;
}

LieReport validate_lie(const LieAlgebra& g)
{
    LieReport r;
    const auto n = g.dim;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (g.c[i][j][k] != -g.c[j][i][k]) {
                    r.failures.push_back("antisymmetry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
                    break;
                }
    auto unit = [&](std::size_t i) {
        std::vector<Rational> v(n);
        v[i] = 1;
        return v;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            for (std::size_t k = j; k < n; ++k) {
                auto a = g.bracket(g.bracket(unit(i), unit(j)), unit(k));
                auto b = g.bracket(g.bracket(unit(j), unit(k)), unit(i));
                auto c = g.bracket(g.bracket(unit(k), unit(i)), unit(j));
                for (std::size_t l = 0; l < n; ++l)
                    if (a[l] + b[l] + c[l] != 0) {
                        r.failures.push_back("jacobi " + triple(i, j, k));
                        break;
                    }
            }
    return r;
}

MixedAlgebra ce_algebra(const LieAlgebra& g)
{
    std::vector<Generator> gens;
    for (std::size_t k = 0; k < g.dim; ++k) gens.push_back({"t" + std::to_string(k + 1), 1, 1, 1});
    MixedAlgebra m;
    m.alg = FreeAlgebra(gens);
    m.d.assign(g.dim, Poly{});
    m.eps.assign(g.dim, Poly{});
    for (std::size_t k = 0; k < g.dim; ++k)
        for (std::size_t i = 0; i < g.dim; ++i)
            for (std::size_t j = 0; j < g.dim; ++j)
                if (g.c[i][j][k] != 0)
                    m.eps[k] += Rational(-1, 2) * g.c[i][j][k] * m.alg.mul(m.alg.var(i), m.alg.var(j));
    m.size_homogeneous = false;
    return m;
}

GradedMixedComplex ce(const LieAlgebra& g)
{
    MonomialWindow w;
    w.max_size = static_cast<int>(g.dim);
    return materialize(ce_algebra(g), w).complex;
}

LieFromMixed lie_from_mixed(const MixedAlgebra& b)
{
    const auto n = b.alg.ngens();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& gen = b.alg.gen(i);
        if (gen.degree != 1 || gen.weight != 1)
            throw NotFreeOnV("generator " + gen.name + " is not of degree 1 and weight 1");
        if (i < b.d.size() && !b.d[i].is_zero()) throw NotFreeOnV("d(" + gen.name + ") is nonzero");
    }
    LieFromMixed out;
    out.g = LieAlgebra::zero(n);
    for (std::size_t k = 0; k < n && k < b.eps.size(); ++k)
        for (const auto& [m, coef] : b.eps[k].terms()) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < n; ++i)
                if (m[i]) idx.push_back(i);
            if (idx.size() != 2 || m[idx[0]] != 1 || m[idx[1]] != 1)
                throw NotFreeOnV("eps(" + b.alg.gen(k).name + ") is not quadratic");
            out.g.c[idx[0]][idx[1]][k] = -coef;
            out.g.c[idx[1]][idx[0]][k] = coef;
        }
    out.report = validate_lie(out.g);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

SparseMatrix anti(const SparseMatrix& a, const SparseMatrix& b) { return a * b + b * a; }

void require_operator_bidegree(const WeakMixedStructure& w, const SparseMatrix& m, int dw, const std::string& name)
{
    for (const auto& t : m.triplets()) {
        const auto& src = w.basis[t.col];
        const auto& dst = w.basis[t.row];
        if (dst.weight != src.weight + dw || dst.degree != src.degree + 1)
            throw BidegreeMismatch(name + "(" + src.label + ") has the wrong bidegree");
    }
}

SparseMatrix weak_residual(const WeakMixedStructure& w, int i)
{
    const auto n = w.basis.size();
    auto eps = [&](int a) {
        return a >= 0 && a < static_cast<int>(w.eps.size()) ? w.eps[static_cast<std::size_t>(a)]
                                                             : SparseMatrix::zero(n, n);
    };
    SparseMatrix r = anti(w.d, eps(i + 1));
    for (int a = 0; a <= i; ++a) r = r + eps(a) * eps(i - a);
    return r;
}

std::string first_witness(const WeakMixedStructure& w, const SparseMatrix& r)
{
    auto t = r.triplets();
    std::size_t col = t.front().col;
    for (const auto& e : t) col = std::min(col, e.col);
    return w.basis[col].label;
}

}  // namespace

WeakMixedReport weak_mixed_validate(const WeakMixedStructure& w)
{
    require_operator_bidegree(w, w.d, 0, "d");
    for (std::size_t i = 0; i < w.eps.size(); ++i)
        require_operator_bidegree(w, w.eps[i], static_cast<int>(i) + 1, "eps_" + std::to_string(i));

    WeakMixedReport r;
    auto dd = w.d * w.d;
    if (!dd.is_zero()) {
        r.ok = false;
        r.failing_index = -2;
        r.witness = first_witness(w, dd);
        return r;
    }
    const int len = static_cast<int>(w.eps.size());
    const int bound = w.bound < 0 ? len : w.bound;
    for (int i = -1; i < bound; ++i) {
        auto res = weak_residual(w, i);
        if (!res.is_zero()) {
            r.ok = false;
            r.failing_index = i;
            r.witness = first_witness(w, res);
            return r;
        }
        r.checked_up_to = i;
    }
    for (int i = bound; i <= 2 * (len - 1); ++i)
        if (!weak_residual(w, i).is_zero()) {
            r.inconclusive = true;
            break;
        }
    return r;
}

std::optional<SparseMatrix> solve_weak_correction(const WeakMixedStructure& w, int i)
{
    const auto n = w.basis.size();
    // unknown slots (s, c) of eps_{i+1}
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot;
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t c = 0; c < n; ++c)
            if (w.basis[s].weight == w.basis[c].weight + i + 2 && w.basis[s].degree == w.basis[c].degree + 1) {
                slot[{s, c}] = slots.size();
                slots.emplace_back(s, c);
            }
    WeakMixedStructure lower = w;
    lower.eps.resize(std::min(lower.eps.size(), static_cast<std::size_t>(std::max(i + 1, 0))));
    auto rhs_m = weak_residual(lower, i);

    std::vector<SparseMatrix::Triplet> t;
    auto d = w.d.triplets();
    for (std::size_t u = 0; u < slots.size(); ++u) {
        auto [s, c] = slots[u];
        for (const auto& e : d) {
            if (e.col == s) t.push_back({e.row * n + c, u, e.value});   // d X
            if (e.row == c) t.push_back({s * n + e.col, u, e.value});   // X d
        }
    }
    // merge duplicate keys
    std::map<std::pair<std::size_t, std::size_t>, Rational> acc;
    for (const auto& e : t) acc[{e.row, e.col}] += e.value;
    std::vector<SparseMatrix::Triplet> merged;
    for (const auto& [k, v] : acc) merged.push_back({k.first, k.second, v});
    SparseMatrix a(n * n, slots.size(), merged);

    std::vector<SparseVector::Entry> rhs;
    for (const auto& e : rhs_m.triplets()) rhs.emplace_back(e.row * n + e.col, -e.value);
    auto sol = try_solve_linear(a, SparseVector(std::move(rhs)));
    if (!sol) return std::nullopt;
    std::vector<SparseMatrix::Triplet> x;
    for (const auto& [u, v] : sol->particular.entries()) x.push_back({slots[u].first, slots[u].second, v});
    return SparseMatrix(n, n, x);
}

// ---------------------------------------------------------------------------

LInftyStructure LInftyStructure::make(std::vector<Generator> gens, const std::map<std::string, Poly>& d)
{
    for (auto& g : gens) {
        g.weight = 1;
        g.size = 1;
    }
    LInftyStructure s;
    s.alg = FreeAlgebra(std::move(gens));
    s.d.assign(s.alg.ngens(), Poly{});
    for (const auto& [name, p] : d) s.d[s.alg.index(name)] = p;
    return s;
}

std::vector<Poly> LInftyStructure::eps(int i) const
{
    auto it = brackets.find(i + 2);
    if (it == brackets.end()) return std::vector<Poly>(alg.ngens());
    auto v = it->second;
    v.resize(alg.ngens());
    return v;
}

namespace {

void require_linfty_bidegrees(const LInftyStructure& s)
{
    const auto& a = s.alg;
    for (std::size_t j = 0; j < a.ngens(); ++j) {
        const auto& g = a.gen(j);
        auto check = [&](const Poly& p, int weight, const std::string& what) {
            for (const auto& [m, c] : p.terms())
                if (a.weight(m) != weight || a.degree(m) != g.degree + 1)
                    throw BidegreeMismatch(what + "(" + g.name + ") has the wrong bidegree");
        };
        if (j < s.d.size()) check(s.d[j], 1, "d");
        for (const auto& [k, images] : s.brackets)
            if (j < images.size()) check(images[j], k, "bracket_" + std::to_string(k));
    }
}

// Equation i evaluated on every generator.
std::vector<Poly> linfty_residual(const LInftyStructure& s, int i)
{
    const auto& a = s.alg;
    std::vector<Poly> out(a.ngens());
    auto next = s.eps(i + 1);
    for (std::size_t j = 0; j < a.ngens(); ++j) {
        Poly g = a.var(j);
        Poly r = a.apply_derivation(s.d, a.apply_derivation(next, g)) + a.apply_derivation(next, a.apply_derivation(s.d, g));
        for (int x = 0; x <= i; ++x) r += a.apply_derivation(s.eps(x), a.apply_derivation(s.eps(i - x), g));
        out[j] = r;
    }
    return out;
}

}  // namespace

WeakMixedReport linfty_validate(const LInftyStructure& s, int bound)
{
    require_linfty_bidegrees(s);
    const auto& a = s.alg;
    WeakMixedReport r;
    for (std::size_t j = 0; j < a.ngens(); ++j)
        if (!a.apply_derivation(s.d, a.apply_derivation(s.d, a.var(j))).is_zero()) {
            r.ok = false;
            r.failing_index = -2;
            r.witness = a.gen(j).name;
            return r;
        }
    int top = s.brackets.empty() ? 2 : s.brackets.rbegin()->first;
    for (int i = -1; i < bound; ++i) {
        auto res = linfty_residual(s, i);
        for (std::size_t j = 0; j < res.size(); ++j)
            if (!res[j].is_zero()) {
                r.ok = false;
                r.failing_index = i;
                r.witness = a.gen(j).name;
                return r;
            }
        r.checked_up_to = i;
    }
    for (int i = bound; i <= 2 * (top - 2); ++i) {
        auto res = linfty_residual(s, i);
        if (std::any_of(res.begin(), res.end(), [](const Poly& p) { return !p.is_zero(); })) {
            r.inconclusive = true;
            break;
        }
    }
    return r;
}

std::optional<std::vector<Poly>> solve_linfty_correction(const LInftyStructure& s, int k)
{
    const auto& a = s.alg;
    const int i = k - 3;
    LInftyStructure lower = s;
    lower.brackets.erase(k);
    auto target = linfty_residual(lower, i);

    struct Unknown {
        std::size_t gen;
        Exponents mono;
    };
    std::vector<Unknown> unknowns;
    for (std::size_t j = 0; j < a.ngens(); ++j) {
        MonomialWindow w;
        w.max_size = k;
        w.min_weight = w.max_weight = k;
        w.min_degree = w.max_degree = a.gen(j).degree + 1;
        for (auto& m : a.monomials(w)) unknowns.push_back({j, std::move(m)});
    }
    std::map<std::pair<std::size_t, Exponents>, std::size_t> row_of;
    auto row = [&](std::size_t j, const Exponents& m) {
        return row_of.emplace(std::make_pair(j, m), row_of.size()).first->second;
    };
    std::map<std::pair<std::size_t, std::size_t>, Rational> acc;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        const auto& [l, mono] = unknowns[u];
        Poly x;
        x.add_term(mono, 1);
        // d(X(g_l)) lands in equation l
        Poly dx = a.apply_derivation(s.d, x);
        for (const auto& [m, c] : dx.terms()) acc[{row(l, m), u}] += c;
        // X(d g_j) picks up the coefficient of g_l in d g_j
        for (std::size_t j = 0; j < a.ngens(); ++j) {
            if (j >= s.d.size()) continue;
            Rational c = s.d[j].coeff(a.var(l).terms().begin()->first);
            if (c == 0) continue;
            for (const auto& [m, v] : x.terms()) acc[{row(j, m), u}] += c * v;
        }
    }
    std::vector<SparseVector::Entry> rhs;
    for (std::size_t j = 0; j < target.size(); ++j)
        for (const auto& [m, c] : target[j].terms()) rhs.emplace_back(row(j, m), -c);
    std::vector<SparseMatrix::Triplet> t;
    for (const auto& [key, v] : acc) t.push_back({key.first, key.second, v});
    SparseMatrix mat(row_of.size(), unknowns.size(), t);
    auto sol = try_solve_linear(mat, SparseVector(std::move(rhs)));
    if (!sol) return std::nullopt;
    std::vector<Poly> images(a.ngens());
    for (const auto& [u, c] : sol->particular.entries()) images[unknowns[u].gen].add_term(unknowns[u].mono, c);
    return images;
}

WeakMixedStructure linfty_to_weak_mixed(const LInftyStructure& s, int wmax, int bound)
{
    require_linfty_bidegrees(s);
    const auto& a = s.alg;
    MonomialWindow win;
    win.max_size = wmax;
    win.min_weight = 0;
    win.max_weight = wmax;
    auto monos = a.monomials(win);
    const auto n = monos.size();
    WeakMixedStructure w;
    for (const auto& m : monos) w.basis.push_back({a.str(m), a.weight(m), a.degree(m)});
    auto build = [&](const std::vector<Poly>& images) {
        std::vector<SparseMatrix::Triplet> t;
        for (std::size_t j = 0; j < n; ++j) {
            Poly src;
            src.add_term(monos[j], 1);
            Poly img = a.apply_derivation(images, src);
            for (const auto& [m, c] : img.terms()) {
                if (a.weight(m) > wmax) continue;
                auto it = std::lower_bound(monos.begin(), monos.end(), m, DegLex{});
                t.push_back({static_cast<std::size_t>(it - monos.begin()), j, c});
            }
        }
        return SparseMatrix(n, n, t);
    };
    w.d = build(s.d);
    int top = s.brackets.empty() ? 1 : s.brackets.rbegin()->first;
    for (int i = 0; i + 2 <= top; ++i) w.eps.push_back(build(s.eps(i)));
    w.bound = bound;
    return w;
}

// ---------------------------------------------------------------------------

bool InvariantTensor::is_zero() const
{
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& q) { return q == 0; });
}

std::vector<std::vector<std::size_t>> tensor_basis(TensorKind kind, std::size_t dim)
{
    std::vector<std::vector<std::size_t>> out;
    if (kind == TensorKind::sym2) {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i; j < dim; ++j) out.push_back({i, j});
    } else {
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j)
                for (std::size_t k = j + 1; k < dim; ++k) out.push_back({i, j, k});
    }
    return out;
}

namespace {

// Sign and sorted form of an index word in Sym^2 or wedge^3; sign 0 if it
// vanishes.
std::pair<int, std::vector<std::size_t>> normalize(TensorKind kind, std::vector<std::size_t> w)
{
    int sign = 1;
    for (std::size_t a = 0; a < w.size(); ++a)
        for (std::size_t b = 0; b + 1 < w.size() - a; ++b)
            if (w[b] > w[b + 1]) {
                std::swap(w[b], w[b + 1]);
                if (kind == TensorKind::wedge3) sign = -sign;
            }
    if (kind == TensorKind::wedge3)
        for (std::size_t a = 0; a + 1 < w.size(); ++a)
            if (w[a] == w[a + 1]) return {0, w};
    return {sign, w};
}

// Rows (a, basis index) of the adjoint action on the chosen tensor power.
SparseMatrix adjoint_matrix(const LieAlgebra& g, TensorKind kind)
{
    auto basis = tensor_basis(kind, g.dim);
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    std::map<std::pair<std::size_t, std::size_t>, Rational> acc;
    for (std::size_t a = 0; a < g.dim; ++a)
        for (std::size_t col = 0; col < basis.size(); ++col)
            for (std::size_t slot = 0; slot < basis[col].size(); ++slot)
                for (std::size_t l = 0; l < g.dim; ++l) {
                    const Rational& c = g.c[a][basis[col][slot]][l];
                    if (c == 0) continue;
                    auto word = basis[col];
                    word[slot] = l;
                    auto [sign, sorted] = normalize(kind, word);
                    if (sign == 0) continue;
                    acc[{a * basis.size() + index.at(sorted), col}] += sign * c;
                }
    std::vector<SparseMatrix::Triplet> t;
    for (const auto& [k, v] : acc) t.push_back({k.first, k.second, v});
    return SparseMatrix(g.dim * basis.size(), basis.size(), t);
}

}  // namespace

std::vector<Rational> adjoint_residual(const LieAlgebra& g, const InvariantTensor& t)
{
    auto m = adjoint_matrix(g, t.kind);
    auto v = m.apply(SparseVector::from_dense(t.coeffs));
    return v.to_dense(m.rows());
}

bool is_invariant(const LieAlgebra& g, const InvariantTensor& t)
{
    auto r = adjoint_residual(g, t);
    return std::all_of(r.begin(), r.end(), [](const Rational& q) { return q == 0; });
}

std::vector<InvariantTensor> invariants(const LieAlgebra& g, TensorKind kind)
{
    auto m = adjoint_matrix(g, kind);
    std::vector<InvariantTensor> out;
    for (const auto& v : kernel_basis(m)) out.push_back({kind, v.to_dense(m.cols())});
    return out;
}

InvariantTensor killing_tensor(const LieAlgebra& g)
{
    const auto n = g.dim;
    std::vector<std::vector<Rational>> k(n, std::vector<Rational>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y) k[a][b] += g.c[a][y][x] * g.c[b][x][y];
    auto km = SparseMatrix::from_dense(k);
    if (km.rank() != n) throw Error("Killing form is degenerate");
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
    for (std::size_t col = 0; col < n; ++col) {
        auto sol = solve_linear(km, SparseVector::unit(col));
        for (std::size_t r = 0; r < n; ++r) inv[r][col] = sol.particular.at(r);
    }
    InvariantTensor t{TensorKind::sym2, {}};
    for (const auto& ij : tensor_basis(TensorKind::sym2, n))
        t.coeffs.push_back(ij[0] == ij[1] ? inv[ij[0]][ij[1]] : 2 * inv[ij[0]][ij[1]]);
    return t;
}

InvariantTensor z_from_t(const LieAlgebra& g, const InvariantTensor& t)
{
    if (t.kind != TensorKind::sym2) throw Error("z_from_t expects a Sym^2 tensor");
    if (!is_invariant(g, t)) throw NotInvariant("t is not ad-invariant");
    const auto n = g.dim;
    std::vector<std::vector<Rational>> full(n, std::vector<Rational>(n));
    auto basis2 = tensor_basis(TensorKind::sym2, n);
    for (std::size_t b = 0; b < basis2.size(); ++b) {
        auto i = basis2[b][0], j = basis2[b][1];
        if (i == j) {
            full[i][i] = t.coeffs[b];
        } else {
            full[i][j] = full[j][i] = t.coeffs[b] / 2;
        }
    }
    // Z^{a k d} = sum_{b,c} t^{ab} t^{cd} c_{bc}^k
    auto zfull = zero_cube(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (full[a][b] == 0) continue;
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d) {
                    if (full[c][d] == 0) continue;
                    for (std::size_t k = 0; k < n; ++k) zfull[a][k][d] += full[a][b] * full[c][d] * g.c[b][c][k];
                }
        }
    InvariantTensor z{TensorKind::wedge3, {}};
    for (const auto& ijk : tensor_basis(TensorKind::wedge3, n)) {
        std::vector<std::size_t> p = ijk;
        Rational s = 0;
        do {
            auto [sign, sorted] = normalize(TensorKind::wedge3, p);
            (void)sorted;
            s += sign * zfull[p[0]][p[1]][p[2]];
        } while (std::next_permutation(p.begin(), p.end()));
        z.coeffs.push_back(s / 6);
    }
    if (!is_invariant(g, z)) throw NotInvariant("Z failed the invariance re-check");
    return z;
}

FreeCDGA ce_cdga(const LieAlgebra& g)
{
    auto m = ce_algebra(g);
    std::vector<Generator> gens = m.alg.gens();
    for (auto& gen : gens) gen.weight = 0;
    std::map<std::string, Poly> d;
    FreeAlgebra plain(gens);
    for (std::size_t k = 0; k < g.dim; ++k) d[gens[k].name] = plain.embed(m.alg, m.eps[k]);
    return FreeCDGA::make(gens, d);
}

Poly wedge3_polyvector(const Polyvectors& pol, const InvariantTensor& z)
{
    Poly out;
    auto basis = tensor_basis(TensorKind::wedge3, pol.nbase());
    for (std::size_t b = 0; b < basis.size(); ++b) {
        if (z.coeffs[b] == 0) continue;
        out += z.coeffs[b] * pol.mul(pol.xi(basis[b][0]), pol.mul(pol.xi(basis[b][1]), pol.xi(basis[b][2])));
    }
    return out;
}

SemiStrictReport semi_strict_check(const LieAlgebra& g, const InvariantTensor& z)
{
    SemiStrictReport r;
    r.invariant = is_invariant(g, z);
    Polyvectors pol(ce_cdga(g), 2);
    MaurerCartanTower tower{1, {Poly{}, wedge3_polyvector(pol, z)}};
    r.mc = mc_check(pol, tower);
    r.mc_ok = r.mc.ok;
    return r;
}

}  // namespace pw
