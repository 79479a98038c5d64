#include "pw/compare.hpp"

#include <algorithm>
#include <functional>

namespace pw {

std::optional<Matrix> invert(const Matrix& m)
{
    const auto n = m.size();
    if (n == 0) return Matrix{};
    auto sm = SparseMatrix::from_dense(m);
    if (sm.rank() != n) return std::nullopt;
    Matrix inv(n, std::vector<Rational>(n));
    for (std::size_t col = 0; col < n; ++col) {
        auto sol = solve_linear(sm, SparseVector::unit(col));
        for (std::size_t r = 0; r < n; ++r) inv[r][col] = sol.particular.at(r);
    }
    return inv;
}

Matrix transpose(const Matrix& m)
{
    if (m.empty()) return m;
    Matrix t(m[0].size(), std::vector<Rational>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

namespace {

// Index in dr.alg of the symbol dg for each generator of B (nullopt for
// base generators).
std::vector<std::optional<std::size_t>> symbols(const MixedAlgebra& dr, const FreeCDGA& b)
{
    std::vector<std::optional<std::size_t>> out;
    for (const auto& g : b.alg.gens()) out.push_back(b.base.count(g.name) ? std::nullopt : dr.alg.find("d" + g.name));
    return out;
}

std::vector<int> degrees(const FreeCDGA& b)
{
    std::vector<int> out;
    for (const auto& g : b.alg.gens()) out.push_back(g.degree);
    return out;
}

bool is_constant_in(const FreeAlgebra& a, std::size_t nbase, const Poly& p)
{
    for (const auto& [m, c] : p.terms())
        for (std::size_t i = 0; i < nbase; ++i)
            if (m[i]) return false;
    (void)a;
    return true;
}

// Solves for a combination of `basis` monomials whose theta equals target.
std::optional<Poly> solve_theta(const std::vector<Exponents>& basis, const Matrix& target,
                                const std::function<Matrix(const Poly&)>& theta)
{
    const auto k = target.size();
    std::vector<SparseMatrix::Triplet> t;
    for (std::size_t u = 0; u < basis.size(); ++u) {
        Poly m;
        m.add_term(basis[u], 1);
        auto th = theta(m);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (th[i][j] != 0) t.push_back({i * k + j, u, th[i][j]});
    }
    std::vector<SparseVector::Entry> rhs;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (target[i][j] != 0) rhs.emplace_back(i * k + j, target[i][j]);
    auto sol = try_solve_linear(SparseMatrix(k * k, basis.size(), t), SparseVector(std::move(rhs)));
    if (!sol) return std::nullopt;
    Poly out;
    for (const auto& [u, c] : sol->particular.entries()) out.add_term(basis[u], c);
    return out;
}

// Quadratic monomials in the given variables of the given total degree.
std::vector<Exponents> quadratic_monomials(const FreeAlgebra& a, const std::vector<std::size_t>& vars, int degree)
{
    std::vector<Exponents> out;
    for (std::size_t s = 0; s < vars.size(); ++s)
        for (std::size_t t = s; t < vars.size(); ++t) {
            if (s == t && a.odd(vars[s])) continue;
            Exponents m = a.unit_exponents();
            ++m[vars[s]];
            ++m[vars[t]];
            if (a.degree(m) == degree) out.push_back(m);
        }
    return out;
}

}  // namespace

Matrix theta_of_form(const MixedAlgebra& dr, const FreeCDGA& b, const Poly& omega)
{
    auto sym = symbols(dr, b);
    const auto k = b.alg.ngens();
    Matrix theta(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i) {
        if (!sym[i]) continue;
        Poly first = dr.alg.right_derivative(*sym[i], omega);
        if (first.is_zero()) continue;
        for (std::size_t j = 0; j < k; ++j) {
            if (!sym[j]) continue;
            theta[i][j] = dr.alg.right_derivative(*sym[j], first).coeff(dr.alg.unit_exponents());
        }
    }
    return theta;
}

PhiPi phi_pi(const FreeCDGA& b, const Poly& pi, int n, bool require_nondegenerate)
{
    PhiPi phi{de_rham(b), Polyvectors(b, n + 1), pi, {}, false};
    auto rep = check_strict_poisson(phi.pol, pi);
    if (!rep.ok()) throw Error("pi is not a strict Poisson structure");
    phi.nondegenerate = nondegeneracy(phi.pol, pi).nondegenerate;
    if (require_nondegenerate && !phi.nondegenerate) throw Degenerate("pi is degenerate at the augmentation");
    const auto k = b.alg.ngens();
    phi.images.assign(phi.dr.alg.ngens(), Poly{});
    for (std::size_t i = 0; i < k; ++i) phi.images[i] = phi.pol.x(i);
    auto sym = symbols(phi.dr, b);
    for (std::size_t i = 0; i < k; ++i)
        if (sym[i]) phi.images[*sym[i]] = phi.pol.bracket(pi, phi.pol.x(i));
    return phi;
}

bool PhiReport::bidegree_iso() const
{
    if (!generator_iso) return false;
    return std::all_of(ranks.begin(), ranks.end(), [](const auto& kv) {
        return kv.second.source == kv.second.target && kv.second.rank == kv.second.source;
    });
}

namespace {

// Exponent vectors with at most `length` factors (odd generators at most
// once), optionally restricted to the variables in `allowed`.
void enumerate(const FreeAlgebra& a, int length, std::vector<Exponents>& out)
{
    Exponents cur = a.unit_exponents();
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i == a.ngens()) {
            out.push_back(cur);
            return;
        }
        int top = a.odd(i) ? std::min(left, 1) : left;
        for (int e = 0; e <= top; ++e) {
            cur[i] = e;
            rec(i + 1, left - e);
        }
        cur[i] = 0;
    };
    rec(0, length);
}

}  // namespace

PhiReport check_phi(const PhiPi& phi, int max_size, int length)
{
    PhiReport r;
    const auto& dr = phi.dr;
    const auto& pol = phi.pol;
    MonomialWindow w;
    w.max_size = max_size;
    for (const auto& m : dr.alg.monomials(w)) {
        Poly src;
        src.add_term(m, 1);
        Poly lhs = phi.apply(dr.apply_total(src));
        Poly img = phi.apply(src);
        Poly rhs = pol.d(img) + pol.bracket(phi.pi, img);
        if (!(lhs == rhs)) r.chain_failures.push_back(dr.alg.str(m));
        ++r.checked;
    }

    // generator matrix at the augmentation, degree by degree
    const auto& b = pol.base();
    auto sym = symbols(dr, b);
    const auto k = b.alg.ngens();
    Matrix gm(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i) {
        if (!sym[i]) continue;
        Poly img = pol.at_augmentation(phi.images[*sym[i]]);
        for (std::size_t j = 0; j < k; ++j) {
            Exponents e = pol.alg().unit_exponents();
            e[pol.xi_index(j)] = 1;
            gm[i][j] = img.coeff(e);
        }
    }
    r.generator_iso = pairing_failures(gm, degrees(b), pol.shift() - 1).empty();

    // ranks on the length window
    std::vector<Exponents> src, dst;
    enumerate(dr.alg, length, src);
    enumerate(pol.alg(), length, dst);
    std::map<std::pair<int, int>, std::vector<SparseVector>> columns;
    std::map<Exponents, std::size_t, DegLex> index;
    for (const auto& m : dst) {
        index.emplace(m, index.size());
        ++r.ranks[{pol.alg().weight(m), pol.alg().degree(m)}].target;
    }
    for (const auto& m : src) {
        Poly p;
        p.add_term(m, 1);
        Poly img = phi.apply(p);
        std::vector<SparseVector::Entry> e;
        bool inside = true;
        for (const auto& [mono, c] : img.terms()) {
            auto it = index.find(mono);
            if (it == index.end()) {
                inside = false;
                break;
            }
            e.emplace_back(it->second, c);
        }
        auto key = std::make_pair(dr.alg.weight(m), dr.alg.degree(m));
        ++r.ranks[key].source;
        if (inside) columns[key].emplace_back(std::move(e));
    }
    for (auto& [key, entry] : r.ranks) entry.rank = columns.count(key) ? rank_of(columns[key]) : 0;
    return r;
}

SymplecticForm make_symplectic(const FreeCDGA& b, int n, const Poly& omega)
{
    return {b, n, omega, theta_of_form(de_rham(b), b, omega)};
}

SymplecticReport validate_symplectic(const SymplecticForm& w)
{
    SymplecticReport r;
    auto dr = de_rham(w.b);
    r.d_closed = dr.apply_d(w.omega).is_zero();
    r.eps_closed = dr.apply_eps(w.omega).is_zero();
    r.pairing_failures = pairing_failures(w.theta, degrees(w.b), w.n);
    return r;
}

SymplecticForm poisson_to_form(const FreeCDGA& b, const Poly& pi, int n)
{
    auto phi = phi_pi(b, pi, n);
    if (!is_constant_in(phi.pol.alg(), phi.pol.nbase(), pi)) throw Error("pi must have constant coefficients");
    auto inv = invert(transpose(theta_of_bivector(phi.pol, pi)));
    if (!inv) throw Degenerate("Theta_pi is singular");
    std::vector<std::size_t> vars;
    for (const auto& s : symbols(phi.dr, b))
        if (s) vars.push_back(*s);
    auto omega = solve_theta(quadratic_monomials(phi.dr.alg, vars, n + 2), *inv,
                             [&](const Poly& p) { return theta_of_form(phi.dr, b, p); });
    if (!omega) throw Error("no constant 2-form with the dual pairing");
    if (!(phi.apply(*omega) == pi)) throw Error("dual form does not map to pi under phi_pi");
    return make_symplectic(b, n, *omega);
}

Poly symplectic_to_poisson(const SymplecticForm& w)
{
    auto rep = validate_symplectic(w);
    if (!rep.pairing_failures.empty()) throw Degenerate("omega is degenerate: " + rep.pairing_failures.front());
    if (!rep.d_closed || !rep.eps_closed) throw Error("omega is not strictly closed");
    auto dr = de_rham(w.b);
    if (!is_constant_in(dr.alg, w.b.alg.ngens(), w.omega)) throw Error("omega must have constant coefficients");
    auto inv = invert(transpose(w.theta));
    if (!inv) throw Degenerate("Theta_omega is singular");
    Polyvectors pol(w.b, w.n + 1);
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i < pol.nbase(); ++i) vars.push_back(pol.xi_index(i));
    auto pi = solve_theta(quadratic_monomials(pol.alg(), vars, w.n + 2), *inv,
                          [&](const Poly& p) { return theta_of_bivector(pol, p); });
    if (!pi) throw Error("no constant bivector with the dual pairing");
    auto phi = phi_pi(w.b, *pi, w.n);
    if (!(phi.apply(w.omega) == *pi)) throw Error("phi_pi does not map omega to the dual bivector");
    return *pi;
}

// ---------------------------------------------------------------------------

namespace {

Poly total_form(const ClosedFormTower& t, int wmax)
{
    Poly out;
    for (const auto& [j, c] : t.components)
        if (j <= wmax) out += c;
    return out;
}

std::map<int, Poly> split_by_weight(const FreeAlgebra& a, const Poly& p)
{
    std::map<int, Poly> out;
    for (const auto& [m, c] : p.terms()) out[a.weight(m)].add_term(m, c);
    return out;
}

struct TotalSolve {
    bool cocycle = false;
    std::optional<Poly> theta;
};

// Solves (d + eps) theta = target in the total complex of weights lo..wmax,
// degrees n+1 -> n+2, with theta restricted to weights <= theta_max.
TotalSolve solve_total(const MixedAlgebra& dr, const Poly& target, int degree, int lo, int wmax, int max_size,
                       int theta_max)
{
    MonomialWindow w;
    w.max_size = max_size;
    w.min_weight = lo;
    w.max_weight = wmax;
    w.min_degree = degree - 1;
    w.max_degree = degree + 1;
    auto mat = materialize(dr, w);
    auto tot = total_complex(mat.complex, lo, wmax);
    const auto& rows = tot.source[degree];
    const auto& cols = tot.source[degree - 1];
    auto coords = mat.coordinates(target);  // throws WindowTooSmall
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < rows.size(); ++i) pos[rows[i]] = i;
    std::vector<SparseVector::Entry> rhs;
    for (const auto& [i, c] : coords.entries()) {
        auto it = pos.find(i);
        if (it == pos.end()) throw WindowTooSmall("target has the wrong total degree");
        rhs.emplace_back(it->second, c);
    }
    SparseVector b(std::move(rhs));
    TotalSolve out;
    out.cocycle = tot.complex.differential(degree).apply(b).empty();

    auto full = tot.complex.differential(degree - 1);
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (mat.complex.basis()[cols[j]].weight <= theta_max) keep.push_back(j);
    std::vector<SparseMatrix::Triplet> t;
    for (const auto& e : full.triplets()) {
        auto it = std::lower_bound(keep.begin(), keep.end(), e.col);
        if (it != keep.end() && *it == e.col) t.push_back({e.row, static_cast<std::size_t>(it - keep.begin()), e.value});
    }
    auto sol = try_solve_linear(SparseMatrix(rows.size(), keep.size(), t), b);
    if (!sol) return out;
    Poly theta;
    for (const auto& [j, c] : sol->particular.entries()) theta.add_term(mat.monomials[cols[keep[j]]], c);
    out.theta = theta;
    return out;
}

}  // namespace

StrictifyResult strictify_closed_two_form(const FreeCDGA& b, const ClosedFormTower& omega, int wmax, int max_size)
{
    for (std::size_t i = 0; i < b.alg.ngens(); ++i)
        for (const auto& [m, c] : b.d[i].terms()) {
            int len = 0;
            for (int e : m) len += e;
            if (len <= 1)
                throw NotMinimal("d(" + b.alg.gen(i).name + ") does not vanish at the augmentation modulo I^2");
        }
    auto dr = de_rham(b);
    Poly target = total_form(omega, wmax);
    const int degree = omega.n + 2;

    TotalSolve strict, general;
    try {
        strict = solve_total(dr, target, degree, 0, wmax, max_size, 1);
        if (!strict.theta) general = solve_total(dr, target, degree, 0, wmax, max_size, wmax);
    } catch (const WindowTooSmall& e) {
        GaugeNotFound g(std::string("window too small: ") + e.what());
        g.window_too_small = true;
        throw g;
    }
    if (!strict.cocycle) throw Error("the tower is not closed in the truncated total complex");
    const auto& theta = strict.theta ? strict.theta : general.theta;
    if (!theta) {
        GaugeNotFound g("no gauge within weights <= " + std::to_string(wmax) + " and size <= " +
                        std::to_string(max_size));
        g.window_too_small = true;
        g.residual_class = 1;
        throw g;
    }
    StrictifyResult r;
    auto parts = split_by_weight(dr.alg, *theta);
    r.f = parts[0];
    r.eta = parts[1];
    for (const auto& [j, p] : parts)
        if (j >= 2 && !p.is_zero()) r.homotopy[j] = p;
    r.strict_form = dr.apply_eps(r.eta);
    r.strict.p = 2;
    r.strict.n = omega.n;
    r.strict.components[2] = r.strict_form;
    r.identity_gauge = strict.theta.has_value() && r.homotopy.empty();
    return r;
}

std::map<int, Poly> gauge_residual(const FreeCDGA& b, const ClosedFormTower& omega, const StrictifyResult& r, int wmax)
{
    auto dr = de_rham(b);
    Poly h;
    for (const auto& [j, p] : r.homotopy) h += p;
    Poly res = total_form(omega, wmax) - r.strict_form - dr.apply_total(h);
    std::map<int, Poly> out;
    for (const auto& [j, p] : split_by_weight(dr.alg, res))
        if (j <= wmax && !p.is_zero()) out[j] = p;
    return out;
}

bool same_class(const FreeCDGA& b, const ClosedFormTower& a, const ClosedFormTower& c, int wmax, int max_size)
{
    auto dr = de_rham(b);
    Poly diff = total_form(a, wmax) - total_form(c, wmax);
    if (diff.is_zero()) return true;
    auto s = solve_total(dr, diff, a.n + 2, 2, wmax, max_size, wmax);
    return s.theta.has_value();
}

// ---------------------------------------------------------------------------

DarbouxReport darboux_leading_term(const Polyvectors& pol, const MaurerCartanTower& tower)
{
    DarbouxReport r;
    Poly p0 = tower.components.empty() ? Poly{} : tower.components[0];
    if (!nondegeneracy(pol, p0).nondegenerate) throw Degenerate("p_0 is degenerate at the augmentation");
    r.q = pol.at_augmentation(p0);
    r.dq_zero = pol.d(r.q).is_zero();
    r.qq_zero = pol.bracket(r.q, r.q).is_zero();
    r.residual_tower = tower.components;
    r.residual_tower[0] = p0 - r.q;

    const auto& p = r.residual_tower;
    auto comp = [&](int i) { return i >= 0 && i < static_cast<int>(p.size()) ? p[static_cast<std::size_t>(i)] : Poly{}; };
    const int bound = tower.bound < 0 ? static_cast<int>(p.size()) : tower.bound;
    for (int i = -1; i < bound; ++i) {
        Poly res = pol.d(comp(i + 1));
        if (i >= 0) res += pol.bracket(r.q, comp(i));
        for (int a = 0; a <= i; ++a) {
            Poly pa = comp(a), pb = comp(i - a);
            if (pa.is_zero() || pb.is_zero()) continue;
            res += Rational(1, 2) * pol.bracket(pa, pb);
        }
        if (!res.is_zero()) {
            r.rewritten.ok = false;
            r.rewritten.failing_index = i;
            r.rewritten.residual = res;
            return r;
        }
        r.rewritten.checked_up_to = i;
    }
    return r;
}

}  // namespace pw
