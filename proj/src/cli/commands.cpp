#include "pw/cli.hpp"

#include "pw/compare.hpp"
#include "pw/operads.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

namespace pw::cli {

using nlohmann::json;

namespace {

std::string q(const Rational& r) { return to_string(r); }

template <class M>
json dims_table(const M& m)
{
    json out = json::array();
    for (const auto& [k, v] : m) out.push_back({k, v});
    return out;
}

json dims_in_window(const std::map<int, std::size_t>& m, const Options& o)
{
    json out = json::array();
    for (const auto& [k, v] : m)
        if (k >= o.min_degree && k <= o.max_degree) out.push_back({k, v});
    return out;
}

json matrix_json(const Matrix& m)
{
    json out = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& v : row) r.push_back(q(v));
        out.push_back(r);
    }
    return out;
}

class Report {
public:
    void check(const std::string& name, bool ok, const std::string& witness = {})
    {
        json c = {{"name", name}, {"verdict", ok ? "pass" : "fail"}};
        if (!ok && !witness.empty()) c["witness"] = witness;
        checks_.push_back(c);
        failed_ = failed_ || !ok;
    }
    void inconclusive(const std::string& name, const std::string& why)
    {
        checks_.push_back({{"name", name}, {"verdict", "inconclusive"}, {"witness", why}});
        inconclusive_ = true;
    }
    json& data() { return data_; }
    [[nodiscard]] int exit_code() const { return failed_ ? exit_fail : inconclusive_ ? exit_inconclusive : exit_pass; }
    [[nodiscard]] const json& checks() const { return checks_; }

private:
    json checks_ = json::array();
    json data_ = json::object();
    bool failed_ = false;
    bool inconclusive_ = false;
};

std::string bracket_table_str(const Polyvectors& pol, const Poly& p) { return pol.base().alg.str(p); }

// ---- commands ----

using Command = std::function<void(const dsl::Manifest&, const Options&, Report&)>;

void check_cdga(const dsl::Manifest& m, const Options& o, Report& r)
{
    const auto& blk = m.pick("algebra", o.block);
    FreeCDGA b = dsl::build_cdga(m, blk);
    auto rep = validate_cdga(b);
    std::string w;
    for (const auto& f : rep.failures) w += (w.empty() ? "" : "; ") + f;
    r.check("cdga axioms", rep.ok(), w);
    json gens = json::array();
    for (std::size_t i = 0; i < b.alg.ngens(); ++i)
        gens.push_back({{"name", b.alg.gen(i).name},
                        {"degree", b.alg.gen(i).degree},
                        {"weight", b.alg.gen(i).weight},
                        {"d", b.alg.str(b.d[i])}});
    r.data()["generators"] = gens;
}

void report_violations(const MixedReport& rep, Report& r)
{
    for (const char* id : {"d^2", "eps^2", "d*eps+eps*d"}) {
        std::string w;
        for (const auto& v : rep.violations)
            if (v.identity == id) w += (w.empty() ? "" : ", ") + v.witness;
        r.check(id, w.empty(), w);
    }
}

void check_mixed(const dsl::Manifest& m, const Options& o, Report& r)
{
    const dsl::Block* blk = o.block.empty() ? nullptr : m.find(o.block);
    if (!blk) {
        for (const auto& b : m.blocks)
            if (b.kind == "mixed" || (b.kind == "algebra" && dsl::has_eps(b))) {
                if (blk) throw UsageError("several mixed objects; name one with --block");
                blk = &b;
            }
    }
    if (!blk) throw UsageError("no mixed block and no algebra with eps");
    if (blk->kind == "mixed") {
        auto e = dsl::build_mixed(*blk);
        report_violations(validate_mixed(e), r);
        json t = json::array();
        for (const auto& [w, d] : e.support()) t.push_back({w, d, e.dim(w, d)});
        r.data()["dimensions"] = t;
    } else if (blk->kind == "algebra") {
        report_violations(validate_mixed_algebra(dsl::build_mixed_algebra(m, *blk)), r);
    } else {
        throw UsageError(blk->name + " is neither a mixed block nor an algebra");
    }
}

void de_rham_cmd(const dsl::Manifest& m, const Options& o, Report& r)
{
    FreeCDGA b = dsl::build_cdga(m, m.pick("algebra", o.block));
    MixedAlgebra dr = de_rham(b);
    report_violations(validate_mixed_algebra(dr), r);
    json gens = json::array();
    for (std::size_t i = 0; i < dr.alg.ngens(); ++i)
        gens.push_back({{"name", dr.alg.gen(i).name},
                        {"degree", dr.alg.gen(i).degree},
                        {"weight", dr.alg.gen(i).weight},
                        {"d", dr.alg.str(dr.d[i])},
                        {"eps", dr.alg.str(dr.eps[i])}});
    r.data()["generators"] = gens;
}

void closed_forms(const dsl::Manifest& m, const Options& o, Report& r)
{
    FreeCDGA b = dsl::build_cdga(m, m.pick("algebra", o.block));
    auto res = closed_form_classes(b, o.p, o.n, o.max_weight, o.max_size);
    MixedAlgebra dr = de_rham(b);
    r.data()["dimension"] = res.dimension;
    json reps = json::array();
    bool closed = true;
    for (const auto& t : res.representatives) {
        json c = json::array();
        for (const auto& [j, w] : t.components) c.push_back({j, dr.alg.str(w)});
        reps.push_back(c);
        closed = closed && tower_residuals(dr, t, o.max_weight).empty();
    }
    r.check("every representative is closed", closed);
    r.data()["representatives"] = reps;
    json st = json::array();
    for (const auto& s : res.stages)
        st.push_back({{"m", s.m}, {"classes", s.classes}, {"euler", s.euler}, {"layer_euler", s.layer_euler}});
    r.data()["stages"] = st;
    r.check("Euler accounting", res.euler_accounting_ok);
}

json brackets_json(const Polyvectors& pol, const BracketTable& t)
{
    json out = json::array();
    for (const auto& [k, v] : t) out.push_back({k.first, k.second, bracket_table_str(pol, v)});
    return out;
}

void check_poisson(const dsl::Manifest& m, const Options& o, Report& r)
{
    auto pd = dsl::build_poisson(m, m.pick("poisson", o.block));
    Poly pi = pd.tower.components.empty() ? Poly{} : pd.tower.components[0];
    auto rep = check_strict_poisson(pd.pol, pi);
    r.check("d pi = 0", rep.d_residual.is_zero(), pd.pol.str(rep.d_residual));
    r.check("[pi, pi] = 0", rep.jacobi_residual.is_zero(), pd.pol.str(rep.jacobi_residual));
    r.data()["brackets"] = brackets_json(pd.pol, rep.brackets);
}

void mc(const dsl::Manifest& m, const Options& o, Report& r)
{
    auto pd = dsl::build_poisson(m, m.pick("poisson", o.block));
    auto rep = mc_check(pd.pol, pd.tower);
    r.check("Maurer-Cartan tower", rep.ok,
            rep.ok ? "" : "equation " + std::to_string(rep.failing_index) + ": " + pd.pol.str(rep.residual));
    r.data()["checked_up_to"] = rep.checked_up_to;
    if (!rep.ok) r.data()["failing_index"] = rep.failing_index;
}

void dualize(const dsl::Manifest& m, const Options& o, Report& r)
{
    const dsl::Block* blk = o.block.empty() ? nullptr : m.find(o.block);
    if (!blk) {
        for (const auto& b : m.blocks)
            if (b.kind == "poisson" || b.kind == "form") {
                if (blk) throw UsageError("several poisson or form blocks; name one with --block");
                blk = &b;
            }
    }
    if (!blk) throw UsageError("dualize needs a poisson or a form block");
    if (blk->kind == "poisson") {
        auto pd = dsl::build_poisson(m, *blk);
        Poly pi = pd.tower.components.empty() ? Poly{} : pd.tower.components[0];
        auto w = poisson_to_form(pd.base, pi, pd.shift);
        MixedAlgebra dr = de_rham(pd.base);
        auto rep = validate_symplectic(w);
        r.check("omega is closed", rep.d_closed && rep.eps_closed);
        std::string pf;
        for (const auto& f : rep.pairing_failures) pf += (pf.empty() ? "" : "; ") + f;
        r.check("omega is non-degenerate", rep.pairing_failures.empty(), pf);
        r.check("round trip to pi", symplectic_to_poisson(w) == pi);
        auto phi = phi_pi(pd.base, pi, pd.shift);
        r.check("phi_pi(omega) = pi", phi.apply(w.omega) == pi);
        r.data()["omega"] = dr.alg.str(w.omega);
        r.data()["theta"] = matrix_json(w.theta);
    } else if (blk->kind == "form") {
        auto fd = dsl::build_form(m, *blk);
        auto it = fd.tower.components.find(2);
        if (it == fd.tower.components.end()) throw UsageError("form block has no w2");
        auto w = make_symplectic(fd.base, fd.tower.n, it->second);
        auto rep = validate_symplectic(w);
        std::string pf;
        for (const auto& f : rep.pairing_failures) pf += (pf.empty() ? "" : "; ") + f;
        r.check("omega is closed", rep.d_closed && rep.eps_closed);
        r.check("omega is non-degenerate", rep.pairing_failures.empty(), pf);
        if (!rep.ok()) return;
        Poly pi = symplectic_to_poisson(w);
        Polyvectors pol(fd.base, fd.tower.n + 1);
        r.check("pi is Poisson", check_strict_poisson(pol, pi).ok());
        r.check("round trip to omega", poisson_to_form(fd.base, pi, fd.tower.n).omega == w.omega);
        r.data()["pi"] = pol.str(pi);
        r.data()["theta"] = matrix_json(w.theta);
    } else {
        throw UsageError(blk->name + " is neither a poisson nor a form block");
    }
}

void strictify(const dsl::Manifest& m, const Options& o, Report& r)
{
    auto fd = dsl::build_form(m, m.pick("form", o.block));
    try {
        auto res = strictify_closed_two_form(fd.base, fd.tower, o.max_weight, o.max_size);
        r.data()["f"] = fd.dr.alg.str(res.f);
        r.data()["eta"] = fd.dr.alg.str(res.eta);
        r.data()["strict_form"] = fd.dr.alg.str(res.strict_form);
        r.data()["identity_gauge"] = res.identity_gauge;
        auto resid = gauge_residual(fd.base, fd.tower, res, o.max_weight);
        std::string w;
        for (const auto& [j, p] : resid) w += (w.empty() ? "" : "; ") + std::to_string(j) + ": " + fd.dr.alg.str(p);
        r.check("homotopy to the strict form", resid.empty(), w);
    } catch (const GaugeNotFound& e) {
        if (e.window_too_small) {
            r.inconclusive("strictification", e.what());
        } else {
            r.check("strictification", false, e.what());
        }
    }
}

void darboux(const dsl::Manifest& m, const Options& o, Report& r)
{
    auto pd = dsl::build_poisson(m, m.pick("poisson", o.block));
    auto rep = darboux_leading_term(pd.pol, pd.tower);
    r.data()["q"] = pd.pol.str(rep.q);
    json rest = json::array();
    for (const auto& p : rep.residual_tower) rest.push_back(pd.pol.str(p));
    r.data()["residual_tower"] = rest;
    r.check("d q = 0", rep.dq_zero);
    r.check("[q, q] = 0", rep.qq_zero);
    r.check("rewritten Maurer-Cartan equation", rep.rewritten.ok,
            rep.rewritten.ok ? "" : "equation " + std::to_string(rep.rewritten.failing_index) + ": " +
                                        pd.pol.str(rep.rewritten.residual));
}

json lie_json(const LieAlgebra& g)
{
    json out = json::array();
    for (std::size_t i = 0; i < g.dim; ++i)
        for (std::size_t j = i + 1; j < g.dim; ++j) {
            json v = json::array();
            bool nz = false;
            for (const auto& c : g.c[i][j]) {
                v.push_back(q(c));
                nz = nz || c != 0;
            }
            if (nz) out.push_back({g.names[i], g.names[j], v});
        }
    return out;
}

void report_lie(const LieAlgebra& g, Report& r)
{
    auto rep = validate_lie(g);
    std::string w;
    for (const auto& f : rep.failures) w += (w.empty() ? "" : "; ") + f;
    r.check("Lie axioms", rep.ok(), w);
}

void ce_cmd(const dsl::Manifest& m, const Options& o, Report& r)
{
    LieAlgebra g = dsl::build_lie(m.pick("lie", o.block));
    report_lie(g, r);
    report_violations(validate_mixed_algebra(ce_algebra(g)), r);
    MixedAlgebra a = ce_algebra(g);
    json eps = json::array();
    for (std::size_t i = 0; i < a.alg.ngens(); ++i) eps.push_back({a.alg.gen(i).name, a.alg.str(a.eps[i])});
    r.data()["eps"] = eps;
}

void lie_from_mixed_cmd(const dsl::Manifest& m, const Options& o, Report& r)
{
    auto input = dsl::build_mixed_algebra(m, m.pick("algebra", o.block));
    auto res = lie_from_mixed(input);
    std::string w;
    for (const auto& f : res.report.failures) w += (w.empty() ? "" : "; ") + f;
    r.check("Lie axioms", res.report.ok(), w);
    r.data()["brackets"] = lie_json(res.g);
    auto back = ce_algebra(res.g);
    r.check("ce reproduces the input", back.eps == input.eps);
}

TensorKind tensor_kind(const std::string& k)
{
    if (k.empty() || k == "sym2") return TensorKind::sym2;
    if (k == "wedge3") return TensorKind::wedge3;
    throw UsageError("--kind must be sym2 or wedge3");
}

json tensor_json(const LieAlgebra& g, const InvariantTensor& t)
{
    auto basis = tensor_basis(t.kind, g.dim);
    json out = json::array();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (t.coeffs[i] == 0) continue;
        std::string name;
        for (auto k : basis[i]) name += (name.empty() ? "" : t.kind == TensorKind::sym2 ? "." : "^") + g.names[k];
        out.push_back({name, q(t.coeffs[i])});
    }
    return out;
}

void invariants_cmd(const dsl::Manifest& m, const Options& o, Report& r)
{
    LieAlgebra g = dsl::build_lie(m.pick("lie", o.block));
    report_lie(g, r);
    auto basis = invariants(g, tensor_kind(o.kind));
    r.data()["kind"] = o.kind.empty() ? "sym2" : o.kind;
    r.data()["dimension"] = basis.size();
    json b = json::array();
    bool all = true;
    for (const auto& t : basis) {
        b.push_back(tensor_json(g, t));
        all = all && is_invariant(g, t);
    }
    r.check("every basis element is invariant", all);
    r.data()["basis"] = b;
}

void z_from_t_cmd(const dsl::Manifest& m, const Options& o, Report& r)
{
    LieAlgebra g = dsl::build_lie(m.pick("lie", o.block));
    auto t = killing_tensor(g);
    auto z = z_from_t(g, t);
    r.data()["t"] = tensor_json(g, t);
    r.data()["z"] = tensor_json(g, z);
    r.check("Z is nonzero", !z.is_zero());
    auto line = invariants(g, TensorKind::wedge3);
    std::vector<SparseVector> vs;
    for (const auto& x : line) vs.push_back(SparseVector::from_dense(x.coeffs));
    const auto before = rank_of(vs);
    vs.push_back(SparseVector::from_dense(z.coeffs));
    r.check("Z lies in the wedge3 invariants", rank_of(vs) == before);
    auto s = semi_strict_check(g, z);
    r.check("Z is invariant", s.invariant);
    r.check("semi-strict tower (0, Z)", s.mc_ok);
}

void koszul_cmd(const dsl::Manifest& m, const Options& o, Report& r)
{
    auto id = dsl::build_ideal(m, m.pick("ideal", o.block));
    auto k = koszul(id.base, id.generators, id.powers, o.max_size);
    r.data()["homotopy"] = dims_table(k.homotopy);
    bool plain = std::all_of(id.powers.begin(), id.powers.end(), [](unsigned p) { return p == 1; });
    if (!plain || id.generators.empty()) return;
    auto tower = koszul_tower_cotangent(id.base, id.generators, static_cast<unsigned>(std::max(o.stage, 1)));
    for (const auto& t : tower)
        r.check("transition " + std::to_string(t.stage) + " vanishes after base change", t.zero_after_base_change);
}

void d_functor_cmd(const dsl::Manifest& m, const Options& o, Report& r)
{
    auto id = dsl::build_ideal(m, m.pick("ideal", o.block));
    try {
        auto res = d_functor(id.base, id.generators, o.max_weight, o.max_size);
        r.data()["weight0_homology"] = dims_in_window(res.weight0_homology, o);
        json conv = json::array();
        for (const auto& [w, d] : res.convergence) conv.push_back({w, d});
        r.data()["convergence"] = conv;
        r.check("regular sequence", true);
    } catch (const NotRegular& e) {
        r.check("regular sequence", false, e.what());
    }
}

void realize_cmd(const dsl::Manifest& m, const Options& o, Report& r)
{
    const dsl::Block* blk = o.block.empty() ? nullptr : m.find(o.block);
    if (!blk)
        for (const auto& b : m.blocks)
            if (b.kind == "mixed" || (b.kind == "algebra" && dsl::has_eps(b))) {
                if (blk) throw UsageError("several mixed objects; name one with --block");
                blk = &b;
            }
    if (!blk) throw UsageError("realize needs a mixed block or an algebra with eps");
    Realization real;
    if (blk->kind == "mixed") {
        auto e = dsl::build_mixed(*blk);
        report_violations(validate_mixed(e), r);
        real = realization(e, o.max_weight);
    } else {
        auto a = dsl::build_mixed_algebra(m, *blk);
        report_violations(validate_mixed_algebra(a), r);
        real = realize_algebra(a, o.max_weight, o.max_size);
    }
    r.data()["homology"] = dims_in_window(real.complex.homology_dims(), o);
}

void tate_cmd(const dsl::Manifest& m, const Options& o, Report& r)
{
    auto e = dsl::build_mixed(m.pick("mixed", o.block));
    report_violations(validate_mixed(e), r);
    auto real = realization(e, o.max_weight);
    auto t = tate_realization(e, o.stage, o.max_weight);
    r.data()["realization"] = dims_in_window(real.complex.homology_dims(), o);
    r.data()["tate"] = dims_in_window(t.stage.complex.homology_dims(), o);
    r.data()["stage"] = o.stage;
    const bool qi = is_quasi_isomorphism(real.complex, t.stage.complex, t.comparison);
    r.data()["comparison_is_quasi_isomorphism"] = qi;
    if (e.dim() == 0 || e.min_weight() >= 0) r.check("comparison is a quasi-isomorphism", qi);
}

// ---- operads ----

json hbar_json(const HbarVector& v)
{
    json out = json::array();
    for (const auto& p : v) {
        json c = json::array();
        for (const auto& [e, x] : p) c.push_back({e, q(x)});
        out.push_back(c);
    }
    return out;
}

void operad_cmd(const dsl::Manifest* m, const Options& o, Report& r)
{
    const std::string& k = o.kind;
    r.data()["kind"] = k;
    if (k == "as" || k == "lie" || k == "pn") {
        auto kind = k == "as" ? OperadKind::as : k == "lie" ? OperadKind::lie : OperadKind::pn;
        auto s = multilinear_basis(kind, o.arity, o.n);
        r.data()["arity"] = o.arity;
        r.data()["n"] = o.n;
        r.data()["dimension"] = s.dim();
        r.data()["basis"] = s.words;
        r.data()["weights"] = dims_table(s.weight_distribution());
    } else if (k == "bd1") {
        auto t = rees_bd1(o.arity);
        json basis = json::array();
        FreePn p1(1);
        for (std::size_t i = 0; i < t.dim(); ++i)
            basis.push_back({{"element", p1.str(t.basis[i])}, {"hbar_power", t.filtration[i]}});
        r.data()["arity"] = o.arity;
        r.data()["dimension"] = t.dim();
        r.data()["basis"] = basis;
        if (o.arity < 2) return;
        // compositions into this arity from arity-1 and arity 2
        auto p = rees_bd1(o.arity - 1), b2 = rees_bd1(2);
        json comps = json::array();
        bool p1_ok = true, as_ok = true;
        for (std::size_t a = 0; a < p.dim(); ++a)
            for (std::size_t b = 0; b < b2.dim(); ++b)
                for (int i = 1; i <= o.arity - 1; ++i) {
                    auto c = rees_compose(p, a, i, b2, b, t);
                    json entry = {{"a", a}, {"i", i}, {"b", b}, {"value", hbar_json(c)}};
                    if (o.specialize) {
                        auto s = specialize(c, *o.specialize);
                        json sv = json::array();
                        for (const auto& x : s) sv.push_back(q(x));
                        entry["specialized"] = sv;
                        if (*o.specialize == 0) p1_ok = p1_ok && s == p1_compose(p, a, i, b2, b, t);
                        if (*o.specialize == 1) {
                            AsElement expect = as_compose(p.sym[a], i, b2.sym[b], 2), got;
                            for (std::size_t row = 0; row < t.dim(); ++row)
                                for (const auto& [w, v] : t.sym[row]) got[w] += s[row] * v;
                            std::erase_if(got, [](const auto& kv) { return kv.second == 0; });
                            as_ok = as_ok && got == expect;
                        }
                    }
                    comps.push_back(entry);
                }
        r.data()["compositions"] = comps;
        if (o.specialize) {
            r.data()["specialize"] = q(*o.specialize);
            if (*o.specialize == 0) r.check("hbar = 0 is the composition of P_1", p1_ok);
            if (*o.specialize == 1) r.check("hbar = 1 is the composition of As", as_ok);
        }
    } else if (k == "bd0") {
        auto rep = bd0_check();
        r.check("d {,} = 0", rep.d_bracket_zero);
        r.check("d (.) = hbar {,}", rep.d_product_is_hbar_bracket);
        r.check("d^2 = 0", rep.d_squared_zero);
        std::string w;
        for (const auto& f : rep.failures) w += (w.empty() ? "" : "; ") + f;
        r.check("d is a derivation of the relations", rep.derivation_ok, w);
        r.data()["trees_checked"] = rep.trees_checked;
        r.data()["relations_checked"] = rep.relations_checked;
    } else if (k == "arnold") {
        ArnoldAlgebra a(o.n, o.arity);
        auto h = a.hilbert();
        r.data()["arity"] = o.arity;
        r.data()["n"] = o.n;
        r.data()["hilbert"] = dims_table(h);
        // prod_{j<arity} (1 + j q^n)
        std::map<int, Integer> expect{{0, 1}};
        for (int j = 1; j < o.arity; ++j) {
            std::map<int, Integer> next;
            for (const auto& [d, c] : expect) {
                next[d] += c;
                next[d + o.n] += c * j;
            }
            expect = next;
        }
        bool same = expect.size() == h.size();
        for (const auto& [d, c] : expect) same = same && h.count(d) && Integer(h.at(d)) == c;
        r.check("Hilbert series is prod (1 + j q^n)", same);
    } else if (k == "weyl") {
        if (!m) throw UsageError("operad weyl needs a manifest with a poisson block and inputs");
        auto pd = dsl::build_poisson(*m, m->pick("poisson", o.block));
        if (pd.tower.components.empty()) throw UsageError("poisson block has no p0");
        const Poly& pi = pd.tower.components[0];
        auto t = theta_of_bivector(pd.pol, pi);
        std::vector<Poly> inputs;
        for (const auto& b : m->blocks)
            if (b.kind == "options")
                if (const auto* e = b.find("inputs"))
                    for (const auto& v : e->values) inputs.push_back(dsl::evaluate(pd.base.alg, v));
        if (inputs.empty()) throw UsageError("operad weyl needs inputs = x, y, ... in an options block");
        auto w = weyl_structure_map(pd.base, t, pd.shift, inputs);
        json comps = json::array();
        for (const auto& [am, c] : w.components) comps.push_back({w.arnold.alg().str(am), pd.base.alg.str(c)});
        r.data()["components"] = comps;
        r.data()["t"] = matrix_json(t);
        Poly prod = pd.base.alg.one();
        for (const auto& x : inputs) prod = pd.base.alg.mul(prod, x);
        r.check("unit coefficient is the product", w.unit_coefficient() == prod);
        if (inputs.size() == 2) {
            Poly br = pd.pol.to_base(pd.pol.bracket(pd.pol.bracket(pi, pd.pol.from_base(inputs[0])),
                                                    pd.pol.from_base(inputs[1])));
            r.check("a_12 coefficient is the bracket", w.coefficient(Exponents{1}) == br);
        }
    } else {
        throw UsageError("operad kind must be one of pn, as, lie, bd1, bd0, arnold, weyl");
    }
}

const std::map<std::string, Command>& table()
{
    static const std::map<std::string, Command> t = {
        {"check-cdga", check_cdga},
        {"check-mixed", check_mixed},
        {"de-rham", de_rham_cmd},
        {"closed-forms", closed_forms},
        {"check-poisson", check_poisson},
        {"mc", mc},
        {"dualize", dualize},
        {"strictify", strictify},
        {"darboux", darboux},
        {"ce", ce_cmd},
        {"lie-from-mixed", lie_from_mixed_cmd},
        {"invariants", invariants_cmd},
        {"z-from-t", z_from_t_cmd},
        {"koszul", koszul_cmd},
        {"d-functor", d_functor_cmd},
        {"realize", realize_cmd},
        {"tate", tate_cmd},
    };
    return t;
}

std::string digest(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string options_fingerprint(const Options& o)
{
    std::ostringstream os;
    os << o.max_weight << ' ' << o.min_degree << ' ' << o.max_degree << ' ' << o.max_size << ' ' << o.block << ' '
       << o.kind << ' ' << o.n << ' ' << o.p << ' ' << o.arity << ' ' << o.stage << ' '
       << (o.specialize ? q(*o.specialize) : "-");
    return os.str();
}

json error_json(const std::string& type, const std::string& message)
{
    return {{"type", type}, {"message", message}};
}

json location_json(const dsl::Span& s) { return {{"line", s.line}, {"column", s.column}}; }

}  // namespace

Options default_options()
{
    Options o;
    auto env_int = [](const char* name, int& out) {
        if (const char* v = std::getenv(name)) {
            try {
                out = std::stoi(v);
            } catch (const std::exception&) {
                throw UsageError(std::string(name) + " must be an integer");
            }
        }
    };
    env_int("PW_MAX_WEIGHT", o.max_weight);
    env_int("PW_MAX_SIZE", o.max_size);
    if (const char* v = std::getenv("PW_MAX_DEGREE")) {
        std::string s = v;
        try {
            auto colon = s.find(':');
            if (colon == std::string::npos) {
                o.max_degree = std::stoi(s);
                o.min_degree = -o.max_degree;
            } else {
                o.min_degree = std::stoi(s.substr(0, colon));
                o.max_degree = std::stoi(s.substr(colon + 1));
            }
        } catch (const std::exception&) {
            throw UsageError("PW_MAX_DEGREE must be hi or lo:hi");
        }
    }
    return o;
}

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> c = [] {
        std::vector<std::string> out;
        for (const auto& [k, v] : table()) out.push_back(k);
        out.push_back("operad");
        out.push_back("fmt");
        return out;
    }();
    return c;
}

bool needs_manifest(const std::string& command) { return command != "operad"; }

Outcome run(const std::string& command, const std::optional<dsl::Manifest>& manifest, const Options& o)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    json& rep = out.report;
    rep["schema_version"] = schema_version;
    rep["command"] = command;
    rep["inputs_digest"] = digest(command + "\n" + options_fingerprint(o) + "\n" +
                                  (manifest ? dsl::serialize(*manifest) : std::string()));
    Report r;
    try {
        if (command == "operad") {
            operad_cmd(manifest ? &*manifest : nullptr, o, r);
        } else if (command == "fmt") {
            if (!manifest) throw UsageError("fmt needs a manifest");
            r.data()["manifest"] = dsl::serialize(*manifest);
            r.check("round trip", dsl::parse(dsl::serialize(*manifest)) == *manifest);
        } else {
            auto it = table().find(command);
            if (it == table().end()) throw UsageError("unknown command " + command);
            if (!manifest) throw UsageError(command + " needs a manifest");
            it->second(*manifest, o, r);
        }
        out.exit_code = r.exit_code();
    } catch (const dsl::ParseError& e) {
        out.exit_code = exit_usage;
        rep["error"] = error_json("ParseError", e.what());
        rep["error"]["location"] = location_json(e.at);
        rep["error"]["expected"] = e.expected;
    } catch (const dsl::DuplicateName& e) {
        out.exit_code = exit_usage;
        rep["error"] = error_json("DuplicateName", e.what());
        rep["error"]["location"] = location_json(e.at);
    } catch (const dsl::UnresolvedReference& e) {
        out.exit_code = exit_usage;
        rep["error"] = error_json("UnresolvedReference", e.what());
    } catch (const UsageError& e) {
        out.exit_code = exit_usage;
        rep["error"] = error_json("UsageError", e.what());
    } catch (const WindowTooSmall& e) {
        r.inconclusive("window", e.what());
        out.exit_code = exit_inconclusive;
    } catch (const ArityTooLarge& e) {
        r.inconclusive("arity", e.what());
        out.exit_code = exit_inconclusive;
    } catch (const Error& e) {
        r.check("precondition", false, e.what());
        out.exit_code = exit_fail;
    }
    static const char* verdicts[] = {"pass", "fail", "usage-error", "inconclusive"};
    rep["verdict"] = verdicts[out.exit_code];
    rep["checks"] = r.checks();
    rep["data"] = r.data();
    if (o.timings) {
        const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        rep["timings"] = {{"total_ms", ms}};
    }
    return out;
}

void apply_options_block(Options& o, const dsl::Manifest& m)
{
    for (const auto& b : m.blocks) {
        if (b.kind != "options") continue;
        for (const auto& e : b.entries) {
            const auto& v = e.values[0];
            if (e.key == "max_weight") o.max_weight = dsl::integer(v);
            else if (e.key == "max_size") o.max_size = dsl::integer(v);
            else if (e.key == "min_degree") o.min_degree = dsl::integer(v);
            else if (e.key == "max_degree") o.max_degree = dsl::integer(v);
            else if (e.key == "n") o.n = dsl::integer(v);
            else if (e.key == "p") o.p = dsl::integer(v);
            else if (e.key == "arity") o.arity = dsl::integer(v);
            else if (e.key == "stage") o.stage = dsl::integer(v);
            else if (e.key == "specialize") o.specialize = dsl::constant(v);
            else if (e.key == "kind" || e.key == "block") {
                auto name = v.as_name();
                if (!name) throw dsl::ParseError(v.span, {"a name"}, dsl::serialize(v));
                (e.key == "kind" ? o.kind : o.block) = *name;
            } else if (e.key != "on" && e.key != "inputs") {
                throw dsl::ParseError(e.span, {"max_weight", "max_size", "min_degree", "max_degree", "n", "p", "arity",
                                               "stage", "specialize", "kind", "block", "on", "inputs"},
                                      "key '" + e.key + "'");
            }
        }
    }
}

Outcome run_source(const std::string& command, const std::string& source, const Options& given)
{
    Options o = given;
    std::optional<dsl::Manifest> m;
    try {
        m = dsl::parse(source);
    } catch (const dsl::ParseError& e) {
        Outcome out{exit_usage, {}};
        out.report = {{"schema_version", schema_version}, {"command", command}, {"verdict", "usage-error"}};
        out.report["error"] = error_json("ParseError", e.what());
        out.report["error"]["location"] = location_json(e.at);
        out.report["error"]["expected"] = e.expected;
        return out;
    } catch (const dsl::DuplicateName& e) {
        Outcome out{exit_usage, {}};
        out.report = {{"schema_version", schema_version}, {"command", command}, {"verdict", "usage-error"}};
        out.report["error"] = error_json("DuplicateName", e.what());
        out.report["error"]["location"] = location_json(e.at);
        return out;
    } catch (const dsl::UnresolvedReference& e) {
        Outcome out{exit_usage, {}};
        out.report = {{"schema_version", schema_version}, {"command", command}, {"verdict", "usage-error"}};
        out.report["error"] = error_json("UnresolvedReference", e.what());
        out.report["error"]["location"] = location_json(e.at);
        return out;
    }
    try {
        apply_options_block(o, *m);
    } catch (const dsl::ParseError& e) {
        Outcome out{exit_usage, {}};
        out.report = {{"schema_version", schema_version}, {"command", command}, {"verdict", "usage-error"}};
        out.report["error"] = error_json("ParseError", e.what());
        out.report["error"]["location"] = location_json(e.at);
        return out;
    }
    return run(command, m, o);
}

std::string render_json(const Outcome& r) { return r.report.dump(2) + "\n"; }

std::string render_text(const Outcome& r)
{
    const json& j = r.report;
    std::ostringstream os;
    os << j.value("command", "") << ": " << j.value("verdict", "") << "\n";
    if (j.contains("error")) os << "  " << j["error"].value("type", "") << ": " << j["error"].value("message", "") << "\n";
    if (j.contains("checks"))
        for (const auto& c : j["checks"]) {
            os << "  [" << c.value("verdict", "") << "] " << c.value("name", "");
            if (c.contains("witness")) os << "  (" << c["witness"].get<std::string>() << ")";
            os << "\n";
        }
    if (j.contains("data") && !j["data"].empty()) {
        for (const auto& [k, v] : j["data"].items()) {
            os << "  " << k << ": ";
            if (v.is_string()) {
                os << v.get<std::string>();
            } else {
                os << v.dump();
            }
            os << "\n";
        }
    }
    if (j.contains("timings")) os << "  timings: " << j["timings"].dump() << "\n";
    return os.str();
}

}  // namespace pw::cli
