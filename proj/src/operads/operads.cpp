#include "pw/operads.hpp"

#include "pw/compare.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace pw {

namespace {

int parity(int x) { return ((x % 2) + 2) % 2; }
int koszul(int a, int b) { return parity(a) && parity(b) ? -1 : 1; }

std::vector<Word> permutations(const std::vector<int>& letters)
{
    std::vector<Word> out;
    Word w = letters;
    std::sort(w.begin(), w.end());
    do out.push_back(w);
    while (std::next_permutation(w.begin(), w.end()));
    return out;
}

std::size_t factorial(std::size_t k)
{
    std::size_t f = 1;
    for (std::size_t i = 2; i <= k; ++i) f *= i;
    return f;
}

void check_arity(int arity)
{
    if (arity < 1) throw Error("arity must be at least 1");
    if (arity > max_operad_arity)
        throw ArityTooLarge("arity " + std::to_string(arity) + " exceeds " + std::to_string(max_operad_arity));
}

void add_to(AsElement& a, const Word& w, const Rational& c)
{
    auto& v = a[w];
    v += c;
    if (v == 0) a.erase(w);
}

// Concatenation product; letters of degree s.
AsElement as_mul(const AsElement& a, const AsElement& b)
{
    AsElement out;
    for (const auto& [u, cu] : a)
        for (const auto& [v, cv] : b) {
            Word w = u;
            w.insert(w.end(), v.begin(), v.end());
            add_to(out, w, cu * cv);
        }
    return out;
}

// Graded commutator uv - (-1)^{|u||v|} vu for homogeneous u, v.
AsElement as_commutator(const AsElement& u, int du, const AsElement& v, int dv)
{
    AsElement out = as_mul(u, v);
    Rational sign = koszul(du, dv);
    for (const auto& [w, c] : as_mul(v, u)) add_to(out, w, -sign * c);
    return out;
}

AsElement right_normed(const std::vector<int>& letters, int s)
{
    AsElement e{{Word{letters.back()}, 1}};
    int deg = s;
    for (std::size_t p = letters.size() - 1; p-- > 0;) {
        e = as_commutator(AsElement{{Word{letters[p]}, 1}}, s, e, deg);
        deg += s;
    }
    return e;
}

void add_to(PnElement& a, const PnKey& k, const Rational& c)
{
    if (c == 0) return;
    auto& v = a[k];
    v += c;
    if (v == 0) a.erase(k);
}

void add_scaled(PnElement& a, const PnElement& b, const Rational& c)
{
    for (const auto& [k, v] : b) add_to(a, k, c * v);
}

PnElement relabel(const PnElement& e, int offset)
{
    PnElement out;
    for (const auto& [k, c] : e) {
        PnKey key = k;
        for (auto& f : key)
            for (auto& l : f.labels) l += offset;
        out[key] = c;
    }
    return out;
}

}  // namespace

std::map<int, std::size_t> MultilinearSpace::weight_distribution() const
{
    std::map<int, std::size_t> out;
    for (int w : weights) ++out[w];
    return out;
}

AsElement as_compose(const AsElement& nu, int i, const AsElement& mu, int arity_mu)
{
    AsElement out;
    for (const auto& [w, cw] : nu)
        for (const auto& [u, cu] : mu) {
            Word r;
            for (int j : w) {
                if (j < i)
                    r.push_back(j);
                else if (j == i)
                    for (int x : u) r.push_back(x + i - 1);
                else
                    r.push_back(j + arity_mu - 1);
            }
            add_to(out, r, cw * cu);
        }
    return out;
}

// ---------------------------------------------------------------------------

FreePn::FreePn(int n) : n_(n)
{
    const int s = bracket_degree();
    for (std::size_t k = 1; k <= static_cast<std::size_t>(max_operad_arity); ++k) {
        std::vector<int> pos(k);
        std::iota(pos.begin(), pos.end(), 0);
        auto& index = word_index_[k];
        for (const auto& w : permutations(pos)) index.emplace(w, index.size());
        auto coords = [&](const AsElement& a) {
            std::vector<SparseVector::Entry> e;
            for (const auto& [w, c] : a) e.emplace_back(index.at(w), c);
            return SparseVector(std::move(e));
        };
        // greedy choice among right-normed words
        Span span;
        std::vector<SparseVector> cols;
        auto& words = lie_words_[k];
        const std::size_t want = factorial(k - 1);
        for (const auto& w : permutations(pos)) {
            if (words.size() == want) break;
            auto v = coords(right_normed(w, s));
            if (span.add(v)) {
                words.push_back(w);
                cols.push_back(v);
            }
        }
        if (words.size() != want) throw Error("Lie basis of size " + std::to_string(k) + " is rank deficient");
        lie_matrix_.emplace(k, SparseMatrix::from_columns(index.size(), cols));
    }
}

PnElement FreePn::gen(int label) const
{
    return {{PnKey{LieFactor{{label}, 0}}, 1}};
}

int FreePn::degree(const PnKey& k) const
{
    int d = 0;
    for (const auto& f : k) d += static_cast<int>(f.labels.size() - 1) * bracket_degree();
    return d;
}

int FreePn::weight(const PnKey& k) const
{
    int w = 0;
    for (const auto& f : k) w -= static_cast<int>(f.labels.size() - 1);
    return w;
}

int FreePn::sign_of_commute(int a, int b) const { return koszul(a, b); }

AsElement FreePn::to_as(const LieFactor& f) const
{
    const auto& w = lie_words_.at(f.labels.size()).at(f.index);
    std::vector<int> letters;
    for (int p : w) letters.push_back(f.labels[static_cast<std::size_t>(p)]);
    return right_normed(letters, bracket_degree());
}

PnElement FreePn::mul_keys(const PnKey& f, const PnKey& g) const
{
    PnKey k = f;
    k.insert(k.end(), g.begin(), g.end());
    int sign = 1;
    auto deg = [&](const LieFactor& x) { return static_cast<int>(x.labels.size() - 1) * bracket_degree(); };
    for (std::size_t i = 1; i < k.size(); ++i)
        for (std::size_t j = i; j > 0 && k[j].labels.front() < k[j - 1].labels.front(); --j) {
            sign *= koszul(deg(k[j]), deg(k[j - 1]));
            std::swap(k[j], k[j - 1]);
        }
    for (std::size_t i = 1; i < k.size(); ++i)
        if (k[i].labels.front() == k[i - 1].labels.front()) throw Error("product of elements sharing a label");
    return {{k, sign}};
}

PnElement FreePn::mul(const PnElement& a, const PnElement& b) const
{
    PnElement out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) add_scaled(out, mul_keys(ka, kb), ca * cb);
    return out;
}

PnElement FreePn::bracket_factors(const LieFactor& f, const LieFactor& g) const
{
    std::vector<int> u = f.labels;
    u.insert(u.end(), g.labels.begin(), g.labels.end());
    std::sort(u.begin(), u.end());
    if (std::adjacent_find(u.begin(), u.end()) != u.end()) throw Error("bracket of elements sharing a label");
    const auto k = u.size();
    if (k > static_cast<std::size_t>(max_operad_arity)) throw ArityTooLarge("bracket exceeds the arity bound");
    const int s = bracket_degree();
    auto c = as_commutator(to_as(f), static_cast<int>(f.labels.size()) * s, to_as(g),
                           static_cast<int>(g.labels.size()) * s);
    const auto& index = word_index_.at(k);
    std::vector<SparseVector::Entry> e;
    for (const auto& [w, v] : c) {
        Word pos;
        for (int l : w) pos.push_back(static_cast<int>(std::lower_bound(u.begin(), u.end(), l) - u.begin()));
        e.emplace_back(index.at(pos), v);
    }
    auto sol = try_solve_linear(lie_matrix_.at(k), SparseVector(std::move(e)));
    if (!sol) throw Error("commutator outside the Lie span");
    PnElement out;
    for (const auto& [j, v] : sol->particular.entries()) add_to(out, PnKey{LieFactor{u, j}}, v);
    return out;
}

PnElement FreePn::bracket_keys(const PnKey& f, const PnKey& g) const
{
    const int s = bracket_degree();
    if (g.size() > 1) {
        PnKey g1{g.front()}, rest(g.begin() + 1, g.end());
        PnElement out = mul(bracket_keys(f, g1), {{rest, 1}});
        add_scaled(out, mul({{g1, 1}}, bracket_keys(f, rest)), koszul(degree(f) + s, degree(g1)));
        return out;
    }
    if (f.size() > 1) {
        PnKey f1{f.front()}, rest(f.begin() + 1, f.end());
        PnElement out = mul({{f1, 1}}, bracket_keys(rest, g));
        add_scaled(out, mul(bracket_keys(f1, g), {{rest, 1}}), koszul(degree(rest), degree(g) + s));
        return out;
    }
    if (f.empty() || g.empty()) return {};
    return bracket_factors(f.front(), g.front());
}

PnElement FreePn::bracket(const PnElement& a, const PnElement& b) const
{
    PnElement out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) add_scaled(out, bracket_keys(ka, kb), ca * cb);
    return out;
}

std::vector<PnKey> FreePn::basis(int arity) const
{
    check_arity(arity);
    std::vector<PnKey> out;
    std::vector<std::vector<int>> blocks;
    std::function<void(int)> partitions = [&](int l) {
        if (l > arity) {
            std::function<void(std::size_t, PnKey&)> choose = [&](std::size_t b, PnKey& key) {
                if (b == blocks.size()) {
                    out.push_back(key);
                    return;
                }
                const auto count = lie_words_.at(blocks[b].size()).size();
                for (std::size_t j = 0; j < count; ++j) {
                    key.push_back(LieFactor{blocks[b], j});
                    choose(b + 1, key);
                    key.pop_back();
                }
            };
            PnKey key;
            choose(0, key);
            return;
        }
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            blocks[b].push_back(l);
            partitions(l + 1);
            blocks[b].pop_back();
        }
        blocks.push_back({l});
        partitions(l + 1);
        blocks.pop_back();
    };
    partitions(1);
    std::stable_sort(out.begin(), out.end(), [&](const PnKey& a, const PnKey& b) {
        if (weight(a) != weight(b)) return weight(a) > weight(b);
        return a < b;
    });
    return out;
}

PnElement FreePn::evaluate(const PnElement& nu, const std::vector<PnElement>& images) const
{
    PnElement out;
    for (const auto& [key, c] : nu) {
        PnElement prod{{PnKey{}, 1}};
        for (const auto& f : key) {
            const auto& w = lie_words_.at(f.labels.size()).at(f.index);
            std::vector<int> letters;
            for (int p : w) letters.push_back(f.labels[static_cast<std::size_t>(p)]);
            PnElement e = images.at(static_cast<std::size_t>(letters.back() - 1));
            for (std::size_t p = letters.size() - 1; p-- > 0;)
                e = bracket(images.at(static_cast<std::size_t>(letters[p] - 1)), e);
            prod = mul(prod, e);
        }
        add_scaled(out, prod, c);
    }
    return out;
}

PnElement FreePn::compose(const PnElement& nu, int arity_nu, int i, const PnElement& mu, int arity_mu) const
{
    if (i < 1 || i > arity_nu) throw Error("composition slot out of range");
    std::vector<PnElement> images;
    for (int j = 1; j <= arity_nu; ++j) {
        if (j < i)
            images.push_back(gen(j));
        else if (j == i)
            images.push_back(relabel(mu, i - 1));
        else
            images.push_back(gen(j + arity_mu - 1));
    }
    return evaluate(nu, images);
}

std::string FreePn::str(const PnKey& k) const
{
    if (k.empty()) return "1";
    std::string out;
    for (const auto& f : k) {
        const auto& w = lie_words_.at(f.labels.size()).at(f.index);
        std::string s = "x" + std::to_string(f.labels[static_cast<std::size_t>(w.back())]);
        for (std::size_t p = w.size() - 1; p-- > 0;)
            s = "{x" + std::to_string(f.labels[static_cast<std::size_t>(w[p])]) + "," + s + "}";
        if (!out.empty()) out += "*";
        out += s;
    }
    return out;
}

std::string FreePn::str(const PnElement& e) const
{
    if (e.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : e) {
        if (!out.empty()) out += " + ";
        out += (c == 1 ? "" : "(" + to_string(c) + ")") + str(k);
    }
    return out;
}

MultilinearSpace multilinear_basis(OperadKind kind, int arity, int n)
{
    check_arity(arity);
    MultilinearSpace sp{kind, n, arity, {}, {}, {}};
    std::vector<int> labels(static_cast<std::size_t>(arity));
    std::iota(labels.begin(), labels.end(), 1);
    FreePn p(n);
    switch (kind) {
    case OperadKind::as:
        for (const auto& w : permutations(labels)) {
            std::string s;
            for (int l : w) s += (s.empty() ? "x" : "*x") + std::to_string(l);
            sp.words.push_back(s);
            sp.degrees.push_back(0);
            sp.weights.push_back(0);
        }
        break;
    case OperadKind::lie:
        for (std::size_t j = 0; j < p.lie_words(labels.size()).size(); ++j) {
            PnKey k{LieFactor{labels, j}};
            sp.words.push_back(p.str(k));
            sp.degrees.push_back(p.degree(k));
            sp.weights.push_back(p.weight(k));
        }
        break;
    case OperadKind::pn:
        for (const auto& k : p.basis(arity)) {
            sp.words.push_back(p.str(k));
            sp.degrees.push_back(p.degree(k));
            sp.weights.push_back(p.weight(k));
        }
        break;
    }
    return sp;
}

// ---------------------------------------------------------------------------

std::vector<Rational> ReesComponent::coordinates(const AsElement& a) const
{
    std::vector<Rational> v(words.size());
    for (const auto& [w, c] : a) {
        auto it = std::lower_bound(words.begin(), words.end(), w);
        if (it == words.end() || *it != w) throw Error("word outside the arity component");
        v[static_cast<std::size_t>(it - words.begin())] = c;
    }
    std::vector<Rational> out(basis.size());
    for (std::size_t r = 0; r < basis.size(); ++r)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0) out[r] += to_sym[r][j] * v[j];
    return out;
}

ReesComponent rees_bd1(int arity)
{
    check_arity(arity);
    FreePn p(1);
    ReesComponent r;
    r.arity = arity;
    r.basis = p.basis(arity);
    std::vector<int> labels(static_cast<std::size_t>(arity));
    std::iota(labels.begin(), labels.end(), 1);
    r.words = permutations(labels);
    Matrix m(r.words.size(), std::vector<Rational>(r.basis.size()));
    for (std::size_t b = 0; b < r.basis.size(); ++b) {
        const auto& key = r.basis[b];
        r.filtration.push_back(static_cast<int>(key.size()));
        std::vector<int> order(key.size());
        std::iota(order.begin(), order.end(), 0);
        AsElement sym;
        std::size_t count = 0;
        do {
            AsElement prod{{Word{}, 1}};
            for (int f : order) prod = as_mul(prod, p.to_as(key[static_cast<std::size_t>(f)]));
            for (const auto& [w, c] : prod) add_to(sym, w, c);
            ++count;
        } while (std::next_permutation(order.begin(), order.end()));
        for (auto& [w, c] : sym) c /= static_cast<long>(count);
        r.sym.push_back(sym);
        for (const auto& [w, c] : sym)
            m[static_cast<std::size_t>(std::lower_bound(r.words.begin(), r.words.end(), w) - r.words.begin())][b] = c;
    }
    auto inv = invert(m);
    if (!inv) throw Error("symmetrized PBW elements are not a basis");
    r.to_sym = *inv;
    return r;
}

namespace {

void check_target(const ReesComponent& p, const ReesComponent& q, const ReesComponent& target)
{
    if (target.arity != p.arity + q.arity - 1) throw Error("target arity does not match the composition");
}

}  // namespace

HbarVector rees_compose(const ReesComponent& p, std::size_t a, int i, const ReesComponent& q, std::size_t b,
                        const ReesComponent& target)
{
    check_target(p, q, target);
    auto c = target.coordinates(as_compose(p.sym.at(a), i, q.sym.at(b), q.arity));
    HbarVector out(target.dim());
    for (std::size_t r = 0; r < c.size(); ++r) {
        if (c[r] == 0) continue;
        int power = p.filtration[a] + q.filtration[b] - 1 - target.filtration[r];
        if (power < 0) throw Error("composition leaves the PBW filtration");
        out[r][power] = c[r];
    }
    return out;
}

HbarVector rees_compose(const ReesComponent& p, const HbarVector& x, int i, const ReesComponent& q,
                        const HbarVector& y, const ReesComponent& target)
{
    HbarVector out(target.dim());
    for (std::size_t a = 0; a < x.size(); ++a) {
        if (x[a].empty()) continue;
        for (std::size_t b = 0; b < y.size(); ++b) {
            if (y[b].empty()) continue;
            auto c = rees_compose(p, a, i, q, b, target);
            for (std::size_t r = 0; r < c.size(); ++r)
                for (const auto& [e1, c1] : x[a])
                    for (const auto& [e2, c2] : y[b])
                        for (const auto& [e3, c3] : c[r]) {
                            auto& v = out[r][e1 + e2 + e3];
                            v += c1 * c2 * c3;
                            if (v == 0) out[r].erase(e1 + e2 + e3);
                        }
        }
    }
    return out;
}

std::vector<Rational> specialize(const HbarVector& v, const Rational& hbar)
{
    std::vector<Rational> out(v.size());
    for (std::size_t r = 0; r < v.size(); ++r)
        for (const auto& [e, c] : v[r]) {
            Rational pw = 1;
            for (int j = 0; j < e; ++j) pw *= hbar;
            out[r] += c * pw;
        }
    return out;
}

std::vector<Rational> p1_compose(const ReesComponent& p, std::size_t a, int i, const ReesComponent& q, std::size_t b,
                                 const ReesComponent& target)
{
    check_target(p, q, target);
    FreePn pn(1);
    auto e = pn.compose({{p.basis.at(a), 1}}, p.arity, i, {{q.basis.at(b), 1}}, q.arity);
    std::vector<Rational> out(target.dim());
    for (const auto& [k, c] : e) {
        auto it = std::find(target.basis.begin(), target.basis.end(), k);
        if (it == target.basis.end()) throw Error("P_1 composite outside the basis");
        out[static_cast<std::size_t>(it - target.basis.begin())] = c;
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string OpTree::str() const
{
    switch (kind) {
    case Kind::leaf:
        return "x" + std::to_string(label);
    case Kind::product:
        return "(" + children[0].str() + "*" + children[1].str() + ")";
    case Kind::bracket:
        return "{" + children[0].str() + "," + children[1].str() + "}";
    }
    return {};
}

std::vector<NamedRelation> pn_relations(int n)
{
    const Rational sgn = parity(1 - n) ? -1 : 1;
    using T = OpTree;
    std::vector<NamedRelation> out;
    for (const auto& w : permutations({1, 2})) {
        T a = T::leaf(w[0]), b = T::leaf(w[1]);
        out.push_back({"commutativity", {{1, T::prod(a, b)}, {-1, T::prod(b, a)}}});
        out.push_back({"antisymmetry", {{1, T::br(a, b)}, {sgn, T::br(b, a)}}});
    }
    for (const auto& w : permutations({1, 2, 3})) {
        T a = T::leaf(w[0]), b = T::leaf(w[1]), c = T::leaf(w[2]);
        out.push_back({"associativity", {{1, T::prod(T::prod(a, b), c)}, {-1, T::prod(a, T::prod(b, c))}}});
        out.push_back({"leibniz",
                       {{1, T::br(a, T::prod(b, c))}, {-1, T::prod(T::br(a, b), c)}, {-1, T::prod(b, T::br(a, c))}}});
        out.push_back({"jacobi",
                       {{1, T::br(a, T::br(b, c))}, {-sgn, T::br(T::br(a, b), c)}, {-sgn, T::br(b, T::br(a, c))}}});
    }
    return out;
}

PnElement evaluate_tree(const FreePn& p, const OpTree& t)
{
    switch (t.kind) {
    case OpTree::Kind::leaf:
        return p.gen(t.label);
    case OpTree::Kind::product:
        return p.mul(evaluate_tree(p, t.children[0]), evaluate_tree(p, t.children[1]));
    case OpTree::Kind::bracket: {
        // operadic convention: the bracket symbol passes its first argument
        auto u = evaluate_tree(p, t.children[0]);
        auto e = p.bracket(u, evaluate_tree(p, t.children[1]));
        if (!u.empty() && parity(p.bracket_degree() * p.degree(u.begin()->first)))
            for (auto& [k, c] : e) c = -c;
        return e;
    }
    }
    return {};
}

PnElement evaluate(const FreePn& p, const TreeCombination& c)
{
    PnElement out;
    for (const auto& [coef, t] : c) add_scaled(out, evaluate_tree(p, t), coef);
    return out;
}

namespace {

int odd_nodes(const OpTree& t)
{
    int k = t.kind == OpTree::Kind::bracket ? 1 : 0;
    for (const auto& c : t.children) k += odd_nodes(c);
    return k;
}

std::map<std::string, Rational> canonical(const TreeCombination& c)
{
    std::map<std::string, Rational> out;
    for (const auto& [coef, t] : c) {
        auto& v = out[t.str()];
        v += coef;
        if (v == 0) out.erase(t.str());
    }
    return out;
}

std::vector<OpTree> trees_up_to_arity(int k)
{
    using T = OpTree;
    std::vector<T> out;
    const std::vector<T::Kind> ops{T::Kind::product, T::Kind::bracket};
    out.push_back(T::leaf(1));
    for (const auto& w : permutations({1, 2}))
        for (auto o : ops) out.push_back({o, 0, {T::leaf(w[0]), T::leaf(w[1])}});
    if (k >= 3)
        for (const auto& w : permutations({1, 2, 3}))
            for (auto o1 : ops)
                for (auto o2 : ops) {
                    out.push_back({o1, 0, {{o2, 0, {T::leaf(w[0]), T::leaf(w[1])}}, T::leaf(w[2])}});
                    out.push_back({o1, 0, {T::leaf(w[0]), {o2, 0, {T::leaf(w[1]), T::leaf(w[2])}}}});
                }
    return out;
}

int tree_arity(const OpTree& t)
{
    if (t.kind == OpTree::Kind::leaf) return 1;
    return tree_arity(t.children[0]) + tree_arity(t.children[1]);
}

}  // namespace

TreeCombination bd0_differential(const OpTree& t)
{
    TreeCombination out;
    if (t.kind == OpTree::Kind::leaf) return out;
    if (t.kind == OpTree::Kind::product) out.emplace_back(1, OpTree::br(t.children[0], t.children[1]));
    const int self = t.kind == OpTree::Kind::bracket ? 1 : 0;
    Rational s1 = parity(self) ? -1 : 1;
    for (const auto& [c, sub] : bd0_differential(t.children[0]))
        out.emplace_back(s1 * c, OpTree{t.kind, 0, {sub, t.children[1]}});
    Rational s2 = parity(self + odd_nodes(t.children[0])) ? -1 : 1;
    for (const auto& [c, sub] : bd0_differential(t.children[1]))
        out.emplace_back(s2 * c, OpTree{t.kind, 0, {t.children[0], sub}});
    return out;
}

BD0Report bd0_check()
{
    BD0Report r;
    using T = OpTree;
    r.d_bracket_zero = bd0_differential(T::br(T::leaf(1), T::leaf(2))).empty();
    auto dp = bd0_differential(T::prod(T::leaf(1), T::leaf(2)));
    r.d_product_is_hbar_bracket = dp.size() == 1 && dp[0].first == 1 && dp[0].second == T::br(T::leaf(1), T::leaf(2));
    if (!r.d_bracket_zero) r.failures.push_back("d{,} != 0");
    if (!r.d_product_is_hbar_bracket) r.failures.push_back("d(.) != hbar{,}");

    r.d_squared_zero = true;
    for (const auto& t : trees_up_to_arity(3)) {
        TreeCombination dd;
        for (const auto& [c, s] : bd0_differential(t))
            for (const auto& [c2, s2] : bd0_differential(s)) dd.emplace_back(c * c2, s2);
        if (!canonical(dd).empty()) {
            r.d_squared_zero = false;
            r.failures.push_back("d^2 " + t.str());
        }
        ++r.trees_checked;
    }

    FreePn p0(0);
    r.derivation_ok = true;
    for (const auto& rel : pn_relations(0)) {
        TreeCombination d;
        for (const auto& [c, t] : rel.terms)
            for (const auto& [c2, s] : bd0_differential(t)) d.emplace_back(c * c2, s);
        if (!evaluate(p0, d).empty()) {
            r.derivation_ok = false;
            r.failures.push_back("d(" + rel.name + ") " + rel.terms.front().second.str());
        }
        ++r.relations_checked;
    }
    return r;
}

namespace {

using Tensor2 = std::map<std::pair<PnKey, PnKey>, Rational>;

void collect_brackets(OpTree& t, std::vector<OpTree*>& nodes)
{
    if (t.kind == OpTree::Kind::leaf) return;
    if (t.kind == OpTree::Kind::bracket) nodes.push_back(&t);
    for (auto& c : t.children) collect_brackets(c, nodes);
}

// Sum over the ways to send each bracket node to the left or right factor,
// with the Koszul sign of the Hadamard product in preorder.
Tensor2 coproduct(const FreePn& p, const OpTree& t, const Rational& coef)
{
    std::vector<OpTree*> dummy;
    OpTree probe = t;
    collect_brackets(probe, dummy);
    const std::size_t m = dummy.size();
    const int s = p.bracket_degree();
    Tensor2 out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        OpTree left = t, right = t;
        std::vector<OpTree*> ln, rn;
        collect_brackets(left, ln);
        collect_brackets(right, rn);
        std::vector<int> a(m), b(m);
        for (std::size_t j = 0; j < m; ++j) {
            if (mask >> j & 1) {
                rn[j]->kind = OpTree::Kind::product;
                a[j] = s;
            } else {
                ln[j]->kind = OpTree::Kind::product;
                b[j] = s;
            }
        }
        int sign = 1;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) sign *= koszul(b[i], a[j]);
        auto el = evaluate_tree(p, left), er = evaluate_tree(p, right);
        for (const auto& [kl, cl] : el)
            for (const auto& [kr, cr] : er) {
                auto& v = out[{kl, kr}];
                v += coef * sign * cl * cr;
                if (v == 0) out.erase({kl, kr});
            }
    }
    return out;
}

}  // namespace

HopfReport hopf_coproduct_check(int n, int max_arity)
{
    HopfReport r;
    r.n = n;
    const int s = 1 - n;
    // generators as symbols: "m" product, "b" bracket
    using Word3 = std::vector<std::string>;
    auto delta = [&](const std::string& g) -> std::vector<std::pair<int, std::pair<std::string, std::string>>> {
        if (g == "m") return {{1, {"m", "m"}}};
        return {{1, {"b", "m"}}, {1, {"m", "b"}}};
    };
    auto deg = [&](const std::string& g) { return g == "b" ? s : 0; };
    r.coassociative = true;
    r.cocommutative = true;
    for (const std::string g : {"m", "b"}) {
        std::map<Word3, int> lhs, rhs;
        for (const auto& [c, pr] : delta(g)) {
            for (const auto& [c2, pr2] : delta(pr.first)) lhs[{pr2.first, pr2.second, pr.second}] += c * c2;
            for (const auto& [c2, pr2] : delta(pr.second)) rhs[{pr.first, pr2.first, pr2.second}] += c * c2;
        }
        std::erase_if(lhs, [](const auto& kv) { return kv.second == 0; });
        std::erase_if(rhs, [](const auto& kv) { return kv.second == 0; });
        if (lhs != rhs) {
            r.coassociative = false;
            r.failures.push_back("coassociativity on " + g);
        }
        std::map<std::pair<std::string, std::string>, int> d, swapped;
        for (const auto& [c, pr] : delta(g)) {
            d[pr] += c;
            swapped[{pr.second, pr.first}] += c * koszul(deg(pr.first), deg(pr.second));
        }
        if (d != swapped) {
            r.cocommutative = false;
            r.failures.push_back("cocommutativity on " + g);
        }
    }

    FreePn p(n);
    r.relations_hold = true;
    r.relations_respected = true;
    for (const auto& rel : pn_relations(n)) {
        if (tree_arity(rel.terms.front().second) > max_arity) continue;
        ++r.relations_checked;
        if (!evaluate(p, rel.terms).empty()) {
            r.relations_hold = false;
            r.failures.push_back(rel.name + " does not hold: " + rel.terms.front().second.str());
        }
        Tensor2 total;
        for (const auto& [c, t] : rel.terms)
            for (const auto& [k, v] : coproduct(p, t, c)) {
                auto& x = total[k];
                x += v;
                if (x == 0) total.erase(k);
            }
        if (!total.empty()) {
            r.relations_respected = false;
            r.failures.push_back("coproduct of " + rel.name + " " + rel.terms.front().second.str());
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Generator> arnold_gens(int n, int arity)
{
    std::vector<Generator> g;
    for (int i = 1; i <= arity; ++i)
        for (int j = i + 1; j <= arity; ++j) g.push_back({"a" + std::to_string(i) + std::to_string(j), n, 0, 1});
    return g;
}

bool square_free(const Exponents& m)
{
    return std::all_of(m.begin(), m.end(), [](int e) { return e <= 1; });
}

Poly drop_squares(const Poly& p)
{
    Poly out;
    for (const auto& [m, c] : p.terms())
        if (square_free(m)) out.add_term(m, c);
    return out;
}

}  // namespace

ArnoldAlgebra::ArnoldAlgebra(int n, int arity) : n_(n), arity_(arity), alg_(arnold_gens(n, arity))
{
    check_arity(arity);
    const auto g = alg_.ngens();
    std::vector<Poly> rels;
    for (int i = 1; i <= arity; ++i)
        for (int j = i + 1; j <= arity; ++j)
            for (int k = j + 1; k <= arity; ++k)
                rels.push_back(alg_.mul(a(i, j), a(j, k)) + alg_.mul(a(j, k), a(k, i)) + alg_.mul(a(k, i), a(i, j)));
    for (std::size_t len = 0; len <= g; ++len) {
        auto& mons = monomials_[static_cast<int>(len)];
        std::vector<bool> pick(g, false);
        std::fill(pick.begin(), pick.begin() + static_cast<long>(len), true);
        do {
            Exponents m(g, 0);
            for (std::size_t q = 0; q < g; ++q) m[q] = pick[q] ? 1 : 0;
            mons.push_back(m);
        } while (std::prev_permutation(pick.begin(), pick.end()));
        std::sort(mons.begin(), mons.end(), DegLex{});
        std::map<Exponents, std::size_t, DegLex> idx;
        for (const auto& m : mons) idx.emplace(m, idx.size());

        std::vector<SparseVector> rows;
        if (len >= 2)
            for (const auto& r : rels)
                for (const auto& m : monomials_[static_cast<int>(len - 2)]) {
                    Poly mono;
                    mono.add_term(m, 1);
                    std::vector<SparseVector::Entry> e;
                    Poly prod = drop_squares(alg_.mul(r, mono));
                    for (const auto& [mm, c] : prod.terms()) e.emplace_back(idx.at(mm), c);
                    SparseVector v(std::move(e));
                    if (!v.empty()) rows.push_back(std::move(v));
                }
        Piece piece;
        piece.length = static_cast<int>(len);
        piece.monomials = mons.size();
        auto& piv = pivots_[static_cast<int>(len)];
        std::vector<bool> is_pivot(mons.size(), false);
        if (!rows.empty()) {
            SparseMatrix mat(rows.size(), mons.size(), rows);
            const auto& ech = mat.echelon();
            for (std::size_t r = 0; r < ech.rank(); ++r) {
                std::vector<std::pair<std::size_t, Rational>> row;
                for (const auto& [c, v] : ech.rows[r]) row.emplace_back(c, Rational(v));
                piv.emplace_back(ech.pivots[r], std::move(row));
                is_pivot[ech.pivots[r]] = true;
            }
        }
        piece.relation_rank = piv.size();
        for (std::size_t q = 0; q < mons.size(); ++q)
            if (!is_pivot[q]) piece.basis.push_back(mons[q]);
        pieces_.push_back(std::move(piece));
    }
}

Poly ArnoldAlgebra::a(int i, int j) const
{
    if (i == j || i < 1 || j < 1 || i > arity_ || j > arity_) throw Error("a_ij needs distinct labels in range");
    if (i < j) return alg_.var("a" + std::to_string(i) + std::to_string(j));
    return Rational(parity(n_ + 1) ? -1 : 1) * a(j, i);
}

Poly ArnoldAlgebra::reduce(const Poly& p) const
{
    std::map<int, std::vector<Rational>> vecs;
    const Poly sq = drop_squares(p);
    for (const auto& [m, c] : sq.terms()) {
        int len = std::accumulate(m.begin(), m.end(), 0);
        const auto& mons = monomials_.at(len);
        auto& v = vecs[len];
        v.resize(mons.size());
        auto it = std::lower_bound(mons.begin(), mons.end(), m, DegLex{});
        v[static_cast<std::size_t>(it - mons.begin())] += c;
    }
    Poly out;
    for (auto& [len, v] : vecs) {
        for (const auto& [pc, row] : pivots_.at(len)) {
            if (v[pc] == 0) continue;
            Rational lead;
            for (const auto& [c, x] : row)
                if (c == pc) lead = x;
            Rational f = v[pc] / lead;
            for (const auto& [c, x] : row) v[c] -= f * x;
        }
        const auto& mons = monomials_.at(len);
        for (std::size_t q = 0; q < v.size(); ++q)
            if (v[q] != 0) out.add_term(mons[q], v[q]);
    }
    return out;
}

std::map<int, std::size_t> ArnoldAlgebra::hilbert() const
{
    std::map<int, std::size_t> out;
    for (const auto& p : pieces_)
        if (!p.basis.empty()) out[p.length * n_] += p.basis.size();
    return out;
}

Poly WeylImage::coefficient(const Exponents& m) const
{
    auto it = components.find(m);
    return it == components.end() ? Poly{} : it->second;
}

Poly WeylImage::unit_coefficient() const { return coefficient(arnold.alg().unit_exponents()); }

WeylImage weyl_structure_map(const FreeCDGA& b, const Matrix& t, int n, const std::vector<Poly>& inputs)
{
    const int k = static_cast<int>(inputs.size());
    ArnoldAlgebra arnold(n, k);
    const auto ng = b.alg.ngens();
    if (t.size() != ng) throw Error("t must be square over the generators");
    for (std::size_t p = 0; p < ng; ++p) {
        if (t[p].size() != ng) throw Error("t must be square over the generators");
        for (std::size_t q = 0; q < ng; ++q)
            if (t[p][q] != 0 && b.alg.gen(p).degree + b.alg.gen(q).degree != n)
                throw Error("t pairs generators whose degrees do not add up to n");
    }

    std::vector<Generator> cg;
    for (int i = 0; i < k; ++i)
        for (const auto& g : b.alg.gens()) cg.push_back({g.name + "#" + std::to_string(i + 1), g.degree, 0, 1});
    const auto offset = cg.size();
    for (const auto& g : arnold.alg().gens()) cg.push_back(g);
    FreeAlgebra c(cg);
    auto copy = [&](int slot, std::size_t g) { return static_cast<std::size_t>(slot) * ng + g; };

    Poly x = c.one();
    for (int i = 0; i < k; ++i) {
        std::vector<Poly> img;
        for (std::size_t g = 0; g < ng; ++g) img.push_back(c.var(copy(i, g)));
        x = c.mul(x, b.alg.substitute(c, img, inputs[static_cast<std::size_t>(i)]));
    }

    auto square_free_tail = [&](const Poly& y) {
        Poly out;
        for (const auto& [m, co] : y.terms())
            if (std::all_of(m.begin() + static_cast<long>(offset), m.end(), [](int e) { return e <= 1; }))
                out.add_term(m, co);
        return out;
    };
    // (-1)^{(n+1)|slot i|}: the slot-i factor crosses the degree -(n+1) partner of d_l
    auto shifted_sign = [&](int slot, const Poly& y) {
        if ((n + 1) % 2 == 0) return y;
        Poly out;
        for (const auto& [m, co] : y.terms()) {
            int deg = 0;
            for (std::size_t g = 0; g < ng; ++g) deg += m[copy(slot, g)] * b.alg.gen(g).degree;
            out.add_term(m, deg % 2 == 0 ? co : Rational(-co));
        }
        return out;
    };
    auto apply_a = [&](const Poly& y) {
        Poly out;
        std::size_t pair = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j, ++pair) {
                Poly part;
                for (std::size_t p = 0; p < ng; ++p)
                    for (std::size_t q = 0; q < ng; ++q) {
                        if (t[p][q] == 0) continue;
                        part += t[p][q] * c.left_derivative(copy(j, q), shifted_sign(i, c.left_derivative(copy(i, p), y)));
                    }
                if (!part.is_zero()) out += c.mul(part, c.var(offset + pair));
            }
        return square_free_tail(out);
    };

    // exp(a) terminates: every application raises the Arnold length
    Poly total = x, term = x;
    for (int m = 1; !term.is_zero(); ++m) {
        term = Rational(1, m) * apply_a(term);
        total += term;
    }

    // m (x) id, then the Arnold normal form of each B-coefficient
    std::vector<Generator> og = b.alg.gens();
    for (const auto& g : arnold.alg().gens()) og.push_back(g);
    FreeAlgebra o(og);
    std::vector<Poly> img;
    for (int i = 0; i < k; ++i)
        for (std::size_t g = 0; g < ng; ++g) img.push_back(o.var(g));
    for (std::size_t g = 0; g < arnold.alg().ngens(); ++g) img.push_back(o.var(ng + g));
    Poly out = c.substitute(o, img, total);

    std::map<Exponents, Poly, DegLex> by_b;
    for (const auto& [m, co] : out.terms()) {
        Exponents bm(m.begin(), m.begin() + static_cast<long>(ng));
        Exponents am(m.begin() + static_cast<long>(ng), m.end());
        by_b[bm].add_term(am, co);
    }
    WeylImage w{arnold, {}};
    for (const auto& [bm, ap] : by_b) {
        const Poly red = arnold.reduce(ap);
        for (const auto& [am, co] : red.terms()) {
            auto& slot = w.components[am];
            slot.add_term(bm, co);
            if (slot.is_zero()) w.components.erase(am);
        }
    }
    return w;
}

}  // namespace pw
