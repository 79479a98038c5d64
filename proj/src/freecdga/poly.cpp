#include "pw/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pw {

bool DegLex::operator()(const Exponents& a, const Exponents& b) const
{
    int ta = std::accumulate(a.begin(), a.end(), 0);
    int tb = std::accumulate(b.begin(), b.end(), 0);
    if (ta != tb) return ta < tb;
    // Higher exponent on an earlier generator sorts first.
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Poly::Poly(Terms t)
{
    for (auto& [m, c] : t)
        if (c != 0) terms_.emplace(m, c);
}

Rational Poly::coeff(const Exponents& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Exponents& m, const Rational& c)
{
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (inserted) return;
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

Poly& Poly::operator+=(const Poly& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly& Poly::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.second *= c;
    return *this;
}

// ---------------------------------------------------------------------------

FreeAlgebra::FreeAlgebra(std::vector<Generator> gens) : gens_(std::move(gens))
{
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (gens_[i].name.empty()) throw Error("generator with empty name");
        if (!by_name_.emplace(gens_[i].name, i).second) throw Error("duplicate generator " + gens_[i].name);
    }
}

std::optional<std::size_t> FreeAlgebra::find(const std::string& name) const
{
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::size_t FreeAlgebra::index(const std::string& name) const
{
    auto i = find(name);
    if (!i) throw Error("unknown generator " + name);
    return *i;
}

Poly FreeAlgebra::constant(const Rational& c) const
{
    Poly p;
    p.add_term(unit_exponents(), c);
    return p;
}

Poly FreeAlgebra::var(std::size_t i) const
{
    Exponents e = unit_exponents();
    e[i] = 1;
    Poly p;
    p.add_term(e, 1);
    return p;
}

int FreeAlgebra::degree(const Exponents& m) const
{
    int s = 0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * gens_[i].degree;
    return s;
}

int FreeAlgebra::weight(const Exponents& m) const
{
    int s = 0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * gens_[i].weight;
    return s;
}

int FreeAlgebra::size(const Exponents& m) const
{
    int s = 0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * gens_[i].size;
    return s;
}

namespace {
template <class F>
std::optional<int> homogeneous(const Poly& p, F f)
{
    std::optional<int> v;
    for (const auto& [m, c] : p.terms()) {
        int x = f(m);
        if (v && *v != x) return std::nullopt;
        v = x;
    }
    return v;
}
}  // namespace

std::optional<int> FreeAlgebra::degree(const Poly& p) const
{
    return homogeneous(p, [&](const Exponents& m) { return degree(m); });
}
std::optional<int> FreeAlgebra::weight(const Poly& p) const
{
    return homogeneous(p, [&](const Exponents& m) { return weight(m); });
}
std::optional<int> FreeAlgebra::size(const Poly& p) const
{
    return homogeneous(p, [&](const Exponents& m) { return size(m); });
}

int FreeAlgebra::mul_sign(const Exponents& a, const Exponents& b) const
{
    // Moving each odd factor of b left past the later odd factors of a.
    int later_odd_in_a = 0;
    int swaps = 0;
    for (std::size_t i = gens_.size(); i-- > 0;) {
        if (!odd(i)) continue;
        if (a[i] && b[i]) return 0;
        if (b[i]) swaps += later_odd_in_a;
        if (a[i]) ++later_odd_in_a;
    }
    return (swaps & 1) ? -1 : 1;
}

Poly FreeAlgebra::mul(const Poly& a, const Poly& b) const
{
    Poly out;
    Exponents e(gens_.size());
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            int s = mul_sign(ma, mb);
            if (s == 0) continue;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ma[i] + mb[i];
            Rational c = ca * cb;
            if (s < 0) c = -c;
            out.add_term(e, c);
        }
    }
    return out;
}

Poly FreeAlgebra::pow(const Poly& a, unsigned k) const
{
    Poly r = one();
    for (unsigned i = 0; i < k; ++i) r = mul(r, a);
    return r;
}

Poly FreeAlgebra::left_derivative(std::size_t k, const Poly& p) const
{
    Poly out;
    for (const auto& [m, c] : p.terms()) {
        if (m[k] == 0) continue;
        int sign = 1;
        if (odd(k)) {
            int before = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (odd(i)) before += m[i];
            if (before & 1) sign = -1;
        }
        Exponents e = m;
        --e[k];
        out.add_term(e, c * m[k] * sign);
    }
    return out;
}

Poly FreeAlgebra::right_derivative(std::size_t k, const Poly& p) const
{
    Poly out;
    for (const auto& [m, c] : p.terms()) {
        if (m[k] == 0) continue;
        int sign = 1;
        if (odd(k)) {
            int after = 0;
            for (std::size_t i = k + 1; i < m.size(); ++i)
                if (odd(i)) after += m[i];
            if (after & 1) sign = -1;
        }
        Exponents e = m;
        --e[k];
        out.add_term(e, c * m[k] * sign);
    }
    return out;
}

Poly FreeAlgebra::apply_derivation(const std::vector<Poly>& images, const Poly& p) const
{
    Poly out;
    for (std::size_t k = 0; k < images.size() && k < gens_.size(); ++k) {
        if (images[k].is_zero()) continue;
        Poly dk = left_derivative(k, p);
        if (!dk.is_zero()) out += mul(images[k], dk);
    }
    return out;
}

Poly FreeAlgebra::substitute(const FreeAlgebra& target, const std::vector<Poly>& images, const Poly& p) const
{
    Poly out;
    for (const auto& [m, c] : p.terms()) {
        Poly t = target.constant(c);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (int r = 0; r < m[i]; ++r) t = target.mul(t, images[i]);
        out += t;
    }
    return out;
}

Poly FreeAlgebra::embed(const FreeAlgebra& source, const Poly& p) const
{
    std::vector<std::size_t> map(source.ngens());
    for (std::size_t i = 0; i < source.ngens(); ++i) map[i] = index(source.gen(i).name);
    // Reordering generators can introduce signs; go through substitution.
    std::vector<Poly> images;
    images.reserve(source.ngens());
    for (auto j : map) images.push_back(var(j));
    return source.substitute(*this, images, p);
}

std::vector<Exponents> FreeAlgebra::monomials(const MonomialWindow& w) const
{
    for (const auto& g : gens_)
        if (g.size <= 0) throw WindowTooSmall("generator " + g.name + " has non-positive size");
    std::vector<Exponents> out;
    Exponents e(gens_.size(), 0);
    auto rec = [&](auto& self, std::size_t i, int size_left, int deg, int wt) -> void {
        if (i == gens_.size()) {
            if (wt >= w.min_weight && wt <= w.max_weight && deg >= w.min_degree && deg <= w.max_degree)
                out.push_back(e);
            return;
        }
        int cap = size_left / gens_[i].size;
        if (odd(i)) cap = std::min(cap, 1);
        for (int k = 0; k <= cap; ++k) {
            e[i] = k;
            self(self, i + 1, size_left - k * gens_[i].size, deg + k * gens_[i].degree, wt + k * gens_[i].weight);
        }
        e[i] = 0;
    };
    rec(rec, 0, w.max_size, 0, 0);
    std::sort(out.begin(), out.end(), DegLex{});
    return out;
}

std::string FreeAlgebra::str(const Exponents& m) const
{
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!s.empty()) s += '*';
        s += gens_[i].name;
        if (m[i] > 1) s += '^' + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

std::string FreeAlgebra::str(const Poly& p) const
{
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    // Print in descending DegLex order so leading terms come first.
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        Rational a = abs(c);
        bool neg = c < 0;
        if (first)
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        first = false;
        bool is_unit = std::all_of(m.begin(), m.end(), [](int x) { return x == 0; });
        if (is_unit) {
            s += to_string(a);
        } else {
            if (a != 1) s += to_string(a) + "*";
            s += str(m);
        }
    }
    return s;
}

}  // namespace pw
