#include "pw/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace pw::dsl {

namespace {

std::string where(Span s) { return "line " + std::to_string(s.line) + ", column " + std::to_string(s.column); }

std::string join(const std::vector<std::string>& v, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

}  // namespace

ParseError::ParseError(Span at_, std::vector<std::string> expected_, const std::string& found_)
    : Error(where(at_) + ": expected " + join(expected_, " or ") + ", found " + found_),
      at(at_),
      expected(std::move(expected_)),
      found(found_)
{
}

DuplicateName::DuplicateName(Span at_, const std::string& name_)
    : Error(where(at_) + ": duplicate name " + name_), at(at_), name(name_)
{
}

UnresolvedReference::UnresolvedReference(Span at_, const std::string& name_)
    : Error(where(at_) + ": unresolved reference " + name_), at(at_), name(name_)
{
}

bool operator==(const Factor& a, const Factor& b)
{
    if (a.kind != b.kind || a.power != b.power) return false;
    switch (a.kind) {
    case Factor::Kind::number: return a.value == b.value;
    case Factor::Kind::name:
    case Factor::Kind::symbol: return a.name == b.name;
    case Factor::Kind::group: return *a.group == *b.group;
    }
    return false;
}

std::optional<std::string> Expr::as_name() const
{
    if (terms.size() != 1 || terms[0].sign != 1 || terms[0].factors.size() != 1) return std::nullopt;
    const auto& f = terms[0].factors[0];
    if (f.kind != Factor::Kind::name || f.power != 1) return std::nullopt;
    return f.name;
}

std::string Entry::canonical_key() const
{
    std::string k = key;
    for (int i : indices) k += "[" + std::to_string(i) + "]";
    if (arg) k += "(" + *arg + ")";
    return k;
}

const Entry* Block::find(const std::string& canonical_key) const
{
    for (const auto& e : entries)
        if (e.canonical_key() == canonical_key) return &e;
    return nullptr;
}

std::vector<const Entry*> Block::all(const std::string& key) const
{
    std::vector<const Entry*> out;
    for (const auto& e : entries)
        if (e.key == key) out.push_back(&e);
    return out;
}

const Block* Manifest::find(const std::string& name) const
{
    for (const auto& b : blocks)
        if (b.name == name) return &b;
    return nullptr;
}

const Block& Manifest::pick(const std::string& kind, const std::string& name) const
{
    if (!name.empty()) {
        const Block* b = find(name);
        if (!b || b->kind != kind) throw UnresolvedReference({}, kind + " " + name);
        return *b;
    }
    const Block* found = nullptr;
    for (const auto& b : blocks) {
        if (b.kind != kind) continue;
        if (found) throw UnresolvedReference(b.span, "one of several " + kind + " blocks (name it with --block)");
        found = &b;
    }
    if (!found) throw UnresolvedReference({}, "a " + kind + " block");
    return *found;
}

// ---- lexer ----

namespace {

enum class Tok { ident, string, number, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    Span span;
    [[nodiscard]] std::string describe() const
    {
        switch (kind) {
        case Tok::ident: return "identifier '" + text + "'";
        case Tok::string: return "string \"" + text + "\"";
        case Tok::number: return "number " + text;
        case Tok::punct: return "'" + text + "'";
        case Tok::end: return "end of input";
        }
        return text;
    }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& s)
{
    std::vector<Token> out;
    Span pos;
    std::size_t i = 0;
    auto advance = [&](std::size_t k) {
        for (std::size_t j = 0; j < k && i < s.size(); ++j, ++i) {
            if (s[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
                ++pos.column;
            }
        }
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.span = pos;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            t.kind = Tok::ident;
            t.text = s.substr(i, j - i);
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j + 1 < s.size() && s[j] == '/' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            }
            t.kind = Tok::number;
            t.text = s.substr(i, j - i);
            advance(j - i);
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != '"' && s[j] != '\n') ++j;
            if (j >= s.size() || s[j] != '"') throw ParseError(pos, {"closing '\"'"}, "end of line");
            t.kind = Tok::string;
            t.text = s.substr(i + 1, j - i - 1);
            if (t.text.empty()) throw ParseError(pos, {"a non-empty name"}, "\"\"");
            advance(j + 1 - i);
        } else if (std::string("{}=;,()[]+-*^@").find(c) != std::string::npos) {
            t.kind = Tok::punct;
            t.text = std::string(1, c);
            advance(1);
        } else {
            std::size_t len = 1;
            while (i + len < s.size() && (static_cast<unsigned char>(s[i + len]) & 0xC0) == 0x80) ++len;
            throw ParseError(pos, {"a token"}, "'" + s.substr(i, len) + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.span = pos;
    out.push_back(end);
    return out;
}

// ---- parser ----

const std::vector<std::string> block_kinds = {"algebra", "lie", "poisson", "form", "ideal", "mixed", "options"};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    Manifest manifest()
    {
        Manifest m;
        while (peek().kind != Tok::end) m.blocks.push_back(block());
        return m;
    }

private:
    const Token& peek() const { return t_[p_]; }
    Token take() { return t_[p_++]; }
    bool is(const std::string& punct) const { return peek().kind == Tok::punct && peek().text == punct; }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        throw ParseError(peek().span, std::move(expected), peek().describe());
    }
    void expect(const std::string& punct)
    {
        if (!is(punct)) fail({"'" + punct + "'"});
        ++p_;
    }
    std::string name(const std::string& what)
    {
        if (peek().kind != Tok::ident && peek().kind != Tok::string) fail({what});
        return take().text;
    }

    Block block()
    {
        Block b;
        b.span = peek().span;
        if (peek().kind != Tok::ident || std::find(block_kinds.begin(), block_kinds.end(), peek().text) == block_kinds.end())
            fail(block_kinds);
        b.kind = take().text;
        b.name = name("a block name");
        expect("{");
        while (!is("}")) {
            if (peek().kind == Tok::end) fail({"'}'", "a key"});
            b.entries.push_back(entry());
        }
        expect("}");
        return b;
    }

    Entry entry()
    {
        Entry e;
        e.span = peek().span;
        if (peek().kind != Tok::ident) fail({"a key", "'}'"});
        e.key = take().text;
        if (is("(")) {
            ++p_;
            e.arg = name("a name");
            expect(")");
        } else {
            while (is("[")) {
                ++p_;
                if (peek().kind != Tok::number || peek().text.find('/') != std::string::npos) fail({"an index"});
                e.indices.push_back(std::stoi(take().text));
                expect("]");
            }
        }
        if (!is("=")) fail(e.arg || !e.indices.empty() ? std::vector<std::string>{"'='"}
                                                       : std::vector<std::string>{"'='", "'('", "'['"});
        ++p_;
        e.values.push_back(sum());
        while (is(",")) {
            ++p_;
            e.values.push_back(sum());
        }
        if (!is(";")) fail({"';'", "','", "an operator"});
        ++p_;
        return e;
    }

    Expr sum()
    {
        Expr e;
        e.span = peek().span;
        int sign = 1;
        if (is("-") || is("+")) sign = take().text == "-" ? -1 : 1;
        e.terms.push_back(term(sign));
        while (is("+") || is("-")) {
            sign = take().text == "-" ? -1 : 1;
            e.terms.push_back(term(sign));
        }
        return e;
    }

    Term term(int sign)
    {
        Term t;
        t.sign = sign;
        t.factors.push_back(factor());
        while (is("*")) {
            ++p_;
            t.factors.push_back(factor());
        }
        return t;
    }

    Factor factor()
    {
        Factor f;
        f.span = peek().span;
        if (peek().kind == Tok::number) {
            f.kind = Factor::Kind::number;
            if (std::regex_match(peek().text, std::regex(R"(.*/0+)"))) fail({"a non-zero denominator"});
            f.value = parse_rational(take().text);
        } else if (peek().kind == Tok::ident || peek().kind == Tok::string) {
            f.kind = Factor::Kind::name;
            f.name = take().text;
        } else if (is("@")) {
            ++p_;
            f.kind = Factor::Kind::symbol;
            f.name = name("a generator name after '@'");
        } else if (is("(")) {
            ++p_;
            f.kind = Factor::Kind::group;
            f.group = std::make_shared<Expr>(sum());
            expect(")");
        } else {
            fail({"a number", "a name", "'@'", "'('"});
        }
        if (is("^")) {
            ++p_;
            if (peek().kind != Tok::number || peek().text.find('/') != std::string::npos) fail({"an integer exponent"});
            f.power = std::stoi(take().text);
        }
        return f;
    }

    std::vector<Token> t_;
    std::size_t p_ = 0;
};

// ---- resolution ----

struct Scope {
    std::set<std::string> names;
    std::set<std::string> symbols;
};

void resolve_expr(const Expr& e, const Scope& s)
{
    for (const auto& t : e.terms)
        for (const auto& f : t.factors) {
            if (f.kind == Factor::Kind::name && !s.names.count(f.name)) throw UnresolvedReference(f.span, f.name);
            if (f.kind == Factor::Kind::symbol && !s.symbols.count(f.name))
                throw UnresolvedReference(f.span, "@" + f.name);
            if (f.kind == Factor::Kind::group) resolve_expr(*f.group, s);
        }
}

const std::regex indexed_key(R"(^(p|w|f|power)([0-9]+)$)");

bool key_allowed(const std::string& kind, const Entry& e)
{
    const bool plain = !e.arg && e.indices.empty();
    const bool with_arg = e.arg && e.indices.empty();
    std::smatch m;
    const bool indexed = plain && std::regex_match(e.key, m, indexed_key);
    if (kind == "algebra") return (with_arg && (e.key == "gen" || e.key == "d" || e.key == "eps")) || (plain && e.key == "base");
    if (kind == "lie")
        return (plain && (e.key == "preset" || e.key == "dim" || e.key == "names")) ||
               (e.key == "bracket" && e.indices.size() == 2 && !e.arg);
    if (kind == "poisson") return plain && (e.key == "on" || e.key == "shift" || e.key == "bound" || (indexed && m[1] == "p"));
    if (kind == "form") return plain && (e.key == "on" || e.key == "shift" || (indexed && m[1] == "w"));
    if (kind == "ideal") return plain && (e.key == "on" || (indexed && (m[1] == "f" || m[1] == "power")));
    if (kind == "mixed") return with_arg && (e.key == "elem" || e.key == "d" || e.key == "eps");
    return plain;  // options
}

std::vector<std::string> keys_of(const std::string& kind)
{
    if (kind == "algebra") return {"gen(name)", "d(name)", "eps(name)", "base"};
    if (kind == "lie") return {"preset", "dim", "names", "bracket[i][j]"};
    if (kind == "poisson") return {"on", "shift", "bound", "p<i>"};
    if (kind == "form") return {"on", "shift", "w<j>"};
    if (kind == "ideal") return {"on", "f<i>", "power<i>"};
    if (kind == "mixed") return {"elem(name)", "d(name)", "eps(name)"};
    return {"a key"};
}

std::vector<std::string> algebra_gens(const Block& b)
{
    std::vector<std::string> out;
    for (const auto* e : b.all("gen")) out.push_back(*e->arg);
    return out;
}

const Block* referenced_algebra(const Manifest& m, const Block& b, bool required)
{
    const Entry* on = b.find("on");
    if (!on) {
        if (required) throw UnresolvedReference(b.span, "on = <algebra> in " + b.name);
        return nullptr;
    }
    auto target = on->values.size() == 1 ? on->values[0].as_name() : std::nullopt;
    if (!target) throw ParseError(on->values[0].span, {"an algebra name"}, serialize(on->values[0]));
    const Block* a = m.find(*target);
    if (!a || a->kind != "algebra") throw UnresolvedReference(on->values[0].span, *target);
    return a;
}

void resolve(const Manifest& m)
{
    std::set<std::string> block_names;
    for (const auto& b : m.blocks) {
        if (!block_names.insert(b.name).second) throw DuplicateName(b.span, b.name);
        std::set<std::string> keys;
        for (const auto& e : b.entries) {
            if (!key_allowed(b.kind, e)) throw ParseError(e.span, keys_of(b.kind), "key '" + e.canonical_key() + "'");
            if (!keys.insert(e.canonical_key()).second) throw DuplicateName(e.span, e.canonical_key());
        }
    }
    const Scope numbers;
    for (const auto& b : m.blocks) {
        if (b.kind == "algebra") {
            Scope s;
            for (const auto& g : algebra_gens(b)) {
                if (!s.names.insert(g).second) throw DuplicateName(b.find("gen(" + g + ")")->span, g);
            }
            for (const auto& e : b.entries) {
                if (e.key == "gen") {
                    for (const auto& v : e.values) resolve_expr(v, numbers);
                    continue;
                }
                if (e.arg && !s.names.count(*e.arg)) throw UnresolvedReference(e.span, *e.arg);
                for (const auto& v : e.values) resolve_expr(v, s);
            }
        } else if (b.kind == "mixed") {
            Scope s;
            for (const auto* e : b.all("elem")) s.names.insert(*e->arg);
            for (const auto& e : b.entries) {
                if (e.key == "elem") {
                    for (const auto& v : e.values) resolve_expr(v, numbers);
                    continue;
                }
                if (!s.names.count(*e.arg)) throw UnresolvedReference(e.span, *e.arg);
                for (const auto& v : e.values) resolve_expr(v, s);
            }
        } else if (b.kind == "lie") {
            for (const auto& e : b.entries)
                if (e.key == "dim" || e.key == "bracket")
                    for (const auto& v : e.values) resolve_expr(v, numbers);
        } else {
            const Block* a = referenced_algebra(m, b, b.kind != "options");
            Scope s;
            if (a) {
                for (const auto& g : algebra_gens(*a)) {
                    s.names.insert(g);
                    if (b.kind == "poisson") s.symbols.insert(g);
                    if (b.kind == "form") s.names.insert("d" + g);
                }
            }
            for (const auto& e : b.entries) {
                if (e.key == "on" || (b.kind == "options" && e.key != "inputs")) continue;
                for (const auto& v : e.values) resolve_expr(v, e.key == "shift" || e.key == "bound" || e.key.starts_with("power") ? numbers : s);
            }
        }
    }
}

// ---- serialization ----

bool plain_name(const std::string& s)
{
    if (s.empty() || !ident_start(s[0])) return false;
    return std::all_of(s.begin(), s.end(), ident_char);
}

std::string quoted(const std::string& s) { return plain_name(s) ? s : "\"" + s + "\""; }

std::string serialize_factor(const Factor& f)
{
    std::string out;
    switch (f.kind) {
    case Factor::Kind::number: out = to_string(f.value); break;
    case Factor::Kind::name: out = quoted(f.name); break;
    case Factor::Kind::symbol: out = "@" + quoted(f.name); break;
    case Factor::Kind::group: out = "(" + serialize(*f.group) + ")"; break;
    }
    if (f.power != 1) out += "^" + std::to_string(f.power);
    return out;
}

}  // namespace

Manifest parse(const std::string& source)
{
    Parser p(lex(source));
    Manifest m = p.manifest();
    resolve(m);
    return m;
}

std::string serialize(const Expr& e)
{
    std::string out;
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
        const auto& t = e.terms[i];
        if (i == 0) {
            if (t.sign < 0) out += "-";
        } else {
            out += t.sign < 0 ? " - " : " + ";
        }
        for (std::size_t j = 0; j < t.factors.size(); ++j) out += (j ? "*" : "") + serialize_factor(t.factors[j]);
    }
    return out;
}

std::string serialize(const Manifest& m)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < m.blocks.size(); ++i) {
        const auto& b = m.blocks[i];
        if (i) os << "\n";
        os << b.kind << " " << quoted(b.name) << " {\n";
        for (const auto& e : b.entries) {
            os << "  " << e.key;
            for (int k : e.indices) os << "[" << k << "]";
            if (e.arg) os << "(" << quoted(*e.arg) << ")";
            os << " = ";
            for (std::size_t k = 0; k < e.values.size(); ++k) os << (k ? ", " : "") << serialize(e.values[k]);
            os << ";\n";
        }
        os << "}\n";
    }
    return os.str();
}

// ---- evaluation ----

namespace {

Rational rational_value(const Expr& e);

Rational rational_factor(const Factor& f)
{
    Rational base;
    if (f.kind == Factor::Kind::number) {
        base = f.value;
    } else if (f.kind == Factor::Kind::group) {
        base = rational_value(*f.group);
    } else {
        throw ParseError(f.span, {"a number"}, serialize_factor(f));
    }
    Rational out = 1;
    for (int k = 0; k < f.power; ++k) out *= base;
    return out;
}

Rational rational_value(const Expr& e)
{
    Rational out = 0;
    for (const auto& t : e.terms) {
        Rational p = t.sign;
        for (const auto& f : t.factors) p *= rational_factor(f);
        out += p;
    }
    return out;
}

Poly eval_factor(const FreeAlgebra& alg, const Factor& f)
{
    Poly base;
    switch (f.kind) {
    case Factor::Kind::number: base = alg.constant(f.value); break;
    case Factor::Kind::name: {
        auto i = alg.find(f.name);
        if (!i) throw UnresolvedReference(f.span, f.name);
        base = alg.var(*i);
        break;
    }
    case Factor::Kind::symbol: {
        auto i = alg.find("@" + f.name);
        if (!i) throw UnresolvedReference(f.span, "@" + f.name);
        base = alg.var(*i);
        break;
    }
    case Factor::Kind::group: base = evaluate(alg, *f.group); break;
    }
    if (f.power < 0) throw ParseError(f.span, {"a non-negative exponent"}, std::to_string(f.power));
    return alg.pow(base, static_cast<unsigned>(f.power));
}

}  // namespace

Poly evaluate(const FreeAlgebra& alg, const Expr& e)
{
    Poly out;
    for (const auto& t : e.terms) {
        Poly p = alg.constant(t.sign);
        for (const auto& f : t.factors) p = alg.mul(p, eval_factor(alg, f));
        out += p;
    }
    return out;
}

Rational constant(const Expr& e) { return rational_value(e); }

int integer(const Expr& e)
{
    Rational q = rational_value(e);
    if (q.get_den() != 1 || !q.get_num().fits_sint_p()) throw ParseError(e.span, {"an integer"}, to_string(q));
    return static_cast<int>(q.get_num().get_si());
}

// ---- builders ----

namespace {

const Block& algebra_of(const Manifest& m, const Block& b)
{
    const Block* a = referenced_algebra(m, b, true);
    return *a;
}

std::vector<Generator> generators(const Block& b)
{
    std::vector<Generator> gens;
    for (const auto* e : b.all("gen")) {
        Generator g{*e->arg, integer(e->values[0]), 0, 1};
        if (e->values.size() > 1) g.weight = integer(e->values[1]);
        if (e->values.size() > 2) throw ParseError(e->values[2].span, {"';'"}, "a third value");
        gens.push_back(g);
    }
    return gens;
}

std::vector<std::pair<std::size_t, const Expr*>> indexed(const Block& b, const std::string& prefix)
{
    std::vector<std::pair<std::size_t, const Expr*>> out;
    std::smatch m;
    for (const auto& e : b.entries)
        if (std::regex_match(e.key, m, indexed_key) && m[1] == prefix)
            out.emplace_back(std::stoul(m[2].str()), &e.values[0]);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

int shift_of(const Block& b)
{
    const Entry* s = b.find("shift");
    return s ? integer(s->values[0]) : 0;
}

}  // namespace

bool has_eps(const Block& b) { return !b.all("eps").empty(); }

FreeCDGA build_cdga(const Manifest&, const Block& b)
{
    if (b.kind != "algebra") throw Error(b.name + " is not an algebra block");
    auto gens = generators(b);
    FreeAlgebra alg(gens);
    std::map<std::string, Poly> d;
    for (const auto* e : b.all("d")) d[*e->arg] = evaluate(alg, e->values[0]);
    std::set<std::string> base;
    if (const Entry* e = b.find("base"))
        for (const auto& v : e->values) {
            auto n = v.as_name();
            if (!n) throw ParseError(v.span, {"a generator name"}, serialize(v));
            base.insert(*n);
        }
    return FreeCDGA::make(gens, d, base);
}

MixedAlgebra build_mixed_algebra(const Manifest& m, const Block& b)
{
    FreeCDGA c = build_cdga(m, b);
    std::vector<Poly> eps(c.alg.ngens());
    for (const auto* e : b.all("eps")) eps[c.alg.index(*e->arg)] = evaluate(c.alg, e->values[0]);
    return {c.alg, c.d, eps, c.size_homogeneous};
}

LieAlgebra build_lie(const Block& b)
{
    LieAlgebra g;
    const Entry* preset = b.find("preset");
    const Entry* dim = b.find("dim");
    std::optional<std::string> which = preset ? preset->values[0].as_name() : std::nullopt;
    if (preset && !which) throw ParseError(preset->values[0].span, {"sl2", "nonabelian2", "abelian"}, "an expression");
    if (which == "sl2") {
        g = LieAlgebra::sl2();
    } else if (which == "nonabelian2") {
        g = LieAlgebra::nonabelian2();
    } else if (!which || which == "abelian") {
        if (!dim) throw UnresolvedReference(b.span, "dim in lie block " + b.name);
        int n = integer(dim->values[0]);
        if (n < 0) throw ParseError(dim->values[0].span, {"a non-negative dimension"}, std::to_string(n));
        g = LieAlgebra::zero(static_cast<std::size_t>(n));
    } else {
        throw ParseError(preset->values[0].span, {"sl2", "nonabelian2", "abelian"}, *which);
    }
    if (dim && static_cast<std::size_t>(integer(dim->values[0])) != g.dim)
        throw ParseError(dim->values[0].span, {std::to_string(g.dim)}, serialize(dim->values[0]));
    if (const Entry* names = b.find("names")) {
        if (names->values.size() != g.dim) throw ParseError(names->span, {std::to_string(g.dim) + " names"}, std::to_string(names->values.size()));
        for (std::size_t i = 0; i < g.dim; ++i) {
            auto n = names->values[i].as_name();
            if (!n) throw ParseError(names->values[i].span, {"a name"}, serialize(names->values[i]));
            g.names[i] = *n;
        }
    }
    for (const auto* e : b.all("bracket")) {
        const int i = e->indices[0], j = e->indices[1];
        if (i < 1 || j < 1 || static_cast<std::size_t>(i) > g.dim || static_cast<std::size_t>(j) > g.dim || i == j)
            throw ParseError(e->span, {"distinct indices in 1.." + std::to_string(g.dim)}, e->canonical_key());
        if (e->values.size() != g.dim)
            throw ParseError(e->span, {std::to_string(g.dim) + " structure constants"}, std::to_string(e->values.size()));
        std::vector<Rational> v;
        for (const auto& x : e->values) v.push_back(constant(x));
        g.set(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), v);
    }
    return g;
}

PoissonData build_poisson(const Manifest& m, const Block& b)
{
    FreeCDGA base = build_cdga(m, algebra_of(m, b));
    const int n = shift_of(b);
    Polyvectors pol(base, n + 1);
    MaurerCartanTower tower;
    tower.n = n;
    for (const auto& [i, e] : indexed(b, "p")) {
        if (tower.components.size() <= i) tower.components.resize(i + 1);
        tower.components[i] = evaluate(pol.alg(), *e);
    }
    if (const Entry* bound = b.find("bound")) tower.bound = integer(bound->values[0]);
    return {base, n, pol, tower};
}

FormData build_form(const Manifest& m, const Block& b)
{
    FreeCDGA base = build_cdga(m, algebra_of(m, b));
    MixedAlgebra dr = de_rham(base);
    ClosedFormTower tower;
    tower.p = 2;
    tower.n = shift_of(b);
    for (const auto& [j, e] : indexed(b, "w")) tower.components[static_cast<int>(j)] = evaluate(dr.alg, *e);
    return {base, dr, tower};
}

IdealData build_ideal(const Manifest& m, const Block& b)
{
    IdealData out{build_cdga(m, algebra_of(m, b)), {}, {}};
    std::map<std::size_t, unsigned> powers;
    for (const auto& [i, e] : indexed(b, "power")) {
        int k = integer(*e);
        if (k < 1) throw ParseError(e->span, {"a positive power"}, std::to_string(k));
        powers[i] = static_cast<unsigned>(k);
    }
    for (const auto& [i, e] : indexed(b, "f")) {
        out.generators.push_back(evaluate(out.base.alg, *e));
        out.powers.push_back(powers.count(i) ? powers[i] : 1U);
    }
    return out;
}

GradedMixedComplex build_mixed(const Block& b)
{
    std::vector<BasisElement> basis;
    std::vector<Generator> gens;
    for (const auto* e : b.all("elem")) {
        if (e->values.size() != 2) throw ParseError(e->span, {"weight, degree"}, std::to_string(e->values.size()) + " values");
        basis.push_back({*e->arg, integer(e->values[0]), integer(e->values[1])});
        gens.push_back({*e->arg, 0, 0, 1});
    }
    FreeAlgebra alg(gens);
    auto matrix = [&](const std::string& key) {
        std::vector<SparseMatrix::Triplet> t;
        for (const auto* e : b.all(key)) {
            const auto col = alg.index(*e->arg);
            const Poly image = evaluate(alg, e->values[0]);
            for (const auto& [m, c] : image.terms()) {
                auto nz = std::count_if(m.begin(), m.end(), [](int x) { return x != 0; });
                auto row = std::find(m.begin(), m.end(), 1);
                if (nz != 1 || row == m.end()) throw ParseError(e->values[0].span, {"a linear combination of elements"}, serialize(e->values[0]));
                t.push_back({static_cast<std::size_t>(row - m.begin()), col, c});
            }
        }
        return SparseMatrix(basis.size(), basis.size(), t);
    };
    return {basis, matrix("d"), matrix("eps")};
}

Block mixed_block(const GradedMixedComplex& e, const std::string& name)
{
    Block b;
    b.kind = "mixed";
    b.name = name;
    auto number = [](const Rational& q) {
        Expr x;
        Term t;
        t.sign = q < 0 ? -1 : 1;
        Factor f;
        f.value = abs(q);
        t.factors.push_back(f);
        x.terms.push_back(t);
        return x;
    };
    for (const auto& el : e.basis()) b.entries.push_back({"elem", {}, el.label, {number(el.weight), number(el.degree)}, {}});
    auto images = [&](const std::string& key, const SparseMatrix& m) {
        std::vector<std::vector<std::pair<std::size_t, Rational>>> cols(e.dim());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (const auto& [j, v] : m.row(i).entries()) cols[j].emplace_back(i, v);
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].empty()) continue;
            Expr x;
            for (const auto& [i, v] : cols[j]) {
                Term t;
                t.sign = v < 0 ? -1 : 1;
                if (abs(v) != 1) {
                    Factor f;
                    f.value = abs(v);
                    t.factors.push_back(f);
                }
                Factor f;
                f.kind = Factor::Kind::name;
                f.name = e.basis()[i].label;
                t.factors.push_back(f);
                x.terms.push_back(t);
            }
            b.entries.push_back({key, {}, e.basis()[j].label, {x}, {}});
        }
    };
    images("d", e.d());
    images("eps", e.eps());
    return b;
}

}  // namespace pw::dsl
