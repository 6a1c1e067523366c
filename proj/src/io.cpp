#include "formality/io.hpp"

#include "formality/finite_cbba.hpp"
#include "formality/free_cbba.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace formality {

namespace {

struct Cursor {
    const std::string& line;
    std::size_t pos = 0;
    std::string where;  // "source:line"

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error(ErrorKind::Syntax, where + ":" + std::to_string(pos + 1) + ": " + msg);
    }
    void skip_ws()
    {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
            ++pos;
    }
    bool at_end()
    {
        skip_ws();
        return pos >= line.size();
    }
    char peek()
    {
        skip_ws();
        return pos < line.size() ? line[pos] : '\0';
    }
    bool accept(char c)
    {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }
    static bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }
    std::string keyword()
    {
        skip_ws();
        std::size_t start = pos;
        while (pos < line.size() && (std::isalpha(static_cast<unsigned char>(line[pos])) || line[pos] == '-'))
            ++pos;
        if (pos == start)
            fail("expected a keyword");
        return line.substr(start, pos - start);
    }
    std::string word()
    {
        skip_ws();
        std::size_t start = pos;
        if (pos >= line.size() || !name_start(line[pos]))
            fail("expected a name");
        while (pos < line.size() && name_char(line[pos]))
            ++pos;
        return line.substr(start, pos - start);
    }
    long integer()
    {
        skip_ws();
        std::size_t start = pos;
        if (pos < line.size() && (line[pos] == '-' || line[pos] == '+'))
            ++pos;
        std::size_t digits = pos;
        while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos])))
            ++pos;
        if (pos == digits)
            fail("expected an integer");
        return std::stol(line.substr(start, pos - start));
    }
    mpq_class rational()
    {
        skip_ws();
        std::size_t start = pos;
        while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos])))
            ++pos;
        if (pos == start)
            fail("expected a number");
        std::string num = line.substr(start, pos - start);
        if (pos < line.size() && line[pos] == '/') {
            ++pos;
            std::size_t ds = pos;
            while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos])))
                ++pos;
            if (pos == ds)
                fail("expected a denominator");
            std::string den = line.substr(ds, pos - ds);
            mpz_class dz(den);
            if (dz == 0)
                fail("zero denominator");
            mpq_class q{mpz_class(num), dz};
            q.canonicalize();
            return q;
        }
        return mpq_class(mpz_class(num));
    }
};

using Resolver = std::function<uint32_t(const std::string&, Cursor&)>;

Poly parse_poly(Cursor& c, const Resolver& resolve, bool scalar_only);

// factor := number | 'i' | name | '(' poly ')'
void parse_factor(Cursor& c, const Resolver& resolve, bool scalar_only, Term& t)
{
    char ch = c.peek();
    if (std::isdigit(static_cast<unsigned char>(ch))) {
        t.coef *= Scalar(c.rational());
    } else if (ch == '(') {
        ++c.pos;
        Poly inner = parse_poly(c, resolve, true);
        c.expect(')');
        Scalar s;
        for (const auto& it : inner)
            s += it.coef;
        t.coef *= s;
    } else if (Cursor::name_start(ch)) {
        std::size_t at = c.pos;
        std::string w = c.word();
        if (w == "i") {
            t.coef *= Scalar::i();
        } else {
            if (scalar_only) {
                c.pos = at;
                c.fail("only numbers and i are allowed inside parentheses");
            }
            c.pos = at;
            uint32_t idx = resolve(w, c);
            c.pos = at + w.size();
            t.factors.push_back(idx);
        }
    } else {
        c.fail("expected a number, i, a name or '('");
    }
}

Poly parse_poly(Cursor& c, const Resolver& resolve, bool scalar_only)
{
    Poly out;
    bool first = true;
    while (true) {
        Term t{Scalar(1), {}};
        if (c.accept('-'))
            t.coef = -t.coef;
        else if (!c.accept('+') && !first)
            break;
        parse_factor(c, resolve, scalar_only, t);
        while (c.accept('*'))
            parse_factor(c, resolve, scalar_only, t);
        if (!t.coef.is_zero())
            out.push_back(std::move(t));
        first = false;
        char nx = c.peek();
        if (nx != '+' && nx != '-')
            break;
    }
    return out;
}

}  // namespace

Scalar parse_scalar(const std::string& text)
{
    std::string where = "<scalar>";
    Cursor c{text, 0, where};
    Resolver none = [](const std::string&, Cursor& cur) -> uint32_t { cur.fail("names are not allowed in a scalar"); };
    Poly p = parse_poly(c, none, true);
    if (!c.at_end())
        c.fail("trailing input");
    Scalar s;
    for (const auto& t : p)
        s += t.coef;
    return s;
}

Element parse_element(const Bicomplex& a, const std::string& text)
{
    const Presentation& pres = a.presentation();
    std::string where = "<element>";
    Cursor c{text, 0, where};
    Resolver resolve = [&](const std::string& name, Cursor& cur) -> uint32_t {
        auto idx = pres.index_of(name);
        if (!idx)
            throw Error(ErrorKind::UnknownReference, where + ":" + std::to_string(cur.pos + 1) + ": unknown name " + name, name);
        return *idx;
    };
    Poly p = parse_poly(c, resolve, false);
    if (!c.at_end())
        c.fail("trailing input");
    const auto* free = dynamic_cast<const FreeCbba*>(&a);
    auto atom = [&](uint32_t s) {
        return free ? free->generator(s) : dynamic_cast<const FiniteCbba&>(a).symbol(s);
    };
    Element out;
    for (const auto& t : p) {
        Element m = t.factors.size() == 1 ? atom(t.factors[0]) : a.unit();
        for (std::size_t k = 0; t.factors.size() > 1 && k < t.factors.size(); ++k)
            m = multiply(a, m, atom(t.factors[k]));
        out.axpy(t.coef, m);
    }
    return out;
}

Presentation parse_presentation(const std::string& text, const std::string& source)
{
    Presentation pres;
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string l;
        while (std::getline(in, l)) {
            if (auto h = l.find('#'); h != std::string::npos)
                l.erase(h);
            lines.push_back(l);
        }
    }
    std::optional<AlgebraKind> declared_kind;
    bool seen_name = false;

    // Pass 1: scalar settings and declarations, so that references may point forward.
    for (std::size_t n = 0; n < lines.size(); ++n) {
        Cursor c{lines[n], 0, source + ":" + std::to_string(n + 1)};
        if (c.at_end())
            continue;
        std::string key = c.keyword();
        if (key == "name") {
            if (seen_name)
                c.fail("duplicate 'name'");
            c.skip_ws();
            pres.name = lines[n].substr(c.pos);
            while (!pres.name.empty() && std::isspace(static_cast<unsigned char>(pres.name.back())))
                pres.name.pop_back();
            if (pres.name.empty())
                c.fail("empty name");
            seen_name = true;
            continue;
        } else if (key == "kind") {
            std::string k = c.word();
            AlgebraKind kind;
            if (k == "free")
                kind = AlgebraKind::Free;
            else if (k == "finite")
                kind = AlgebraKind::Finite;
            else
                c.fail("kind must be 'free' or 'finite'");
            if (declared_kind && *declared_kind != kind)
                c.fail("conflicting kind");
            declared_kind = kind;
        } else if (key == "truncation" || key == "sd-target") {
            auto& slot = key == "truncation" ? pres.truncation : pres.sd_target;
            if (slot)
                c.fail("duplicate '" + key + "'");
            long v = c.integer();
            if (v < 0)
                c.fail(key + " must be non-negative");
            slot = static_cast<int>(v);
        } else if (key == "generator" || key == "basis") {
            AlgebraKind kind = key == "generator" ? AlgebraKind::Free : AlgebraKind::Finite;
            if (declared_kind && *declared_kind != kind)
                c.fail("'" + key + "' does not match the algebra kind");
            declared_kind = kind;
            std::size_t at = c.pos;
            std::string nm = c.word();
            if (nm == "i") {
                c.pos = at;
                c.fail("'i' is reserved for the imaginary unit");
            }
            if (c.word() != "bidegree")
                c.fail("expected 'bidegree'");
            c.expect('(');
            long p = c.integer();
            c.expect(',');
            long q = c.integer();
            c.expect(')');
            if (pres.index_of(nm)) {
                c.pos = at;
                throw Error(ErrorKind::DuplicateName, c.where + ":" + std::to_string(at + 1) + ": '" + nm + "' declared twice", nm);
            }
            pres.add_symbol(nm, {static_cast<int>(p), static_cast<int>(q)});
        } else if (key == "del" || key == "delbar" || key == "mul") {
            continue;
        } else {
            c.pos = 0;
            c.fail("unknown key '" + key + "'");
        }
        if (!c.at_end())
            c.fail("trailing input");
    }
    pres.kind = declared_kind.value_or(AlgebraKind::Free);

    Resolver resolve = [&](const std::string& w, Cursor& c) -> uint32_t {
        auto idx = pres.index_of(w);
        if (!idx)
            throw Error(ErrorKind::UnknownReference,
                        c.where + ":" + std::to_string(c.pos + 1) + ": unknown name '" + w + "'", w);
        return *idx;
    };

    // Pass 2: assignments.
    for (std::size_t n = 0; n < lines.size(); ++n) {
        Cursor c{lines[n], 0, source + ":" + std::to_string(n + 1)};
        if (c.at_end())
            continue;
        std::string key = c.keyword();
        if (key != "del" && key != "delbar" && key != "mul")
            continue;
        uint32_t a = resolve(c.word(), c);
        std::optional<uint32_t> b;
        if (key == "mul")
            b = resolve(c.word(), c);
        c.expect('=');
        Poly poly = parse_poly(c, resolve, false);
        if (!c.at_end())
            c.fail("unexpected input after polynomial");
        std::string what = key + " " + pres.symbols[a].name + (b ? " " + pres.symbols[*b].name : "");
        bool dup;
        if (key == "mul")
            dup = !pres.mul.emplace(std::make_pair(a, *b), std::move(poly)).second;
        else
            dup = !(key == "del" ? pres.del : pres.delbar).emplace(a, std::move(poly)).second;
        if (dup)
            throw Error(ErrorKind::DuplicateName, c.where + ": '" + what + "' assigned twice", what);
    }
    return pres;
}

Presentation parse_presentation_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Syntax, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_presentation(ss.str(), path);
}

std::string poly_to_string(const Presentation& p, const Poly& poly)
{
    std::string out;
    for (const auto& t : poly) {
        if (t.coef.is_zero())
            continue;
        Scalar c = t.coef;
        bool neg = sgn(c.re()) < 0 || (sgn(c.re()) == 0 && sgn(c.im()) < 0);
        if (neg)
            c = -c;
        std::string names;
        for (uint32_t f : t.factors)
            names += (names.empty() ? "" : "*") + p.symbols.at(f).name;
        std::string coef;
        if (!c.is_one() || names.empty()) {
            coef = c.to_string();
            if (!c.is_real() && sgn(c.re()) != 0)
                coef = "(" + coef + ")";
        }
        std::string term = names.empty() ? coef : coef.empty() ? names : coef + "*" + names;
        if (out.empty())
            out = neg ? "-" + term : term;
        else
            out += (neg ? " - " : " + ") + term;
    }
    return out.empty() ? "0" : out;
}

std::string serialize(const Presentation& p)
{
    std::ostringstream out;
    if (!p.name.empty())
        out << "name " << p.name << "\n";
    out << "kind " << (p.kind == AlgebraKind::Free ? "free" : "finite") << "\n";
    if (p.truncation)
        out << "truncation " << *p.truncation << "\n";
    if (p.sd_target)
        out << "sd-target " << *p.sd_target << "\n";
    const char* decl = p.kind == AlgebraKind::Free ? "generator" : "basis";
    for (const auto& s : p.symbols)
        out << decl << " " << s.name << " bidegree (" << s.bd.p << "," << s.bd.q << ")\n";
    for (const auto& [g, poly] : p.del)
        out << "del " << p.symbols[g].name << " = " << poly_to_string(p, poly) << "\n";
    for (const auto& [g, poly] : p.delbar)
        out << "delbar " << p.symbols[g].name << " = " << poly_to_string(p, poly) << "\n";
    for (const auto& [key, poly] : p.mul)
        out << "mul " << p.symbols[key.first].name << " " << p.symbols[key.second].name << " = " << poly_to_string(p, poly)
            << "\n";
    return out.str();
}

}  // namespace formality
