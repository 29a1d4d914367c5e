#pragma once
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dgtot/complex.hpp"
#include "dgtot/dg.hpp"

namespace dgtot {

struct ParseError : error {
    int line, col;
    ParseError(int l, int c, const std::string& msg)
        : error("parse error at " + std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
          line(l),
          col(c) {}
};

namespace doc {

/// One parsed term: sign · (num/den) · Π var^e.  Exponents by variable name;
/// semantic degree checks happen later against the declared ring.
struct Term {
    bool negative = false;
    long long num = 1, den = 1;
    std::vector<std::pair<std::string, int>> factors;
};

using PolyText = std::vector<Term>;  // empty = the literal 0

struct ModElemTerm {
    Term coeff;
    std::string label;
};

struct DgModuleDoc {
    std::string name;
    std::vector<std::pair<std::string, int>> basis;  // label : degree
    std::vector<std::pair<std::string, std::vector<ModElemTerm>>> diffs;
};

struct ComplexDoc {
    std::string name;
    std::vector<std::pair<int, std::vector<int>>> modules;  // position, twists
    std::vector<std::vector<std::string>> labels;           // optional, per module
    std::vector<std::pair<int, std::vector<std::vector<PolyText>>>> diffs;
};

struct MorphismDoc {
    std::string name, source, target;
    std::vector<std::pair<int, std::vector<std::vector<PolyText>>>> components;
};

struct Document {
    FieldSpec field;
    std::vector<std::string> vars;
    std::variant<DgModuleDoc, ComplexDoc, MorphismDoc> body;

    PolyRing ring() const { return PolyRing{field, vars}; }
    const char* kind() const {
        if (std::holds_alternative<DgModuleDoc>(body)) return "dgmodule";
        if (std::holds_alternative<ComplexDoc>(body)) return "complex";
        return "morphism";
    }
};

}  // namespace doc

namespace detail_parse {

struct Token {
    enum Kind { ident, integer, punct, newline, end } kind;
    std::string text;
    long long value = 0;
    int line = 0, col = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) {
        int line = 1, col = 1;
        size_t i = 0;
        auto push = [&](Token t) { toks_.push_back(std::move(t)); };
        bool line_has_content = false;
        while (i < src.size()) {
            char c = src[i];
            if (c == '\n') {
                if (line_has_content) push({Token::newline, "\\n", 0, line, col});
                line_has_content = false;
                ++line;
                col = 1;
                ++i;
                continue;
            }
            if (c == '#') {  // comment to end of line
                while (i < src.size() && src[i] != '\n') ++i;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                ++col;
                continue;
            }
            line_has_content = true;
            int tcol = col;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string s;
                while (i < src.size() &&
                       (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                    s += src[i++];
                    ++col;
                }
                push({Token::ident, s, 0, line, tcol});
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                long long v = 0;
                std::string s;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                    v = v * 10 + (src[i] - '0');
                    s += src[i++];
                    ++col;
                }
                push({Token::integer, s, v, line, tcol});
                continue;
            }
            static const std::string punct = "[](),;:=^*+-/";
            if (punct.find(c) != std::string::npos) {
                push({Token::punct, std::string(1, c), 0, line, tcol});
                ++i;
                ++col;
                continue;
            }
            throw ParseError(line, tcol, std::string("unexpected character '") + c + "'");
        }
        if (line_has_content) push({Token::newline, "\\n", 0, line, col});
        push({Token::end, "", 0, line, col});
    }

    const Token& peek(int ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    bool accept_punct(const std::string& p) {
        if (peek().kind == Token::punct && peek().text == p) {
            next();
            return true;
        }
        return false;
    }
    bool accept_ident(const std::string& s) {
        if (peek().kind == Token::ident && peek().text == s) {
            next();
            return true;
        }
        return false;
    }
    bool accept_newline() {
        if (peek().kind == Token::newline) {
            next();
            return true;
        }
        return false;
    }
    void skip_newlines() {
        while (accept_newline()) {
        }
    }
    Token expect(Token::Kind k, const std::string& what) {
        if (peek().kind != k) throw ParseError(peek().line, peek().col, "expected " + what);
        return next();
    }
    void expect_punct(const std::string& p) {
        if (!accept_punct(p))
            throw ParseError(peek().line, peek().col, "expected '" + p + "'");
    }
    void expect_newline() {
        if (!accept_newline() && peek().kind != Token::end)
            throw ParseError(peek().line, peek().col, "expected end of line");
    }
    long long expect_int() {
        bool neg = false;
        if (peek().kind == Token::punct && peek().text == "-") {
            next();
            neg = true;
        }
        auto t = expect(Token::integer, "an integer");
        return neg ? -t.value : t.value;
    }

  private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
};

// poly term: [sign] [coeff] ('*'? factor)*; stops at +,-,',',';',']','\n', '='
inline doc::Term parse_term(Lexer& lx, bool leading_sign_consumed, bool negative) {
    doc::Term t;
    t.negative = negative;
    if (!leading_sign_consumed) {
        if (lx.accept_punct("-")) t.negative = !t.negative;
        else lx.accept_punct("+");
    }
    bool saw_anything = false;
    if (lx.peek().kind == Token::integer) {
        t.num = lx.next().value;
        saw_anything = true;
        if (lx.accept_punct("/")) {
            auto d = lx.expect(Token::integer, "a denominator");
            t.den = d.value;
            if (t.den == 0) throw ParseError(d.line, d.col, "zero denominator");
        }
    }
    while (true) {
        if (lx.accept_punct("*")) {
            // explicit separator; a factor must follow
        }
        if (lx.peek().kind != Token::ident) break;
        std::string v = lx.next().text;
        int e = 1;
        if (lx.accept_punct("^")) {
            auto t2 = lx.expect(Token::integer, "an exponent");
            e = static_cast<int>(t2.value);
        }
        t.factors.push_back({v, e});
        saw_anything = true;
    }
    if (!saw_anything)
        throw ParseError(lx.peek().line, lx.peek().col, "expected a polynomial term");
    return t;
}

// full poly: term (('+'|'-') term)*
inline doc::PolyText parse_poly(Lexer& lx) {
    doc::PolyText p;
    // literal 0
    if (lx.peek().kind == Token::integer && lx.peek().value == 0) {
        lx.next();
        return p;
    }
    p.push_back(parse_term(lx, false, false));
    while (true) {
        if (lx.accept_punct("+")) p.push_back(parse_term(lx, true, false));
        else if (lx.accept_punct("-")) p.push_back(parse_term(lx, true, true));
        else break;
    }
    return p;
}

inline std::vector<std::vector<doc::PolyText>> parse_matrix(Lexer& lx) {
    lx.expect_punct("[");
    std::vector<std::vector<doc::PolyText>> rows;
    rows.push_back({});
    while (true) {
        rows.back().push_back(parse_poly(lx));
        if (lx.accept_punct(",")) continue;
        if (lx.accept_punct(";")) {
            rows.push_back({});
            continue;
        }
        lx.expect_punct("]");
        break;
    }
    return rows;
}

}  // namespace detail_parse

/// Parses one document (ring declaration plus a dgmodule, complex, or
/// morphism body).  Throws ParseError with position on bad syntax.
inline doc::Document parse_document(const std::string& text) {
    using namespace detail_parse;
    Lexer lx(text);
    doc::Document out;

    lx.skip_newlines();
    if (!lx.accept_ident("ring"))
        throw ParseError(lx.peek().line, lx.peek().col, "expected 'ring'");
    auto f = lx.expect(Token::ident, "a field (Q or F<p>)");
    if (f.text == "Q") {
        out.field = FieldSpec{0};
    } else if (f.text.size() > 1 && f.text[0] == 'F') {
        long long p = 0;
        for (size_t i = 1; i < f.text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(f.text[i])))
                throw ParseError(f.line, f.col, "bad field " + f.text);
            p = p * 10 + (f.text[i] - '0');
        }
        if (!is_prime(p) || p >= (1LL << 31))
            throw ParseError(f.line, f.col, "field characteristic must be a prime < 2^31");
        out.field = FieldSpec{static_cast<std::uint32_t>(p)};
    } else {
        throw ParseError(f.line, f.col, "expected Q or F<p>");
    }
    lx.expect_punct("[");
    out.vars.push_back(lx.expect(Token::ident, "a variable name").text);
    while (lx.accept_punct(",")) out.vars.push_back(lx.expect(Token::ident, "a variable").text);
    lx.expect_punct("]");
    lx.expect_newline();
    lx.skip_newlines();

    auto kind = lx.expect(Token::ident, "dgmodule, complex, or morphism");
    if (kind.text == "dgmodule") {
        doc::DgModuleDoc d;
        d.name = lx.expect(Token::ident, "a module name").text;
        lx.expect_newline();
        lx.skip_newlines();
        if (!lx.accept_ident("basis"))
            throw ParseError(lx.peek().line, lx.peek().col, "expected 'basis'");
        while (lx.peek().kind == Token::ident) {
            std::string label = lx.next().text;
            lx.expect_punct(":");
            int deg = static_cast<int>(lx.expect_int());
            d.basis.push_back({label, deg});
        }
        if (d.basis.empty())
            throw ParseError(lx.peek().line, lx.peek().col, "empty basis");
        lx.expect_newline();
        lx.skip_newlines();
        while (lx.accept_ident("d")) {
            std::string label = lx.expect(Token::ident, "a basis label").text;
            lx.expect_punct("=");
            std::vector<doc::ModElemTerm> elem;
            if (lx.peek().kind == Token::integer && lx.peek().value == 0) {
                lx.next();
            } else {
                bool first = true;
                while (true) {
                    bool neg = false;
                    if (!first) {
                        if (lx.accept_punct("+")) neg = false;
                        else if (lx.accept_punct("-")) neg = true;
                        else break;
                    }
                    doc::Term t = parse_term(lx, !first, neg);
                    if (t.factors.empty())
                        throw ParseError(lx.peek().line, lx.peek().col,
                                         "differential term needs a basis label");
                    doc::ModElemTerm mt;
                    mt.label = t.factors.back().first;
                    if (t.factors.back().second != 1)
                        throw ParseError(lx.peek().line, lx.peek().col,
                                         "basis label cannot carry an exponent");
                    t.factors.pop_back();
                    mt.coeff = t;
                    elem.push_back(std::move(mt));
                    first = false;
                }
            }
            d.diffs.push_back({label, std::move(elem)});
            lx.expect_newline();
            lx.skip_newlines();
        }
        lx.skip_newlines();
        if (lx.peek().kind != Token::end)
            throw ParseError(lx.peek().line, lx.peek().col, "unexpected trailing input");
        out.body = std::move(d);
    } else if (kind.text == "complex") {
        doc::ComplexDoc d;
        d.name = lx.expect(Token::ident, "a complex name").text;
        lx.expect_newline();
        lx.skip_newlines();
        while (lx.accept_ident("module")) {
            int pos = static_cast<int>(lx.expect_int());
            if (!lx.accept_ident("twists"))
                throw ParseError(lx.peek().line, lx.peek().col, "expected 'twists'");
            lx.expect_punct("[");
            std::vector<int> tw;
            tw.push_back(static_cast<int>(lx.expect_int()));
            while (lx.accept_punct(",")) tw.push_back(static_cast<int>(lx.expect_int()));
            lx.expect_punct("]");
            std::vector<std::string> labels;
            if (lx.accept_ident("labels")) {
                lx.expect_punct("[");
                labels.push_back(lx.expect(Token::ident, "a label").text);
                while (lx.accept_punct(","))
                    labels.push_back(lx.expect(Token::ident, "a label").text);
                lx.expect_punct("]");
                if (labels.size() != tw.size())
                    throw ParseError(lx.peek().line, lx.peek().col,
                                     "labels list must match the twist count");
            }
            d.modules.push_back({pos, std::move(tw)});
            d.labels.push_back(std::move(labels));
            lx.expect_newline();
            lx.skip_newlines();
        }
        if (d.modules.empty())
            throw ParseError(lx.peek().line, lx.peek().col, "complex needs at least one module");
        while (lx.accept_ident("d")) {
            int pos = static_cast<int>(lx.expect_int());
            lx.expect_punct("=");
            d.diffs.push_back({pos, detail_parse::parse_matrix(lx)});
            lx.expect_newline();
            lx.skip_newlines();
        }
        lx.skip_newlines();
        if (lx.peek().kind != Token::end)
            throw ParseError(lx.peek().line, lx.peek().col, "unexpected trailing input");
        out.body = std::move(d);
    } else if (kind.text == "morphism") {
        doc::MorphismDoc d;
        d.name = lx.expect(Token::ident, "a morphism name").text;
        if (!lx.accept_ident("from"))
            throw ParseError(lx.peek().line, lx.peek().col, "expected 'from'");
        d.source = lx.expect(Token::ident, "a source name").text;
        if (!lx.accept_ident("to"))
            throw ParseError(lx.peek().line, lx.peek().col, "expected 'to'");
        d.target = lx.expect(Token::ident, "a target name").text;
        lx.expect_newline();
        lx.skip_newlines();
        while (lx.accept_ident("mu")) {
            int pos = static_cast<int>(lx.expect_int());
            lx.expect_punct("=");
            d.components.push_back({pos, detail_parse::parse_matrix(lx)});
            lx.expect_newline();
            lx.skip_newlines();
        }
        out.body = std::move(d);
    } else {
        throw ParseError(kind.line, kind.col, "expected dgmodule, complex, or morphism");
    }
    return out;
}

// ---- semantic construction ------------------------------------------------

namespace detail_parse {

template <class K>
K scalar_from(const FieldSpec& fs, long long num, long long den);

template <>
inline Rat scalar_from<Rat>(const FieldSpec&, long long num, long long den) {
    return Rat(num, den);
}
template <>
inline Fp scalar_from<Fp>(const FieldSpec& fs, long long num, long long den) {
    Fp d(den, fs.characteristic);
    if (d.is_zero()) throw error("denominator vanishes in F_" + std::to_string(fs.characteristic));
    return Fp(num, fs.characteristic) / d;
}

template <class K>
Poly<K> term_to_poly(const doc::Term& t, const PolyRing& ring) {
    Monomial m(ring.nvars(), 0);
    for (auto& [v, e] : t.factors) {
        auto it = std::find(ring.vars.begin(), ring.vars.end(), v);
        if (it == ring.vars.end()) throw error("unknown variable " + v);
        m[it - ring.vars.begin()] += e;
    }
    K c = scalar_from<K>(ring.field, t.negative ? -t.num : t.num, t.den);
    return Poly<K>::monomial(ring.nvars(), std::move(m), std::move(c));
}

template <class K>
Poly<K> polytext_to_poly(const doc::PolyText& p, const PolyRing& ring) {
    Poly<K> out(ring.nvars());
    for (auto& t : p) out += term_to_poly<K>(t, ring);
    return out;
}

}  // namespace detail_parse

/// Builds the semifree DG module from a parsed document, enforcing degree
/// homogeneity: the coefficient on e_i in ∂e_j must have degree
/// deg(e_j) - deg(e_i) - 1.
template <class K>
SemifreeDG<K> build_dgmodule(const doc::Document& d, SignConvention conv) {
    const auto& body = std::get<doc::DgModuleDoc>(d.body);
    PolyRing ring = d.ring();
    ring.check();
    std::vector<std::string> labels;
    std::vector<int> degrees;
    std::map<std::string, int> index;
    for (auto& [l, deg] : body.basis) {
        if (index.count(l)) throw error("duplicate basis label " + l);
        index[l] = static_cast<int>(labels.size());
        labels.push_back(l);
        degrees.push_back(deg);
    }
    auto m = SemifreeDG<K>::zero_diff(ring, labels, degrees, conv);
    for (auto& [l, elem] : body.diffs) {
        auto jt = index.find(l);
        if (jt == index.end()) throw error("differential of undeclared label " + l);
        int j = jt->second;
        for (auto& term : elem) {
            auto it = index.find(term.label);
            if (it == index.end()) throw error("undeclared basis label " + term.label);
            int i = it->second;
            Poly<K> c = detail_parse::term_to_poly<K>(term.coeff, ring);
            int expected = degrees[j] - degrees[i] - 1;
            auto got = c.homogeneous_degree();
            if (c.is_zero()) continue;
            if (!got || *got != expected)
                throw error("degree mismatch in d " + l + ": coefficient of " + term.label +
                            " has degree " + std::to_string(got ? *got : -1) + ", expected " +
                            std::to_string(expected));
            m.d[i][j] += c;
        }
    }
    // homogeneity was enforced per entry; ∂² = 0 is the validate verb's
    // job, not the parser's
    return m;
}

template <class K>
GradedComplex<K> build_complex(const doc::Document& d) {
    const auto& body = std::get<doc::ComplexDoc>(d.body);
    PolyRing ring = d.ring();
    ring.check();
    GradedComplex<K> x;
    x.ring = ring;
    for (size_t mi = 0; mi < body.modules.size(); ++mi) {
        auto& [pos, tw] = body.modules[mi];
        if (x.modules.count(pos)) throw error("duplicate module position " + std::to_string(pos));
        TwistedFreeModule m;
        m.twists = tw;
        if (mi < body.labels.size()) m.labels = body.labels[mi];
        x.modules[pos] = std::move(m);
    }
    for (auto& [pos, mat] : body.diffs) {
        const TwistedFreeModule* src = x.module(pos);
        const TwistedFreeModule* dst = x.module(pos - 1);
        if (!src || !dst)
            throw error("differential at position " + std::to_string(pos) +
                        " has no matching modules");
        if (static_cast<int>(mat.size()) != dst->rank())
            throw error("differential at position " + std::to_string(pos) + " needs " +
                        std::to_string(dst->rank()) + " rows");
        auto g = GradedMatrix<K>::zero(*src, *dst, ring.nvars());
        for (int r = 0; r < dst->rank(); ++r) {
            if (static_cast<int>(mat[r].size()) != src->rank())
                throw error("row " + std::to_string(r) + " of d " + std::to_string(pos) +
                            " needs " + std::to_string(src->rank()) + " entries");
            for (int c = 0; c < src->rank(); ++c) {
                Poly<K> p = detail_parse::polytext_to_poly<K>(mat[r][c], ring);
                if (p.is_zero()) continue;
                int expected = src->twists[c] - dst->twists[r];
                auto got = p.homogeneous_degree();
                if (!got || *got != expected)
                    throw error("degree mismatch in d " + std::to_string(pos) + " entry (" +
                                std::to_string(r) + "," + std::to_string(c) + "): degree " +
                                std::to_string(got ? *got : -1) + ", expected " +
                                std::to_string(expected));
                g.at(r, c) = std::move(p);
            }
        }
        x.differentials[pos] = std::move(g);
    }
    return x;
}

}  // namespace dgtot
