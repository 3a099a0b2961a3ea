#include "g2gauge/parse.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "g2gauge/errors.hpp"

namespace g2gauge {

namespace {

constexpr long kMaxExponent = 4096;

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Scanner {
    const std::string& s;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit Scanner(const std::string& text) : s(text) {}

    char peek() const { return pos < s.size() ? s[pos] : '\0'; }

    void advance() {
        if (pos >= s.size()) return;
        if (s[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) advance();
    }

    bool eat(char c) {
        if (peek() != c) return false;
        advance();
        return true;
    }

    void expect(char c, const char* where) {
        if (!eat(c)) fail(std::string("expected '") + c + "' " + where);
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line, col); }

    std::string identifier() {
        std::string out;
        if (!ident_start(peek())) fail("expected an identifier");
        while (ident_char(peek())) {
            out += peek();
            advance();
        }
        return out;
    }

    BigInt digits() {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
        std::string out;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            out += peek();
            advance();
        }
        return BigInt(out);
    }

    // ['-'] uint ('/' uint)?
    Rational rational(bool allow_sign) {
        bool neg = false;
        if (allow_sign && (peek() == '-' || peek() == '+')) {
            neg = peek() == '-';
            advance();
        }
        BigInt num = digits();
        BigInt den = 1;
        if (eat('/')) {
            den = digits();
            if (den == 0) fail("zero denominator");
        }
        if (neg) num = -num;
        return Rational(std::move(num), std::move(den));
    }

    long uint_exponent() {
        skip_ws();
        BigInt e = digits();
        if (e > kMaxExponent) fail("exponent too large");
        return static_cast<long>(e);
    }
};

// ---- form language ----

class FormParser {
public:
    FormParser(const std::string& text, const std::vector<std::string>& parameters)
        : sc_(text), params_(parameters) {}

    FormExprAst run() {
        FormExprAst ast;
        ast.parameters = params_;
        ast.terms = sum(true);
        sc_.skip_ws();
        if (sc_.peek() != '\0') sc_.fail("unexpected trailing input");
        return ast;
    }

private:
    Scanner sc_;
    const std::vector<std::string>& params_;

    bool known_symbol(const std::string& name) const {
        if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '7') return true;
        return std::find(params_.begin(), params_.end(), name) != params_.end();
    }

    std::vector<FormExprAst::Term> sum(bool allow_basis) {
        std::vector<FormExprAst::Term> terms;
        sc_.skip_ws();
        int sign = 1;
        if (sc_.eat('-'))
            sign = -1;
        else
            sc_.eat('+');
        terms.push_back(term(sign, allow_basis));
        for (;;) {
            sc_.skip_ws();
            if (sc_.eat('+'))
                sign = 1;
            else if (sc_.eat('-'))
                sign = -1;
            else
                break;
            terms.push_back(term(sign, allow_basis));
        }
        return terms;
    }

    FormExprAst::Term term(int sign, bool allow_basis) {
        FormExprAst::Term t;
        t.sign = sign;
        for (;;) {
            sc_.skip_ws();
            if (allow_basis && basis_ahead()) {
                t.has_basis = true;
                t.indices = basis_block();
                sc_.skip_ws();
                if (sc_.peek() == '*') sc_.fail("basis block must end its term");
                if (sc_.peek() == '^') sc_.fail("basis block cannot carry an exponent");
                break;
            }
            t.factors.push_back(factor());
            sc_.skip_ws();
            if (!sc_.eat('*')) break;
        }
        if (t.factors.empty() && !t.has_basis) sc_.fail("empty term");
        return t;
    }

    bool basis_ahead() {
        // The marker is the identifier 'e' immediately followed by '['.
        if (sc_.peek() != 'e') return false;
        std::size_t next = sc_.pos + 1;
        if (next < sc_.s.size() && ident_char(sc_.s[next])) return false;
        return next < sc_.s.size() && sc_.s[next] == '[';
    }

    std::vector<int> basis_block() {
        sc_.advance();  // 'e'
        sc_.expect('[', "after basis marker 'e'");
        std::vector<int> indices;
        for (;;) {
            sc_.skip_ws();
            BigInt v = sc_.digits();
            if (v < 1 || v > 7) sc_.fail("basis index out of range 1..7");
            int idx = static_cast<int>(v);
            if (std::find(indices.begin(), indices.end(), idx) != indices.end())
                sc_.fail("repeated basis index");
            indices.push_back(idx);
            sc_.skip_ws();
            if (sc_.eat(']')) break;
            sc_.expect(',', "between basis indices");
        }
        return indices;
    }

    FormExprAst::Factor factor() {
        sc_.skip_ws();
        FormExprAst::Factor f;
        char c = sc_.peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            f.kind = FormExprAst::Factor::Kind::Number;
            f.number = sc_.rational(true);
        } else if (c == '(') {
            sc_.advance();
            f.kind = FormExprAst::Factor::Kind::Paren;
            f.inner.emplace_back();
            f.inner.back().terms = sum(false);
            sc_.skip_ws();
            sc_.expect(')', "to close the parenthesized polynomial");
        } else if (ident_start(c)) {
            int at_line = sc_.line, at_col = sc_.col;
            std::string name = sc_.identifier();
            if (name == "e" && sc_.peek() == '[')
                sc_.fail("basis block not allowed inside a polynomial");
            if (!known_symbol(name))
                throw UnknownSymbol("undeclared symbol '" + name + "' (line " +
                                    std::to_string(at_line) + ", column " +
                                    std::to_string(at_col) + ")");
            f.kind = FormExprAst::Factor::Kind::Symbol;
            f.symbol = name;
        } else {
            sc_.fail("expected a factor");
        }
        while (sc_.eat('^')) {
            long e = sc_.uint_exponent();
            if (f.exponent > kMaxExponent / (e > 0 ? e : 1)) sc_.fail("exponent too large");
            f.exponent *= e;
        }
        return f;
    }
};

std::string print_factor(const FormExprAst::Factor& f);

std::string print_sum(const std::vector<FormExprAst::Term>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const FormExprAst::Term& t : terms) {
        if (first) {
            if (t.sign < 0) out += "-";
            first = false;
        } else {
            out += t.sign < 0 ? " - " : " + ";
        }
        std::string body;
        for (const FormExprAst::Factor& f : t.factors) {
            if (!body.empty()) body += "*";
            body += print_factor(f);
        }
        if (t.has_basis) {
            if (!body.empty()) body += "*";
            body += "e[";
            for (std::size_t k = 0; k < t.indices.size(); ++k) {
                if (k) body += ",";
                body += std::to_string(t.indices[k]);
            }
            body += "]";
        }
        out += body;
    }
    return out;
}

std::string print_factor(const FormExprAst::Factor& f) {
    std::string out;
    switch (f.kind) {
        case FormExprAst::Factor::Kind::Number:
            out = f.number.str();
            break;
        case FormExprAst::Factor::Kind::Symbol:
            out = f.symbol;
            break;
        case FormExprAst::Factor::Kind::Paren:
            out = "(" + print_sum(f.inner.front().terms) + ")";
            break;
    }
    if (f.exponent != 1) out += "^" + std::to_string(f.exponent);
    return out;
}

Poly poly_pow(const Poly& base, long e, const RingPtr& ring) {
    Poly out = Poly::constant(ring, 1);
    Poly sq = base;
    long rest = e;
    while (rest > 0) {
        if (rest & 1) out = out * sq;
        rest >>= 1;
        if (rest) sq = sq * sq;
    }
    return out;
}

Poly eval_sum(const std::vector<FormExprAst::Term>& terms, const RingPtr& ring);

Poly eval_factor(const FormExprAst::Factor& f, const RingPtr& ring) {
    if (f.exponent == 0) return Poly::constant(ring, 1);
    switch (f.kind) {
        case FormExprAst::Factor::Kind::Number:
            return Poly::constant(ring, rational_pow(f.number, f.exponent));
        case FormExprAst::Factor::Kind::Symbol: {
            if (ring->find(f.symbol) < 0)
                throw UnknownSymbol("undeclared symbol '" + f.symbol + "'");
            return Poly::var(ring, f.symbol, static_cast<int>(f.exponent));
        }
        case FormExprAst::Factor::Kind::Paren:
            return poly_pow(eval_sum(f.inner.front().terms, ring), f.exponent, ring);
    }
    throw Error("unreachable factor kind");
}

Poly eval_sum(const std::vector<FormExprAst::Term>& terms, const RingPtr& ring) {
    Poly out = Poly::zero(ring);
    for (const FormExprAst::Term& t : terms) {
        Poly p = Poly::constant(ring, Rational(t.sign));
        for (const FormExprAst::Factor& f : t.factors) p = p * eval_factor(f, ring);
        out += p;
    }
    return out;
}

// Sign of sorting the indices; the caller has excluded repeats.
int sort_sign(std::vector<int>& indices) {
    int sign = 1;
    for (std::size_t i = 1; i < indices.size(); ++i)
        for (std::size_t j = i; j > 0 && indices[j - 1] > indices[j]; --j) {
            std::swap(indices[j - 1], indices[j]);
            sign = -sign;
        }
    return sign;
}

void check_parameters(const std::vector<std::string>& params) {
    for (std::size_t k = 0; k < params.size(); ++k) {
        const std::string& name = params[k];
        if (name.empty() || !ident_start(name[0]) ||
            !std::all_of(name.begin(), name.end(), ident_char))
            throw Error("invalid parameter name '" + name + "'");
        if (name == "e") throw Error("parameter name 'e' is reserved for basis blocks");
        if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '7')
            throw Error("parameter name '" + name + "' shadows a coordinate");
        for (std::size_t j = 0; j < k; ++j)
            if (params[j] == name) throw Error("duplicate parameter name '" + name + "'");
    }
}

}  // namespace

bool operator==(const FormExprAst::Factor& a, const FormExprAst::Factor& b) {
    return a.kind == b.kind && a.number == b.number && a.symbol == b.symbol &&
           a.inner == b.inner && a.exponent == b.exponent;
}

FormExprAst parse_form_expr(const std::string& text,
                            const std::vector<std::string>& parameters) {
    check_parameters(parameters);
    return FormParser(text, parameters).run();
}

std::string print_form_expr(const FormExprAst& ast) { return print_sum(ast.terms); }

KForm form_from_expr(const FormExprAst& ast) {
    check_parameters(ast.parameters);
    RingPtr ring = PolyRing::create(ast.parameters);
    KForm out(0, ring);
    bool have_degree = false;
    int degree = 0;
    for (const FormExprAst::Term& t : ast.terms) {
        Poly p = Poly::constant(ring, Rational(t.sign));
        for (const FormExprAst::Factor& f : t.factors) p = p * eval_factor(f, ring);
        int d = t.has_basis ? static_cast<int>(t.indices.size()) : 0;
        if (have_degree && d != degree)
            throw DegreeMismatch("terms of degree " + std::to_string(degree) + " and " +
                                 std::to_string(d) + " in one expression");
        if (!have_degree) {
            have_degree = true;
            degree = d;
            out = KForm(d, ring);
        }
        if (t.has_basis) {
            std::vector<int> indices = t.indices;
            int sign = sort_sign(indices);
            out += KForm::monomial(p * Rational(sign), IndexTuple::of(indices));
        } else {
            out += KForm::from_poly(p);
        }
    }
    return out;
}

KForm parse_form(const std::string& text, const std::vector<std::string>& parameters) {
    return form_from_expr(parse_form_expr(text, parameters));
}

// ---- determinant language ----

namespace {

long long small_integer(const Rational& r, Scanner& sc) {
    if (!r.is_integer()) sc.fail("fractional power of a rational literal");
    BigInt n = r.numerator();
    if (n > 1000000 || n < -1000000) sc.fail("power out of range");
    return n.convert_to<long long>();
}

FormalDet det_pow(FormalDet base, const Rational& e, Scanner& sc) {
    FormalDet out;
    if (base.prefactor == Rational(1))
        out.prefactor = Rational(1);
    else
        out.prefactor = rational_pow(base.prefactor, small_integer(e, sc));
    for (const auto& [atom, exp] : base.dets) {
        Rational ne = exp * e;
        if (!ne.is_zero()) out.dets[atom] = ne;
    }
    for (const auto& [name, exp] : base.vols) {
        Rational ne = exp * e;
        if (!ne.is_zero()) out.vols[name] = ne;
    }
    return out;
}

class DetParser {
public:
    explicit DetParser(const std::string& text) : sc_(text) {}

    FormalDet run() {
        FormalDet out = expr();
        sc_.skip_ws();
        if (sc_.peek() != '\0') sc_.fail("unexpected trailing input");
        return out;
    }

private:
    Scanner sc_;

    FormalDet expr() {
        FormalDet acc = item();
        for (;;) {
            sc_.skip_ws();
            if (sc_.eat('*')) {
                acc = acc * item();
            } else if (sc_.eat('/')) {
                FormalDet d = item();
                if (d.prefactor.is_zero()) sc_.fail("division by zero");
                acc = acc * det_pow(std::move(d), Rational(-1), sc_);
            } else {
                break;
            }
        }
        return acc;
    }

    FormalDet item() {
        FormalDet base = primary();
        sc_.skip_ws();
        if (!sc_.eat('^')) return base;
        sc_.skip_ws();
        Rational e;
        if (sc_.eat('(')) {
            sc_.skip_ws();
            e = sc_.rational(true);
            sc_.skip_ws();
            sc_.expect(')', "to close the exponent");
        } else {
            e = sc_.rational(true);
        }
        return det_pow(std::move(base), e, sc_);
    }

    FormalDet primary() {
        sc_.skip_ws();
        char c = sc_.peek();
        FormalDet out;
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            out.prefactor = sc_.rational(true);
            return out;
        }
        if (c == '(') {
            sc_.advance();
            out = expr();
            sc_.skip_ws();
            sc_.expect(')', "to close the group");
            return out;
        }
        if (!ident_start(c)) sc_.fail("expected a determinant atom, number, or group");
        std::string name = sc_.identifier();
        if (name == "detp" || (name == "det" && sc_.peek() == '\'')) {
            if (name == "det") sc_.advance();  // the apostrophe
            return det_atom();
        }
        sc_.skip_ws();
        if (sc_.peek() == '(') return named_factor(name);
        sc_.fail("unknown name '" + name + "'");
    }

    FormalDet det_atom() {
        sc_.skip_ws();
        sc_.expect('(', "to open the determinant atom");
        sc_.skip_ws();
        DetAtom atom;
        if (std::isdigit(static_cast<unsigned char>(sc_.peek())) || sc_.peek() == '-') {
            atom.scale = sc_.rational(true);
            sc_.skip_ws();
            sc_.expect('*', "between the scale and the operator");
            sc_.skip_ws();
        }
        std::string op = sc_.identifier();
        if (op == "D")
            atom.op = DetOp::D;
        else if (op == "Dp")
            atom.op = DetOp::Dp;
        else if (op == "Dpp")
            atom.op = DetOp::Dpp;
        else
            sc_.fail("operator must be D, Dp, or Dpp");
        sc_.skip_ws();
        sc_.expect('|', "between the operator and its space");
        sc_.skip_ws();
        atom.space = sc_.identifier();
        sc_.skip_ws();
        sc_.expect(')', "to close the determinant atom");
        FormalDet out;
        out.dets[atom] = Rational(1);
        return out;
    }

    FormalDet named_factor(const std::string& name) {
        sc_.advance();  // '('
        std::string inner;
        while (sc_.peek() != ')') {
            char c = sc_.peek();
            if (c == '\0' || c == '(') sc_.fail("unterminated named factor");
            inner += c;
            sc_.advance();
        }
        sc_.advance();  // ')'
        FormalDet out;
        out.vols[name + "(" + inner + ")"] = Rational(1);
        return out;
    }
};

}  // namespace

FormalDet parse_det_expr(const std::string& text) { return DetParser(text).run(); }

}  // namespace g2gauge
