#pragma once
// Text front ends used by the command-line tool: the exterior-form
// expression language and the determinant expression language.
//
//   form     := ['+'|'-'] sterm (('+'|'-') sterm)*
//   sterm    := factor ('*' factor)* ['*' basis] | basis
//   basis    := 'e[' uint (',' uint)* ']'
//   factor   := rational | symbol | factor '^' uint | '(' poly ')'
//   rational := ['-'] uint ('/' uint)?
//
// Symbols x1..x7 are coordinates; any other identifier must appear in
// the declared parameter list.  Inside parentheses only the polynomial
// sublanguage is allowed.
//
//   detexpr  := item (('*'|'/') item)*
//   item     := primary ['^' exponent]
//   primary  := rational | det-atom | named-factor | '(' detexpr ')'
//   det-atom := ('detp'|'det\'') '(' [rational '*'] op '|' space ')'
//   op       := 'D' | 'Dp' | 'Dpp'
//   exponent := rational | '(' rational ')'
//
// Named factors like Vol(G) stand for the formal volume symbols of the
// determinant calculus.

#include <string>
#include <vector>

#include "g2gauge/kform.hpp"
#include "g2gauge/regdet.hpp"

namespace g2gauge {

// Parse tree of a form expression; printing and reparsing reproduces
// the tree.  Terms are signed products closing with an optional basis
// block; parenthesized factors carry a nested polynomial tree.
struct FormExprAst {
    struct PolyExpr;

    struct Factor {
        enum class Kind { Number, Symbol, Paren };
        Kind kind = Kind::Number;
        Rational number{0};
        std::string symbol;
        std::vector<PolyExpr> inner;  // exactly one entry for Paren
        long exponent = 1;

        friend bool operator==(const Factor&, const Factor&);
    };

    struct Term {
        int sign = 1;
        std::vector<Factor> factors;
        bool has_basis = false;
        std::vector<int> indices;

        friend bool operator==(const Term&, const Term&) = default;
    };

    struct PolyExpr {
        std::vector<Term> terms;  // basis blocks never appear here

        friend bool operator==(const PolyExpr&, const PolyExpr&) = default;
    };

    std::vector<Term> terms;
    std::vector<std::string> parameters;

    friend bool operator==(const FormExprAst&, const FormExprAst&) = default;
};

// Throws ParseError with position on malformed text, UnknownSymbol on
// identifiers outside x1..x7 and the declared parameters.
FormExprAst parse_form_expr(const std::string& text,
                            const std::vector<std::string>& parameters = {});

std::string print_form_expr(const FormExprAst& ast);

// Evaluates the tree over a ring made of the coordinates and the
// declared parameters.  Mixing degrees across terms is a DegreeMismatch.
KForm form_from_expr(const FormExprAst& ast);

KForm parse_form(const std::string& text,
                 const std::vector<std::string>& parameters = {});

// Parses a determinant expression into its canonical product form.
FormalDet parse_det_expr(const std::string& text);

}  // namespace g2gauge
