#ifndef GST_EXPR_HPP
#define GST_EXPR_HPP

#include "gst/groupscheme.hpp"

#include <memory>

namespace gst {

// The CLI expression language.  LL(1), whitespace-insensitive:
//
//   input := expr ('@' 'F' '(' int ',' int ')')?
//   expr  := 'tensor' '(' expr ',' expr ')'
//          | 'dual' '(' expr ')' | 'matlis' '(' expr ')'
//          | 'split_u_m' '(' expr ')' | 'split_et_c' '(' expr ')'
//          | 'mu' '(' int ')' | 'Z' '/' '(' int ')' | 'alpha' '(' int ')'
//          | 'W' '(' int ',' int ')' | 'gm' | 'ga'
//
// A field annotation may also follow a parenthesized subexpression; all
// annotations in one expression must agree.

struct Expr {
    enum class Kind { Mu, Const, Alpha, WittKer, Gm, Ga, Tensor, Dual, Matlis, SplitUM, SplitEtC };
    Kind kind = Kind::Gm;
    long a = 0, b = 0;
    std::unique_ptr<Expr> lhs, rhs;
    bool has_field = false;
    long field_p = 0;
    int field_d = 0;
};

struct ParseError : std::runtime_error {
    int column; // 1-based
    ParseError(const std::string& what, int col)
        : std::runtime_error(what + " at column " + std::to_string(col)), column(col) {}
};

Expr parse_expr(const std::string& input);
std::string render_expr(const Expr& e);

struct EvalConfig {
    int bound = 8;
    int levels = 3;
    int precision = 0; // 0 = derive; DK_PRECISION override goes here
    int tower_cap = 4;
    bool profile = false;
};

struct EvalResult {
    enum class Type { Report, ModuleDump, SchemeDump };
    Type type = Type::SchemeDump;
    std::string text;
    std::string json;
    bool nonstabilizing = false;
};

EvalResult evaluate(const Expr& e, const EvalConfig& cfg);

} // namespace gst

#endif
