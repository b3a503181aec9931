#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace tsn {

enum class ExprKind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func { Sin, Cos, Exp, Log, Sqrt };

/// Which slot of the evaluation environment a variable reads.
enum class VarKind {
    T,     ///< time
    S,     ///< group parameter
    X,     ///< state component
    V,     ///< velocity component
    Other, ///< anything else; rejected at the binding check
};

/// A parsed variable occurrence. `index` is the 0-based component for X/V;
/// -1 means the bare spelling ("x"), which aliases component 0 in dimension 1.
struct VarRef {
    VarKind kind = VarKind::Other;
    int index = -1;
    std::string name;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. Built through the make_* helpers, which fold
/// constants so differentiation output stays readable.
struct Expr {
    ExprKind kind;
    double number = 0.0;
    VarRef var;
    Func func = Func::Sin;
    ExprPtr a;
    ExprPtr b;
};

ExprPtr make_number(double v);
ExprPtr make_variable(VarRef ref);
ExprPtr make_neg(ExprPtr u);
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_div(ExprPtr a, ExprPtr b);
ExprPtr make_pow(ExprPtr a, ExprPtr b);
ExprPtr make_call(Func f, ExprPtr u);

/// Grammar: precedence ^ (right assoc) > unary minus > * / > + -. Functions
/// sin cos exp log sqrt, one argument. No implicit multiplication. Errors
/// carry 0-based byte offsets.
ExprPtr parse_expression(std::string_view src);

/// Values available during evaluation. Unset slots make the matching
/// variables unbound.
struct EvalEnv {
    std::optional<double> t;
    std::optional<double> s;
    std::span<const double> x;
    std::span<const double> v;
};

double evaluate(const Expr& e, const EvalEnv& env);

/// Partial derivative with respect to the variable (kind, index). Bare and
/// component-0 spellings alias each other.
ExprPtr differentiate(const ExprPtr& e, VarKind wrt, int index = -1);

/// Minimal-parentheses form; parsing it back rebuilds the identical tree.
std::string to_string(const Expr& e);

/// The variable set allowed for one expression role.
struct VarSet {
    bool t = false;
    bool s = false;
    std::size_t x_dim = 0;
    std::size_t v_dim = 0;
};

/// Rejects variables outside the allowed set (UnknownVariable). This is the
/// binding check: the parser itself accepts any identifier.
void bind_check(const Expr& e, const VarSet& allowed);

/// True if no Variable node matches (kind, index); constants stay constants.
bool is_constant_in(const Expr& e, VarKind kind, int index = -1);

} // namespace tsn
