#include "tsnoether/expr.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <utility>

#include "tsnoether/errors.hpp"
#include "tsnoether/format.hpp"

namespace tsn {

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

bool is_number(const ExprPtr& e, double v) {
    return e->kind == ExprKind::Number && e->number == v;
}

std::optional<double> constant_of(const ExprPtr& e) {
    if (e->kind == ExprKind::Number) {
        return e->number;
    }
    return std::nullopt;
}

} // namespace

ExprPtr make_number(double v) {
    Expr e{};
    e.kind = ExprKind::Number;
    e.number = v;
    return node(std::move(e));
}

ExprPtr make_variable(VarRef ref) {
    Expr e{};
    e.kind = ExprKind::Variable;
    e.var = std::move(ref);
    return node(std::move(e));
}

ExprPtr make_neg(ExprPtr u) {
    if (auto c = constant_of(u)) {
        return make_number(-*c);
    }
    if (u->kind == ExprKind::Neg) {
        return u->a;
    }
    Expr e{};
    e.kind = ExprKind::Neg;
    e.a = std::move(u);
    return node(std::move(e));
}

ExprPtr make_add(ExprPtr a, ExprPtr b) {
    if (auto ca = constant_of(a)) {
        if (auto cb = constant_of(b)) {
            return make_number(*ca + *cb);
        }
        if (*ca == 0.0) return b;
    }
    if (is_number(b, 0.0)) return a;
    Expr e{};
    e.kind = ExprKind::Add;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
}

ExprPtr make_sub(ExprPtr a, ExprPtr b) {
    if (auto ca = constant_of(a)) {
        if (auto cb = constant_of(b)) {
            return make_number(*ca - *cb);
        }
        if (*ca == 0.0) return make_neg(b);
    }
    if (is_number(b, 0.0)) return a;
    Expr e{};
    e.kind = ExprKind::Sub;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
}

ExprPtr make_mul(ExprPtr a, ExprPtr b) {
    if (auto ca = constant_of(a)) {
        if (auto cb = constant_of(b)) {
            return make_number(*ca * *cb);
        }
        if (*ca == 0.0) return make_number(0.0);
        if (*ca == 1.0) return b;
    }
    if (is_number(b, 0.0)) return make_number(0.0);
    if (is_number(b, 1.0)) return a;
    Expr e{};
    e.kind = ExprKind::Mul;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
}

ExprPtr make_div(ExprPtr a, ExprPtr b) {
    if (auto cb = constant_of(b)) {
        if (auto ca = constant_of(a); ca && *cb != 0.0) {
            return make_number(*ca / *cb);
        }
        if (*cb == 1.0) return a;
    }
    if (is_number(a, 0.0)) return make_number(0.0);
    Expr e{};
    e.kind = ExprKind::Div;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
}

ExprPtr make_pow(ExprPtr a, ExprPtr b) {
    if (auto cb = constant_of(b)) {
        if (*cb == 1.0) return a;
        if (*cb == 0.0) return make_number(1.0);
        if (auto ca = constant_of(a)) {
            const double r = std::pow(*ca, *cb);
            if (std::isfinite(r)) {
                return make_number(r);
            }
        }
    }
    if (is_number(a, 1.0)) return make_number(1.0);
    Expr e{};
    e.kind = ExprKind::Pow;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
}

ExprPtr make_call(Func f, ExprPtr u) {
    if (auto c = constant_of(u)) {
        double r = 0.0;
        switch (f) {
        case Func::Sin: r = std::sin(*c); break;
        case Func::Cos: r = std::cos(*c); break;
        case Func::Exp: r = std::exp(*c); break;
        case Func::Log: r = std::log(*c); break;
        case Func::Sqrt: r = std::sqrt(*c); break;
        }
        if (std::isfinite(r)) {
            return make_number(r);
        }
    }
    Expr e{};
    e.kind = ExprKind::Call;
    e.func = f;
    e.a = std::move(u);
    return node(std::move(e));
}

// --- parsing ---

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind = Tok::End;
    double number = 0.0;
    std::string_view text;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) {
            ++pos_;
        }
        tok_ = Token{};
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_.kind = Tok::End;
            return;
        }
        const char c = src_[pos_];
        if ((c >= '0' && c <= '9') || c == '.') {
            const char* begin = src_.data() + pos_;
            const char* end = src_.data() + src_.size();
            double value = 0.0;
            auto res = std::from_chars(begin, end, value);
            if (res.ec != std::errc{} || !std::isfinite(value)) {
                throw SyntaxError("malformed number", pos_);
            }
            tok_.kind = Tok::Number;
            tok_.number = value;
            tok_.text = src_.substr(pos_, static_cast<std::size_t>(res.ptr - begin));
            pos_ += tok_.text.size();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_ + 1;
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
                ++end;
            }
            tok_.kind = Tok::Ident;
            tok_.text = src_.substr(pos_, end - pos_);
            pos_ = end;
            return;
        }
        switch (c) {
        case '+': tok_.kind = Tok::Plus; break;
        case '-': tok_.kind = Tok::Minus; break;
        case '*': tok_.kind = Tok::Star; break;
        case '/': tok_.kind = Tok::Slash; break;
        case '^': tok_.kind = Tok::Caret; break;
        case '(': tok_.kind = Tok::LParen; break;
        case ')': tok_.kind = Tok::RParen; break;
        case ',': tok_.kind = Tok::Comma; break;
        default:
            throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
        }
        tok_.text = src_.substr(pos_, 1);
        pos_ += 1;
        return;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_;
};

std::optional<Func> function_named(std::string_view name) {
    if (name == "sin") return Func::Sin;
    if (name == "cos") return Func::Cos;
    if (name == "exp") return Func::Exp;
    if (name == "log") return Func::Log;
    if (name == "sqrt") return Func::Sqrt;
    return std::nullopt;
}

VarRef classify_variable(std::string_view name) {
    VarRef ref;
    ref.name = std::string(name);
    if (name == "t") {
        ref.kind = VarKind::T;
        return ref;
    }
    if (name == "s") {
        ref.kind = VarKind::S;
        return ref;
    }
    if ((name[0] == 'x' || name[0] == 'v') && name.size() >= 1) {
        const VarKind kind = name[0] == 'x' ? VarKind::X : VarKind::V;
        if (name.size() == 1) {
            ref.kind = kind;
            ref.index = -1; // bare spelling, aliases component 0 in dimension 1
            return ref;
        }
        int idx = 0;
        auto res = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
        if (res.ec == std::errc{} && res.ptr == name.data() + name.size() && idx >= 1) {
            ref.kind = kind;
            ref.index = idx - 1;
            return ref;
        }
    }
    ref.kind = VarKind::Other;
    return ref;
}

/// Binding powers. Higher binds tighter; pow's right power is below its left
/// power, which makes it right associative.
struct BindingPower {
    int left;
    int right;
};

std::optional<BindingPower> infix_power(Tok t) {
    switch (t) {
    case Tok::Plus:
    case Tok::Minus: return BindingPower{10, 11};
    case Tok::Star:
    case Tok::Slash: return BindingPower{20, 21};
    case Tok::Caret: return BindingPower{40, 39};
    default: return std::nullopt;
    }
}

constexpr int kNegPower = 30; // between * / and ^

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr(0);
        const Token& t = lex_.peek();
        if (t.kind != Tok::End) {
            throw SyntaxError("unexpected trailing input '" + std::string(t.text) + "'",
                              t.offset);
        }
        return e;
    }

private:
    ExprPtr parse_expr(int min_bp) {
        ExprPtr lhs = parse_prefix();
        for (;;) {
            const Token& t = lex_.peek();
            auto bp = infix_power(t.kind);
            if (!bp || bp->left < min_bp) {
                break;
            }
            const Tok op = lex_.take().kind;
            ExprPtr rhs = parse_expr(bp->right);
            switch (op) {
            case Tok::Plus: lhs = make_add(std::move(lhs), std::move(rhs)); break;
            case Tok::Minus: lhs = make_sub(std::move(lhs), std::move(rhs)); break;
            case Tok::Star: lhs = make_mul(std::move(lhs), std::move(rhs)); break;
            case Tok::Slash: lhs = make_div(std::move(lhs), std::move(rhs)); break;
            case Tok::Caret: lhs = make_pow(std::move(lhs), std::move(rhs)); break;
            default: break;
            }
        }
        return lhs;
    }

    ExprPtr parse_prefix() {
        Token t = lex_.take();
        switch (t.kind) {
        case Tok::Number:
            return make_number(t.number);
        case Tok::Minus:
            return make_neg(parse_expr(kNegPower));
        case Tok::LParen: {
            ExprPtr e = parse_expr(0);
            expect(Tok::RParen, "expected ')'");
            return e;
        }
        case Tok::Ident: {
            if (lex_.peek().kind == Tok::LParen) {
                auto f = function_named(t.text);
                if (!f) {
                    throw UnknownFunction("unknown function '" + std::string(t.text) + "'");
                }
                lex_.take(); // (
                ExprPtr arg = parse_expr(0);
                expect(Tok::RParen, "expected ')' after function argument");
                return make_call(*f, std::move(arg));
            }
            return make_variable(classify_variable(t.text));
        }
        default:
            throw SyntaxError("expected an operand", t.offset);
        }
    }

    void expect(Tok kind, const char* msg) {
        const Token& t = lex_.peek();
        if (t.kind != kind) {
            throw SyntaxError(msg, t.offset);
        }
        lex_.take();
    }

    Lexer lex_;
};

} // namespace

ExprPtr parse_expression(std::string_view src) { return Parser(src).parse(); }

// --- evaluation ---

namespace {

double lookup(const VarRef& ref, const EvalEnv& env) {
    switch (ref.kind) {
    case VarKind::T:
        if (env.t) return *env.t;
        throw UnboundVariable("variable 't' is unbound");
    case VarKind::S:
        if (env.s) return *env.s;
        throw UnboundVariable("variable 's' is unbound");
    case VarKind::X: {
        const std::size_t idx = ref.index < 0 ? 0 : static_cast<std::size_t>(ref.index);
        if (idx < env.x.size()) return env.x[idx];
        throw UnboundVariable("variable '" + ref.name + "' is unbound");
    }
    case VarKind::V: {
        const std::size_t idx = ref.index < 0 ? 0 : static_cast<std::size_t>(ref.index);
        if (idx < env.v.size()) return env.v[idx];
        throw UnboundVariable("variable '" + ref.name + "' is unbound");
    }
    case VarKind::Other:
        break;
    }
    throw UnboundVariable("variable '" + ref.name + "' is unbound");
}

bool integral_value(double w) { return std::isfinite(w) && w == std::floor(w); }

} // namespace

double evaluate(const Expr& e, const EvalEnv& env) {
    switch (e.kind) {
    case ExprKind::Number:
        return e.number;
    case ExprKind::Variable:
        return lookup(e.var, env);
    case ExprKind::Neg:
        return -evaluate(*e.a, env);
    case ExprKind::Add:
        return evaluate(*e.a, env) + evaluate(*e.b, env);
    case ExprKind::Sub:
        return evaluate(*e.a, env) - evaluate(*e.b, env);
    case ExprKind::Mul: {
        const double r = evaluate(*e.a, env) * evaluate(*e.b, env);
        if (!std::isfinite(r)) throw NumericDomain("non-finite product", to_string(e));
        return r;
    }
    case ExprKind::Div: {
        const double num = evaluate(*e.a, env);
        const double den = evaluate(*e.b, env);
        if (den == 0.0) throw NumericDomain("division by zero", to_string(e));
        const double r = num / den;
        if (!std::isfinite(r)) throw NumericDomain("non-finite quotient", to_string(e));
        return r;
    }
    case ExprKind::Pow: {
        const double u = evaluate(*e.a, env);
        const double w = evaluate(*e.b, env);
        if (u < 0.0 && !integral_value(w)) {
            throw NumericDomain("negative base with non-integer exponent", to_string(e));
        }
        if (u == 0.0 && w < 0.0) {
            throw NumericDomain("zero base with negative exponent", to_string(e));
        }
        const double r = std::pow(u, w);
        if (!std::isfinite(r)) throw NumericDomain("non-finite power", to_string(e));
        return r;
    }
    case ExprKind::Call: {
        const double u = evaluate(*e.a, env);
        double r = 0.0;
        switch (e.func) {
        case Func::Sin: r = std::sin(u); break;
        case Func::Cos: r = std::cos(u); break;
        case Func::Exp: r = std::exp(u); break;
        case Func::Log:
            if (u <= 0.0) throw NumericDomain("log of a non-positive value", to_string(e));
            r = std::log(u);
            break;
        case Func::Sqrt:
            if (u < 0.0) throw NumericDomain("sqrt of a negative value", to_string(e));
            r = std::sqrt(u);
            break;
        }
        if (!std::isfinite(r)) throw NumericDomain("non-finite function value", to_string(e));
        return r;
    }
    }
    throw Error("corrupt expression node");
}

// --- differentiation ---

namespace {

bool matches(const VarRef& ref, VarKind wrt, int index) {
    if (ref.kind != wrt) {
        return false;
    }
    const int a = ref.index < 0 ? 0 : ref.index;
    const int b = index < 0 ? 0 : index;
    return a == b;
}

} // namespace

ExprPtr differentiate(const ExprPtr& e, VarKind wrt, int index) {
    switch (e->kind) {
    case ExprKind::Number:
        return make_number(0.0);
    case ExprKind::Variable:
        return make_number(matches(e->var, wrt, index) ? 1.0 : 0.0);
    case ExprKind::Neg:
        return make_neg(differentiate(e->a, wrt, index));
    case ExprKind::Add:
        return make_add(differentiate(e->a, wrt, index), differentiate(e->b, wrt, index));
    case ExprKind::Sub:
        return make_sub(differentiate(e->a, wrt, index), differentiate(e->b, wrt, index));
    case ExprKind::Mul: {
        ExprPtr da = differentiate(e->a, wrt, index);
        ExprPtr db = differentiate(e->b, wrt, index);
        return make_add(make_mul(std::move(da), e->b), make_mul(e->a, std::move(db)));
    }
    case ExprKind::Div: {
        ExprPtr da = differentiate(e->a, wrt, index);
        ExprPtr db = differentiate(e->b, wrt, index);
        ExprPtr num = make_sub(make_mul(std::move(da), e->b), make_mul(e->a, std::move(db)));
        return make_div(std::move(num), make_pow(e->b, make_number(2.0)));
    }
    case ExprKind::Pow: {
        ExprPtr du = differentiate(e->a, wrt, index);
        if (auto c = e->b->kind == ExprKind::Number ? std::optional<double>(e->b->number)
                                                    : std::nullopt) {
            // power rule: c * u^(c-1) * u'
            ExprPtr factor = make_mul(make_number(*c), make_pow(e->a, make_number(*c - 1.0)));
            return make_mul(std::move(factor), std::move(du));
        }
        // general exponent via exp(w log u)
        ExprPtr dw = differentiate(e->b, wrt, index);
        ExprPtr logu = make_call(Func::Log, e->a);
        ExprPtr value = make_call(Func::Exp, make_mul(e->b, logu));
        ExprPtr bracket = make_add(make_mul(std::move(dw), logu),
                                   make_mul(e->b, make_div(std::move(du), e->a)));
        return make_mul(std::move(value), std::move(bracket));
    }
    case ExprKind::Call: {
        ExprPtr du = differentiate(e->a, wrt, index);
        switch (e->func) {
        case Func::Sin:
            return make_mul(make_call(Func::Cos, e->a), std::move(du));
        case Func::Cos:
            return make_neg(make_mul(make_call(Func::Sin, e->a), std::move(du)));
        case Func::Exp:
            return make_mul(make_call(Func::Exp, e->a), std::move(du));
        case Func::Log:
            return make_div(std::move(du), e->a);
        case Func::Sqrt:
            return make_div(std::move(du),
                            make_mul(make_number(2.0), make_call(Func::Sqrt, e->a)));
        }
        break;
    }
    }
    throw Error("corrupt expression node");
}

// --- printing ---

namespace {

int precedence_of(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Number:
        return e.number < 0.0 ? 30 : 100; // a negative literal prints with its sign
    case ExprKind::Variable:
    case ExprKind::Call:
        return 100;
    case ExprKind::Pow:
        return 40;
    case ExprKind::Neg:
        return 30;
    case ExprKind::Mul:
    case ExprKind::Div:
        return 20;
    case ExprKind::Add:
    case ExprKind::Sub:
        return 10;
    }
    return 100;
}

void print_into(const Expr& e, std::string& out);

void print_child(const Expr& child, int parent_prec, bool needs_strict, std::string& out) {
    const int prec = precedence_of(child);
    const bool parens = needs_strict ? prec <= parent_prec : prec < parent_prec;
    if (parens) {
        out += '(';
        print_into(child, out);
        out += ')';
    } else {
        print_into(child, out);
    }
}

const char* function_name(Func f) {
    switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    }
    return "?";
}

void print_into(const Expr& e, std::string& out) {
    switch (e.kind) {
    case ExprKind::Number:
        out += format_double(e.number);
        return;
    case ExprKind::Variable:
        out += e.var.name;
        return;
    case ExprKind::Neg:
        out += '-';
        // the operand must bind at least as tightly as unary minus, except ^
        // which legitimately sits under it (-x^2)
        print_child(*e.a, precedence_of(e) - 1, false, out);
        return;
    case ExprKind::Add:
        print_child(*e.a, 10, false, out);
        out += " + ";
        print_child(*e.b, 10, true, out); // a+(b+c) keeps its tree
        return;
    case ExprKind::Sub:
        print_child(*e.a, 10, false, out);
        out += " - ";
        print_child(*e.b, 10, true, out);
        return;
    case ExprKind::Mul:
        print_child(*e.a, 20, false, out);
        out += "*";
        print_child(*e.b, 20, true, out);
        return;
    case ExprKind::Div:
        print_child(*e.a, 20, false, out);
        out += "/";
        print_child(*e.b, 20, true, out);
        return;
    case ExprKind::Pow:
        print_child(*e.a, 40, true, out); // left assoc side of a right assoc op
        out += "^";
        print_child(*e.b, 39, false, out);
        return;
    case ExprKind::Call:
        out += function_name(e.func);
        out += '(';
        print_into(*e.a, out);
        out += ')';
        return;
    }
}

} // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print_into(e, out);
    return out;
}

void bind_check(const Expr& e, const VarSet& allowed) {
    switch (e.kind) {
    case ExprKind::Number:
        return;
    case ExprKind::Variable: {
        const VarRef& ref = e.var;
        switch (ref.kind) {
        case VarKind::T:
            if (allowed.t) return;
            break;
        case VarKind::S:
            if (allowed.s) return;
            break;
        case VarKind::X:
            if (ref.index < 0) {
                if (allowed.x_dim == 1) return;
            } else if (static_cast<std::size_t>(ref.index) < allowed.x_dim) {
                return;
            }
            break;
        case VarKind::V:
            if (ref.index < 0) {
                if (allowed.v_dim == 1) return;
            } else if (static_cast<std::size_t>(ref.index) < allowed.v_dim) {
                return;
            }
            break;
        case VarKind::Other:
            break;
        }
        throw UnknownVariable("variable '" + ref.name + "' is not available here");
    }
    case ExprKind::Neg:
    case ExprKind::Call:
        bind_check(*e.a, allowed);
        return;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Pow:
        bind_check(*e.a, allowed);
        bind_check(*e.b, allowed);
        return;
    }
}

bool is_constant_in(const Expr& e, VarKind kind, int index) {
    switch (e.kind) {
    case ExprKind::Number:
        return true;
    case ExprKind::Variable:
        return !matches(e.var, kind, index);
    case ExprKind::Neg:
    case ExprKind::Call:
        return is_constant_in(*e.a, kind, index);
    default:
        return is_constant_in(*e.a, kind, index) && is_constant_in(*e.b, kind, index);
    }
}

} // namespace tsn
