#include "vestokes/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <cstring>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "vestokes/errors.hpp"

namespace vestokes {

namespace detail {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Tan, Exp, Log, Sqrt, Tanh, Abs };

struct ExprNode {
    Op op = Op::Const;
    double value = 0.0;
    int axis = 0;
    std::shared_ptr<const ExprNode> a, b;
};

}  // namespace detail

using detail::ExprNode;
using detail::Op;

namespace {

std::shared_ptr<const ExprNode> make_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Const;
    n->value = v;
    return n;
}

std::shared_ptr<const ExprNode> make_node(Op op, std::shared_ptr<const ExprNode> a,
                                          std::shared_ptr<const ExprNode> b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_const(const ExprNode& n) { return n.op == Op::Const; }
bool is_const(const ExprNode& n, double v) { return n.op == Op::Const && n.value == v; }

double apply_unary(Op op, double v) {
    switch (op) {
        case Op::Neg: return -v;
        case Op::Sin: return std::sin(v);
        case Op::Cos: return std::cos(v);
        case Op::Tan: return std::tan(v);
        case Op::Exp: return std::exp(v);
        case Op::Log: return std::log(v);
        case Op::Sqrt: return std::sqrt(v);
        case Op::Tanh: return std::tanh(v);
        case Op::Abs: return std::abs(v);
        default: return v;
    }
}

double eval_node(const ExprNode& n, const Vec3& x) {
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var: return x[n.axis];
        case Op::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
        case Op::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
        case Op::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
        case Op::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
        case Op::Pow: {
            const double base = eval_node(*n.a, x);
            if (is_const(*n.b)) {
                const double e = n.b->value;
                if (e == 2.0) return base * base;
                if (e == 3.0) return base * base * base;
                return std::pow(base, e);
            }
            return std::pow(base, eval_node(*n.b, x));
        }
        default: return apply_unary(n.op, eval_node(*n.a, x));
    }
}

const char* func_name(Op op) {
    switch (op) {
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Tan: return "tan";
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Sqrt: return "sqrt";
        case Op::Tanh: return "tanh";
        case Op::Abs: return "abs";
        default: return "?";
    }
}

void print_node(const ExprNode& n, std::ostream& os) {
    switch (n.op) {
        case Op::Const: {
            std::ostringstream v;
            v.precision(17);
            v << n.value;
            if (n.value < 0) os << '(' << v.str() << ')';
            else os << v.str();
            return;
        }
        case Op::Var: os << "xyz"[n.axis]; return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow: {
            const char sym = n.op == Op::Add ? '+' : n.op == Op::Sub ? '-' : n.op == Op::Mul ? '*' : n.op == Op::Div ? '/' : '^';
            os << '(';
            print_node(*n.a, os);
            os << sym;
            print_node(*n.b, os);
            os << ')';
            return;
        }
        case Op::Neg:
            os << "(-";
            print_node(*n.a, os);
            os << ')';
            return;
        default:
            os << func_name(n.op) << '(';
            print_node(*n.a, os);
            os << ')';
            return;
    }
}

// ---------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << "expression parse error at offset " << pos_ << " in '" << s_ << "': " << what;
        throw ParseError(os.str());
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(std::string_view tok) {
        skip_ws();
        if (s_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept("+")) lhs = lhs + term();
            else if (accept("-")) lhs = lhs - term();
            else return lhs;
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            skip_ws();
            if (s_.substr(pos_, 2) == "**") return lhs;  // handled in power()
            if (accept("*")) lhs = lhs * unary();
            else if (accept("/")) lhs = lhs / unary();
            else return lhs;
        }
    }

    Expr unary() {
        if (accept("-")) return -unary();
        if (accept("+")) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept("^") || accept("**")) return pow(base, unary());
        return base;
    }

    Expr primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!accept(")")) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::string rest(s_.substr(pos_));
            char* end = nullptr;
            const double v = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str()) fail("bad number");
            pos_ += static_cast<std::size_t>(end - rest.c_str());
            return Expr(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name(s_.substr(start, pos_ - start));
            if (name == "x") return Expr::var(0);
            if (name == "y") return Expr::var(1);
            if (name == "z") return Expr::var(2);
            if (name == "pi") return Expr(std::numbers::pi);
            if (!accept("(")) fail("unknown identifier '" + name + "'");
            Expr arg = expr();
            if (!accept(")")) fail("expected ')' after function argument");
            if (name == "sin") return sin(arg);
            if (name == "cos") return cos(arg);
            if (name == "tan") return tan(arg);
            if (name == "exp") return exp(arg);
            if (name == "log") return log(arg);
            if (name == "sqrt") return sqrt(arg);
            if (name == "tanh") return tanh(arg);
            if (name == "abs") return abs(arg);
            fail("unknown function '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

// ---------------------------------------------------------------- Expr

Expr::Expr() : node_(make_const(0.0)) {}
Expr::Expr(double value) : node_(make_const(value)) {}
Expr::Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

Expr Expr::var(int axis) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Var;
    n->axis = axis;
    return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

Expr Expr::parse(std::string_view text) { return Parser(text).parse(); }

double Expr::eval(const Vec3& x) const { return eval_node(*node_, x); }

bool Expr::is_constant() const { return node_->op == Op::Const; }
double Expr::constant_value() const { return is_constant() ? node_->value : 0.0; }

std::string Expr::str() const {
    std::ostringstream os;
    print_node(*node_, os);
    return os.str();
}

Expr operator+(const Expr& a, const Expr& b) {
    if (is_const(*a.node_) && is_const(*b.node_)) return Expr(a.node_->value + b.node_->value);
    if (is_const(*a.node_, 0.0)) return b;
    if (is_const(*b.node_, 0.0)) return a;
    return Expr(make_node(Op::Add, a.node_, b.node_));
}

Expr operator-(const Expr& a, const Expr& b) {
    if (is_const(*a.node_) && is_const(*b.node_)) return Expr(a.node_->value - b.node_->value);
    if (is_const(*b.node_, 0.0)) return a;
    if (is_const(*a.node_, 0.0)) return -b;
    return Expr(make_node(Op::Sub, a.node_, b.node_));
}

Expr operator*(const Expr& a, const Expr& b) {
    if (is_const(*a.node_) && is_const(*b.node_)) return Expr(a.node_->value * b.node_->value);
    if (is_const(*a.node_, 0.0) || is_const(*b.node_, 0.0)) return Expr(0.0);
    if (is_const(*a.node_, 1.0)) return b;
    if (is_const(*b.node_, 1.0)) return a;
    if (is_const(*a.node_, -1.0)) return -b;
    if (is_const(*b.node_, -1.0)) return -a;
    return Expr(make_node(Op::Mul, a.node_, b.node_));
}

Expr operator/(const Expr& a, const Expr& b) {
    if (is_const(*a.node_) && is_const(*b.node_)) return Expr(a.node_->value / b.node_->value);
    if (is_const(*a.node_, 0.0)) return Expr(0.0);
    if (is_const(*b.node_, 1.0)) return a;
    return Expr(make_node(Op::Div, a.node_, b.node_));
}

Expr operator-(const Expr& a) {
    if (is_const(*a.node_)) return Expr(-a.node_->value);
    if (a.node_->op == Op::Neg) return Expr(a.node_->a);
    return Expr(make_node(Op::Neg, a.node_));
}

Expr pow(const Expr& a, const Expr& b) {
    if (is_const(*a.node_) && is_const(*b.node_)) return Expr(std::pow(a.node_->value, b.node_->value));
    if (is_const(*b.node_, 0.0)) return Expr(1.0);
    if (is_const(*b.node_, 1.0)) return a;
    return Expr(make_node(Op::Pow, a.node_, b.node_));
}

#define VESTOKES_UNARY(fn, OP)                                                       \
    Expr fn(const Expr& a) {                                                         \
        if (is_const(*a.node_)) return Expr(apply_unary(Op::OP, a.node_->value));    \
        return Expr(make_node(Op::OP, a.node_));                                     \
    }

VESTOKES_UNARY(sin, Sin)
VESTOKES_UNARY(cos, Cos)
VESTOKES_UNARY(tan, Tan)
VESTOKES_UNARY(exp, Exp)
VESTOKES_UNARY(log, Log)
VESTOKES_UNARY(sqrt, Sqrt)
VESTOKES_UNARY(tanh, Tanh)
VESTOKES_UNARY(abs, Abs)

#undef VESTOKES_UNARY

Expr Expr::diff(int axis) const {
    const ExprNode& n = *node_;
    switch (n.op) {
        case Op::Const: return Expr(0.0);
        case Op::Var: return Expr(n.axis == axis ? 1.0 : 0.0);
        default: break;
    }
    const Expr a(n.a);
    const Expr da = a.diff(axis);
    switch (n.op) {
        case Op::Neg: return -da;
        case Op::Add: return da + Expr(n.b).diff(axis);
        case Op::Sub: return da - Expr(n.b).diff(axis);
        case Op::Mul: {
            const Expr b(n.b);
            return da * b + a * b.diff(axis);
        }
        case Op::Div: {
            const Expr b(n.b);
            const Expr db = b.diff(axis);
            if (db.is_zero()) return da / b;
            return (da * b - a * db) / (b * b);
        }
        case Op::Pow: {
            const Expr b(n.b);
            if (b.is_constant()) {
                const double e = b.constant_value();
                return Expr(e) * pow(a, Expr(e - 1.0)) * da;
            }
            const Expr self(node_);
            return self * (b.diff(axis) * log(a) + b * da / a);
        }
        case Op::Sin: return cos(a) * da;
        case Op::Cos: return -(sin(a) * da);
        case Op::Tan: {
            const Expr t = tan(a);
            return (Expr(1.0) + t * t) * da;
        }
        case Op::Exp: return Expr(node_) * da;
        case Op::Log: return da / a;
        case Op::Sqrt: return da / (Expr(2.0) * Expr(node_));
        case Op::Tanh: {
            const Expr t = Expr(node_);
            return (Expr(1.0) - t * t) * da;
        }
        case Op::Abs:
            if (da.is_zero()) return Expr(0.0);
            throw NonDifferentiableExpression("abs() has no derivative rule: " + str());
        default: break;
    }
    return Expr(0.0);
}

// ---------------------------------------------------------------- CompiledExpr

namespace {

using InstrKey = std::tuple<int, std::uint64_t, int, int, int>;

struct Compiler {
    std::unordered_map<const ExprNode*, int> seen;
    std::map<InstrKey, int> merged;
    std::vector<std::tuple<int, int, int, int, double>> out;  // op, axis, a, b, value

    int visit(const ExprNode& n) {
        if (const auto it = seen.find(&n); it != seen.end()) return it->second;
        const int a = n.a ? visit(*n.a) : -1;
        const int b = n.b ? visit(*n.b) : -1;
        std::uint64_t bits = 0;
        std::memcpy(&bits, &n.value, sizeof bits);
        const int axis = n.op == Op::Var ? n.axis : 0;
        const InstrKey key{static_cast<int>(n.op), n.op == Op::Const ? bits : 0, axis, a, b};
        int id;
        if (const auto it = merged.find(key); it != merged.end()) {
            id = it->second;
        } else {
            id = static_cast<int>(out.size());
            out.emplace_back(static_cast<int>(n.op), axis, a, b, n.value);
            merged.emplace(key, id);
        }
        seen.emplace(&n, id);
        return id;
    }
};

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e) {
    Compiler c;
    c.visit(*e.node_);
    code_.reserve(c.out.size());
    for (const auto& [op, axis, a, b, value] : c.out) code_.push_back({op, axis, a, b, value});
}

double CompiledExpr::eval(const Vec3& x) const {
    if (code_.empty()) return 0.0;
    thread_local std::vector<double> r;
    if (r.size() < code_.size()) r.resize(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instr& in = code_[i];
        const Op op = static_cast<Op>(in.op);
        double v;
        switch (op) {
            case Op::Const: v = in.value; break;
            case Op::Var: v = x[in.axis]; break;
            case Op::Add: v = r[in.a] + r[in.b]; break;
            case Op::Sub: v = r[in.a] - r[in.b]; break;
            case Op::Mul: v = r[in.a] * r[in.b]; break;
            case Op::Div: v = r[in.a] / r[in.b]; break;
            case Op::Pow: {
                const double base = r[in.a];
                const Instr& ex = code_[in.b];
                if (static_cast<Op>(ex.op) == Op::Const && ex.value == 2.0) v = base * base;
                else if (static_cast<Op>(ex.op) == Op::Const && ex.value == 3.0) v = base * base * base;
                else v = std::pow(base, r[in.b]);
                break;
            }
            default: v = apply_unary(op, r[in.a]);
        }
        r[i] = v;
    }
    return r[code_.size() - 1];
}

}  // namespace vestokes
