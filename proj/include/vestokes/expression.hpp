#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vestokes/tensor.hpp"

namespace vestokes {

namespace detail {
struct ExprNode;
}

/// Immutable scalar expression in the coordinates x, y, z.
///
/// Grammar: numbers, `x y z pi`, binary `+ - * / ^` (also `**`), unary minus,
/// and the functions `sin cos tan exp log sqrt tanh abs`. Derivatives are
/// produced symbolically with light constant folding; `abs` has no
/// derivative rule and raises NonDifferentiableExpression unless its argument
/// is constant.
class Expr {
public:
    Expr();
    Expr(double value);  // NOLINT(google-explicit-constructor)

    static Expr var(int axis);
    static Expr parse(std::string_view text);

    double eval(const Vec3& x) const;
    double operator()(const Vec3& x) const { return eval(x); }

    /// Symbolic partial derivative along coordinate `axis`.
    Expr diff(int axis) const;

    bool is_constant() const;
    /// Value of a constant expression; 0 otherwise.
    double constant_value() const;
    bool is_zero() const { return is_constant() && constant_value() == 0.0; }

    std::string str() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr pow(const Expr& a, const Expr& b);
    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);
    friend Expr tan(const Expr& a);
    friend Expr exp(const Expr& a);
    friend Expr log(const Expr& a);
    friend Expr sqrt(const Expr& a);
    friend Expr tanh(const Expr& a);
    friend Expr abs(const Expr& a);

private:
    explicit Expr(std::shared_ptr<const detail::ExprNode> node);
    std::shared_ptr<const detail::ExprNode> node_;

    friend class CompiledExpr;
};

/// Straight-line form of an expression with common subexpressions merged.
/// Evaluates to the same value as Expr::eval.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const Expr& e);

    double eval(const Vec3& x) const;
    double operator()(const Vec3& x) const { return eval(x); }
    std::size_t size() const { return code_.size(); }

private:
    struct Instr {
        int op = 0;
        int axis = 0;
        int a = -1, b = -1;
        double value = 0.0;
    };
    std::vector<Instr> code_;
};

}  // namespace vestokes
