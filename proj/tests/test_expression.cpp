#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vestokes/errors.hpp"
#include "vestokes/expression.hpp"

using namespace vestokes;

namespace {

const Vec3 kP{0.3, 0.7, 0.45};

double central(const Expr& e, const Vec3& x, int axis, double h = 1e-5) {
    Vec3 a = x, b = x;
    a[axis] += h;
    b[axis] -= h;
    return (e.eval(a) - e.eval(b)) / (2.0 * h);
}

}  // namespace

TEST(Parse, ArithmeticAndPrecedence) {
    EXPECT_DOUBLE_EQ(Expr::parse("1 + 2*3").eval(kP), 7.0);
    EXPECT_DOUBLE_EQ(Expr::parse("(1 + 2)*3").eval(kP), 9.0);
    EXPECT_DOUBLE_EQ(Expr::parse("2^3^2").eval(kP), 512.0);
    EXPECT_DOUBLE_EQ(Expr::parse("2**3").eval(kP), 8.0);
    EXPECT_DOUBLE_EQ(Expr::parse("-2^2").eval(kP), -4.0);
    EXPECT_DOUBLE_EQ(Expr::parse("8/4/2").eval(kP), 1.0);
    EXPECT_DOUBLE_EQ(Expr::parse("1e-3*1000").eval(kP), 1.0);
    EXPECT_NEAR(Expr::parse("pi").eval(kP), std::numbers::pi, 1e-15);
}

TEST(Parse, VariablesAndFunctions) {
    const Expr e = Expr::parse("sin(pi*x)*exp(y) + sqrt(z) - log(1+x) + tanh(y) + cos(z) + tan(x)");
    const double x = kP[0], y = kP[1], z = kP[2];
    const double ref = std::sin(std::numbers::pi * x) * std::exp(y) + std::sqrt(z) - std::log(1 + x) + std::tanh(y) +
                       std::cos(z) + std::tan(x);
    EXPECT_NEAR(e.eval(kP), ref, 1e-14);
    EXPECT_DOUBLE_EQ(Expr::parse("abs(x - 1)").eval(kP), 0.7);
}

TEST(Parse, Errors) {
    for (const char* bad : {"", "1 +", "sin(x", "foo(x)", "x y", "2 * * 3", "w", ")"}) {
        EXPECT_THROW(Expr::parse(bad), ParseError) << bad;
    }
}

TEST(Diff, MatchesFiniteDifferences) {
    const char* cases[] = {"x*y*z", "sin(pi*x)*cos(pi*y)*z^2", "exp(x*y)/(1+z^2)", "sqrt(1+x^2+y^2)*log(2+z)",
                           "tanh(x-y)*tan(0.5*z)", "(x*(1-x)*y*(1-y)*z*(1-z))^2", "x^y"};
    for (const char* text : cases) {
        const Expr e = Expr::parse(text);
        for (int a = 0; a < 3; ++a) {
            const double fd = central(e, kP, a);
            EXPECT_NEAR(e.diff(a).eval(kP), fd, 1e-8 * std::max(1.0, std::abs(fd))) << text << " axis " << a;
            for (int b = 0; b < 3; ++b) {
                const double fd2 = central(e.diff(a), kP, b);
                EXPECT_NEAR(e.diff(a).diff(b).eval(kP), fd2, 1e-7 * std::max(1.0, std::abs(fd2))) << text;
            }
        }
    }
}

TEST(Diff, ConstantsFold) {
    const Expr e = Expr::parse("3*x + 2");
    EXPECT_TRUE(e.diff(0).is_constant());
    EXPECT_DOUBLE_EQ(e.diff(0).constant_value(), 3.0);
    EXPECT_TRUE(e.diff(1).is_zero());
    EXPECT_TRUE(Expr::parse("2*pi").is_constant());
}

TEST(Diff, AbsHasNoRule) {
    EXPECT_THROW(Expr::parse("abs(x)").diff(0), NonDifferentiableExpression);
    EXPECT_TRUE(Expr::parse("abs(-2)*x").diff(0).is_constant());
}

TEST(Str, RoundTrips) {
    const Expr e = Expr::parse("sin(pi*x)*exp(-y)/(1+z^2) - x^3");
    const Expr back = Expr::parse(e.str());
    EXPECT_NEAR(back.eval(kP), e.eval(kP), 1e-14);
}

TEST(Compiled, MatchesTreeEvaluation) {
    const Expr psi = Expr::parse("(x*(1-x)*y*(1-y)*z*(1-z))^2 + sin(pi*x)*exp(y*z)/(2+cos(z))");
    const Expr e = psi.diff(0).diff(1) + psi.diff(2).diff(2) * psi;
    const CompiledExpr c(e);
    for (const Vec3& x : {kP, Vec3{0.1, 0.9, 0.4}, Vec3{0.0, 1.0, 0.5}}) EXPECT_EQ(c.eval(x), e.eval(x));
}

TEST(Compiled, MergesRepeatedSubtrees) {
    const Expr a = Expr::parse("sin(x*y)");
    const Expr b = Expr::parse("sin(x*y)");
    const CompiledExpr c(a * b + a);
    EXPECT_EQ(c.size(), 6u);  // x y * sin * +
    EXPECT_DOUBLE_EQ(c.eval(kP), std::pow(std::sin(kP[0] * kP[1]), 2) + std::sin(kP[0] * kP[1]));
    EXPECT_EQ(CompiledExpr(Expr(2.5)).eval(kP), 2.5);
}
