#include <doctest.h>

#include <cmath>
#include <random>

#include "hessbound/codelist.hpp"
#include "hessbound/errors.hpp"
#include "hessbound/expression.hpp"
#include "support/oracle.hpp"

using namespace hessbound;

namespace {

Expr v(std::size_t i) { return Expr::variable(i - 1); }
Expr bin(ExprKind k, Expr a, Expr b) { return Expr::binary(k, std::move(a), std::move(b)); }

} // namespace

TEST_CASE("parse builds the expected trees") {
    CHECK(parse("x1^2 + x2^2", 2) ==
          bin(ExprKind::Add, Expr::pow_nat(v(1), 2), Expr::pow_nat(v(2), 2)));
    CHECK(parse("x1^2 + x2*exp(x2)", 2) ==
          bin(ExprKind::Add, Expr::pow_nat(v(1), 2), bin(ExprKind::Mul, v(2), Expr::unary(ExprKind::Exp, v(2)))));
    CHECK(parse("  x1 *x2+x1 ", 2) == bin(ExprKind::Add, bin(ExprKind::Mul, v(1), v(2)), v(1)));
    CHECK(parse("-x1^2", 1) == Expr::unary(ExprKind::Neg, Expr::pow_nat(v(1), 2)));
    CHECK(parse("x1 - x2 - x1", 2) == bin(ExprKind::Sub, bin(ExprKind::Sub, v(1), v(2)), v(1)));
    CHECK(parse("x1 \xE2\x88\x92 x2", 2) == bin(ExprKind::Sub, v(1), v(2)));
    CHECK(parse("2.5e-1*x1", 1) == bin(ExprKind::Mul, Expr::constant(0.25), v(1)));
    CHECK(parse("sqrt(ln(x1))", 1) == Expr::unary(ExprKind::Sqrt, Expr::unary(ExprKind::Ln, v(1))));
    CHECK(parse("x1*-x1", 1) == bin(ExprKind::Mul, v(1), Expr::unary(ExprKind::Neg, v(1))));
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse("x3", 2), UnknownVariable);
    CHECK_THROWS_AS(parse("x0", 2), UnknownVariable);
    CHECK_THROWS_AS(parse("x1 +", 1), SyntaxError);
    CHECK_THROWS_AS(parse("sin(x1)", 1), SyntaxError);
    CHECK_THROWS_AS(parse("x1^x1", 1), SyntaxError);
    CHECK_THROWS_AS(parse("(x1", 1), SyntaxError);
    CHECK_THROWS_AS(parse("x1 x1", 1), SyntaxError);
    CHECK_THROWS_AS(parse("", 1), SyntaxError);
    try {
        (void)parse("x1 + $", 1);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position() == 5);
    }
}

TEST_CASE("normalize rewrites into the codelist alphabet") {
    CHECK(normalize(parse("x1/x2", 2)) == bin(ExprKind::Mul, v(1), Expr::unary(ExprKind::Recip, v(2))));
    CHECK(normalize(parse("2*x1 + 3", 1)) == Expr::add_const(Expr::mul_by_const(v(1), 2), 3));
    CHECK(normalize(parse("x1 - x2", 2)) == bin(ExprKind::Add, v(1), Expr::mul_by_const(v(2), -1)));
    CHECK(normalize(parse("-x1", 1)) == Expr::mul_by_const(v(1), -1));
    CHECK(normalize(parse("x1*3", 1)) == Expr::mul_by_const(v(1), 3));
    CHECK(normalize(parse("x1/4", 1)) == Expr::mul_by_const(v(1), 0.25));
    CHECK(normalize(parse("x1^1 + x2^0", 2)) == Expr::add_const(v(1), 1));
    CHECK(normalize(parse("(1+2)*x1", 1)) == Expr::mul_by_const(v(1), 3));
    CHECK(normalize(parse("exp(0)*x1 - 2^3", 1)) == Expr::add_const(Expr::mul_by_const(v(1), 1), -8));
    CHECK_THROWS_AS(normalize(parse("1 + 2", 1)), ConstantExpression);
    CHECK_THROWS_AS(normalize(parse("x1^0", 1)), ConstantExpression);
    CHECK_THROWS_AS(normalize(parse("x1/0", 1)), SyntaxError);
    CHECK_THROWS_AS(normalize(parse("x1 + ln(0)", 1)), SyntaxError);
    CHECK_THROWS_AS(normalize(parse("x1 + sqrt(-1)", 1)), SyntaxError);
}

TEST_CASE("normalize is idempotent") {
    for (std::uint64_t s = 0; s < 300; ++s) {
        const auto c = oracle::random_case(s, 1, 5);
        const Expr once = normalize(parse(c.expression, c.n));
        CHECK(normalize(once) == once);
    }
    for (const char* src : {"x1 - 3 / x2", "-(x1 + 2)^3", "2/(x1*x2)", "x1 - -x2"}) {
        const Expr once = normalize(parse(src, 2));
        CHECK(normalize(once) == once);
    }
}

TEST_CASE("lowering follows the post-order layout") {
    const Codelist a = lower(parse("x1^2 + x2^2", 2), 2);
    REQUIRE(a.size() == 5);
    CHECK(a.line(2).op == Op::PowNat);
    CHECK(a.line(2).i == 0);
    CHECK(a.line(3).i == 1);
    CHECK(a.line(4).op == Op::Add);
    CHECK(a.line(4).i == 2);
    CHECK(a.line(4).j == 3);

    const Codelist b = lower(parse("x1^2 + x2*exp(x2)", 2), 2);
    REQUIRE(b.size() == 6);
    CHECK(b.line(3).op == Op::Exp);
    CHECK(b.line(3).i == 1);
    CHECK(b.line(4).op == Op::Mul);
    CHECK(b.line(4).i == 1);
    CHECK(b.line(4).j == 3);
    CHECK(b.line(5).op == Op::Add);
    CHECK(b.line(5).i == 2);
    CHECK(b.line(5).j == 4);

    const Codelist c = lower(parse("x1", 1), 1);
    CHECK(c.size() == 1);
    CHECK(c.t() == 0);

    // phi must be the last line.
    const Codelist d = lower(parse("x1", 2), 2);
    CHECK(d.size() == 3);
    CHECK(d.line(2).op == Op::MulByConst);
    CHECK(d.line(2).c == 1.0);
}

TEST_CASE("lowering round trip against the parsed tree") {
    std::mt19937_64 g(3);
    for (std::uint64_t s = 0; s < 300; ++s) {
        const auto c = oracle::random_case(s + 1000, 1, 5);
        const Expr e = parse(c.expression, c.n);
        const Codelist cl = compile(c.expression, c.n);
        for (std::size_t k = 0; k < cl.size(); ++k) {
            if (k >= cl.n()) CHECK(cl.line(k).i < k);
            if (is_binary(cl.line(k).op)) CHECK(cl.line(k).j < k);
        }
        for (int p = 0; p < 5; ++p) {
            const auto x = oracle::sample(c.domain, g);
            const double want = evaluate(e, x);
            const double got = evaluate_point(cl, x);
            CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("index sets per line") {
    const Codelist cl = compile("x1^2 + x2*exp(x2)", 2);
    CHECK(dump(cl) ==
          "1: var(x1) I={2} L={1,2}\n"
          "2: var(x2) I={1} L={1,2}\n"
          "3: powNat(1,2) I={2} L={2}\n"
          "4: exp(2) I={1} L={1}\n"
          "5: mul(2,4) I={1} L={1}\n"
          "6: add(3,5) I={} L={}\n");
    const Codelist lin = compile("3*x1 + x2 + 1", 3);
    const auto& s = lin.sets(lin.output());
    CHECK(s.independent.to_string() == "{3}");
    CHECK(s.linear.to_string() == "{1,2,3}");
    const Codelist prod = compile("x1*(x2+1)", 2);
    CHECK(prod.sets(prod.output()).linear.to_string() == "{}");
}

TEST_CASE("index sets are sound under finite differences") {
    std::mt19937_64 g(4);
    for (std::uint64_t s = 0; s < 120; ++s) {
        const auto c = oracle::random_case(s + 2000, 2, 5);
        const Codelist cl = compile(c.expression, c.n);
        for (int p = 0; p < 4; ++p) {
            const auto x = oracle::sample(c.domain, g);
            const auto x2 = oracle::sample(c.domain, g);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double h = 1e-6 * (c.domain[i].width());
                auto diff = [&](const std::vector<double>& at) {
                    auto up = at;
                    auto dn = at;
                    up[i] += h;
                    dn[i] -= h;
                    const auto yu = evaluate_lines(cl, up);
                    const auto yd = evaluate_lines(cl, dn);
                    std::vector<double> d(yu.size());
                    for (std::size_t k = 0; k < yu.size(); ++k) d[k] = (yu[k] - yd[k]) / (2 * h);
                    return d;
                };
                const auto d1 = diff(x);
                const auto d2 = diff(x2);
                for (std::size_t k = 0; k < cl.size(); ++k) {
                    const auto& sets = cl.sets(k);
                    if (sets.independent.contains(i)) CHECK(std::abs(d1[k]) < 1e-7);
                    if (sets.linear.contains(i))
                        CHECK(std::abs(d1[k] - d2[k]) <= 1e-5 * std::max(1.0, std::abs(d1[k])));
                }
            }
        }
    }
}

TEST_CASE("analysis does not depend on anything but the codelist") {
    const auto c = oracle::random_case(77, 3, 5);
    const Codelist a = compile(c.expression, c.n);
    const Codelist b = compile(c.expression, c.n);
    CHECK(dump(a) == dump(b));
}

TEST_CASE("validate reports malformed codelists") {
    CHECK_THROWS_AS(validate(Codelist(0, {})), MalformedCodelist);
    CHECK_THROWS_AS(validate(Codelist(2, {Line::var()})), MalformedCodelist);
    CHECK_THROWS_AS(validate(Codelist(1, {Line::var(), Line::binary(Op::Add, 0, 1)})), MalformedCodelist);
    CHECK_THROWS_AS(validate(Codelist(1, {Line::var(), Line::pow_nat(0, 1)})), MalformedCodelist);
    CHECK_THROWS_AS(validate(Codelist(1, {Line::var(), Line::var()})), MalformedCodelist);
    CHECK_THROWS_AS(validate(Codelist(1, {Line::binary(Op::Add, 0, 0)})), MalformedCodelist);
    try {
        validate(Codelist(1, {Line::var(), Line::unary(Op::Exp, 0), Line::unary(Op::Exp, 5)}));
        FAIL("expected MalformedCodelist");
    } catch (const MalformedCodelist& e) {
        CHECK(e.line() == 3);
    }
    CHECK_NOTHROW(validate(Codelist(1, {Line::var(), Line::unary(Op::Exp, 0)})));
}
