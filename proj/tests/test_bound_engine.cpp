#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hessbound/bound_engine.hpp"
#include "hessbound/codelist.hpp"
#include "hessbound/errors.hpp"
#include "hessbound/expression.hpp"
#include "hessbound/reference_methods.hpp"
#include "support/oracle.hpp"

using namespace hessbound;

namespace {

constexpr double e = std::numbers::e;

Interval iv(double lo, double hi) { return {lo, hi}; }

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

bool inside(double v, const Interval& a, double slack) {
    const double s = slack * std::max(1.0, std::abs(v));
    return a.lo() - s <= v && v <= a.hi() + s;
}

bool within(const Interval& inner, const Interval& outer, double slack) {
    return inner.lo() >= outer.lo() - slack * std::max(1.0, std::abs(outer.lo())) &&
           inner.hi() <= outer.hi() + slack * std::max(1.0, std::abs(outer.hi()));
}

IndexSet from_mask(std::size_t n, unsigned mask) {
    auto s = IndexSet::none(n);
    for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) s.insert(i);
    return s;
}

} // namespace

TEST_CASE("sum of squares on the unit square") {
    const Codelist cl = compile("x1^2 + x2^2", 2);
    const Box box{iv(0, 1), iv(0, 1)};
    const EvalTrace orig = trace_original(cl, box);
    REQUIRE(orig.lines.size() == 5);
    const Interval y[] = {iv(0, 1), iv(0, 1), iv(0, 1), iv(0, 1), iv(0, 2)};
    const Box g[] = {{iv(1, 1), iv(0, 0)}, {iv(0, 0), iv(1, 1)}, {iv(0, 2), iv(0, 0)}, {iv(0, 0), iv(0, 2)},
                     {iv(0, 2), iv(0, 2)}};
    const Interval lam[] = {iv(0, 0), iv(0, 0), iv(0, 2), iv(0, 2), iv(0, 4)};
    for (std::size_t k = 0; k < 5; ++k) {
        CAPTURE(k);
        CHECK(orig.lines[k].y == y[k]);
        CHECK(orig.lines[k].grad == g[k]);
        CHECK(orig.lines[k].lam == lam[k]);
    }
    CHECK(orig.result.eigen == iv(0, 4));

    const EvalTrace imp = trace_improved(cl, box);
    CHECK(imp.lines[2].lam == iv(2, 2));
    CHECK(imp.lines[3].lam == iv(2, 2));
    CHECK(imp.lines[4].lam == iv(2, 2));
    CHECK(imp.lines[2].rule == 1);
    CHECK(imp.lines[3].rule == 1);
    CHECK(imp.lines[4].rule == 4);
    CHECK(imp.result.eigen == iv(2, 2));
    CHECK(imp.result.value == iv(0, 2));
}

TEST_CASE("square plus product with exp on the unit square") {
    const Codelist cl = compile("x1^2 + x2*exp(x2)", 2);
    const Box box{iv(0, 1), iv(0, 1)};
    const EvalResult orig = eval_original(cl, box);
    CHECK(close(orig.eigen.lo(), 1 - e, 1e-9));
    CHECK(close(orig.eigen.hi(), 3 * e + 2, 1e-9));
    CHECK(orig.eigen.contains_zero());
    const EvalTrace imp = trace_improved(cl, box);
    CHECK(close(imp.result.eigen.lo(), 2, 1e-9));
    CHECK(close(imp.result.eigen.hi(), 3 * e, 1e-9));
    CHECK_FALSE(imp.result.eigen.contains_zero());
    CHECK(imp.lines[2].rule == 1);
    CHECK(imp.lines[3].rule == 1);
    CHECK(imp.lines[4].rule == 5);
    CHECK(imp.lines[5].rule == 4);
}

TEST_CASE("single variable square") {
    const Codelist cl = compile("x1^2", 1);
    CHECK(eval_improved(cl, Box{iv(-3, 2)}).eigen == iv(2, 2));
    CHECK(eval_original(cl, Box{iv(-3, 2)}).eigen == iv(2, 2));
}

TEST_CASE("linear and partly linear functions") {
    const Codelist lin = compile("3*x1 - x2 + 1", 2);
    const Box box{iv(-1, 1), iv(-1, 1)};
    CHECK(eval_improved(lin, box).eigen == iv(0, 0));
    CHECK(eval_original(lin, box).eigen == iv(0, 0));
    // Hessian diag(2, 0): eigenvalues 0 and 2.
    const Codelist part = compile("x1^2 + x2", 2);
    CHECK(eval_improved(part, box).eigen == iv(0, 2));
    // Hessian [[0,1],[1,0]].
    const Codelist prod = compile("x1*x2", 2);
    CHECK(eval_improved(prod, box).eigen == iv(-1, 1));
}

TEST_CASE("lifting reduced bounds") {
    const auto n = std::size_t{3};
    CHECK(lift_reduced(iv(2, 3), IndexSet::none(n)) == iv(2, 3));
    CHECK(lift_reduced(iv(2, 3), IndexSet::all(n)) == iv(0, 0));
    CHECK(lift_reduced(iv(2, 3), IndexSet::of(n, {1})) == iv(0, 3));
    CHECK(lift_reduced(iv(-3, -2), IndexSet::of(n, {1})) == iv(-3, 0));
    CHECK(lift_reduced(iv(-1, 4), IndexSet::of(n, {0, 2})) == iv(-1, 4));
}

TEST_CASE("add rows are mutually exclusive and exhaustive") {
    for (std::size_t n = 1; n <= 5; ++n) {
        const unsigned full = (1u << n) - 1;
        for (unsigned a = 0; a <= full; ++a)
            for (unsigned b = 0; b <= full; ++b) {
                const auto rows = add_rule_matches(from_mask(n, a), from_mask(n, b));
                CHECK(rows.size() == 1);
            }
    }
}

TEST_CASE("mul, unary and affine rows cover every consistent configuration") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const unsigned full = (1u << n) - 1;
        for (unsigned li = 0; li <= full; ++li)
            for (unsigned lj = 0; lj <= full; ++lj)
                for (unsigned ii = 0; ii < full; ++ii) {
                    if ((ii & ~li) != 0) continue;
                    for (unsigned ij = 0; ij < full; ++ij) {
                        if ((ij & ~lj) != 0) continue;
                        const auto lk = from_mask(n, ii & ij);
                        const auto rows = mul_rule_matches(from_mask(n, ii), from_mask(n, ij), from_mask(n, li),
                                                           from_mask(n, lj), lk);
                        CHECK_FALSE(rows.empty());
                    }
                }
        for (unsigned li = 0; li <= full; ++li) {
            for (unsigned ii = 0; ii < full; ++ii) {
                if ((ii & ~li) != 0) continue;
                CHECK(unary_rule_matches(from_mask(n, li), from_mask(n, ii)).size() == 1);
            }
            CHECK(affine_rule_matches(from_mask(n, li)).size() == 1);
        }
    }
}

TEST_CASE("the tight 2x2 rows fire only in their case") {
    const auto n = std::size_t{2};
    const auto ii = IndexSet::of(n, {1});
    const auto ij = IndexSet::of(n, {0});
    // phi = exp(x1) * x2: Li = {2}, Lj = N.
    const auto rows = mul_rule_matches(ii, ij, ii, IndexSet::all(n), IndexSet::none(n));
    REQUIRE(rows.size() == 1);
    CHECK(rows.front() == 4);
    const Codelist cl = compile("exp(x1)*x2", 2);
    const EvalTrace tr = trace_improved(cl, Box{iv(0, 1), iv(0, 1)});
    CHECK(tr.lines.back().rule == 4);
    // Hessian [[x2 e^x1, e^x1], [e^x1, 0]] over the unit square.
    const auto [lo, hi] = sym_eigen_range(DenseMatrix{{0, e}, {e, 0}});
    CHECK(close(tr.result.eigen.lo(), lo, 1e-12));
    CHECK(close(tr.result.eigen.hi(), (e + std::sqrt(e * e + 4 * e * e)) / 2, 1e-12));
    CHECK(hi <= tr.result.eigen.hi());
}

TEST_CASE("bounds enclose the exact Hessian spectrum on a grid") {
    std::size_t points = 0;
    for (std::uint64_t s = 0; s < 150; ++s) {
        const auto c = oracle::random_case(50000 + s, 1, 4);
        const Codelist cl = compile(c.expression, c.n);
        const Expr tree = parse(c.expression, c.n);
        const Interval bounds[] = {eval_original(cl, c.box).eigen, eval_improved(cl, c.box).eigen,
                                   evaluate(cl, c.box, Method::Gershgorin).eigen,
                                   evaluate(cl, c.box, Method::HertzRohn).eigen};
        for (const auto& x : oracle::grid(c.box, c.n <= 2 ? 7 : 4)) {
            const auto [lo, hi] = sym_eigen_range(oracle::hessian(oracle::eval(tree, x)));
            for (const auto& b : bounds) {
                CAPTURE(c.expression);
                CHECK(inside(lo, b, 1e-7));
                CHECK(inside(hi, b, 1e-7));
            }
            ++points;
        }
    }
    CHECK(points > 1000);
}

TEST_CASE("value and gradient enclose the exact values") {
    std::mt19937_64 g(21);
    for (std::uint64_t s = 0; s < 150; ++s) {
        const auto c = oracle::random_case(60000 + s, 1, 6);
        const Codelist cl = compile(c.expression, c.n);
        const Expr tree = parse(c.expression, c.n);
        const EvalResult r = eval_improved(cl, c.box);
        const EvalResult o = eval_original(cl, c.box);
        CHECK(r.value == o.value);
        CHECK(r.gradient == o.gradient);
        for (int p = 0; p < 20; ++p) {
            const auto x = oracle::sample(c.box, g);
            const auto jet = oracle::eval(tree, x);
            CHECK(inside(jet.v, r.value, 1e-9));
            for (std::size_t i = 0; i < c.n; ++i) CHECK(inside(jet.g[i], r.gradient[i], 1e-9));
        }
    }
}

TEST_CASE("the improved bound lies inside the original bound") {
    for (std::uint64_t s = 0; s < 400; ++s) {
        const auto c = oracle::random_case(70000 + s, 2, 6);
        const Codelist cl = compile(c.expression, c.n);
        CAPTURE(c.expression);
        CHECK(within(eval_improved(cl, c.box).eigen, eval_original(cl, c.box).eigen, 1e-12));
    }
}

TEST_CASE("the original bound contains zero whenever a product occurs") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto c = oracle::random_case(80000 + s, 2, 6, true);
        const Codelist cl = compile(c.expression, c.n);
        CAPTURE(c.expression);
        CHECK(eval_original(cl, c.box).eigen.contains_zero());
    }
}

TEST_CASE("operation count grows like n times t") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto c = oracle::random_case(90000 + s, 1, 8);
        const Codelist cl = compile(c.expression, c.n);
        const auto bound = 40 * c.n * cl.size();
        CHECK(eval_original(cl, c.box).op_count <= bound);
        CHECK(eval_improved(cl, c.box).op_count <= bound);
    }
}

TEST_CASE("domain violations carry the line") {
    const Codelist cl = compile("x1 + ln(x2)", 2);
    try {
        (void)eval_improved(cl, Box{iv(0, 1), iv(-1, 1)});
        FAIL("expected DomainViolation");
    } catch (const DomainViolation& v) {
        CHECK(v.op() == "ln");
        REQUIRE(v.line());
        CHECK(*v.line() == 3);
    }
    CHECK_THROWS_AS(eval_original(compile("1/x1", 1), Box{iv(-1, 1)}), DomainViolation);
    CHECK_THROWS_AS(eval_original(compile("sqrt(x1)", 1), Box{iv(0, 1)}), DomainViolation);
    CHECK_THROWS_AS(eval_original(cl, Box{iv(0, 1)}), LengthMismatch);
}

TEST_CASE("trace text") {
    const Codelist cl = compile("x1^2 + x2^2", 2);
    const std::string text = format_trace(cl, trace_improved(cl, Box{iv(0, 1), iv(0, 1)}));
    CHECK(text.find("5: add") != std::string::npos);
    CHECK(text.find("rule=4") != std::string::npos);
}

TEST_CASE("gradient encloses central differences") {
    std::mt19937_64 g(22);
    for (std::uint64_t s = 0; s < 60; ++s) {
        const auto c = oracle::random_case(61000 + s, 1, 5);
        const Codelist cl = compile(c.expression, c.n);
        const Box grad = eval_improved(cl, c.box).gradient;
        for (int p = 0; p < 100; ++p) {
            auto x = oracle::sample(c.box, g);
            for (std::size_t i = 0; i < c.n; ++i) {
                const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
                const double keep = x[i];
                x[i] = keep + h;
                const double up = evaluate_point(cl, x);
                x[i] = keep - h;
                const double dn = evaluate_point(cl, x);
                x[i] = keep;
                const double d = (up - dn) / (2 * h);
                const double tol = 1e-6 + 1e-6 * std::abs(d);
                CHECK(d >= grad[i].lo() - tol);
                CHECK(d <= grad[i].hi() + tol);
            }
        }
    }
}

TEST_CASE("operation count on sums of squares stays below a fixed multiple of n t") {
    for (std::size_t n : {8, 16, 32, 64}) {
        std::string src;
        for (std::size_t i = 1; i <= n; ++i) src += (i > 1 ? " + x" : "x") + std::to_string(i) + "^2";
        const Codelist cl = compile(src, n);
        const auto r = eval_improved(cl, Box(std::vector<Interval>(n, iv(-1, 1))));
        CAPTURE(n);
        CHECK(r.op_count <= 2 * n * cl.t());
        CHECK(r.lambda_op_count < r.op_count);
    }
}
