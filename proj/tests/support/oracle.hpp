#pragma once

// Test-only reference: second-order forward AD in plain doubles over the parsed
// tree (before normalization), plus seeded case generators.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hessbound/expression.hpp"
#include "hessbound/harness.hpp"
#include "hessbound/interval.hpp"
#include "hessbound/reference_methods.hpp"

namespace oracle {

using hessbound::Expr;
using hessbound::ExprKind;

struct Jet {
    double v = 0.0;
    std::vector<double> g;  // n
    std::vector<double> h;  // n*n

    explicit Jet(std::size_t n = 0) : g(n, 0.0), h(n * n, 0.0) {}
    std::size_t n() const { return g.size(); }
};

inline Jet constant(double c, std::size_t n) {
    Jet r(n);
    r.v = c;
    return r;
}

inline Jet add(const Jet& a, const Jet& b) {
    Jet r(a.n());
    r.v = a.v + b.v;
    for (std::size_t i = 0; i < r.g.size(); ++i) r.g[i] = a.g[i] + b.g[i];
    for (std::size_t i = 0; i < r.h.size(); ++i) r.h[i] = a.h[i] + b.h[i];
    return r;
}

inline Jet mul(const Jet& a, const Jet& b) {
    const auto n = a.n();
    Jet r(n);
    r.v = a.v * b.v;
    for (std::size_t i = 0; i < n; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            r.h[i * n + j] = a.h[i * n + j] * b.v + a.v * b.h[i * n + j] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
    return r;
}

// f(a) given f, f', f''.
inline Jet chain(const Jet& a, double f, double d1, double d2) {
    const auto n = a.n();
    Jet r(n);
    r.v = f;
    for (std::size_t i = 0; i < n; ++i) r.g[i] = d1 * a.g[i];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r.h[i * n + j] = d1 * a.h[i * n + j] + d2 * a.g[i] * a.g[j];
    return r;
}

inline Jet eval(const Expr& e, const std::vector<double>& x) {
    const auto n = x.size();
    auto arg = [&](std::size_t i) { return eval(e.args[i], x); };
    switch (e.kind) {
    case ExprKind::Var: {
        Jet r(n);
        r.v = x[e.var];
        r.g[e.var] = 1.0;
        return r;
    }
    case ExprKind::Const: return constant(e.value, n);
    case ExprKind::Add: return add(arg(0), arg(1));
    case ExprKind::Sub: return add(arg(0), chain(arg(1), -arg(1).v, -1.0, 0.0));
    case ExprKind::Mul: return mul(arg(0), arg(1));
    case ExprKind::Neg: {
        const Jet a = arg(0);
        return chain(a, -a.v, -1.0, 0.0);
    }
    case ExprKind::Div: {
        const Jet b = arg(1);
        return mul(arg(0), chain(b, 1.0 / b.v, -1.0 / (b.v * b.v), 2.0 / (b.v * b.v * b.v)));
    }
    case ExprKind::Recip: {
        const Jet b = arg(0);
        return chain(b, 1.0 / b.v, -1.0 / (b.v * b.v), 2.0 / (b.v * b.v * b.v));
    }
    case ExprKind::PowNat: {
        const Jet a = arg(0);
        const int m = e.exponent;
        const double f = std::pow(a.v, m);
        const double d1 = m == 0 ? 0.0 : m * std::pow(a.v, m - 1);
        const double d2 = m < 2 ? 0.0 : m * (m - 1) * std::pow(a.v, m - 2);
        return chain(a, f, d1, d2);
    }
    case ExprKind::Sqrt: {
        const Jet a = arg(0);
        const double s = std::sqrt(a.v);
        return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
    }
    case ExprKind::Exp: {
        const Jet a = arg(0);
        const double v = std::exp(a.v);
        return chain(a, v, v, v);
    }
    case ExprKind::Ln: {
        const Jet a = arg(0);
        return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
    }
    case ExprKind::AddConst: {
        const Jet a = arg(0);
        return chain(a, a.v + e.value, 1.0, 0.0);
    }
    case ExprKind::MulByConst: {
        const Jet a = arg(0);
        return chain(a, e.value * a.v, e.value, 0.0);
    }
    }
    return Jet(n);
}

inline hessbound::DenseMatrix hessian(const Jet& j) { return hessbound::DenseMatrix(j.n(), j.h); }

/// Points of the k^n tensor grid over box.
inline std::vector<std::vector<double>> grid(const hessbound::Box& box, std::size_t k) {
    const auto n = box.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= k;
    std::vector<std::vector<double>> pts;
    pts.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<double> x(n);
        auto r = idx;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = k == 1 ? 0.5 : static_cast<double>(r % k) / static_cast<double>(k - 1);
            r /= k;
            x[i] = box[i].lo() + t * (box[i].hi() - box[i].lo());
            x[i] = std::min(std::max(x[i], box[i].lo()), box[i].hi());
        }
        pts.push_back(std::move(x));
    }
    return pts;
}

inline std::vector<double> sample(const hessbound::Box& box, std::mt19937_64& g) {
    std::vector<double> x(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
        const double u = static_cast<double>(g() >> 11) * 0x1.0p-53;
        x[i] = box[i].lo() + u * (box[i].hi() - box[i].lo());
    }
    return x;
}

struct Case {
    std::string expression;
    std::size_t n = 0;
    hessbound::Box domain;
    hessbound::Box box;
};

/// Seeded random (function, box) pair with n in [n_min, n_max].
inline Case random_case(std::uint64_t seed, std::size_t n_min, std::size_t n_max, bool require_mul = false,
                        int max_depth = 3) {
    std::mt19937_64 g(seed);
    Case c;
    c.n = n_min + static_cast<std::size_t>(g() % (n_max - n_min + 1));
    std::vector<hessbound::Interval> dims;
    for (std::size_t i = 0; i < c.n; ++i) {
        const double lo = -2.0 + 3.0 * (static_cast<double>(g() >> 11) * 0x1.0p-53);
        const double w = 0.5 + 2.5 * (static_cast<double>(g() >> 11) * 0x1.0p-53);
        dims.emplace_back(lo, lo + w);
    }
    c.domain = hessbound::Box(std::move(dims));
    hessbound::RandomFunctionOptions opt;
    opt.n = c.n;
    opt.min_terms = 1;
    opt.max_terms = c.n + 1;
    opt.max_depth = max_depth;
    opt.require_mul = require_mul;
    c.expression = hessbound::random_function(c.domain, opt, g());
    c.box = hessbound::random_boxes(c.domain, 1, g()).front();
    return c;
}

} // namespace oracle
