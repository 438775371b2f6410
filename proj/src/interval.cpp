#include "hessbound/interval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hessbound/index_set.hpp"
#include "hessbound/numeric_text.hpp"

namespace hessbound {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw InvalidInterval("non-finite interval endpoint [" + format_number(lo) + ", " + format_number(hi) + "]");
    if (lo > hi) throw InvalidInterval("interval with lo > hi: [" + format_number(lo) + ", " + format_number(hi) + "]");
}

double Interval::max_sq() const noexcept { return std::max(lo_ * lo_, hi_ * hi_); }

std::string Interval::to_string() const { return "[" + format_number(lo_) + "," + format_number(hi_) + "]"; }

std::ostream& operator<<(std::ostream& os, const Interval& a) { return os << a.to_string(); }

Interval operator+(const Interval& a, const Interval& b) { return {a.lo() + b.lo(), a.hi() + b.hi()}; }

Interval operator*(const Interval& a, const Interval& b) {
    const double p1 = a.lo() * b.lo();
    const double p2 = a.lo() * b.hi();
    const double p3 = a.hi() * b.lo();
    const double p4 = a.hi() * b.hi();
    return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

Interval operator-(const Interval& a, const Interval& b) { return a + scale(-1.0, b); }

Interval recip(const Interval& a) {
    if (a.contains_zero()) throw DomainViolation("oneOver", "0 in " + a.to_string());
    return {1.0 / a.hi(), 1.0 / a.lo()};
}

namespace {

double ipow(double x, int m) {
    double r = 1.0;
    double b = x;
    for (unsigned e = static_cast<unsigned>(m); e != 0; e >>= 1) {
        if (e & 1U) r *= b;
        b *= b;
    }
    return r;
}

} // namespace

Interval pow(const Interval& a, int m) {
    if (m < 0) throw DomainViolation("powNat", "negative exponent " + std::to_string(m));
    if (m == 0) return {1.0, 1.0};
    if (m == 1) return a;
    const double l = ipow(a.lo(), m);
    const double h = ipow(a.hi(), m);
    if (a.lo() > 0.0 || m % 2 == 1) return {l, h};
    if (a.hi() < 0.0) return {h, l};
    return {0.0, std::max(l, h)};
}

Interval sqrt(const Interval& a) {
    if (a.lo() < 0.0) throw DomainViolation("sqrt", "negative lower endpoint in " + a.to_string());
    return {std::sqrt(a.lo()), std::sqrt(a.hi())};
}

Interval exp(const Interval& a) { return {std::exp(a.lo()), std::exp(a.hi())}; }

Interval log(const Interval& a) {
    if (a.lo() <= 0.0) throw DomainViolation("ln", "nonpositive lower endpoint in " + a.to_string());
    return {std::log(a.lo()), std::log(a.hi())};
}

Interval add_const(const Interval& a, double c) { return {a.lo() + c, a.hi() + c}; }

Interval scale(double c, const Interval& a) {
    if (c >= 0.0) return {c * a.lo(), c * a.hi()};
    return {c * a.hi(), c * a.lo()};
}

Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

Interval zero_widen(const Interval& a) { return {std::min(a.lo(), 0.0), std::max(a.hi(), 0.0)}; }

bool is_subset(const Interval& inner, const Interval& outer) noexcept {
    return outer.lo() <= inner.lo() && inner.hi() <= outer.hi();
}

Box Box::unit(std::size_t n, std::size_t k) {
    Box b = zeros(n);
    b.dims_.at(k) = Interval(1.0, 1.0);
    return b;
}

bool Box::contains(std::span<const double> x) const noexcept {
    if (x.size() != dims_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!dims_[i].contains(x[i])) return false;
    return true;
}

bool Box::is_subset_of(const Box& outer) const noexcept {
    if (outer.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (!is_subset(dims_[i], outer[i])) return false;
    return true;
}

std::string Box::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (i != 0) s += ',';
        s += dims_[i].to_string();
    }
    return s + ")";
}

Box grad_slice(const Box& g, const IndexSet& j) {
    if (j.empty()) throw EmptySlice();
    if (j.universe() != g.size()) throw LengthMismatch("slice index set does not match gradient length");
    std::vector<Interval> out;
    out.reserve(j.size());
    for (auto i : j.members()) out.push_back(g[i]);
    return Box(std::move(out));
}

Interval lambda_s(std::span<const Interval> a) {
    if (a.empty()) throw EmptySlice();
    if (a.size() == 1) return pow(a[0], 2);
    double s = 0.0;
    for (const auto& ai : a) s += ai.max_sq();
    return {0.0, s};
}

Interval lambda_t(std::span<const Interval> a, std::span<const Interval> b) {
    if (a.size() != b.size()) throw LengthMismatch("lambda_t operands differ in length");
    if (a.empty()) throw EmptySlice();
    if (a.size() == 1) return scale(2.0, a[0] * b[0]);
    double sa = 0.0;
    double sb = 0.0;
    Interval dot;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i].max_sq();
        sb += b[i].max_sq();
        dot = dot + a[i] * b[i];
    }
    const double beta = std::sqrt(sa * sb);
    return {dot.lo() - beta, dot.hi() + beta};
}

Interval lambda_star(const Interval& a, const Interval& b, const Interval& c) {
    const double d = 4.0 * c.max_sq();
    const double dl = a.lo() - b.lo();
    const double dh = a.hi() - b.hi();
    return {0.5 * (a.lo() + b.lo() - std::sqrt(dl * dl + d)), 0.5 * (a.hi() + b.hi() + std::sqrt(dh * dh + d))};
}

std::size_t lambda_s_cost(std::size_t m) noexcept { return m <= 1 ? 1 : 2 * m - 1; }

std::size_t lambda_t_cost(std::size_t m) noexcept { return m <= 1 ? 2 : 6 * m; }

} // namespace hessbound
