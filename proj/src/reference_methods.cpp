#include "hessbound/reference_methods.hpp"

#include <algorithm>
#include <cmath>

#include "counted_ops.hpp"
#include "hessbound/errors.hpp"

namespace hessbound {

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> rows) : n_(n), a_(std::move(rows)) {
    if (a_.size() != n * n) throw LengthMismatch("matrix data does not have n*n entries");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
    for (const auto& r : rows) {
        if (r.size() != n_) throw LengthMismatch("matrix is not square");
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

double DenseMatrix::frobenius() const noexcept {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

namespace {

void require_symmetric(const DenseMatrix& m) {
    const double tol = 1e-12 * std::max(1.0, m.frobenius());
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = i + 1; j < m.n(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > tol) throw NotSymmetric("matrix is not symmetric");
}

} // namespace

SymIntervalMatrix::SymIntervalMatrix(const DenseMatrix& lo, const DenseMatrix& hi) : SymIntervalMatrix(lo.n()) {
    if (hi.n() != lo.n()) throw LengthMismatch("lo and hi differ in dimension");
    require_symmetric(lo);
    require_symmetric(hi);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j) set(i, j, Interval(lo(i, j), hi(i, j)));
}

void SymIntervalMatrix::set(std::size_t i, std::size_t j, const Interval& v) {
    e_[i * n_ + j] = v;
    e_[j * n_ + i] = v;
}

DenseMatrix SymIntervalMatrix::lo() const {
    DenseMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).lo();
    return m;
}

DenseMatrix SymIntervalMatrix::hi() const {
    DenseMatrix m(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).hi();
    return m;
}

bool SymIntervalMatrix::contains(const DenseMatrix& m) const {
    if (m.n() != n_) return false;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (!(*this)(i, j).contains(m(i, j))) return false;
    return true;
}

namespace {

using detail::CountedOps;

struct HessLine {
    Interval y;
    Box grad;
    SymIntervalMatrix h;
};

// [r'] and [r''] of a unary line y_k = r(y_i).
std::pair<Interval, Interval> derivatives(const Line& ln, const Interval& yi, const Interval& yk, CountedOps& ops) {
    switch (ln.op) {
    case Op::PowNat:
        return {ops.scale(ln.m, ops.pow(yi, ln.m - 1)), ops.scale(ln.m * (ln.m - 1), ops.pow(yi, ln.m - 2))};
    case Op::OneOver: return {ops.scale(-1.0, ops.pow(yk, 2)), ops.scale(2.0, ops.pow(yk, 3))};
    case Op::Sqrt: return {ops.recip(ops.scale(2.0, yk)), ops.recip(ops.scale(-4.0, ops.pow(yk, 3)))};
    case Op::Exp: return {yk, yk};
    case Op::Ln: return {ops.recip(yi), ops.scale(-1.0, ops.recip(ops.pow(yi, 2)))};
    case Op::AddConst: return {Interval(1.0, 1.0), Interval()};
    case Op::MulByConst: return {Interval::point(ln.c), Interval()};
    default: return {};
    }
}

Interval unary_value(const Line& ln, const Interval& yi, CountedOps& ops) {
    switch (ln.op) {
    case Op::PowNat: return ops.pow(yi, ln.m);
    case Op::OneOver: return ops.recip(yi);
    case Op::Sqrt:
        if (yi.lo() <= 0.0) throw DomainViolation("sqrt", "argument " + yi.to_string() + " not strictly positive");
        return ops.sqrt(yi);
    case Op::Exp: return ops.exp(yi);
    case Op::Ln: return ops.log(yi);
    case Op::AddConst: return ops.add_const(yi, ln.c);
    default: return ops.scale(ln.c, yi);
    }
}

// Entry (p,q) of g g^T; the diagonal uses the square for a tighter enclosure.
Interval outer_sym(const Box& g, std::size_t p, std::size_t q, CountedOps& ops) {
    return p == q ? ops.pow(g[p], 2) : ops.mul(g[p], g[q]);
}

void hessian_line(const Codelist& cl, std::size_t k, std::vector<HessLine>& s, const Box& box, CountedOps& ops) {
    const Line& ln = cl.line(k);
    const auto n = cl.n();
    HessLine& out = s[k];
    out.h = SymIntervalMatrix(n);
    if (ln.op == Op::Var) {
        out.y = box[k];
        out.grad = Box::unit(n, k);
        return;
    }
    const HessLine& a = s[ln.i];
    if (ln.op == Op::Add || ln.op == Op::Mul) {
        const HessLine& b = s[ln.j];
        if (ln.op == Op::Add) {
            out.y = ops.add(a.y, b.y);
            out.grad = ops.add(a.grad, b.grad);
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = p; q < n; ++q) out.h.set(p, q, ops.add(a.h(p, q), b.h(p, q)));
            return;
        }
        out.y = ops.mul(a.y, b.y);
        out.grad = ops.add(ops.mul(b.y, a.grad), ops.mul(a.y, b.grad));
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p; q < n; ++q) {
                const Interval cross = ops.add(ops.mul(a.grad[p], b.grad[q]), ops.mul(b.grad[p], a.grad[q]));
                const Interval first = ops.add(ops.mul(b.y, a.h(p, q)), ops.mul(a.y, b.h(p, q)));
                out.h.set(p, q, ops.add(first, cross));
            }
        }
        return;
    }
    out.y = unary_value(ln, a.y, ops);
    const auto [d1, d2] = derivatives(ln, a.y, out.y, ops);
    out.grad = ops.mul(d1, a.grad);
    const bool affine = ln.op == Op::AddConst || ln.op == Op::MulByConst;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p; q < n; ++q) {
            Interval v = ops.mul(d1, a.h(p, q));
            if (!affine) v = ops.add(ops.mul(d2, outer_sym(a.grad, p, q, ops)), v);
            out.h.set(p, q, v);
        }
    }
}

} // namespace

IntervalHessian interval_hessian_full(const Codelist& cl, const Box& box) {
    validate(cl);
    if (box.size() != cl.n()) throw LengthMismatch("box dimension does not match codelist");
    CountedOps ops;
    std::vector<HessLine> s(cl.size());
    for (std::size_t k = 0; k < cl.size(); ++k) {
        try {
            hessian_line(cl, k, s, box, ops);
        } catch (const DomainViolation& e) {
            throw e.at_line(k + 1);
        }
    }
    return {s.back().y, s.back().grad, s.back().h, ops.count()};
}

SymIntervalMatrix interval_hessian(const Codelist& cl, const Box& box) { return interval_hessian_full(cl, box).hessian; }

DenseMatrix point_hessian(const Codelist& cl, std::span<const double> x) {
    std::vector<Interval> dims;
    dims.reserve(x.size());
    for (double v : x) dims.push_back(Interval::point(v));
    const SymIntervalMatrix h = interval_hessian(cl, Box(std::move(dims)));
    DenseMatrix m = h.lo();
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j) m(i, j) = h(i, j).mid();
    return m;
}

Interval gershgorin_bounds(const SymIntervalMatrix& h) {
    const auto n = h.n();
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) r += std::max(std::abs(h(i, j).lo()), std::abs(h(i, j).hi()));
        const double l = h(i, i).lo() - r;
        const double u = h(i, i).hi() + r;
        lo = i == 0 ? l : std::min(lo, l);
        hi = i == 0 ? u : std::max(hi, u);
    }
    return {lo, hi};
}

Interval hertz_rohn_bounds(const SymIntervalMatrix& h, std::size_t limit) {
    const auto n = h.n();
    if (n > limit || n >= 63)
        throw DimensionTooLarge("Hertz-Rohn bounds for n = " + std::to_string(n) + " exceed the limit " +
                                std::to_string(limit));
    if (n == 0) return {};
    DenseMatrix lower(n);
    DenseMatrix upper(n);
    double lo = 0.0;
    double hi = 0.0;
    const std::uint64_t count = std::uint64_t{1} << (n - 1);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        // z_0 = +1; bit b of mask flips the sign of z_{b+1}.
        auto z = [&](std::size_t i) { return i == 0 || ((mask >> (i - 1)) & 1U) == 0 ? 1.0 : -1.0; };
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const Interval& e = h(i, j);
                const double mid = 0.5 * (e.lo() + e.hi());
                const double rad = 0.5 * (e.hi() - e.lo());
                const double zr = z(i) * z(j) * rad;
                lower(i, j) = mid - zr;
                upper(i, j) = mid + zr;
            }
        }
        const double l = sym_eigen_range(lower).first;
        const double u = sym_eigen_range(upper).second;
        lo = mask == 0 ? l : std::min(lo, l);
        hi = mask == 0 ? u : std::max(hi, u);
    }
    return {lo, hi};
}

std::vector<double> sym_eigenvalues(const DenseMatrix& m) {
    require_symmetric(m);
    const auto n = m.n();
    DenseMatrix a = m;
    const double target = 1e-12 * a.frobenius();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::pair<double, double> sym_eigen_range(const DenseMatrix& m) {
    if (m.n() == 0) return {0.0, 0.0};
    const auto ev = sym_eigenvalues(m);
    return {ev.front(), ev.back()};
}

EvalResult evaluate(const Codelist& cl, const Box& box, Method method) {
    switch (method) {
    case Method::Original: return eval_original(cl, box);
    case Method::Improved: return eval_improved(cl, box);
    case Method::Gershgorin:
    case Method::HertzRohn: {
        const IntervalHessian ih = interval_hessian_full(cl, box);
        EvalResult r;
        r.value = ih.value;
        r.gradient = ih.gradient;
        r.method = method;
        r.op_count = ih.op_count;
        r.eigen = method == Method::Gershgorin ? gershgorin_bounds(ih.hessian) : hertz_rohn_bounds(ih.hessian);
        return r;
    }
    }
    throw std::invalid_argument("unknown method");
}

} // namespace hessbound
