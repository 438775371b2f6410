#pragma once

// Two-step reference pipeline: an interval Hessian by second-order forward
// interval AD, then Gershgorin or Hertz-Rohn spectral bounds of that matrix.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hessbound/bound_engine.hpp"
#include "hessbound/codelist.hpp"
#include "hessbound/interval.hpp"

namespace hessbound {

/// Dense real n x n matrix, row-major.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    DenseMatrix(std::size_t n, std::vector<double> rows);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t n() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    double frobenius() const noexcept;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Symmetric interval matrix [lo, hi].
class SymIntervalMatrix {
public:
    SymIntervalMatrix() = default;
    explicit SymIntervalMatrix(std::size_t n) : n_(n), e_(n * n) {}
    /// Throws NotSymmetric unless lo and hi are symmetric, InvalidInterval if lo > hi somewhere.
    SymIntervalMatrix(const DenseMatrix& lo, const DenseMatrix& hi);

    std::size_t n() const noexcept { return n_; }
    const Interval& operator()(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
    /// Sets both (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, const Interval& v);

    DenseMatrix lo() const;
    DenseMatrix hi() const;
    bool contains(const DenseMatrix& m) const;

private:
    std::size_t n_ = 0;
    std::vector<Interval> e_;
};

struct IntervalHessian {
    Interval value;
    Box gradient;
    SymIntervalMatrix hessian;
    std::size_t op_count = 0;
};

/// Throws DomainViolation (tagged with the line) like the direct methods.
IntervalHessian interval_hessian_full(const Codelist& cl, const Box& box);
SymIntervalMatrix interval_hessian(const Codelist& cl, const Box& box);
/// Hessian of phi at a point, by the same propagation with point intervals.
DenseMatrix point_hessian(const Codelist& cl, std::span<const double> x);

Interval gershgorin_bounds(const SymIntervalMatrix& h);

inline constexpr std::size_t default_hertz_rohn_limit = 20;
/// Tight bounds over all symmetric matrices in h; 2^(n-1) vertex pairs.
/// Throws DimensionTooLarge if n exceeds limit.
Interval hertz_rohn_bounds(const SymIntervalMatrix& h, std::size_t limit = default_hertz_rohn_limit);

/// All eigenvalues ascending, by cyclic Jacobi. Throws NotSymmetric.
std::vector<double> sym_eigenvalues(const DenseMatrix& m);
/// (lambda_min, lambda_max).
std::pair<double, double> sym_eigen_range(const DenseMatrix& m);

/// Any of the four methods behind one entry point.
EvalResult evaluate(const Codelist& cl, const Box& box, Method method);

} // namespace hessbound
