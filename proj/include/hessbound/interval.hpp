#pragma once

// Closed real intervals, boxes, and the spectral interval operators used by
// the eigenvalue bound rules. Plain round-to-nearest arithmetic throughout.

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hessbound/errors.hpp"

namespace hessbound {

class IndexSet;

/// Closed interval [lo, hi] with finite endpoints.
class Interval {
public:
    /// The point interval [0, 0].
    constexpr Interval() noexcept = default;

    /// Throws InvalidInterval if an endpoint is not finite or lo > hi.
    Interval(double lo, double hi);

    static Interval point(double v) { return Interval(v, v); }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double width() const noexcept { return hi_ - lo_; }
    double mid() const noexcept { return 0.5 * (lo_ + hi_); }

    bool contains(double v) const noexcept { return lo_ <= v && v <= hi_; }
    bool contains_zero() const noexcept { return contains(0.0); }
    bool is_point() const noexcept { return lo_ == hi_; }

    /// Largest squared endpoint, max{lo^2, hi^2}.
    double max_sq() const noexcept;

    friend bool operator==(const Interval&, const Interval&) = default;

    std::string to_string() const;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Interval& a);

// Basic interval arithmetic.
Interval operator+(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
/// 1/[a]; requires 0 not in [a].
Interval recip(const Interval& a);
/// [a]^m for natural m, with [a]^0 = [1,1] and [a]^1 = [a].
Interval pow(const Interval& a, int m);
/// Requires a.lo >= 0.
Interval sqrt(const Interval& a);
Interval exp(const Interval& a);
/// Requires a.lo > 0.
Interval log(const Interval& a);
Interval add_const(const Interval& a, double c);
Interval scale(double c, const Interval& a);
/// [a] - [b], computed as [a] + (-1)[b].
Interval operator-(const Interval& a, const Interval& b);

/// Interval hull [min{a.lo, b.lo}, max{a.hi, b.hi}].
Interval hull(const Interval& a, const Interval& b);
/// [min{a.lo, 0}, max{a.hi, 0}].
Interval zero_widen(const Interval& a);
bool is_subset(const Interval& inner, const Interval& outer) noexcept;

/// Axis-aligned box: an ordered list of intervals.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> dims) : dims_(std::move(dims)) {}
    Box(std::initializer_list<Interval> dims) : dims_(dims) {}

    /// All-zero box of dimension n.
    static Box zeros(std::size_t n) { return Box(std::vector<Interval>(n)); }
    /// Unit vector e_k (0-based k) as a point box.
    static Box unit(std::size_t n, std::size_t k);

    std::size_t size() const noexcept { return dims_.size(); }
    bool empty() const noexcept { return dims_.empty(); }
    const Interval& operator[](std::size_t i) const { return dims_[i]; }
    Interval& operator[](std::size_t i) { return dims_[i]; }
    auto begin() const noexcept { return dims_.begin(); }
    auto end() const noexcept { return dims_.end(); }
    std::span<const Interval> view() const noexcept { return dims_; }

    bool contains(std::span<const double> x) const noexcept;
    /// True if every component of inner lies in the matching component of outer.
    bool is_subset_of(const Box& outer) const noexcept;

    friend bool operator==(const Box&, const Box&) = default;

    std::string to_string() const;

private:
    std::vector<Interval> dims_;
};

/// Components of g at the members of j, ascending. Throws EmptySlice if j is empty.
Box grad_slice(const Box& g, const IndexSet& j);

// Spectral interval operators.

/// Enclosure of the spectrum of a a^T for a in [a]:
/// [a_1]^2 if m = 1, otherwise [0, sum max{lo_i^2, hi_i^2}].
Interval lambda_s(std::span<const Interval> a);
inline Interval lambda_s(const Box& a) { return lambda_s(a.view()); }

/// Enclosure of the spectrum of a b^T + b a^T:
/// 2[a_1][b_1] if m = 1, otherwise [-beta, beta] + sum [a_i][b_i]
/// with beta = sqrt(sum max a_i^2 * sum max b_i^2).
Interval lambda_t(std::span<const Interval> a, std::span<const Interval> b);
inline Interval lambda_t(const Box& a, const Box& b) { return lambda_t(a.view(), b.view()); }

inline Interval lambda_r(const Interval& a, const Interval& b) { return hull(a, b); }

/// Tight spectral bounds of the symmetric 2x2 family [[a, c], [c, b]].
Interval lambda_star(const Interval& a, const Interval& b, const Interval& c);

/// Scalar operation counts charged for each spectral operator.
std::size_t lambda_s_cost(std::size_t m) noexcept;
std::size_t lambda_t_cost(std::size_t m) noexcept;
inline constexpr std::size_t lambda_r_cost = 2;
inline constexpr std::size_t lambda_star_cost = 14;

} // namespace hessbound
