#pragma once

// Interval operations that charge a scalar-operation counter.

#include <cstddef>

#include "hessbound/interval.hpp"

namespace hessbound::detail {

class CountedOps {
public:
    std::size_t count() const noexcept { return count_; }
    void charge(std::size_t k) noexcept { count_ += k; }

    Interval add(const Interval& a, const Interval& b) { return ++count_, a + b; }
    Interval mul(const Interval& a, const Interval& b) { return ++count_, a * b; }
    Interval recip(const Interval& a) { return ++count_, hessbound::recip(a); }
    Interval pow(const Interval& a, int m) { return ++count_, hessbound::pow(a, m); }
    Interval sqrt(const Interval& a) { return ++count_, hessbound::sqrt(a); }
    Interval exp(const Interval& a) { return ++count_, hessbound::exp(a); }
    Interval log(const Interval& a) { return ++count_, hessbound::log(a); }
    Interval add_const(const Interval& a, double c) { return ++count_, hessbound::add_const(a, c); }
    Interval scale(double c, const Interval& a) { return ++count_, hessbound::scale(c, a); }
    Interval zero_widen(const Interval& a) { return ++count_, hessbound::zero_widen(a); }
    Interval hull(const Interval& a, const Interval& b) { return count_ += lambda_r_cost, hessbound::hull(a, b); }

    Interval lambda_s(const Box& a) { return count_ += lambda_s_cost(a.size()), hessbound::lambda_s(a); }
    Interval lambda_t(const Box& a, const Box& b) {
        return count_ += lambda_t_cost(a.size()), hessbound::lambda_t(a, b);
    }
    Interval lambda_star(const Interval& a, const Interval& b, const Interval& c) {
        return count_ += lambda_star_cost, hessbound::lambda_star(a, b, c);
    }

    Box add(const Box& a, const Box& b) {
        Box r = Box::zeros(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = add(a[i], b[i]);
        return r;
    }
    Box mul(const Interval& s, const Box& a) {
        Box r = Box::zeros(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = mul(s, a[i]);
        return r;
    }
    Box scale(double c, const Box& a) {
        Box r = Box::zeros(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = scale(c, a[i]);
        return r;
    }

private:
    std::size_t count_ = 0;
};

} // namespace hessbound::detail
