#pragma once

// Eigenvalue bounds for the Hessian of phi over a box, computed directly on the
// extended codelist: the original method and the sparsity-aware improved method.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hessbound/codelist.hpp"
#include "hessbound/index_set.hpp"
#include "hessbound/interval.hpp"

namespace hessbound {

enum class Method { Original, Improved, Gershgorin, HertzRohn };

const char* method_name(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

struct LineState {
    Interval y;
    Box grad;
    /// [lambda_k] for the original method, [lambda_k dagger] for the improved one.
    Interval lam;
    /// Row of the improved rule table used for this line (1-based); 0 for
    /// var lines and for the original method.
    int rule = 0;
};

struct EvalResult {
    Interval value;
    Box gradient;
    Interval eigen;
    Method method = Method::Original;
    std::size_t op_count = 0;
    /// Part of op_count spent on the eigenvalue bound rules (direct methods only).
    std::size_t lambda_op_count = 0;
};

struct EvalTrace {
    std::vector<LineState> lines;
    EvalResult result;
};

/// Throws LengthMismatch if the box dimension differs from n, DomainViolation
/// (tagged with its 1-based line) if an operation is undefined on the box.
EvalTrace trace_original(const Codelist& cl, const Box& box);
EvalResult eval_original(const Codelist& cl, const Box& box);

/// Requires analyzed index sets (runs the analysis itself otherwise).
EvalTrace trace_improved(const Codelist& cl, const Box& box);
EvalResult eval_improved(const Codelist& cl, const Box& box);

/// Spectral bounds of the full Hessian from bounds of the reduced one:
/// lam if L is empty, [0,0] if L is everything, zero_widen(lam) otherwise.
Interval lift_reduced(const Interval& lam, const IndexSet& linear);

// Condition rows of the improved rule table. Each returns every row (1-based,
// ascending) whose printed condition holds; dispatch takes the first.

std::vector<int> add_rule_matches(const IndexSet& li, const IndexSet& lj);
std::vector<int> mul_rule_matches(const IndexSet& ii, const IndexSet& ij, const IndexSet& li, const IndexSet& lj,
                                  const IndexSet& lk);
/// Shared by powNat, oneOver, sqrt, exp and ln.
std::vector<int> unary_rule_matches(const IndexSet& li, const IndexSet& lk);
/// Shared by addC and mulByC.
std::vector<int> affine_rule_matches(const IndexSet& li);

/// "k: op [y] grad=(..) lam=[..] rule=r" per line, 1-based.
std::string format_trace(const Codelist& cl, const EvalTrace& trace);

} // namespace hessbound
