#pragma once

// Straight-line program for phi: n variable lines followed by t operation
// lines, each referencing strictly earlier lines. The last line is phi.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hessbound/index_set.hpp"

namespace hessbound {

enum class Op { Var, Add, Mul, PowNat, OneOver, Sqrt, Exp, Ln, AddConst, MulByConst };

const char* op_name(Op op) noexcept;
bool is_binary(Op op) noexcept;
/// Unary operations with a nonlinear outer function.
bool is_nonlinear_unary(Op op) noexcept;

/// One codelist line. Operand references are 0-based line indices.
struct Line {
    Op op = Op::Var;
    std::size_t i = 0;  ///< first operand (unused for var)
    std::size_t j = 0;  ///< second operand (binary ops)
    double c = 0.0;     ///< addC / mulByC constant
    int m = 0;          ///< powNat exponent, >= 2

    static Line var() { return {}; }
    static Line binary(Op op, std::size_t i, std::size_t j) { return {op, i, j, 0.0, 0}; }
    static Line unary(Op op, std::size_t i) { return {op, i, 0, 0.0, 0}; }
    static Line pow_nat(std::size_t i, int m) { return {Op::PowNat, i, 0, 0.0, m}; }
    static Line with_const(Op op, std::size_t i, double c) { return {op, i, 0, c, 0}; }
};

/// Static sparsity information of one line: y_k is independent of every x_i
/// with i in `independent` and depends at most linearly on every x_i in `linear`.
struct LineSets {
    IndexSet independent;
    IndexSet linear;
};

class Codelist {
public:
    Codelist() = default;
    /// No checks are made here; see validate().
    Codelist(std::size_t n, std::vector<Line> lines) : n_(n), lines_(std::move(lines)) {}

    std::size_t n() const noexcept { return n_; }
    /// Number of operation lines t.
    std::size_t t() const noexcept { return lines_.size() - n_; }
    std::size_t size() const noexcept { return lines_.size(); }
    const Line& line(std::size_t k) const { return lines_.at(k); }
    std::span<const Line> lines() const noexcept { return lines_; }
    std::size_t output() const noexcept { return lines_.size() - 1; }

    bool analyzed() const noexcept { return !sets_.empty(); }
    const LineSets& sets(std::size_t k) const { return sets_.at(k); }

    friend Codelist analyze_index_sets(Codelist cl);

private:
    std::size_t n_ = 0;
    std::vector<Line> lines_;
    std::vector<LineSets> sets_;
};

/// Populates the per-line independence and at-most-linear sets.
/// Box independent; validates first.
Codelist analyze_index_sets(Codelist cl);

/// Throws MalformedCodelist (1-based line number) on the first defect.
void validate(const Codelist& cl);

/// "k: op(args) I={..} L={..}" per line, 1-based; I/L omitted before analysis.
std::string dump(const Codelist& cl);

/// Real-valued line values at the point x.
std::vector<double> evaluate_lines(const Codelist& cl, std::span<const double> x);
double evaluate_point(const Codelist& cl, std::span<const double> x);

} // namespace hessbound
