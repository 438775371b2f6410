#pragma once

// Expression front end: text -> AST -> normalized AST -> codelist.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hessbound/codelist.hpp"

namespace hessbound {

enum class ExprKind {
    Var,
    Const,
    Add,
    Mul,
    PowNat,
    Recip,
    Sqrt,
    Exp,
    Ln,
    AddConst,
    MulByConst,
    // Surface syntax only; removed by normalize().
    Sub,
    Div,
    Neg,
};

/// Expression tree node. Variable indices are 0-based (x1 is index 0).
struct Expr {
    ExprKind kind = ExprKind::Const;
    std::size_t var = 0;   ///< Var
    double value = 0.0;    ///< Const value; the constant c of AddConst / MulByConst
    int exponent = 0;      ///< PowNat
    std::vector<Expr> args;
    std::size_t pos = 0;   ///< source offset, for diagnostics; ignored by ==

    static Expr variable(std::size_t index);
    static Expr constant(double v);
    static Expr binary(ExprKind kind, Expr a, Expr b);
    static Expr unary(ExprKind kind, Expr a);
    static Expr pow_nat(Expr base, int m);
    static Expr add_const(Expr a, double c);
    static Expr mul_by_const(Expr a, double c);

    bool is_const() const noexcept { return kind == ExprKind::Const; }
    std::string to_string() const;

    friend bool operator==(const Expr& a, const Expr& b);
};

/// Parses the expression grammar with variables x1..xn.
/// Throws SyntaxError or UnknownVariable.
Expr parse(std::string_view source, std::size_t n);

/// Rewrites to the codelist alphabet and folds constants.
/// Throws ConstantExpression if the whole expression is constant and
/// SyntaxError if constant folding divides by zero or leaves the real domain.
Expr normalize(const Expr& e);

/// Post-order lowering; normalizes first.
Codelist lower(const Expr& e, std::size_t n);

/// parse + normalize + lower + analyze_index_sets.
Codelist compile(std::string_view source, std::size_t n);

/// Plain real evaluation of the tree (reference for the lowering round trip).
double evaluate(const Expr& e, std::span<const double> x);

} // namespace hessbound
