#include "hessbound/expression.hpp"

#include <cctype>
#include <cmath>
#include <utility>

#include "hessbound/errors.hpp"
#include "hessbound/numeric_text.hpp"

namespace hessbound {

Expr Expr::variable(std::size_t index) {
    Expr e;
    e.kind = ExprKind::Var;
    e.var = index;
    return e;
}

Expr Expr::constant(double v) {
    Expr e;
    e.kind = ExprKind::Const;
    e.value = v;
    return e;
}

Expr Expr::binary(ExprKind kind, Expr a, Expr b) {
    Expr e;
    e.kind = kind;
    e.pos = a.pos;
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
}

Expr Expr::unary(ExprKind kind, Expr a) {
    Expr e;
    e.kind = kind;
    e.pos = a.pos;
    e.args.push_back(std::move(a));
    return e;
}

Expr Expr::pow_nat(Expr base, int m) {
    Expr e = unary(ExprKind::PowNat, std::move(base));
    e.exponent = m;
    return e;
}

Expr Expr::add_const(Expr a, double c) {
    Expr e = unary(ExprKind::AddConst, std::move(a));
    e.value = c;
    return e;
}

Expr Expr::mul_by_const(Expr a, double c) {
    Expr e = unary(ExprKind::MulByConst, std::move(a));
    e.value = c;
    return e;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
    switch (a.kind) {
    case ExprKind::Var:
        if (a.var != b.var) return false;
        break;
    case ExprKind::Const:
    case ExprKind::AddConst:
    case ExprKind::MulByConst:
        if (a.value != b.value) return false;
        break;
    case ExprKind::PowNat:
        if (a.exponent != b.exponent) return false;
        break;
    default:
        break;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!(a.args[i] == b.args[i])) return false;
    return true;
}

namespace {

const char* kind_name(ExprKind k) {
    switch (k) {
    case ExprKind::Var: return "Var";
    case ExprKind::Const: return "Const";
    case ExprKind::Add: return "Add";
    case ExprKind::Mul: return "Mul";
    case ExprKind::PowNat: return "PowNat";
    case ExprKind::Recip: return "Recip";
    case ExprKind::Sqrt: return "Sqrt";
    case ExprKind::Exp: return "Exp";
    case ExprKind::Ln: return "Ln";
    case ExprKind::AddConst: return "AddConst";
    case ExprKind::MulByConst: return "MulByConst";
    case ExprKind::Sub: return "Sub";
    case ExprKind::Div: return "Div";
    case ExprKind::Neg: return "Neg";
    }
    return "?";
}

} // namespace

std::string Expr::to_string() const {
    switch (kind) {
    case ExprKind::Var: return "Var " + std::to_string(var + 1);
    case ExprKind::Const: return "Const " + format_number(value);
    default: break;
    }
    std::string s = std::string(kind_name(kind)) + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i != 0) s += ", ";
        s += args[i].to_string();
    }
    if (kind == ExprKind::PowNat) s += ", " + std::to_string(exponent);
    if (kind == ExprKind::AddConst || kind == ExprKind::MulByConst) s += ", " + format_number(value);
    return s + ")";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    Parser(std::string_view src, std::size_t n) : src_(src), n_(n) {}

    Expr run() {
        Expr e = expr();
        skip_blanks();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

    void skip_blanks() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_blanks();
        return pos_ >= src_.size();
    }

    bool accept(char c) {
        skip_blanks();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // ASCII '-' or U+2212.
    bool accept_minus() {
        if (accept('-')) return true;
        static constexpr std::string_view uminus = "\xE2\x88\x92";
        if (src_.substr(pos_, uminus.size()) == uminus) {
            pos_ += uminus.size();
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            const auto at = (skip_blanks(), pos_);
            if (accept('+')) {
                lhs = Expr::binary(ExprKind::Add, std::move(lhs), term());
            } else if (accept_minus()) {
                lhs = Expr::binary(ExprKind::Sub, std::move(lhs), term());
            } else {
                return lhs;
            }
            lhs.pos = at;
        }
    }

    Expr term() {
        Expr lhs = unary();
        for (;;) {
            const auto at = (skip_blanks(), pos_);
            if (accept('*')) {
                lhs = Expr::binary(ExprKind::Mul, std::move(lhs), unary());
            } else if (accept('/')) {
                lhs = Expr::binary(ExprKind::Div, std::move(lhs), unary());
            } else {
                return lhs;
            }
            lhs.pos = at;
        }
    }

    Expr unary() {
        skip_blanks();
        const auto at = pos_;
        if (accept_minus()) {
            Expr e = Expr::unary(ExprKind::Neg, unary());
            e.pos = at;
            return e;
        }
        return factor();
    }

    Expr factor() {
        Expr base = atom();
        skip_blanks();
        const auto at = pos_;
        if (!accept('^')) return base;
        skip_blanks();
        const auto digits = scan_digits();
        if (digits.empty()) fail("expected a natural exponent after '^'");
        int m = 0;
        for (char d : digits) {
            m = m * 10 + (d - '0');
            if (m > 1'000'000) fail("exponent too large");
        }
        Expr e = Expr::pow_nat(std::move(base), m);
        e.pos = at;
        return e;
    }

    std::string_view scan_digits() {
        const auto start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        return src_.substr(start, pos_ - start);
    }

    Expr atom() {
        if (at_end()) fail("unexpected end of input");
        const auto at = pos_;
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const auto start = pos_;
            while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            const auto word = src_.substr(start, pos_ - start);
            if (word == "x") {
                const auto digits = scan_digits();
                if (digits.empty()) {
                    pos_ = at;
                    fail("expected a variable index after 'x'");
                }
                std::size_t k = 0;
                for (char d : digits) {
                    k = k * 10 + static_cast<std::size_t>(d - '0');
                    if (k > n_) break;
                }
                if (k == 0 || k > n_) throw UnknownVariable("x" + std::string(digits));
                Expr e = Expr::variable(k - 1);
                e.pos = at;
                return e;
            }
            ExprKind kind;
            if (word == "sqrt") {
                kind = ExprKind::Sqrt;
            } else if (word == "exp") {
                kind = ExprKind::Exp;
            } else if (word == "ln") {
                kind = ExprKind::Ln;
            } else {
                pos_ = at;
                fail("unknown identifier '" + std::string(word) + "'");
            }
            expect('(');
            Expr e = Expr::unary(kind, expr());
            expect(')');
            e.pos = at;
            return e;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr number() {
        const auto start = pos_;
        scan_digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            scan_digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            auto save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (scan_digits().empty()) pos_ = save;
        }
        const auto text = src_.substr(start, pos_ - start);
        double v = 0.0;
        try {
            v = parse_number(text);
        } catch (const std::invalid_argument&) {
            pos_ = start;
            fail("malformed number '" + std::string(text) + "'");
        }
        if (!std::isfinite(v)) {
            pos_ = start;
            fail("number out of range");
        }
        Expr e = Expr::constant(v);
        e.pos = start;
        return e;
    }

    std::string_view src_;
    std::size_t n_;
    std::size_t pos_ = 0;
};

} // namespace

Expr parse(std::string_view source, std::size_t n) { return Parser(source, n).run(); }

// ---------------------------------------------------------------------------
// Normalization

namespace {

double checked_fold(double v, const Expr& at, const char* what) {
    if (!std::isfinite(v)) throw SyntaxError(at.pos, std::string("constant ") + what + " is not a finite real");
    return v;
}

Expr make_const(double v, std::size_t pos) {
    Expr e = Expr::constant(v);
    e.pos = pos;
    return e;
}

Expr norm(const Expr& e);

Expr norm_add(Expr a, Expr b, std::size_t pos) {
    if (a.is_const() && b.is_const()) return make_const(checked_fold(a.value + b.value, a, "sum"), pos);
    if (b.is_const()) return Expr::add_const(std::move(a), b.value);
    if (a.is_const()) return Expr::add_const(std::move(b), a.value);
    Expr r = Expr::binary(ExprKind::Add, std::move(a), std::move(b));
    r.pos = pos;
    return r;
}

Expr norm_mul(Expr a, Expr b, std::size_t pos) {
    if (a.is_const() && b.is_const()) return make_const(checked_fold(a.value * b.value, a, "product"), pos);
    if (a.is_const()) return Expr::mul_by_const(std::move(b), a.value);
    if (b.is_const()) return Expr::mul_by_const(std::move(a), b.value);
    Expr r = Expr::binary(ExprKind::Mul, std::move(a), std::move(b));
    r.pos = pos;
    return r;
}

Expr norm_recip(Expr a, std::size_t pos) {
    if (a.is_const()) {
        if (a.value == 0.0) throw SyntaxError(pos, "division by zero");
        return make_const(checked_fold(1.0 / a.value, a, "reciprocal"), pos);
    }
    Expr r = Expr::unary(ExprKind::Recip, std::move(a));
    r.pos = pos;
    return r;
}

Expr norm_neg(Expr a, std::size_t pos) {
    if (a.is_const()) return make_const(-a.value, pos);
    return Expr::mul_by_const(std::move(a), -1.0);
}

Expr norm_unary(ExprKind kind, Expr a, std::size_t pos) {
    if (a.is_const()) {
        switch (kind) {
        case ExprKind::Sqrt:
            if (a.value < 0.0) throw SyntaxError(pos, "square root of a negative constant");
            return make_const(std::sqrt(a.value), pos);
        case ExprKind::Exp: return make_const(checked_fold(std::exp(a.value), a, "exponential"), pos);
        case ExprKind::Ln:
            if (a.value <= 0.0) throw SyntaxError(pos, "logarithm of a nonpositive constant");
            return make_const(std::log(a.value), pos);
        default: break;
        }
    }
    Expr r = Expr::unary(kind, std::move(a));
    r.pos = pos;
    return r;
}

Expr norm_pow(Expr a, int m, std::size_t pos) {
    if (m == 0) return make_const(1.0, pos);
    if (m == 1) return a;
    if (a.is_const()) return make_const(checked_fold(std::pow(a.value, m), a, "power"), pos);
    Expr r = Expr::pow_nat(std::move(a), m);
    r.pos = pos;
    return r;
}

Expr norm(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Var:
    case ExprKind::Const: return e;
    case ExprKind::Add: return norm_add(norm(e.args[0]), norm(e.args[1]), e.pos);
    case ExprKind::Sub: return norm_add(norm(e.args[0]), norm_neg(norm(e.args[1]), e.pos), e.pos);
    case ExprKind::Mul: return norm_mul(norm(e.args[0]), norm(e.args[1]), e.pos);
    case ExprKind::Div: return norm_mul(norm(e.args[0]), norm_recip(norm(e.args[1]), e.pos), e.pos);
    case ExprKind::Neg: return norm_neg(norm(e.args[0]), e.pos);
    case ExprKind::Recip: return norm_recip(norm(e.args[0]), e.pos);
    case ExprKind::Sqrt:
    case ExprKind::Exp:
    case ExprKind::Ln: return norm_unary(e.kind, norm(e.args[0]), e.pos);
    case ExprKind::PowNat: return norm_pow(norm(e.args[0]), e.exponent, e.pos);
    case ExprKind::AddConst: return norm_add(norm(e.args[0]), make_const(e.value, e.pos), e.pos);
    case ExprKind::MulByConst: return norm_mul(make_const(e.value, e.pos), norm(e.args[0]), e.pos);
    }
    return e;
}

} // namespace

Expr normalize(const Expr& e) {
    Expr r = norm(e);
    if (r.is_const()) throw ConstantExpression();
    return r;
}

// ---------------------------------------------------------------------------
// Lowering

namespace {

std::size_t emit(const Expr& e, std::vector<Line>& lines) {
    switch (e.kind) {
    case ExprKind::Var: return e.var;
    case ExprKind::Add:
    case ExprKind::Mul: {
        const auto i = emit(e.args[0], lines);
        const auto j = emit(e.args[1], lines);
        lines.push_back(Line::binary(e.kind == ExprKind::Add ? Op::Add : Op::Mul, i, j));
        break;
    }
    case ExprKind::PowNat: lines.push_back(Line::pow_nat(emit(e.args[0], lines), e.exponent)); break;
    case ExprKind::Recip: lines.push_back(Line::unary(Op::OneOver, emit(e.args[0], lines))); break;
    case ExprKind::Sqrt: lines.push_back(Line::unary(Op::Sqrt, emit(e.args[0], lines))); break;
    case ExprKind::Exp: lines.push_back(Line::unary(Op::Exp, emit(e.args[0], lines))); break;
    case ExprKind::Ln: lines.push_back(Line::unary(Op::Ln, emit(e.args[0], lines))); break;
    case ExprKind::AddConst:
        lines.push_back(Line::with_const(Op::AddConst, emit(e.args[0], lines), e.value));
        break;
    case ExprKind::MulByConst:
        lines.push_back(Line::with_const(Op::MulByConst, emit(e.args[0], lines), e.value));
        break;
    default: throw SyntaxError(e.pos, "node left after normalization");
    }
    return lines.size() - 1;
}

} // namespace

Codelist lower(const Expr& e, std::size_t n) {
    const Expr ne = normalize(e);
    std::vector<Line> lines(n, Line::var());
    const auto out = emit(ne, lines);
    // phi must be the last line; a bare variable other than x_n gets an identity line.
    if (out != lines.size() - 1) lines.push_back(Line::with_const(Op::MulByConst, out, 1.0));
    Codelist cl(n, std::move(lines));
    validate(cl);
    return cl;
}

Codelist compile(std::string_view source, std::size_t n) { return analyze_index_sets(lower(parse(source, n), n)); }

double evaluate(const Expr& e, std::span<const double> x) {
    auto arg = [&](std::size_t i) { return evaluate(e.args[i], x); };
    switch (e.kind) {
    case ExprKind::Var: return x[e.var];
    case ExprKind::Const: return e.value;
    case ExprKind::Add: return arg(0) + arg(1);
    case ExprKind::Sub: return arg(0) - arg(1);
    case ExprKind::Mul: return arg(0) * arg(1);
    case ExprKind::Div: return arg(0) / arg(1);
    case ExprKind::Neg: return -arg(0);
    case ExprKind::PowNat: return std::pow(arg(0), e.exponent);
    case ExprKind::Recip: return 1.0 / arg(0);
    case ExprKind::Sqrt: return std::sqrt(arg(0));
    case ExprKind::Exp: return std::exp(arg(0));
    case ExprKind::Ln: return std::log(arg(0));
    case ExprKind::AddConst: return arg(0) + e.value;
    case ExprKind::MulByConst: return e.value * arg(0);
    }
    return 0.0;
}

} // namespace hessbound
