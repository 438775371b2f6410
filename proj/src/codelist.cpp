#include "hessbound/codelist.hpp"

#include <cmath>
#include <sstream>

#include "hessbound/errors.hpp"
#include "hessbound/numeric_text.hpp"

namespace hessbound {

const char* op_name(Op op) noexcept {
    switch (op) {
    case Op::Var: return "var";
    case Op::Add: return "add";
    case Op::Mul: return "mul";
    case Op::PowNat: return "powNat";
    case Op::OneOver: return "oneOver";
    case Op::Sqrt: return "sqrt";
    case Op::Exp: return "exp";
    case Op::Ln: return "ln";
    case Op::AddConst: return "addC";
    case Op::MulByConst: return "mulByC";
    }
    return "?";
}

bool is_binary(Op op) noexcept { return op == Op::Add || op == Op::Mul; }

bool is_nonlinear_unary(Op op) noexcept {
    return op == Op::PowNat || op == Op::OneOver || op == Op::Sqrt || op == Op::Exp || op == Op::Ln;
}

void validate(const Codelist& cl) {
    const auto n = cl.n();
    if (n == 0) throw MalformedCodelist(0, "no variables");
    if (cl.size() < n) throw MalformedCodelist(cl.size(), "fewer lines than variables");
    for (std::size_t k = 0; k < cl.size(); ++k) {
        const Line& ln = cl.line(k);
        const auto no = k + 1;
        if (k < n) {
            if (ln.op != Op::Var) throw MalformedCodelist(no, "expected a var line");
            continue;
        }
        if (ln.op == Op::Var) throw MalformedCodelist(no, "var line after the variable prefix");
        if (ln.i >= k) throw MalformedCodelist(no, "operand does not reference an earlier line");
        if (is_binary(ln.op) && ln.j >= k) throw MalformedCodelist(no, "operand does not reference an earlier line");
        if (ln.op == Op::PowNat && ln.m < 2) throw MalformedCodelist(no, "powNat exponent must be >= 2");
        if ((ln.op == Op::AddConst || ln.op == Op::MulByConst) && !std::isfinite(ln.c))
            throw MalformedCodelist(no, "non-finite constant");
    }
    if (!cl.analyzed()) return;
    for (std::size_t k = 0; k < cl.size(); ++k) {
        const auto& s = cl.sets(k);
        if (s.independent.universe() != n || s.linear.universe() != n)
            throw MalformedCodelist(k + 1, "index sets over the wrong universe");
        if (!s.independent.subset_of(s.linear)) throw MalformedCodelist(k + 1, "I not contained in L");
        if (s.independent.is_full()) throw MalformedCodelist(k + 1, "line independent of every variable");
    }
}

Codelist analyze_index_sets(Codelist cl) {
    cl.sets_.clear();
    validate(cl);
    const auto n = cl.n();
    std::vector<LineSets> sets;
    sets.reserve(cl.size());
    for (std::size_t k = 0; k < cl.size(); ++k) {
        const Line& ln = cl.line(k);
        switch (ln.op) {
        case Op::Var:
            sets.push_back({IndexSet::all_but(n, k), IndexSet::all(n)});
            break;
        case Op::Add:
            sets.push_back({sets[ln.i].independent & sets[ln.j].independent, sets[ln.i].linear & sets[ln.j].linear});
            break;
        case Op::Mul: {
            auto both = sets[ln.i].independent & sets[ln.j].independent;
            sets.push_back({both, both});
            break;
        }
        case Op::PowNat:
        case Op::OneOver:
        case Op::Sqrt:
        case Op::Exp:
        case Op::Ln:
            sets.push_back({sets[ln.i].independent, sets[ln.i].independent});
            break;
        case Op::AddConst:
        case Op::MulByConst:
            sets.push_back(sets[ln.i]);
            break;
        }
    }
    cl.sets_ = std::move(sets);
    return cl;
}

std::string dump(const Codelist& cl) {
    std::ostringstream os;
    for (std::size_t k = 0; k < cl.size(); ++k) {
        const Line& ln = cl.line(k);
        os << (k + 1) << ": " << op_name(ln.op) << '(';
        switch (ln.op) {
        case Op::Var: os << 'x' << (k + 1); break;
        case Op::Add:
        case Op::Mul: os << (ln.i + 1) << ',' << (ln.j + 1); break;
        case Op::PowNat: os << (ln.i + 1) << ',' << ln.m; break;
        case Op::AddConst:
        case Op::MulByConst: os << (ln.i + 1) << ',' << format_number(ln.c); break;
        default: os << (ln.i + 1); break;
        }
        os << ')';
        if (cl.analyzed()) os << " I=" << cl.sets(k).independent.to_string() << " L=" << cl.sets(k).linear.to_string();
        os << '\n';
    }
    return os.str();
}

std::vector<double> evaluate_lines(const Codelist& cl, std::span<const double> x) {
    if (x.size() != cl.n()) throw LengthMismatch("point dimension does not match codelist");
    std::vector<double> y(cl.size());
    for (std::size_t k = 0; k < cl.size(); ++k) {
        const Line& ln = cl.line(k);
        switch (ln.op) {
        case Op::Var: y[k] = x[k]; break;
        case Op::Add: y[k] = y[ln.i] + y[ln.j]; break;
        case Op::Mul: y[k] = y[ln.i] * y[ln.j]; break;
        case Op::PowNat: y[k] = std::pow(y[ln.i], ln.m); break;
        case Op::OneOver: y[k] = 1.0 / y[ln.i]; break;
        case Op::Sqrt: y[k] = std::sqrt(y[ln.i]); break;
        case Op::Exp: y[k] = std::exp(y[ln.i]); break;
        case Op::Ln: y[k] = std::log(y[ln.i]); break;
        case Op::AddConst: y[k] = y[ln.i] + ln.c; break;
        case Op::MulByConst: y[k] = ln.c * y[ln.i]; break;
        }
    }
    return y;
}

double evaluate_point(const Codelist& cl, std::span<const double> x) { return evaluate_lines(cl, x).back(); }

} // namespace hessbound
