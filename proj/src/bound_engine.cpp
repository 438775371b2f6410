#include "hessbound/bound_engine.hpp"

#include <sstream>

#include "counted_ops.hpp"
#include "hessbound/errors.hpp"

namespace hessbound {

const char* method_name(Method m) noexcept {
    switch (m) {
    case Method::Original: return "original";
    case Method::Improved: return "improved";
    case Method::Gershgorin: return "gershgorin";
    case Method::HertzRohn: return "hertzrohn";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
    for (auto m : {Method::Original, Method::Improved, Method::Gershgorin, Method::HertzRohn})
        if (name == method_name(m)) return m;
    return std::nullopt;
}

Interval lift_reduced(const Interval& lam, const IndexSet& linear) {
    if (linear.empty()) return lam;
    if (linear.is_full()) return {0.0, 0.0};
    return zero_widen(lam);
}

std::vector<int> add_rule_matches(const IndexSet& li, const IndexSet& lj) {
    const bool ni = li.is_full();
    const bool nj = lj.is_full();
    const bool union_full = (li | lj).is_full();
    std::vector<int> rows;
    if (ni && nj) rows.push_back(1);
    if (!ni && nj) rows.push_back(2);
    if (ni && !nj) rows.push_back(3);
    if (!ni && !nj && union_full) rows.push_back(4);
    if (!union_full && li == lj) rows.push_back(5);
    if (!union_full && li.strict_subset_of(lj)) rows.push_back(6);
    if (!union_full && lj.strict_subset_of(li)) rows.push_back(7);
    if (!union_full && !li.subset_of(lj) && !lj.subset_of(li)) rows.push_back(8);
    return rows;
}

namespace {

bool c_star(const IndexSet& ii, const IndexSet& ij) {
    const auto n = ii.universe();
    return (ii | ij).is_full() && ii.size() + 1 == n && ij.size() + 1 == n;
}

} // namespace

std::vector<int> mul_rule_matches(const IndexSet& ii, const IndexSet& ij, const IndexSet& li, const IndexSet& lj,
                                  const IndexSet& lk) {
    const bool ni = li.is_full();
    const bool nj = lj.is_full();
    const bool cs = c_star(ii, ij);
    const bool union_full = (li | lj).is_full();
    const IndexSet lc = li & lj;
    std::vector<int> rows;
    if (ni && nj) rows.push_back(1);
    if (!ni && nj && lk == li) rows.push_back(2);
    if (!ni && nj && lk.strict_subset_of(li) && !cs) rows.push_back(3);
    if (!ni && nj && cs) rows.push_back(4);
    if (ni && !nj && lk == lj) rows.push_back(5);
    if (ni && !nj && lk.strict_subset_of(lj) && !cs) rows.push_back(6);
    if (ni && !nj && cs) rows.push_back(7);
    if (!ni && !nj && union_full && lk.strict_subset_of(lc)) rows.push_back(8);
    if (!ni && !nj && union_full && lk == lc && !cs) rows.push_back(9);
    if (!ni && !nj && cs) rows.push_back(10);
    if (!union_full) {
        if (lk == li && li == lj) rows.push_back(11);
        if (lk == li && li.strict_subset_of(lj)) rows.push_back(12);
        if (lk == lj && lj.strict_subset_of(li)) rows.push_back(13);
        if (lk.strict_subset_of(li) && li == lj) rows.push_back(14);
        if (lk.strict_subset_of(li) && li.strict_subset_of(lj)) rows.push_back(15);
        if (lk.strict_subset_of(lj) && lj.strict_subset_of(li)) rows.push_back(16);
        if (!li.subset_of(lj) && !lj.subset_of(li)) rows.push_back(17);
    }
    return rows;
}

std::vector<int> unary_rule_matches(const IndexSet& li, const IndexSet& lk) {
    std::vector<int> rows;
    if (li.is_full()) rows.push_back(1);
    if (!li.is_full() && lk == li) rows.push_back(2);
    if (!li.is_full() && lk.strict_subset_of(li)) rows.push_back(3);
    return rows;
}

std::vector<int> affine_rule_matches(const IndexSet& li) { return {li.is_full() ? 1 : 2}; }

namespace {

using detail::CountedOps;

Interval sub(CountedOps& ops, const Interval& a, const Interval& b) { return ops.add(a, ops.scale(-1.0, b)); }

int first_row(const std::vector<int>& rows, std::size_t k) {
    if (rows.empty()) throw RuleDispatchGap(k + 1);
    return rows.front();
}

void check_shapes(const Codelist& cl, const Box& box) {
    validate(cl);
    if (box.size() != cl.n()) throw LengthMismatch("box dimension does not match codelist");
}

// [y_k] and [grad y_k] per the first-order rules shared by both methods.
void forward_line(const Codelist& cl, std::size_t k, std::vector<LineState>& s, const Box& box, CountedOps& ops) {
    const Line& ln = cl.line(k);
    const auto n = cl.n();
    LineState& out = s[k];
    if (ln.op == Op::Var) {
        out.y = box[k];
        out.grad = Box::unit(n, k);
        return;
    }
    const LineState& a = s[ln.i];
    switch (ln.op) {
    case Op::Add: {
        const LineState& b = s[ln.j];
        out.y = ops.add(a.y, b.y);
        out.grad = ops.add(a.grad, b.grad);
        break;
    }
    case Op::Mul: {
        const LineState& b = s[ln.j];
        out.y = ops.mul(a.y, b.y);
        out.grad = ops.add(ops.mul(b.y, a.grad), ops.mul(a.y, b.grad));
        break;
    }
    case Op::PowNat:
        out.y = ops.pow(a.y, ln.m);
        out.grad = ops.mul(ops.scale(ln.m, ops.pow(a.y, ln.m - 1)), a.grad);
        break;
    case Op::OneOver:
        out.y = ops.recip(a.y);
        out.grad = ops.mul(ops.scale(-1.0, ops.pow(out.y, 2)), a.grad);
        break;
    case Op::Sqrt:
        if (a.y.lo() <= 0.0) throw DomainViolation("sqrt", "argument " + a.y.to_string() + " not strictly positive");
        out.y = ops.sqrt(a.y);
        out.grad = ops.mul(ops.recip(ops.scale(2.0, out.y)), a.grad);
        break;
    case Op::Exp:
        out.y = ops.exp(a.y);
        out.grad = ops.mul(out.y, a.grad);
        break;
    case Op::Ln:
        out.y = ops.log(a.y);
        out.grad = ops.mul(ops.recip(a.y), a.grad);
        break;
    case Op::AddConst:
        out.y = ops.add_const(a.y, ln.c);
        out.grad = a.grad;
        break;
    case Op::MulByConst:
        out.y = ops.scale(ln.c, a.y);
        out.grad = ops.scale(ln.c, a.grad);
        break;
    case Op::Var: break;
    }
}

Interval original_lambda(const Line& ln, const LineState& k, const std::vector<LineState>& s, CountedOps& ops) {
    const LineState& a = s[ln.i];
    switch (ln.op) {
    case Op::Var: return {};
    case Op::Add: return ops.add(a.lam, s[ln.j].lam);
    case Op::Mul: {
        const LineState& b = s[ln.j];
        return ops.add(ops.add(ops.mul(b.y, a.lam), ops.mul(a.y, b.lam)), ops.lambda_t(a.grad, b.grad));
    }
    case Op::PowNat: {
        const Interval inner = ops.add(ops.scale(ln.m - 1, ops.lambda_s(a.grad)), ops.mul(a.y, a.lam));
        return ops.mul(ops.scale(ln.m, ops.pow(a.y, ln.m - 2)), inner);
    }
    case Op::OneOver:
        return ops.mul(ops.pow(k.y, 2), sub(ops, ops.mul(ops.scale(2.0, k.y), ops.lambda_s(a.grad)), a.lam));
    case Op::Sqrt: {
        const Interval t = ops.mul(ops.recip(ops.scale(-2.0, a.y)), ops.lambda_s(a.grad));
        return ops.mul(ops.recip(ops.scale(2.0, k.y)), ops.add(a.lam, t));
    }
    case Op::Exp: return ops.mul(k.y, ops.add(ops.lambda_s(a.grad), a.lam));
    case Op::Ln: {
        const Interval r = ops.recip(a.y);
        return ops.mul(r, sub(ops, a.lam, ops.mul(r, ops.lambda_s(a.grad))));
    }
    case Op::AddConst: return a.lam;
    case Op::MulByConst: return ops.scale(ln.c, a.lam);
    }
    return {};
}

Interval improved_add(int row, const LineState& a, const LineState& b, CountedOps& ops) {
    switch (row) {
    case 1: return {};
    case 2: return a.lam;
    case 3: return b.lam;
    case 4: return ops.hull(a.lam, b.lam);
    case 5: return ops.add(a.lam, b.lam);
    case 6: return ops.add(a.lam, ops.zero_widen(b.lam));
    case 7: return ops.add(ops.zero_widen(a.lam), b.lam);
    default: return ops.add(ops.zero_widen(a.lam), ops.zero_widen(b.lam));
    }
}

Interval improved_mul(int row, const Codelist& cl, std::size_t k, const std::vector<LineState>& s, CountedOps& ops) {
    const Line& ln = cl.line(k);
    const LineState& a = s[ln.i];
    const LineState& b = s[ln.j];
    if (row == 4 || row == 7 || row == 10) {
        const auto ai = cl.sets(ln.i).independent.complement().members().front();
        const auto bj = cl.sets(ln.j).independent.complement().members().front();
        const Interval c = ops.mul(a.grad[ai], b.grad[bj]);
        const Interval d1 = row == 7 ? Interval{} : ops.mul(b.y, a.lam);
        const Interval d2 = row == 4 ? Interval{} : ops.mul(a.y, b.lam);
        return ops.lambda_star(d1, d2, c);
    }
    const IndexSet slice = cl.sets(k).linear.complement();
    const Interval lt = ops.lambda_t(grad_slice(a.grad, slice), grad_slice(b.grad, slice));
    const Interval zero;
    auto ya_lb = [&] { return ops.mul(b.y, a.lam); };
    auto ya_lb0 = [&] { return ops.mul(b.y, ops.zero_widen(a.lam)); };
    auto yb_la = [&] { return ops.mul(a.y, b.lam); };
    auto yb_la0 = [&] { return ops.mul(a.y, ops.zero_widen(b.lam)); };
    switch (row) {
    case 1: return lt;
    case 2: return ops.add(lt, ya_lb());
    case 3: return ops.add(lt, ya_lb0());
    case 5: return ops.add(lt, yb_la());
    case 6: return ops.add(lt, yb_la0());
    case 8: return ops.add(lt, ops.hull(ops.hull(ya_lb(), yb_la()), zero));
    case 9: return ops.add(lt, ops.hull(ya_lb(), yb_la()));
    case 11: return ops.add(ops.add(lt, ya_lb()), yb_la());
    case 12: return ops.add(ops.add(lt, ya_lb()), yb_la0());
    case 13: return ops.add(ops.add(lt, ya_lb0()), yb_la());
    case 14: return ops.add(lt, ops.hull(ops.add(ya_lb(), yb_la()), zero));
    case 15: return ops.add(lt, ops.hull(ops.add(ya_lb(), yb_la0()), zero));
    case 16: return ops.add(lt, ops.hull(ops.add(ya_lb0(), yb_la()), zero));
    default: return ops.add(ops.add(lt, ya_lb0()), yb_la0());
    }
}

Interval improved_unary(int row, const Codelist& cl, std::size_t k, const LineState& out,
                        const std::vector<LineState>& s, CountedOps& ops) {
    const Line& ln = cl.line(k);
    const LineState& a = s[ln.i];
    const Interval S = ops.lambda_s(grad_slice(a.grad, cl.sets(k).linear.complement()));
    const Interval& yk = out.y;
    if (row == 1) {
        switch (ln.op) {
        case Op::PowNat: return ops.mul(ops.scale(ln.m * (ln.m - 1), ops.pow(a.y, ln.m - 2)), S);
        case Op::OneOver: return ops.mul(ops.scale(2.0, ops.pow(yk, 3)), S);
        case Op::Sqrt: return ops.mul(ops.recip(ops.scale(-4.0, ops.pow(yk, 3))), S);
        case Op::Exp: return ops.mul(yk, S);
        default: return ops.mul(ops.scale(-1.0, ops.recip(ops.pow(a.y, 2))), S);
        }
    }
    const Interval lam = row == 2 ? a.lam : ops.zero_widen(a.lam);
    switch (ln.op) {
    case Op::PowNat:
        return ops.mul(ops.scale(ln.m, ops.pow(a.y, ln.m - 2)), ops.add(ops.scale(ln.m - 1, S), ops.mul(a.y, lam)));
    case Op::OneOver: return ops.mul(ops.pow(yk, 2), sub(ops, ops.mul(ops.scale(2.0, yk), S), lam));
    case Op::Sqrt:
        return ops.mul(ops.recip(ops.scale(2.0, yk)), ops.add(ops.mul(ops.recip(ops.scale(-2.0, a.y)), S), lam));
    case Op::Exp: return ops.mul(yk, ops.add(S, lam));
    default: {
        const Interval r = ops.recip(a.y);
        return ops.mul(r, sub(ops, lam, ops.mul(r, S)));
    }
    }
}

std::pair<Interval, int> improved_lambda(const Codelist& cl, std::size_t k, const std::vector<LineState>& s,
                                         CountedOps& ops) {
    const Line& ln = cl.line(k);
    if (ln.op == Op::Var) return {Interval{}, 0};
    const auto& si = cl.sets(ln.i);
    const auto& sk = cl.sets(k);
    switch (ln.op) {
    case Op::Add: {
        const int row = first_row(add_rule_matches(si.linear, cl.sets(ln.j).linear), k);
        return {improved_add(row, s[ln.i], s[ln.j], ops), row};
    }
    case Op::Mul: {
        const auto& sj = cl.sets(ln.j);
        const int row =
            first_row(mul_rule_matches(si.independent, sj.independent, si.linear, sj.linear, sk.linear), k);
        return {improved_mul(row, cl, k, s, ops), row};
    }
    case Op::AddConst:
    case Op::MulByConst: {
        const int row = first_row(affine_rule_matches(si.linear), k);
        if (row == 1) return {Interval{}, row};
        return {ln.op == Op::AddConst ? s[ln.i].lam : ops.scale(ln.c, s[ln.i].lam), row};
    }
    default: {
        const int row = first_row(unary_rule_matches(si.linear, sk.linear), k);
        return {improved_unary(row, cl, k, s[k], s, ops), row};
    }
    }
}

template <class LambdaStep>
EvalTrace run(const Codelist& cl, const Box& box, Method method, LambdaStep step) {
    check_shapes(cl, box);
    CountedOps ops;
    EvalTrace tr;
    tr.lines.resize(cl.size());
    std::size_t lambda_ops = 0;
    for (std::size_t k = 0; k < cl.size(); ++k) {
        try {
            forward_line(cl, k, tr.lines, box, ops);
            const auto before = ops.count();
            step(k, tr.lines, ops);
            lambda_ops += ops.count() - before;
        } catch (const DomainViolation& e) {
            throw e.at_line(k + 1);
        }
    }
    const LineState& last = tr.lines.back();
    tr.result.value = last.y;
    tr.result.gradient = last.grad;
    tr.result.eigen = last.lam;
    tr.result.method = method;
    tr.result.op_count = ops.count();
    tr.result.lambda_op_count = lambda_ops;
    return tr;
}

} // namespace

EvalTrace trace_original(const Codelist& cl, const Box& box) {
    return run(cl, box, Method::Original, [&](std::size_t k, std::vector<LineState>& s, CountedOps& ops) {
        s[k].lam = original_lambda(cl.line(k), s[k], s, ops);
    });
}

EvalResult eval_original(const Codelist& cl, const Box& box) { return trace_original(cl, box).result; }

EvalTrace trace_improved(const Codelist& cl, const Box& box) {
    if (!cl.analyzed()) return trace_improved(analyze_index_sets(cl), box);
    EvalTrace tr = run(cl, box, Method::Improved, [&](std::size_t k, std::vector<LineState>& s, CountedOps& ops) {
        auto [lam, row] = improved_lambda(cl, k, s, ops);
        s[k].lam = lam;
        s[k].rule = row;
    });
    tr.result.eigen = lift_reduced(tr.result.eigen, cl.sets(cl.output()).linear);
    return tr;
}

EvalResult eval_improved(const Codelist& cl, const Box& box) { return trace_improved(cl, box).result; }

std::string format_trace(const Codelist& cl, const EvalTrace& trace) {
    std::ostringstream os;
    for (std::size_t k = 0; k < trace.lines.size(); ++k) {
        const auto& s = trace.lines[k];
        os << (k + 1) << ": " << op_name(cl.line(k).op) << " y=" << s.y << " grad=" << s.grad.to_string()
           << " lam=" << s.lam;
        if (s.rule != 0) os << " rule=" << s.rule;
        os << '\n';
    }
    return os.str();
}

} // namespace hessbound
