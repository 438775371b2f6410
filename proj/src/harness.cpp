#include "hessbound/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hessbound/errors.hpp"
#include "hessbound/expression.hpp"
#include "hessbound/numeric_text.hpp"
#include "hessbound/reference_methods.hpp"

namespace hessbound {

double dev(double a, double b) noexcept { return (a - b) / (1.0 + 0.5 * std::abs(a + b)); }

bool eps_greater(double a, double b, double eps) noexcept { return dev(a, b) > eps; }

bool eps_equal(double a, double b, double eps) noexcept { return std::abs(dev(a, b)) <= eps; }

ClassPair classify(const Interval& test, const Interval& g, const Interval& h, double eps) {
    if (eps_greater(g.lo(), h.lo(), eps) || eps_greater(h.hi(), g.hi(), eps))
        throw InconsistentInputs("reference bounds " + g.to_string() + " (G) tighter than " + h.to_string() + " (H)");
    ClassPair c;
    const double a = test.lo();
    if (eps_equal(a, h.lo(), eps)) c.lower = 4;
    else if (eps_greater(a, h.lo(), eps)) c.lower = 5;
    else if (eps_equal(a, g.lo(), eps)) c.lower = 2;
    else if (eps_greater(a, g.lo(), eps)) c.lower = 3;
    else c.lower = 1;
    const double b = test.hi();
    if (eps_equal(b, h.hi(), eps)) c.upper = 4;
    else if (eps_greater(h.hi(), b, eps)) c.upper = 5;
    else if (eps_equal(b, g.hi(), eps)) c.upper = 2;
    else if (eps_greater(g.hi(), b, eps)) c.upper = 3;
    else c.upper = 1;
    return c;
}

double alpha_bb_eval(const Codelist& cl, const Box& box, double lambda_low, std::span<const double> x) {
    if (!box.contains(x)) throw PointOutsideBox("point is not inside the box");
    const double phi = evaluate_point(cl, x);
    if (lambda_low >= 0.0) return phi;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (box[i].lo() - x[i]) * (box[i].hi() - x[i]);
    return phi - 0.5 * lambda_low * s;
}

namespace {

// Uniform in [0, 1) from the top 53 bits; independent of the library's distribution code.
double unit_draw(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& g, double lo, double hi) { return lo + unit_draw(g) * (hi - lo); }

std::size_t pick(std::mt19937_64& g, std::size_t count) { return static_cast<std::size_t>(g() % count); }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto at = s.find(sep, start);
        parts.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
        if (at == std::string_view::npos) return parts;
        start = at + 1;
    }
}

} // namespace

std::vector<Box> random_boxes(const Box& domain, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::vector<Box> out;
    out.reserve(count);
    for (std::size_t b = 0; b < count; ++b) {
        std::vector<Interval> dims;
        dims.reserve(domain.size());
        for (const auto& d : domain) {
            if (d.width() == 0.0) {
                dims.push_back(d);
                continue;
            }
            double u = 0.0;
            double v = 0.0;
            do {
                u = uniform(g, d.lo(), d.hi());
                v = uniform(g, d.lo(), d.hi());
            } while (std::abs(u - v) < 1e-9 * d.width());
            dims.emplace_back(std::min(u, v), std::max(u, v));
        }
        out.emplace_back(std::move(dims));
    }
    return out;
}

Box parse_box(std::string_view text) {
    std::vector<Interval> dims;
    for (auto part : split(text, ';')) {
        const auto ends = split(part, ',');
        if (ends.size() != 2) throw std::invalid_argument("box component '" + std::string(part) + "' is not 'lo,hi'");
        dims.emplace_back(parse_number(ends[0]), parse_number(ends[1]));
    }
    return Box(std::move(dims));
}

std::vector<double> parse_point(std::string_view text) {
    std::vector<double> x;
    for (auto part : split(text, ',')) x.push_back(parse_number(part));
    return x;
}

std::string format_box(const Box& b) {
    std::string s;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i != 0) s += ';';
        s += format_number(b[i].lo()) + "," + format_number(b[i].hi());
    }
    return s;
}

std::vector<CorpusEntry> parse_corpus(std::string_view text, const std::string& label) {
    std::vector<CorpusEntry> out;
    std::size_t n = 0;
    std::optional<Box> domain;
    std::size_t lineno = 0;
    for (auto raw : split(text, '\n')) {
        ++lineno;
        auto line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) continue;
        auto where = [&] { return label + ":" + std::to_string(lineno); };
        if (line.starts_with("vars:")) {
            const auto v = trim(line.substr(5));
            std::size_t k = 0;
            for (char c : v) {
                if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument(where() + ": bad vars header");
                k = k * 10 + static_cast<std::size_t>(c - '0');
            }
            if (v.empty() || k == 0) throw std::invalid_argument(where() + ": bad vars header");
            n = k;
            domain.reset();
            continue;
        }
        if (line.starts_with("domain:")) {
            domain = parse_box(trim(line.substr(7)));
            continue;
        }
        if (n == 0) throw std::invalid_argument(where() + ": expression before a 'vars:' header");
        Box d = domain ? *domain : Box(std::vector<Interval>(n, Interval(-1.0, 1.0)));
        if (d.size() != n) throw std::invalid_argument(where() + ": domain dimension differs from vars");
        out.push_back({where(), std::string(line), n, std::move(d)});
    }
    return out;
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<CorpusEntry> out;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw std::runtime_error("cannot read " + f.string());
        std::stringstream ss;
        ss << in.rdbuf();
        auto part = parse_corpus(ss.str(), f.filename().string());
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Random functions

namespace {

class FunctionWalk {
public:
    FunctionWalk(const Box& domain, const RandomFunctionOptions& opt, std::uint64_t seed)
        : domain_(domain), opt_(opt), g_(seed) {}

    std::string build() {
        const auto n = opt_.n;
        const auto terms = opt_.min_terms + pick(g_, opt_.max_terms - opt_.min_terms + 1);
        std::string s;
        for (std::size_t t = 0; t < terms; ++t) {
            // Each term touches a few variables, anchored so that all get used.
            vars_.assign(1, t % n);
            const auto extra = pick(g_, 3);
            for (std::size_t e = 0; e < extra; ++e) vars_.push_back(pick(g_, n));
            std::string term = node(opt_.max_depth);
            if (!s.empty()) s += pick(g_, 4) == 0 ? " - " : " + ";
            s += term;
        }
        return s;
    }

private:
    std::string var() { return "x" + std::to_string(vars_[pick(g_, vars_.size())] + 1); }

    std::string constant(double lo, double hi) { return format_number(std::round(uniform(g_, lo, hi) * 100.0) / 100.0); }

    Interval range(const std::string& e) { return eval_original(compile(e, opt_.n), domain_).value; }

    // Shifts e so that it is >= 0.5 on the domain.
    std::string positive(const std::string& e) {
        const Interval r = range(e);
        if (r.lo() >= 0.5) return e;
        // Whole hundredths, so the constant prints short.
        const double c = (std::ceil((0.5 - r.lo()) * 100.0) + std::round(unit_draw(g_) * 100.0)) / 100.0;
        return "(" + e + " + " + format_number(c) + ")";
    }

    std::string node(int depth) {
        if (depth <= 0) return var();
        const int kinds = opt_.singular_ops ? 11 : 8;
        switch (pick(g_, kinds)) {
        case 0:
        case 1: return var();
        case 2: return "(" + node(depth - 1) + " + " + node(depth - 1) + ")";
        case 3:
        case 4: return node(depth - 1) + "*" + node(depth - 1);
        case 5: return "(" + node(depth - 1) + ")^" + std::to_string(2 + pick(g_, 2));
        case 6: return constant(-3.0, 3.0) + "*" + node(depth - 1);
        case 7: {
            const std::string e = node(depth - 1);
            const Interval r = range(e);
            if (std::max(std::abs(r.lo()), std::abs(r.hi())) > 4.0) return "(" + e + " + " + constant(-1.0, 1.0) + ")";
            return "exp(" + e + ")";
        }
        case 8: return "sqrt(" + positive(node(depth - 1)) + ")";
        case 9: return "ln(" + positive(node(depth - 1)) + ")";
        default: return "1/(" + positive(node(depth - 1)) + ")";
        }
    }

    const Box& domain_;
    const RandomFunctionOptions& opt_;
    std::mt19937_64 g_;
    std::vector<std::size_t> vars_;
};

bool has_mul(const Codelist& cl) {
    for (const auto& ln : cl.lines())
        if (ln.op == Op::Mul) return true;
    return false;
}

bool acceptable(const std::string& e, const Box& domain, const RandomFunctionOptions& opt) {
    try {
        const Codelist cl = compile(e, opt.n);
        if (opt.require_mul && !has_mul(cl)) return false;
        const EvalResult r = eval_original(cl, domain);
        return std::abs(r.value.lo()) < 1e6 && std::abs(r.value.hi()) < 1e6 && r.eigen.width() < 1e8;
    } catch (const Error&) {
        return false;
    }
}

} // namespace

std::string random_function(const Box& domain, const RandomFunctionOptions& opt, std::uint64_t seed) {
    if (opt.n == 0 || domain.size() != opt.n) throw LengthMismatch("domain dimension differs from n");
    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
        std::string e;
        try {
            e = FunctionWalk(domain, opt, mix_seed(seed, attempt)).build();
        } catch (const Error&) {
            continue;
        }
        if (acceptable(e, domain, opt)) return e;
    }
    // Unreachable in practice; a plain product keeps callers going.
    std::string e = "x1*x" + std::to_string(opt.n);
    return e;
}

std::vector<CorpusEntry> synthetic_corpus(std::size_t n_min, std::size_t n_max, std::size_t per_n, std::uint64_t seed) {
    std::vector<CorpusEntry> out;
    std::mt19937_64 g(seed);
    for (std::size_t n = n_min; n <= n_max; ++n) {
        for (std::size_t f = 0; f < per_n; ++f) {
            std::vector<Interval> dims;
            for (std::size_t i = 0; i < n; ++i) {
                const double lo = std::round(uniform(g, -2.0, 1.0) * 100.0);
                const double w = std::round(uniform(g, 0.5, 3.0) * 100.0);
                dims.emplace_back(lo / 100.0, (lo + w) / 100.0);
            }
            Box domain(std::move(dims));
            RandomFunctionOptions opt;
            opt.n = n;
            opt.min_terms = std::max<std::size_t>(1, n / 2);
            opt.max_terms = n + 2;
            opt.max_depth = 3;
            const auto expr = random_function(domain, opt, g());
            out.push_back({"n" + std::to_string(n) + "-" + std::to_string(f + 1), expr, n, std::move(domain)});
        }
    }
    return out;
}

void write_corpus(const std::vector<CorpusEntry>& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::map<std::size_t, std::vector<const CorpusEntry*>> by_n;
    for (const auto& e : corpus) by_n[e.n].push_back(&e);
    for (const auto& [n, entries] : by_n) {
        std::ostringstream name;
        name << 'n' << std::setw(2) << std::setfill('0') << n << ".txt";
        std::ofstream out(dir / name.str());
        if (!out) throw std::runtime_error("cannot write " + (dir / name.str()).string());
        out << "# synthetic functions with " << n << " variables\n";
        out << "vars: " << n << "\n";
        for (const auto* e : entries) {
            out << "domain: " << format_box(e->domain) << "\n";
            out << e->expression << "\n";
        }
    }
}

// ---------------------------------------------------------------------------
// Comparison runs and reports

std::vector<ComparisonRecord> run_compare(const std::vector<CorpusEntry>& corpus, const HarnessConfig& cfg) {
    if (cfg.boxes_per_function == 0) throw std::invalid_argument("boxes per function must be >= 1");
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    auto has = [&](Method m) { return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end(); };
    std::vector<ComparisonRecord> out;
    for (std::size_t f = 0; f < corpus.size(); ++f) {
        const auto& entry = corpus[f];
        const Codelist cl = compile(entry.expression, entry.n);
        const auto boxes = random_boxes(entry.domain, cfg.boxes_per_function, mix_seed(cfg.seed, f));
        for (std::size_t b = 0; b < boxes.size(); ++b) {
            ComparisonRecord r;
            r.function_id = entry.id;
            r.box_id = b;
            r.n = entry.n;
            r.box = boxes[b];
            r.epsilon = cfg.epsilon;
            try {
                std::optional<IntervalHessian> ih;
                for (auto m : {Method::Original, Method::Improved, Method::Gershgorin, Method::HertzRohn}) {
                    if (!has(m)) continue;
                    Interval eig;
                    if (m == Method::Gershgorin || m == Method::HertzRohn) {
                        if (!ih) ih = interval_hessian_full(cl, r.box);
                        eig = m == Method::Gershgorin ? gershgorin_bounds(ih->hessian) : hertz_rohn_bounds(ih->hessian);
                    } else {
                        eig = evaluate(cl, r.box, m).eigen;
                    }
                    r.bounds[static_cast<std::size_t>(m)] = eig;
                }
                const auto& g = r.bound(Method::Gershgorin);
                const auto& h = r.bound(Method::HertzRohn);
                if (g && h) {
                    if (const auto& a = r.bound(Method::Original)) r.class_original = classify(*a, *g, *h, cfg.epsilon);
                    if (const auto& a = r.bound(Method::Improved)) r.class_improved = classify(*a, *g, *h, cfg.epsilon);
                }
            } catch (const DomainViolation& e) {
                r.skipped = true;
                r.skip_reason = e.what();
            } catch (const InvalidInterval& e) {
                r.skipped = true;
                r.skip_reason = e.what();
            } catch (const DimensionTooLarge& e) {
                r.skipped = true;
                r.skip_reason = e.what();
            } catch (const InconsistentInputs& e) {
                r.skipped = true;
                r.skip_reason = e.what();
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::optional<CountingMode> parse_counting_mode(std::string_view s) noexcept {
    if (s == "independent") return CountingMode::Independent;
    if (s == "joint") return CountingMode::Joint;
    return std::nullopt;
}

std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept {
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    if (s == "table") return ReportFormat::Table;
    return std::nullopt;
}

namespace {

struct Tally {
    std::array<std::size_t, 6> original{};
    std::array<std::size_t, 6> improved{};
    std::size_t original_total = 0;
    std::size_t improved_total = 0;
    std::size_t samples = 0;
    std::size_t skipped = 0;
    std::vector<std::string> functions;

    void add_class(const std::optional<ClassPair>& c, std::array<std::size_t, 6>& counts, std::size_t& total,
                   CountingMode mode) {
        if (!c) return;
        if (mode == CountingMode::Independent) {
            ++counts[static_cast<std::size_t>(c->lower - 1)];
            ++counts[static_cast<std::size_t>(c->upper - 1)];
            total += 2;
        } else {
            ++counts[c->lower == c->upper ? static_cast<std::size_t>(c->lower - 1) : 5];
            ++total;
        }
    }

    void add(const ComparisonRecord& r, CountingMode mode) {
        if (functions.empty() || functions.back() != r.function_id) functions.push_back(r.function_id);
        if (r.skipped) {
            ++skipped;
            return;
        }
        ++samples;
        add_class(r.class_original, original, original_total, mode);
        add_class(r.class_improved, improved, improved_total, mode);
    }

    ReportRow row(std::string label) const {
        ReportRow out;
        out.label = std::move(label);
        auto fns = functions;
        std::sort(fns.begin(), fns.end());
        out.functions = static_cast<std::size_t>(std::unique(fns.begin(), fns.end()) - fns.begin());
        out.samples = samples;
        out.skipped = skipped;
        for (std::size_t c = 0; c < 6; ++c) {
            out.original[c] = original_total == 0 ? 0.0 : 100.0 * static_cast<double>(original[c]) / original_total;
            out.improved[c] = improved_total == 0 ? 0.0 : 100.0 * static_cast<double>(improved[c]) / improved_total;
        }
        return out;
    }
};

const char* mode_name(CountingMode m) { return m == CountingMode::Independent ? "independent" : "joint"; }

std::string csv_quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

} // namespace

std::vector<ReportRow> aggregate(const std::vector<ComparisonRecord>& records, CountingMode mode) {
    std::map<std::size_t, Tally> by_n;
    Tally all;
    for (const auto& r : records) {
        by_n[r.n].add(r, mode);
        all.add(r, mode);
    }
    std::vector<ReportRow> rows;
    for (const auto& [n, t] : by_n) rows.push_back(t.row(std::to_string(n)));
    rows.push_back(all.row("all"));
    return rows;
}

std::string emit_report(const std::vector<ComparisonRecord>& records, ReportFormat format, CountingMode mode) {
    const auto rows = aggregate(records, mode);
    const std::size_t classes = mode == CountingMode::Joint ? 6 : 5;
    const double eps = records.empty() ? 0.0 : records.front().epsilon;
    auto class_label = [](std::size_t c) { return c == 5 ? std::string("mixed") : std::to_string(c + 1); };
    std::ostringstream os;
    switch (format) {
    case ReportFormat::Csv: {
        os << "counting,epsilon,n,functions,samples,skipped";
        for (const char* m : {"A", "Adag"})
            for (std::size_t c = 0; c < classes; ++c) os << ',' << m << '_' << class_label(c);
        os << '\n';
        for (const auto& r : rows) {
            os << mode_name(mode) << ',' << format_number(eps) << ',' << r.label << ',' << r.functions << ','
               << r.samples << ',' << r.skipped;
            for (const auto* p : {&r.original, &r.improved})
                for (std::size_t c = 0; c < classes; ++c) os << ',' << format_number((*p)[c]);
            os << '\n';
        }
        break;
    }
    case ReportFormat::Json: {
        nlohmann::ordered_json doc;
        doc["counting"] = mode_name(mode);
        doc["epsilon"] = eps;
        doc["rows"] = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json row;
            row["n"] = r.label;
            row["functions"] = r.functions;
            row["samples"] = r.samples;
            row["skipped"] = r.skipped;
            row["original"] = std::vector<double>(r.original.begin(), r.original.begin() + classes);
            row["improved"] = std::vector<double>(r.improved.begin(), r.improved.begin() + classes);
            doc["rows"].push_back(row);
        }
        os << doc.dump(2) << '\n';
        break;
    }
    case ReportFormat::Table: {
        os << "counting: " << mode_name(mode) << ", epsilon: " << format_number(eps) << '\n';
        os << std::setw(5) << "n" << std::setw(6) << "#f" << std::setw(8) << "samples" << std::setw(8) << "skipped";
        for (std::size_t c = 0; c < classes; ++c) {
            os << std::setw(9) << ("A:" + class_label(c)) << std::setw(9) << ("A+:" + class_label(c));
        }
        os << '\n';
        os << std::fixed << std::setprecision(2);
        for (const auto& r : rows) {
            os << std::setw(5) << r.label << std::setw(6) << r.functions << std::setw(8) << r.samples << std::setw(8)
               << r.skipped;
            for (std::size_t c = 0; c < classes; ++c) os << std::setw(9) << r.original[c] << std::setw(9) << r.improved[c];
            os << '\n';
        }
        break;
    }
    }
    return os.str();
}

std::string records_csv(const std::vector<ComparisonRecord>& records) {
    std::ostringstream os;
    os << "function,box_id,n,box,A_lo,A_hi,Adag_lo,Adag_hi,G_lo,G_hi,H_lo,H_hi,"
          "A_lower_class,A_upper_class,Adag_lower_class,Adag_upper_class,epsilon,skipped,reason\n";
    auto put_bound = [&](const std::optional<Interval>& b) {
        if (b) os << ',' << format_number(b->lo()) << ',' << format_number(b->hi());
        else os << ",,";
    };
    auto put_class = [&](const std::optional<ClassPair>& c) {
        if (c) os << ',' << c->lower << ',' << c->upper;
        else os << ",,";
    };
    for (const auto& r : records) {
        os << csv_quote(r.function_id) << ',' << r.box_id << ',' << r.n << ',' << csv_quote(format_box(r.box));
        for (auto m : {Method::Original, Method::Improved, Method::Gershgorin, Method::HertzRohn}) put_bound(r.bound(m));
        put_class(r.class_original);
        put_class(r.class_improved);
        os << ',' << format_number(r.epsilon) << ',' << (r.skipped ? 1 : 0) << ',' << csv_quote(r.skip_reason) << '\n';
    }
    return os.str();
}

} // namespace hessbound
