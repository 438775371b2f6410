#include "hessbound/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hessbound/bound_engine.hpp"
#include "hessbound/errors.hpp"
#include "hessbound/expression.hpp"
#include "hessbound/harness.hpp"
#include "hessbound/numeric_text.hpp"
#include "hessbound/reference_methods.hpp"

namespace hessbound {

namespace {

struct FunctionArgs {
    std::string expr_file;
    std::string inline_expr;
    std::size_t vars = 0;
    std::string box;
};

void add_function_options(CLI::App* cmd, FunctionArgs& a, bool need_box) {
    auto* file = cmd->add_option("--expr", a.expr_file, "Function file (first expression is used)");
    auto* inl = cmd->add_option("--inline", a.inline_expr, "Expression text");
    file->excludes(inl);
    cmd->add_option("--vars", a.vars, "Number of variables");
    if (need_box) cmd->add_option("--box", a.box, "Box \"l1,u1;...;ln,un\" (default: the file's domain)");
}

struct Loaded {
    Codelist cl;
    Box box;
};

Loaded load_function(const FunctionArgs& a, bool need_box) {
    std::string expr;
    std::size_t n = a.vars;
    std::optional<Box> domain;
    if (!a.expr_file.empty()) {
        std::ifstream in(a.expr_file);
        if (!in) throw std::runtime_error("cannot read " + a.expr_file);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        // A bare expression file without a header takes --vars.
        if (text.find("vars:") == std::string::npos) {
            if (n == 0) throw std::invalid_argument("--vars is required for a file without a 'vars:' header");
            text = "vars: " + std::to_string(n) + "\n" + text;
        }
        const auto entries = parse_corpus(text, a.expr_file);
        if (entries.empty()) throw std::invalid_argument(a.expr_file + " contains no expression");
        expr = entries.front().expression;
        if (n != 0 && n != entries.front().n) throw std::invalid_argument("--vars differs from the file header");
        n = entries.front().n;
        if (text.find("domain:") != std::string::npos) domain = entries.front().domain;
    } else if (!a.inline_expr.empty()) {
        expr = a.inline_expr;
        if (n == 0) throw std::invalid_argument("--vars is required with --inline");
    } else {
        throw std::invalid_argument("one of --expr or --inline is required");
    }
    Loaded out{compile(expr, n), {}};
    if (need_box) {
        if (!a.box.empty()) out.box = parse_box(a.box);
        else if (domain) out.box = *domain;
        else throw std::invalid_argument("--box is required");
        if (out.box.size() != n) throw std::invalid_argument("box dimension differs from --vars");
    }
    return out;
}

nlohmann::ordered_json interval_json(const Interval& v) { return nlohmann::ordered_json::array({v.lo(), v.hi()}); }

int cmd_eval(const FunctionArgs& fa, const std::string& method_name_arg, bool json, bool trace, std::ostream& out) {
    const auto method = parse_method(method_name_arg);
    if (!method) throw std::invalid_argument("unknown method '" + method_name_arg + "'");
    const Loaded f = load_function(fa, true);
    if (trace && (*method == Method::Original || *method == Method::Improved)) {
        const auto tr = *method == Method::Original ? trace_original(f.cl, f.box) : trace_improved(f.cl, f.box);
        out << format_trace(f.cl, tr);
    }
    const EvalResult r = evaluate(f.cl, f.box, *method);
    if (json) {
        nlohmann::ordered_json doc;
        doc["method"] = method_name(r.method);
        doc["value"] = interval_json(r.value);
        doc["gradient"] = nlohmann::ordered_json::array();
        for (const auto& g : r.gradient) doc["gradient"].push_back(interval_json(g));
        doc["eigen"] = interval_json(r.eigen);
        doc["opCount"] = r.op_count;
        out << doc.dump() << '\n';
    } else {
        out << "method: " << method_name(r.method) << '\n'
            << "value: " << r.value << '\n'
            << "gradient: " << r.gradient.to_string() << '\n'
            << "eigen: " << r.eigen << '\n'
            << "opCount: " << r.op_count << '\n';
    }
    return 0;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

} // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Guaranteed eigenvalue bounds for Hessians of factorable functions over boxes", "hessbound"};
    app.require_subcommand(1);

    FunctionArgs eval_fn;
    std::string method = "improved";
    bool json = false;
    bool trace = false;
    auto* eval = app.add_subcommand("eval", "Bound value, gradient and Hessian spectrum over a box");
    add_function_options(eval, eval_fn, true);
    eval->add_option("--method", method, "original|improved|gershgorin|hertzrohn")->capture_default_str();
    eval->add_flag("--json", json, "Emit JSON");
    eval->add_flag("--trace", trace, "Print the per-line values first (direct methods)");

    std::string corpus_dir;
    HarnessConfig cfg;
    std::string report_path;
    std::string format = "csv";
    std::string records_path;
    std::string counting = "independent";
    auto* compare = app.add_subcommand("compare", "Classify the direct methods against the reference methods");
    compare->add_option("--corpus", corpus_dir, "Directory of function files")->required();
    compare->add_option("--boxes", cfg.boxes_per_function, "Random boxes per function")->capture_default_str();
    compare->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
    compare->add_option("--eps", cfg.epsilon, "Comparison tolerance")->capture_default_str();
    compare->add_option("--out", report_path, "Report file (default: standard output)");
    compare->add_option("--format", format, "csv|json|table")->capture_default_str();
    compare->add_option("--records", records_path, "Per-sample CSV file");
    compare->add_option("--counting", counting, "independent|joint")->capture_default_str();

    FunctionArgs under_fn;
    std::string at;
    std::optional<double> lambda_override;
    auto* under = app.add_subcommand("underestimate", "Evaluate the alphaBB underestimator at a point");
    add_function_options(under, under_fn, true);
    under->add_option("--at", at, "Point \"x1,...,xn\"")->required();
    under->add_option("--lambda", lambda_override, "Lower eigenvalue bound to use (default: improved method)");

    FunctionArgs convex_fn;
    auto* convex = app.add_subcommand("convexity", "Certify convexity on the box (exit 0 iff certified)");
    add_function_options(convex, convex_fn, true);

    std::string gen_dir;
    std::uint64_t gen_seed = 1;
    std::size_t per_n = 10;
    std::size_t n_min = 2;
    std::size_t n_max = 10;
    auto* gen = app.add_subcommand("gen-corpus", "Write a seeded synthetic corpus");
    gen->add_option("--out", gen_dir, "Output directory")->required();
    gen->add_option("--seed", gen_seed, "Seed")->capture_default_str();
    gen->add_option("--per-n", per_n, "Functions per dimension")->capture_default_str();
    gen->add_option("--n-min", n_min, "Smallest dimension")->capture_default_str();
    gen->add_option("--n-max", n_max, "Largest dimension")->capture_default_str();

    FunctionArgs dump_fn;
    auto* dumpc = app.add_subcommand("dump", "Print the codelist with its index sets");
    add_function_options(dumpc, dump_fn, false);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*eval) return cmd_eval(eval_fn, method, json, trace, out);

        if (*compare) {
            const auto mode = parse_counting_mode(counting);
            if (!mode) throw std::invalid_argument("unknown counting mode '" + counting + "'");
            const auto fmt = parse_report_format(format);
            if (!fmt) throw std::invalid_argument("unknown format '" + format + "'");
            const auto corpus = load_corpus(corpus_dir);
            const auto records = run_compare(corpus, cfg);
            const std::string report = emit_report(records, *fmt, *mode);
            if (!records_path.empty()) write_text(records_path, records_csv(records));
            if (report_path.empty()) {
                out << report;
            } else {
                write_text(report_path, report);
                const auto skipped = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.skipped; });
                out << corpus.size() << " functions, " << records.size() << " samples, " << skipped << " skipped\n";
            }
            return 0;
        }

        if (*under) {
            const Loaded f = load_function(under_fn, true);
            const auto x = parse_point(at);
            if (x.size() != f.cl.n()) throw std::invalid_argument("--at dimension differs from --vars");
            const double lam = lambda_override ? *lambda_override : eval_improved(f.cl, f.box).eigen.lo();
            out << "phi: " << format_number(evaluate_point(f.cl, x)) << '\n'
                << "lambda_low: " << format_number(lam) << '\n'
                << "underestimator: " << format_number(alpha_bb_eval(f.cl, f.box, lam, x)) << '\n';
            return 0;
        }

        if (*convex) {
            const Loaded f = load_function(convex_fn, true);
            const Interval eig = eval_improved(f.cl, f.box).eigen;
            if (eig.lo() >= 0.0) {
                out << "convex\n";
                return 0;
            }
            out << "not certified (eigen lower bound " << format_number(eig.lo()) << ")\n";
            return 1;
        }

        if (*gen) {
            const auto corpus = synthetic_corpus(n_min, n_max, per_n, gen_seed);
            write_corpus(corpus, gen_dir);
            out << "wrote " << corpus.size() << " functions to " << gen_dir << '\n';
            return 0;
        }

        if (*dumpc) {
            out << dump(load_function(dump_fn, false).cl);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

} // namespace hessbound
