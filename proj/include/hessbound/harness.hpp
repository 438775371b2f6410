#pragma once

// Benchmark harness: seeded random boxes and functions, the dev/eps
// classification against the reference methods, aggregate reports and the
// alphaBB underestimator.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hessbound/bound_engine.hpp"
#include "hessbound/codelist.hpp"
#include "hessbound/interval.hpp"

namespace hessbound {

/// Weighted difference (a - b) / (1 + 0.5 |a + b|).
double dev(double a, double b) noexcept;

/// a > b under eps.
bool eps_greater(double a, double b, double eps) noexcept;
/// a ~ b under eps.
bool eps_equal(double a, double b, double eps) noexcept;

/// Classes 1..5: 1 worse than G, 2 equal to G but worse than H, 3 between G and H,
/// 4 equal to H, 5 better than H.
struct ClassPair {
    int lower = 0;
    int upper = 0;
    friend bool operator==(const ClassPair&, const ClassPair&) = default;
};

/// Throws InconsistentInputs unless G is no tighter than H on both ends under eps.
ClassPair classify(const Interval& test, const Interval& g, const Interval& h, double eps);

/// phi(x) - 0.5 lambda_low sum (lo_i - x_i)(hi_i - x_i) if lambda_low < 0, else phi(x).
/// Throws PointOutsideBox.
double alpha_bb_eval(const Codelist& cl, const Box& box, double lambda_low, std::span<const double> x);

/// Boxes inside domain: per dimension two uniform draws, sorted; draws closer
/// than 1e-9 of the domain width are redrawn. Deterministic in seed.
std::vector<Box> random_boxes(const Box& domain, std::size_t count, std::uint64_t seed);

/// Parses "l1,u1;...;ln,un".
Box parse_box(std::string_view text);
/// Parses "x1,...,xn".
std::vector<double> parse_point(std::string_view text);
std::string format_box(const Box& b);

struct CorpusEntry {
    std::string id;
    std::string expression;
    std::size_t n = 0;
    Box domain;
};

/// Function file: "#" comments, "vars: n", optional "domain: l1,u1;...", one
/// expression per remaining line. The domain defaults to [-1,1]^n.
std::vector<CorpusEntry> parse_corpus(std::string_view text, const std::string& label);
/// All regular files of dir in name order.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir);

struct RandomFunctionOptions {
    std::size_t n = 2;
    std::size_t min_terms = 1;
    std::size_t max_terms = 4;
    int max_depth = 3;
    /// Guarantee at least one mul line in the codelist.
    bool require_mul = false;
    /// Allow oneOver, sqrt and ln (arguments are shifted to stay positive on the domain).
    bool singular_ops = true;
};

/// Random expression over x1..xn that is defined on the whole of domain.
std::string random_function(const Box& domain, const RandomFunctionOptions& opt, std::uint64_t seed);

/// Seeded synthetic corpus for n in [n_min, n_max], per_n functions each.
std::vector<CorpusEntry> synthetic_corpus(std::size_t n_min, std::size_t n_max, std::size_t per_n,
                                          std::uint64_t seed);
/// One function file per n, in the load_corpus format.
void write_corpus(const std::vector<CorpusEntry>& corpus, const std::filesystem::path& dir);

struct HarnessConfig {
    std::uint64_t seed = 0;
    std::size_t boxes_per_function = 100;
    double epsilon = 1e-6;
    std::vector<Method> methods{Method::Original, Method::Improved, Method::Gershgorin, Method::HertzRohn};
};

struct ComparisonRecord {
    std::string function_id;
    std::size_t box_id = 0;
    std::size_t n = 0;
    Box box;
    /// Indexed by Method.
    std::array<std::optional<Interval>, 4> bounds;
    std::optional<ClassPair> class_original;
    std::optional<ClassPair> class_improved;
    double epsilon = 0.0;
    bool skipped = false;
    std::string skip_reason;

    const std::optional<Interval>& bound(Method m) const { return bounds[static_cast<std::size_t>(m)]; }
};

std::vector<ComparisonRecord> run_compare(const std::vector<CorpusEntry>& corpus, const HarnessConfig& cfg);

enum class CountingMode { Independent, Joint };
enum class ReportFormat { Csv, Json, Table };

std::optional<CountingMode> parse_counting_mode(std::string_view s) noexcept;
std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept;

struct ReportRow {
    std::string label;  ///< n, or "all"
    std::size_t functions = 0;
    std::size_t samples = 0;
    std::size_t skipped = 0;
    /// Percent per class 1..5; in joint mode a sixth "mixed" entry holds
    /// samples whose lower and upper classes differ.
    std::array<double, 6> original{};
    std::array<double, 6> improved{};
};

std::vector<ReportRow> aggregate(const std::vector<ComparisonRecord>& records, CountingMode mode);
std::string emit_report(const std::vector<ComparisonRecord>& records, ReportFormat format,
                        CountingMode mode = CountingMode::Independent);
/// One line per record with all bounds and classes.
std::string records_csv(const std::vector<ComparisonRecord>& records);

} // namespace hessbound
