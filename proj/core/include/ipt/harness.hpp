#pragma once

// Batch evaluation: ingest pre-collected model outputs, classify each one in
// both verification regimes, aggregate per model/effort/group, and emit
// report tables. Also the reward gap between two training reward series.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ipt/detect.hpp"
#include "ipt/tasks.hpp"

namespace ipt::harness {

/// Content of the last complete ``` fence, else the trimmed text.
std::string extract_hypothesis(std::string_view raw);

class IngestError : public std::runtime_error {
public:
    IngestError(const std::string& msg, std::size_t line);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct EvalRecord {
    std::string task_id;
    std::string model_name;
    std::optional<std::string> effort_label;
    std::string raw_output;
    std::string extracted_hypothesis;
    detect::IPTResult result;
    std::optional<std::uint64_t> token_count;
    int level = 1;

    bool operator==(const EvalRecord&) const = default;
};

using TaskSet = std::map<std::string, tasks::Task>;

struct IngestOptions {
    std::vector<std::uint64_t> seeds = detect::kDefaultIsoSeeds;
    logic::EvalBudget budget;
    /// 0 picks the hardware concurrency.
    unsigned threads = 0;
};

/// One record per nonblank JSON line, in input order.
std::vector<EvalRecord> ingest(std::istream& in, const TaskSet& tasks, const IngestOptions& opts = {});
std::vector<EvalRecord> ingest_file(const std::filesystem::path& results, const std::filesystem::path& task_dir,
                                    const IngestOptions& opts = {});

nlohmann::json to_json(const EvalRecord& r);
EvalRecord record_from_json(const nlohmann::json& j);

/// Records written by to_json, one per line.
std::vector<EvalRecord> read_records(std::istream& in);

// --- aggregation ------------------------------------------------------------

enum class Grouping { tier, level, effort };

Grouping parse_grouping(std::string_view s);
std::string_view grouping_name(Grouping g) noexcept;

struct GroupReport {
    std::string model_name;
    /// "-" when the record carried no effort label.
    std::string effort_label;
    std::string group;
    std::size_t n_tasks = 0;
    std::size_t n_iso_passed = 0;
    std::size_t n_shortcuts = 0;
    std::size_t n_syntax_ok = 0;

    double accuracy_iso() const noexcept;  // percent
    double shortcut_rate() const noexcept; // fraction
    double syntax_rate() const noexcept;   // percent

    bool operator==(const GroupReport&) const = default;
};

/// Rows keyed by (model, effort, group), ordered by model, effort, then the
/// natural group order (tiers Basic..Hard, levels numerically).
std::vector<GroupReport> aggregate(const std::vector<EvalRecord>& records, Grouping grouping);

/// Sums level rows into tier rows.
std::vector<GroupReport> levels_to_tiers(const std::vector<GroupReport>& level_rows);

// --- reports ----------------------------------------------------------------

enum class ReportFormat { text, csv, json };

ReportFormat parse_format(std::string_view s);
std::string_view format_extension(ReportFormat f) noexcept;

class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Byte-deterministic. Footnotes trail the table (text, csv as "# " lines)
/// or go in a "notes" array (json).
std::string render_report(const std::vector<GroupReport>& rows, ReportFormat format,
                          const std::vector<std::string>& footnotes = {});

/// Writes render_report output; throws ReportError naming the path.
void emit_report(const std::vector<GroupReport>& rows, ReportFormat format, const std::filesystem::path& path,
                 const std::vector<std::string>& footnotes = {});

// --- hacking gap ------------------------------------------------------------

struct SeriesPoint {
    double step = 0;
    double value = 0;
};

struct GapRow {
    double step = 0;
    double reward_ext = 0;
    double reward_iso = 0;
    double gap = 0;
};

class LengthMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-wise ext - iso. Series must have equal length and equal steps.
std::vector<GapRow> hacking_gap(const std::vector<SeriesPoint>& ext, const std::vector<SeriesPoint>& iso);

/// "step,value" lines (header optional). Repeated steps are averaged into
/// one point; output is ordered by step.
std::vector<SeriesPoint> read_series(std::istream& in);
std::vector<SeriesPoint> load_series(const std::filesystem::path& path);

std::string render_gap(const std::vector<GapRow>& rows);

} // namespace ipt::harness
