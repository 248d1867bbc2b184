#pragma once

#include "vulnseed/campaign.hpp"
#include "vulnseed/operators.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vulnseed {

/// A findings report that does not follow the documented schema.
class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One analyzer report item.
struct Finding {
    std::string detector;
    std::string file;
    std::set<int> lines;

    friend bool operator==(const Finding&, const Finding&) = default;
};

/// Parses a findings report: `{"file": ..., "findings": [{"detector": ..., "lines": [...]}]}`
/// or an array of such objects. Result is sorted by (file, detector, first line).
std::vector<Finding> parse_report(std::string_view json, const std::string& origin = "<memory>");
std::vector<Finding> ingest_report(const std::filesystem::path& path);

/// Expected detector per operator.
class DetectorMap {
public:
    DetectorMap();
    const std::string& expected(OperatorId op) const { return names_.at(static_cast<std::size_t>(op)); }
    void set(OperatorId op, std::string detector) { names_.at(static_cast<std::size_t>(op)) = std::move(detector); }

private:
    std::array<std::string, all_operators.size()> names_;
};

enum class Verdict { TP, FN, AnalyzerFailed };
std::string_view to_string(Verdict verdict);
std::optional<Verdict> verdict_from_string(std::string_view name);

/// Lines a mutation touched, in mutant and in original coordinates (1-based).
struct InjectedLines {
    std::set<int> mutant;
    std::set<int> original;
};

/// Lines outside the longest common line subsequence of the two texts.
InjectedLines injected_lines(std::string_view original, std::string_view mutant);

struct DetectionOutcome {
    std::string mutant_id;
    OperatorId op = OperatorId::UC;
    Verdict verdict = Verdict::FN;
    std::set<int> injected_lines;
    std::vector<std::string> side_effects_added;
    std::vector<std::string> side_effects_removed;

    friend bool operator==(const DetectionOutcome&, const DetectionOutcome&) = default;
};

/// TP when the mutant has more expected-detector findings near its injected lines than the
/// original has near the replaced lines; FN otherwise. A finding is near a line set when one
/// of its lines lies within `line_tolerance` of it. Side effects are the per-detector count
/// differences over whole files, the expected detector excluded.
DetectionOutcome classify(const Mutant& mutant, const InjectedLines& injected, std::span<const Finding> original,
                          std::span<const Finding> mutated, const DetectorMap& map, unsigned line_tolerance = 1);

DetectionOutcome analyzer_failed(const Mutant& mutant);

struct ScoreRow {
    std::size_t tp = 0;
    std::size_t fn = 0;
    std::size_t failed = 0;
};

struct ScoreTable {
    std::array<ScoreRow, all_operators.size()> rows{};
    ScoreRow total;

    const ScoreRow& row(OperatorId op) const { return rows.at(static_cast<std::size_t>(op)); }
};

ScoreTable score(std::span<const DetectionOutcome> outcomes);

/// `numerator / denominator` truncated to three decimals, or "-" when the denominator is zero.
std::string format_ratio(std::size_t numerator, std::size_t denominator);

std::string format_scores_csv(const ScoreTable& table);
std::string format_scores_table(const ScoreTable& table);

struct SideEffectCount {
    std::size_t added = 0;
    std::size_t removed = 0;
};
using SideEffectSummary = std::map<std::pair<OperatorId, std::string>, SideEffectCount>;

SideEffectSummary summarize_side_effects(std::span<const DetectionOutcome> outcomes);
std::string format_side_effects_csv(const SideEffectSummary& summary);

std::string to_json_line(const DetectionOutcome& outcome);
DetectionOutcome outcome_from_json(std::string_view line);

inline constexpr const char* outcomes_file_name = "outcomes.jsonl";
inline constexpr const char* scores_file_name = "scores.csv";
inline constexpr const char* side_effects_file_name = "side_effects.csv";

struct DiffOptions {
    std::filesystem::path out_dir;
    /// Directory of pre-supplied reports; defaults to `<out>/reports` when `run_cmd` is set.
    std::optional<std::filesystem::path> reports_dir;
    /// Analyzer command template with `{file}` and `{report}` placeholders.
    std::optional<std::string> run_cmd;
    unsigned workers = 1;
    unsigned line_tolerance = 1;
    DetectorMap detectors;
};

struct DiffResult {
    std::vector<DetectionOutcome> outcomes;
    ScoreTable table;
    SideEffectSummary side_effects;
};

/// Classifies every logged mutant and writes outcomes.jsonl, scores.csv and side_effects.csv.
DiffResult run_diff(const DiffOptions& options);

/// Re-scores `<out>/outcomes.jsonl`, rewriting scores.csv and side_effects.csv.
DiffResult rescore(const std::filesystem::path& out_dir);

}  // namespace vulnseed
