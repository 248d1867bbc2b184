#pragma once

#include "vulnseed/operators.hpp"
#include "vulnseed/syntax.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vulnseed {

/// Fatal campaign-level failure (unreadable corpus, missing log, ...).
class CampaignError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One first-order mutant as recorded in `mutations.jsonl`.
/// `output_path` is relative to the campaign output directory.
struct Mutant {
    std::string id;
    OperatorId op = OperatorId::UC;
    std::string source_path;
    std::string output_path;
    std::size_t line = 0;
    std::string original_snippet;
    std::string mutated_snippet;

    friend bool operator==(const Mutant&, const Mutant&) = default;
};

std::string to_json_line(const Mutant& mutant);
Mutant mutant_from_json(std::string_view line);

inline constexpr const char* mutation_log_name = "mutations.jsonl";
inline constexpr const char* stats_file_name = "stats.csv";
inline constexpr const char* validation_file_name = "validation.json";

/// Reads `<out_dir>/mutations.jsonl`; throws CampaignError when it is missing or malformed.
std::vector<Mutant> read_mutation_log(const std::filesystem::path& out_dir);

struct QuarantinedSite {
    std::string source_path;
    OperatorId op = OperatorId::UC;
    std::size_t ordinal = 0;
    std::string reason;
};

struct GeneratedMutant {
    Mutant mutant;
    std::string text;
};

/// Everything produced for one corpus file.
struct FileMutations {
    bool parsed = false;
    std::vector<Diagnostic> diagnostics;
    std::map<OperatorId, std::size_t> sites;
    std::vector<GeneratedMutant> mutants;
    std::vector<QuarantinedSite> quarantined;
};

/// Runs every enabled operator over one file. `id_stem` prefixes mutant ids and `layout_stem`
/// is the relative directory the mutants are written under.
FileMutations mutate_source(std::shared_ptr<const SourceFile> file, const std::string& source_path,
                            const std::string& id_stem, const std::string& layout_stem, const OperatorConfig& cfg);

struct OperatorStats {
    OperatorId op = OperatorId::UC;
    std::size_t mutated_contracts = 0;
    std::size_t mutants = 0;
    double injection_rate = 0.0;
};

struct CampaignStats {
    /// Enabled operators ordered by injection rate (descending), ties in operator order.
    std::vector<OperatorStats> rows;
    std::size_t corpus_size = 0;
    std::size_t parsed_contracts = 0;
    std::size_t skipped_invalid = 0;
    std::size_t no_pattern = 0;
    std::size_t mutated_contracts = 0;
    std::size_t total_mutants = 0;
    std::size_t quarantined = 0;
    /// Mean of the per-operator injection rates.
    double average_injection_rate = 0.0;
};

struct CampaignResult {
    CampaignStats stats;
    std::vector<Mutant> mutants;
    std::vector<QuarantinedSite> quarantined;
    std::vector<std::pair<std::string, Diagnostic>> invalid_files;
};

/// Relative paths of all `.sol` files under `corpus_dir`, sorted.
std::vector<std::filesystem::path> enumerate_corpus(const std::filesystem::path& corpus_dir);

CampaignResult run_campaign(const std::filesystem::path& corpus_dir, const OperatorConfig& cfg,
                            const std::filesystem::path& out_dir, unsigned workers = 1);

std::string format_stats_csv(const CampaignStats& stats);
std::string format_stats_table(const CampaignStats& stats);

// --- validation --------------------------------------------------------------------------

struct MutantValidation {
    std::string id;
    bool reparsed = false;
    bool log_consistent = false;
    bool pattern_adherent = false;
    std::optional<int> compile_exit;
    std::vector<std::string> notes;

    bool structural_ok() const { return reparsed && log_consistent && pattern_adherent; }
    bool ok() const { return structural_ok() && (!compile_exit || *compile_exit == 0); }
};

struct ValidationReport {
    std::vector<MutantValidation> results;
    std::size_t reparse_failures = 0;
    std::size_t log_failures = 0;
    std::size_t pattern_failures = 0;
    std::size_t compile_failures = 0;
    std::size_t failed_mutants = 0;

    double failure_rate() const
    {
        return results.empty() ? 0.0 : static_cast<double>(failed_mutants) / static_cast<double>(results.size());
    }
    std::size_t structural_failures() const;
};

/// Checks one mutant: re-parse, log cross-check against the original/mutant diff, and
/// pattern adherence of the logged anchor.
MutantValidation validate_mutant(const Mutant& mutant, const SourceFile& original, const SourceFile& mutated);

/// Validates every logged mutant under `out_dir` and writes `validation.json`.
/// `compile_cmd` may contain `{file}`; otherwise the mutant path is appended.
ValidationReport validate_mutants(const std::filesystem::path& out_dir,
                                  const std::optional<std::string>& compile_cmd = std::nullopt, unsigned workers = 1);

std::string to_json(const ValidationReport& report);

/// Substitutes `{name}` placeholders with shell-quoted values.
std::string expand_command(const std::string& templ, const std::map<std::string, std::string>& values);
int run_shell(const std::string& command);

}  // namespace vulnseed
