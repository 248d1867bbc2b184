#include "vulnseed/cli.hpp"

#include "vulnseed/campaign.hpp"
#include "vulnseed/detection.hpp"

#include "CLI11.hpp"

#include <ostream>

namespace vulnseed {

namespace fs = std::filesystem;

namespace {

struct Settings {
    std::string corpus;
    std::string out;
    std::vector<std::string> operators;
    unsigned cl_loop_bound = 1000;
    bool cl_skip_inside_loop = false;
    unsigned workers = 1;
    unsigned line_tolerance = 1;
    std::string run_cmd;
    std::string compile_cmd;
    std::string reports;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

OperatorConfig operator_config(const Settings& s)
{
    OperatorConfig cfg;
    cfg.cl_loop_bound = s.cl_loop_bound;
    cfg.cl_skip_inside_loop = s.cl_skip_inside_loop;
    if (!s.operators.empty()) {
        cfg.enabled.clear();
        for (const std::string& name : s.operators) {
            auto op = operator_from_string(name);
            if (!op) throw UsageError("unknown operator '" + name + "' (expected UC, US, TX, UR, CL or DTU)");
            cfg.enabled.insert(*op);
        }
    }
    if (cfg.enabled.empty()) throw UsageError("--operators selects no operator");
    if (cfg.cl_loop_bound < 1) throw UsageError("--cl-loop-bound must be at least 1");
    return cfg;
}

void require(const std::string& value, const char* flag)
{
    if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

void check_workers(const Settings& s)
{
    if (s.workers < 1) throw UsageError("--workers must be at least 1");
}

int cmd_mutate(const Settings& s, std::ostream& out, std::ostream& err)
{
    require(s.corpus, "--corpus");
    require(s.out, "--out");
    check_workers(s);
    OperatorConfig cfg = operator_config(s);
    CampaignResult result = run_campaign(s.corpus, cfg, s.out, s.workers);
    out << format_stats_table(result.stats);
    for (const auto& [file, diag] : result.invalid_files)
        err << "skipped " << file << ": " << diag.message << '\n';
    for (const QuarantinedSite& q : result.quarantined)
        err << "quarantined " << q.source_path << ' ' << to_string(q.op) << '#' << q.ordinal << ": " << q.reason << '\n';
    return result.quarantined.empty() ? exit_ok : exit_failures;
}

int cmd_validate(const Settings& s, std::ostream& out, std::ostream& err)
{
    require(s.out, "--out");
    check_workers(s);
    std::optional<std::string> compile;
    if (!s.compile_cmd.empty()) compile = s.compile_cmd;
    ValidationReport report = validate_mutants(s.out, compile, s.workers);
    out << "mutants: " << report.results.size() << "  reparse failures: " << report.reparse_failures
        << "  log failures: " << report.log_failures << "  pattern failures: " << report.pattern_failures;
    if (compile) out << "  compile failures: " << report.compile_failures;
    out << "  failed: " << report.failed_mutants << '\n';
    for (const MutantValidation& v : report.results) {
        for (const std::string& note : v.notes) err << v.id << ": " << note << '\n';
    }
    return report.failed_mutants == 0 ? exit_ok : exit_failures;
}

void print_failed(const DiffResult& result, std::ostream& err)
{
    for (const DetectionOutcome& o : result.outcomes) {
        if (o.verdict == Verdict::AnalyzerFailed) err << "analyzer failed: " << o.mutant_id << '\n';
    }
}

int cmd_diff(const Settings& s, std::ostream& out, std::ostream& err)
{
    require(s.out, "--out");
    check_workers(s);
    DiffOptions options;
    options.out_dir = s.out;
    if (!s.reports.empty()) options.reports_dir = s.reports;
    if (!s.run_cmd.empty()) options.run_cmd = s.run_cmd;
    options.workers = s.workers;
    options.line_tolerance = s.line_tolerance;
    DiffResult result = run_diff(options);
    print_failed(result, err);
    out << format_scores_table(result.table);
    return exit_ok;
}

int cmd_score(const Settings& s, std::ostream& out)
{
    require(s.out, "--out");
    DiffResult result = rescore(s.out);
    out << format_scores_table(result.table);
    return exit_ok;
}

int cmd_run(const Settings& s, std::ostream& out, std::ostream& err)
{
    int mutate = cmd_mutate(s, out, err);
    int validate = cmd_validate(s, out, err);
    cmd_diff(s, out, err);
    return std::max(mutate, validate);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Seeds vulnerabilities into Solidity contracts and scores analyzer detection."};
    app.name("vulnseed");
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file holding any of the long options; flags win");

    Settings s;
    app.add_option("--corpus", s.corpus, "Directory scanned recursively for .sol files");
    app.add_option("--out", s.out, "Campaign output directory");
    app.add_option("--operators", s.operators, "Comma-separated operators (default: all)")->delimiter(',');
    app.add_option("--cl-loop-bound", s.cl_loop_bound, "Iterations of the loop inserted by CL")->capture_default_str();
    app.add_flag("--cl-skip-inside-loop", s.cl_skip_inside_loop, "CL ignores calls already inside a loop");
    app.add_option("--workers", s.workers, "Worker threads")->capture_default_str();
    app.add_option("--line-tolerance", s.line_tolerance, "Line window when matching findings")->capture_default_str();
    app.add_option("--run-cmd", s.run_cmd, "Analyzer command template with {file} and {report}");
    app.add_option("--compile-cmd", s.compile_cmd, "Compiler check run on every mutant ({file})");
    app.add_option("--reports", s.reports, "Directory of pre-supplied reports (original/, mutants/)");

    auto* mutate = app.add_subcommand("mutate", "Generate mutants and stats.csv");
    auto* validate = app.add_subcommand("validate", "Check every logged mutant, write validation.json");
    auto* diff = app.add_subcommand("diff", "Classify mutants from analyzer reports, write scores");
    auto* score = app.add_subcommand("score", "Recompute scores from outcomes.jsonl");
    auto* run = app.add_subcommand("run", "mutate, validate, diff and score in one go");
    for (auto* sub : {mutate, validate, diff, score, run}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*mutate) return cmd_mutate(s, out, err);
        if (*validate) return cmd_validate(s, out, err);
        if (*diff) return cmd_diff(s, out, err);
        if (*score) return cmd_score(s, out);
        return cmd_run(s, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const CampaignError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ReportError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failures;
    }
}

}  // namespace vulnseed
