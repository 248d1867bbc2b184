#include "vulnseed/detection.hpp"

#include "vulnseed/line_diff.hpp"
#include "vulnseed/source.hpp"

#include "parallel.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>

namespace vulnseed {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

void read_report_object(const nlohmann::json& obj, const std::string& origin, std::vector<Finding>& out)
{
    if (!obj.is_object()) throw ReportError(origin + ": report entry is not an object");
    auto file = obj.find("file");
    if (file == obj.end() || !file->is_string()) throw ReportError(origin + ": missing string field \"file\"");
    auto findings = obj.find("findings");
    if (findings == obj.end() || !findings->is_array())
        throw ReportError(origin + ": missing array field \"findings\"");
    for (const auto& f : *findings) {
        if (!f.is_object()) throw ReportError(origin + ": finding is not an object");
        Finding finding;
        finding.file = file->get<std::string>();
        auto det = f.find("detector");
        if (det == f.end() || !det->is_string() || det->get<std::string>().empty())
            throw ReportError(origin + ": finding without a detector name");
        finding.detector = det->get<std::string>();
        auto lines = f.find("lines");
        if (lines == f.end() || !lines->is_array() || lines->empty())
            throw ReportError(origin + ": finding \"" + finding.detector + "\" has no lines");
        for (const auto& l : *lines) {
            if (!l.is_number_integer() || l.get<long long>() < 1)
                throw ReportError(origin + ": finding \"" + finding.detector + "\" has a non-positive line");
            finding.lines.insert(l.get<int>());
        }
        out.push_back(std::move(finding));
    }
}

std::size_t count_near(std::span<const Finding> findings, const std::string& detector, const std::set<int>& lines,
                       unsigned tolerance)
{
    std::size_t n = 0;
    for (const Finding& f : findings) {
        if (f.detector != detector) continue;
        bool near = std::any_of(f.lines.begin(), f.lines.end(), [&](int l) {
            auto it = lines.lower_bound(l - static_cast<int>(tolerance));
            return it != lines.end() && *it <= l + static_cast<int>(tolerance);
        });
        if (near) ++n;
    }
    return n;
}

std::map<std::string, std::size_t> detector_counts(std::span<const Finding> findings)
{
    std::map<std::string, std::size_t> counts;
    for (const Finding& f : findings) ++counts[f.detector];
    return counts;
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ReportError("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

std::vector<Finding> parse_report(std::string_view json, const std::string& origin)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw ReportError(origin + ": malformed JSON: " + e.what());
    }
    std::vector<Finding> findings;
    if (doc.is_array()) {
        for (const auto& obj : doc) read_report_object(obj, origin, findings);
    } else {
        read_report_object(doc, origin, findings);
    }
    std::sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        return std::tie(a.file, a.detector, *a.lines.begin()) < std::tie(b.file, b.detector, *b.lines.begin());
    });
    return findings;
}

std::vector<Finding> ingest_report(const fs::path& path)
{
    return parse_report(read_text(path), path.string());
}

DetectorMap::DetectorMap()
    : names_{"unchecked-lowlevel", "unchecked-send", "tx-origin", "unused-return", "calls-loop",
             "controlled-delegatecall"}
{
}

std::string_view to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::TP: return "TP";
    case Verdict::FN: return "FN";
    case Verdict::AnalyzerFailed: return "AnalyzerFailed";
    }
    return "?";
}

std::optional<Verdict> verdict_from_string(std::string_view name)
{
    for (Verdict v : {Verdict::TP, Verdict::FN, Verdict::AnalyzerFailed}) {
        if (to_string(v) == name) return v;
    }
    return std::nullopt;
}

InjectedLines injected_lines(std::string_view original, std::string_view mutant)
{
    auto left = split_lines(original);
    auto right = split_lines(mutant);
    LineDiff d = diff_lines(left, right);
    InjectedLines result;
    for (std::size_t i = 0; i < d.left_kept.size(); ++i) {
        if (!d.left_kept[i]) result.original.insert(static_cast<int>(i + 1));
    }
    for (std::size_t i = 0; i < d.right_kept.size(); ++i) {
        if (!d.right_kept[i]) result.mutant.insert(static_cast<int>(i + 1));
    }
    return result;
}

DetectionOutcome classify(const Mutant& mutant, const InjectedLines& injected, std::span<const Finding> original,
                          std::span<const Finding> mutated, const DetectorMap& map, unsigned line_tolerance)
{
    DetectionOutcome out;
    out.mutant_id = mutant.id;
    out.op = mutant.op;
    out.injected_lines = injected.mutant;

    const std::string& expected = map.expected(mutant.op);
    // A pure deletion leaves no mutant line behind, so the neighbourhood of the original
    // region (which has the same numbering up to that point) is used.
    std::set<int> pre_lines = injected.original.empty() ? injected.mutant : injected.original;
    std::set<int> post_lines = injected.mutant.empty() ? injected.original : injected.mutant;
    std::size_t pre = count_near(original, expected, pre_lines, line_tolerance);
    std::size_t post = count_near(mutated, expected, post_lines, line_tolerance);
    out.verdict = post > pre ? Verdict::TP : Verdict::FN;

    auto before = detector_counts(original);
    auto after = detector_counts(mutated);
    std::set<std::string> names;
    for (const auto& [name, n] : before) names.insert(name);
    for (const auto& [name, n] : after) names.insert(name);
    for (const std::string& name : names) {
        if (name == expected) continue;
        std::size_t b = before.contains(name) ? before[name] : 0;
        std::size_t a = after.contains(name) ? after[name] : 0;
        for (std::size_t k = b; k < a; ++k) out.side_effects_added.push_back(name);
        for (std::size_t k = a; k < b; ++k) out.side_effects_removed.push_back(name);
    }
    return out;
}

DetectionOutcome analyzer_failed(const Mutant& mutant)
{
    DetectionOutcome out;
    out.mutant_id = mutant.id;
    out.op = mutant.op;
    out.verdict = Verdict::AnalyzerFailed;
    return out;
}

ScoreTable score(std::span<const DetectionOutcome> outcomes)
{
    ScoreTable table;
    for (const DetectionOutcome& o : outcomes) {
        ScoreRow& row = table.rows.at(static_cast<std::size_t>(o.op));
        switch (o.verdict) {
        case Verdict::TP: ++row.tp; ++table.total.tp; break;
        case Verdict::FN: ++row.fn; ++table.total.fn; break;
        case Verdict::AnalyzerFailed: ++row.failed; ++table.total.failed; break;
        }
    }
    return table;
}

std::string format_ratio(std::size_t numerator, std::size_t denominator)
{
    if (denominator == 0) return "-";
    // Integer arithmetic so that exact thousandths never fall one below through rounding error.
    auto milli = static_cast<unsigned long long>(numerator) * 1000ULL / denominator;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%llu.%03llu", milli / 1000, milli % 1000);
    return buf;
}

namespace {

void scores_csv_row(std::ostringstream& out, std::string_view name, const ScoreRow& row)
{
    std::size_t n = row.tp + row.fn;
    out << name << ',' << row.tp << ',' << row.fn << ',' << format_ratio(row.tp, n) << ','
        << format_ratio(row.fn, n) << '\n';
}

}  // namespace

std::string format_scores_csv(const ScoreTable& table)
{
    std::ostringstream out;
    out << "operator,tp,fn,recall,fnr\n";
    for (OperatorId op : all_operators) scores_csv_row(out, to_string(op), table.row(op));
    scores_csv_row(out, "TOTAL", table.total);
    return out.str();
}

std::string format_scores_table(const ScoreTable& table)
{
    std::ostringstream out;
    char line[128];
    auto row_line = [&](const std::string& name, const ScoreRow& row) {
        std::size_t n = row.tp + row.fn;
        std::snprintf(line, sizeof line, "%-9s %8zu %8zu %8s %8s %8zu\n", name.c_str(), row.tp, row.fn,
                      format_ratio(row.tp, n).c_str(), format_ratio(row.fn, n).c_str(), row.failed);
        out << line;
    };
    std::snprintf(line, sizeof line, "%-9s %8s %8s %8s %8s %8s\n", "Operator", "TP", "FN", "Recall", "FNR", "Failed");
    out << line;
    for (OperatorId op : all_operators) row_line(std::string(to_string(op)), table.row(op));
    row_line("TOTAL", table.total);
    return out.str();
}

SideEffectSummary summarize_side_effects(std::span<const DetectionOutcome> outcomes)
{
    SideEffectSummary summary;
    for (const DetectionOutcome& o : outcomes) {
        for (const std::string& d : o.side_effects_added) ++summary[{o.op, d}].added;
        for (const std::string& d : o.side_effects_removed) ++summary[{o.op, d}].removed;
    }
    return summary;
}

std::string format_side_effects_csv(const SideEffectSummary& summary)
{
    std::ostringstream out;
    out << "operator,detector,added,removed\n";
    for (const auto& [key, count] : summary)
        out << to_string(key.first) << ',' << key.second << ',' << count.added << ',' << count.removed << '\n';
    return out.str();
}

std::string to_json_line(const DetectionOutcome& outcome)
{
    ordered_json j;
    j["mutant_id"] = outcome.mutant_id;
    j["operator"] = to_string(outcome.op);
    j["verdict"] = to_string(outcome.verdict);
    j["injected_lines"] = outcome.injected_lines;
    j["side_effects_added"] = outcome.side_effects_added;
    j["side_effects_removed"] = outcome.side_effects_removed;
    return j.dump();
}

DetectionOutcome outcome_from_json(std::string_view line)
{
    try {
        auto j = nlohmann::json::parse(line);
        DetectionOutcome o;
        o.mutant_id = j.at("mutant_id").get<std::string>();
        auto op = operator_from_string(j.at("operator").get<std::string>());
        auto verdict = verdict_from_string(j.at("verdict").get<std::string>());
        if (!op || !verdict) throw ReportError("bad operator or verdict in outcome " + o.mutant_id);
        o.op = *op;
        o.verdict = *verdict;
        o.injected_lines = j.at("injected_lines").get<std::set<int>>();
        o.side_effects_added = j.at("side_effects_added").get<std::vector<std::string>>();
        o.side_effects_removed = j.at("side_effects_removed").get<std::vector<std::string>>();
        return o;
    } catch (const nlohmann::json::exception& e) {
        throw ReportError(std::string("malformed outcome entry: ") + e.what());
    }
}

namespace {

void write_text(const fs::path& path, std::string_view content)
{
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw CampaignError("cannot write " + path.string());
}

std::string canonical_key(const std::string& path)
{
    std::error_code ec;
    fs::path p = fs::weakly_canonical(path, ec);
    return ec ? fs::path(path).lexically_normal().generic_string() : p.generic_string();
}

/// Findings of a report that concern `analyzed`. Single-file reports are trusted as is.
std::vector<Finding> findings_for(std::vector<Finding> all, const fs::path& analyzed)
{
    std::set<std::string> files;
    for (const Finding& f : all) files.insert(f.file);
    if (files.size() <= 1) return all;
    std::string key = canonical_key(analyzed.string());
    std::erase_if(all, [&](const Finding& f) { return canonical_key(f.file) != key; });
    return all;
}

/// Where the original file's report lives, keyed by the mutant's layout directory.
std::string layout_stem(const Mutant& m)
{
    return fs::path(m.output_path).parent_path().parent_path().generic_string();
}

struct Report {
    bool present = false;
    std::vector<Finding> findings;
};

Report load_report(const fs::path& report, const fs::path& analyzed,
                   const std::optional<std::string>& run_cmd)
{
    if (run_cmd) {
        fs::create_directories(report.parent_path());
        std::error_code ec;
        fs::remove(report, ec);
        run_shell(expand_command(*run_cmd, {{"file", analyzed.string()}, {"report", report.string()}}));
    }
    Report r;
    std::error_code ec;
    if (!fs::is_regular_file(report, ec)) return r;
    r.present = true;
    r.findings = findings_for(ingest_report(report), analyzed);
    return r;
}

DiffResult finish(const fs::path& out_dir, std::vector<DetectionOutcome> outcomes)
{
    DiffResult result;
    result.outcomes = std::move(outcomes);
    result.table = score(result.outcomes);
    result.side_effects = summarize_side_effects(result.outcomes);
    write_text(out_dir / scores_file_name, format_scores_csv(result.table));
    write_text(out_dir / side_effects_file_name, format_side_effects_csv(result.side_effects));
    return result;
}

}  // namespace

DiffResult run_diff(const DiffOptions& options)
{
    const fs::path& out = options.out_dir;
    std::vector<Mutant> mutants = read_mutation_log(out);
    fs::path reports = options.reports_dir ? *options.reports_dir : out / "reports";
    if (!options.run_cmd && !options.reports_dir && !fs::is_directory(reports))
        throw CampaignError("no reports directory " + reports.string() + " and no analyzer command");

    // Originals first, one report per distinct source file.
    std::map<std::string, std::size_t> original_index;
    std::vector<const Mutant*> representatives;
    for (const Mutant& m : mutants) {
        if (original_index.emplace(m.source_path, representatives.size()).second) representatives.push_back(&m);
    }
    std::vector<Report> original_reports(representatives.size());
    std::vector<std::string> original_texts(representatives.size());
    std::vector<std::exception_ptr> errors(representatives.size());
    detail::parallel_for(representatives.size(), options.workers, [&](std::size_t i) {
        const Mutant& m = *representatives[i];
        try {
            original_texts[i] = read_text(m.source_path);
            original_reports[i] = load_report(reports / "original" / (layout_stem(m) + ".json"), m.source_path,
                                              options.run_cmd);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<DetectionOutcome> outcomes(mutants.size());
    errors.assign(mutants.size(), nullptr);
    detail::parallel_for(mutants.size(), options.workers, [&](std::size_t i) {
        const Mutant& m = mutants[i];
        try {
            std::size_t o = original_index.at(m.source_path);
            fs::path mutant_file = out / m.output_path;
            Report mutated = load_report(reports / "mutants" / (m.id + ".json"), mutant_file, options.run_cmd);
            if (!mutated.present || !original_reports[o].present) {
                outcomes[i] = analyzer_failed(m);
                return;
            }
            InjectedLines lines = injected_lines(original_texts[o], read_text(mutant_file));
            outcomes[i] = classify(m, lines, original_reports[o].findings, mutated.findings, options.detectors,
                                   options.line_tolerance);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::string log;
    for (const DetectionOutcome& o : outcomes) log += to_json_line(o) + '\n';
    write_text(out / outcomes_file_name, log);
    return finish(out, std::move(outcomes));
}

DiffResult rescore(const fs::path& out_dir)
{
    fs::path path = out_dir / outcomes_file_name;
    std::ifstream in(path);
    if (!in) throw CampaignError("missing " + path.string());
    std::vector<DetectionOutcome> outcomes;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) outcomes.push_back(outcome_from_json(line));
    }
    return finish(out_dir, std::move(outcomes));
}

}  // namespace vulnseed
