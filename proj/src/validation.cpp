#include "vulnseed/campaign.hpp"

#include "parallel.hpp"

#include "json.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

namespace vulnseed {

namespace fs = std::filesystem;

std::string expand_command(const std::string& templ, const std::map<std::string, std::string>& values)
{
    auto quote = [](const std::string& s) {
        std::string q = "'";
        for (char c : s) {
            if (c == '\'') q += "'\\''";
            else q += c;
        }
        return q + "'";
    };
    std::string out = templ;
    for (const auto& [key, value] : values) {
        std::string placeholder = "{" + key + "}";
        std::string quoted = quote(value);
        std::size_t at = 0;
        while ((at = out.find(placeholder, at)) != std::string::npos) {
            out.replace(at, placeholder.size(), quoted);
            at += quoted.size();
        }
    }
    return out;
}

int run_shell(const std::string& command)
{
    int status = std::system(command.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

std::size_t ValidationReport::structural_failures() const
{
    std::size_t n = 0;
    for (const auto& r : results) {
        if (!r.structural_ok()) ++n;
    }
    return n;
}

namespace {

std::vector<std::size_t> occurrences(std::string_view text, std::string_view needle)
{
    std::vector<std::size_t> found;
    if (needle.empty()) return found;
    for (std::size_t at = text.find(needle); at != std::string_view::npos; at = text.find(needle, at + 1))
        found.push_back(at);
    return found;
}

/// Byte range where the two texts differ, after stripping their common prefix and suffix.
std::pair<Span, Span> changed_regions(std::string_view a, std::string_view b)
{
    std::size_t prefix = 0;
    while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
    std::size_t suffix = 0;
    while (suffix < a.size() - prefix && suffix < b.size() - prefix && a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix])
        ++suffix;
    return {{prefix, a.size() - suffix}, {prefix, b.size() - suffix}};
}

bool touches(std::size_t at, std::size_t length, Span region)
{
    return at <= region.end && at + length >= region.start;
}

bool check_log(const Mutant& m, const SourceFile& original, const SourceFile& mutated, std::vector<std::string>& notes)
{
    if (original.text() == mutated.text()) {
        notes.push_back("mutant is identical to the original");
        return false;
    }
    auto [orig_region, mut_region] = changed_regions(original.text(), mutated.text());

    bool at_line = false;
    bool in_diff = false;
    for (std::size_t at : occurrences(original.text(), m.original_snippet)) {
        if (original.line_of(at) != m.line) continue;
        at_line = true;
        if (touches(at, m.original_snippet.size(), orig_region)) in_diff = true;
    }
    if (!at_line) {
        notes.push_back("original snippet not found at logged line " + std::to_string(m.line));
        return false;
    }
    if (!in_diff) {
        notes.push_back("logged site lies outside the changed region");
        return false;
    }
    for (std::size_t at : occurrences(mutated.text(), m.mutated_snippet)) {
        if (touches(at, m.mutated_snippet.size(), mut_region)) return true;
    }
    notes.push_back("mutated snippet not found in the changed region of the mutant");
    return false;
}

bool check_pattern(const Mutant& m, const ParseOutcome& original, std::vector<std::string>& notes)
{
    if (!original.ok()) {
        notes.push_back("original no longer parses");
        return false;
    }
    const SyntaxTree& tree = *original.tree;
    for (const MutationSite& site : match(m.op, tree)) {
        if (site.line == m.line && site.original_snippet == m.original_snippet &&
            satisfies_shape(m.op, tree, site.anchor))
            return true;
    }
    notes.push_back("no " + std::string(to_string(m.op)) + " pattern at logged line " + std::to_string(m.line));
    return false;
}

MutantValidation validate_parsed(const Mutant& m, const ParseOutcome& original_tree, const SourceFile& original,
                                 const SourceFile& mutated)
{
    MutantValidation v;
    v.id = m.id;
    ParseOutcome reparsed = parse(mutated);
    v.reparsed = reparsed.ok();
    if (!v.reparsed) {
        const Diagnostic& d = reparsed.diagnostics.front();
        v.notes.push_back("mutant does not parse: line " + std::to_string(mutated.line_of(d.span.start)) + ": " +
                          d.message);
    }
    v.log_consistent = check_log(m, original, mutated, v.notes);
    v.pattern_adherent = check_pattern(m, original_tree, v.notes);
    return v;
}

}  // namespace

MutantValidation validate_mutant(const Mutant& mutant, const SourceFile& original, const SourceFile& mutated)
{
    return validate_parsed(mutant, parse(original), original, mutated);
}

ValidationReport validate_mutants(const fs::path& out_dir, const std::optional<std::string>& compile_cmd,
                                  unsigned workers)
{
    std::vector<Mutant> mutants = read_mutation_log(out_dir);

    std::vector<std::string> sources;
    for (const Mutant& m : mutants) sources.push_back(m.source_path);
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());

    struct Original {
        std::shared_ptr<const SourceFile> file;
        ParseOutcome tree;
        std::string error;
    };
    std::vector<Original> originals(sources.size());
    detail::parallel_for(sources.size(), workers, [&](std::size_t i) {
        try {
            originals[i].file = std::make_shared<const SourceFile>(SourceFile::load(sources[i]));
            originals[i].tree = parse(originals[i].file);
        } catch (const std::exception& e) {
            originals[i].error = e.what();
        }
    });

    ValidationReport report;
    report.results.resize(mutants.size());
    detail::parallel_for(mutants.size(), workers, [&](std::size_t i) {
        const Mutant& m = mutants[i];
        MutantValidation& v = report.results[i];
        auto idx = static_cast<std::size_t>(std::lower_bound(sources.begin(), sources.end(), m.source_path) - sources.begin());
        const Original& orig = originals[idx];
        fs::path mutant_path = out_dir / m.output_path;
        if (!orig.file) {
            v.id = m.id;
            v.notes.push_back("original unreadable: " + orig.error);
        } else {
            try {
                SourceFile mutated = SourceFile::load(mutant_path);
                v = validate_parsed(m, orig.tree, *orig.file, mutated);
            } catch (const std::exception& e) {
                v.id = m.id;
                v.notes.push_back(e.what());
            }
        }
        if (compile_cmd) {
            std::string cmd = compile_cmd->find("{file}") == std::string::npos
                                  ? *compile_cmd + " {file}"
                                  : *compile_cmd;
            v.compile_exit = run_shell(expand_command(cmd, {{"file", mutant_path.string()}}));
        }
    });

    for (const auto& v : report.results) {
        if (!v.reparsed) ++report.reparse_failures;
        if (!v.log_consistent) ++report.log_failures;
        if (!v.pattern_adherent) ++report.pattern_failures;
        if (v.compile_exit && *v.compile_exit != 0) ++report.compile_failures;
        if (!v.ok()) ++report.failed_mutants;
    }

    std::ofstream out(out_dir / validation_file_name, std::ios::trunc);
    out << to_json(report) << '\n';
    if (!out) throw CampaignError("cannot write " + (out_dir / validation_file_name).string());
    return report;
}

std::string to_json(const ValidationReport& report)
{
    nlohmann::ordered_json j;
    j["total"] = report.results.size();
    j["failures"] = {{"reparse", report.reparse_failures},
                     {"log_check", report.log_failures},
                     {"pattern_check", report.pattern_failures},
                     {"compile", report.compile_failures}};
    j["failed_mutants"] = report.failed_mutants;
    j["failure_rate"] = report.failure_rate();
    auto& list = j["mutants"] = nlohmann::ordered_json::array();
    for (const auto& v : report.results) {
        nlohmann::ordered_json r;
        r["id"] = v.id;
        r["reparse"] = v.reparsed;
        r["log_check"] = v.log_consistent;
        r["pattern_check"] = v.pattern_adherent;
        r["compile_exit"] = v.compile_exit ? nlohmann::ordered_json(*v.compile_exit) : nlohmann::ordered_json(nullptr);
        r["notes"] = v.notes;
        list.push_back(std::move(r));
    }
    return j.dump(2);
}

}  // namespace vulnseed
