#include "vulnseed/campaign.hpp"

#include "parallel.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace vulnseed {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string to_json_line(const Mutant& mutant)
{
    ordered_json j;
    j["id"] = mutant.id;
    j["operator"] = to_string(mutant.op);
    j["source_path"] = mutant.source_path;
    j["output_path"] = mutant.output_path;
    j["line"] = mutant.line;
    j["original_snippet"] = mutant.original_snippet;
    j["mutated_snippet"] = mutant.mutated_snippet;
    return j.dump();
}

Mutant mutant_from_json(std::string_view line)
{
    try {
        auto j = nlohmann::json::parse(line);
        Mutant m;
        m.id = j.at("id").get<std::string>();
        auto op = operator_from_string(j.at("operator").get<std::string>());
        if (!op) throw CampaignError("unknown operator in log entry " + m.id);
        m.op = *op;
        m.source_path = j.at("source_path").get<std::string>();
        m.output_path = j.at("output_path").get<std::string>();
        m.line = j.at("line").get<std::size_t>();
        m.original_snippet = j.at("original_snippet").get<std::string>();
        m.mutated_snippet = j.at("mutated_snippet").get<std::string>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw CampaignError(std::string("malformed mutation log entry: ") + e.what());
    }
}

std::vector<Mutant> read_mutation_log(const fs::path& out_dir)
{
    fs::path log = out_dir / mutation_log_name;
    std::ifstream in(log);
    if (!in) throw CampaignError("missing mutation log " + log.string());
    std::vector<Mutant> mutants;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) mutants.push_back(mutant_from_json(line));
    }
    return mutants;
}

FileMutations mutate_source(std::shared_ptr<const SourceFile> file, const std::string& source_path,
                            const std::string& id_stem, const std::string& layout_stem, const OperatorConfig& cfg)
{
    FileMutations result;
    ParseOutcome outcome = parse(file);
    if (!outcome.ok()) {
        result.diagnostics = std::move(outcome.diagnostics);
        return result;
    }
    result.parsed = true;
    const SyntaxTree& tree = *outcome.tree;

    for (OperatorId op : all_operators) {
        if (!cfg.enabled.contains(op)) continue;
        std::vector<MutationSite> sites = match(op, tree, cfg);
        result.sites[op] = sites.size();
        for (const MutationSite& site : sites) {
            try {
                EditSet set = transform(tree, site, cfg);
                std::string text = apply(*file, set);
                Span region = project(set, site.anchor_span, file->size());

                Mutant m;
                m.id = id_stem + "-" + std::string(to_string(op)) + "-" + std::to_string(site.ordinal);
                m.op = op;
                m.source_path = source_path;
                m.output_path = layout_stem + "/" + std::string(to_string(op)) + "/" + m.id + ".sol";
                m.line = site.line;
                m.original_snippet = site.original_snippet;
                m.mutated_snippet = text.substr(region.start, region.size());
                result.mutants.push_back({std::move(m), std::move(text)});
            } catch (const std::exception& e) {
                result.quarantined.push_back({source_path, op, site.ordinal, e.what()});
            }
        }
    }
    return result;
}

std::vector<fs::path> enumerate_corpus(const fs::path& corpus_dir)
{
    std::error_code ec;
    if (!fs::is_directory(corpus_dir, ec)) throw CampaignError("corpus directory not readable: " + corpus_dir.string());
    std::vector<fs::path> files;
    fs::recursive_directory_iterator it(corpus_dir, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw CampaignError("corpus directory not readable: " + corpus_dir.string() + ": " + ec.message());
    for (const auto& entry : it) {
        if (entry.is_regular_file() && entry.path().extension() == ".sol")
            files.push_back(fs::relative(entry.path(), corpus_dir));
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
    return files;
}

namespace {

void write_file(const fs::path& path, std::string_view content)
{
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw CampaignError("cannot write " + path.string());
}

std::string format_fixed(double value, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

/// Percentage truncated (not rounded) to two decimals, the way the reference tables print.
std::string format_percent(double rate)
{
    auto hundredths = static_cast<long long>(std::floor(rate * 10000.0 + 1e-9));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%lld.%02lld", hundredths / 100, hundredths % 100);
    return buf;
}

CampaignStats compute_stats(const std::vector<FileMutations>& files, const OperatorConfig& cfg)
{
    CampaignStats stats;
    stats.corpus_size = files.size();
    std::map<OperatorId, OperatorStats> rows;
    for (OperatorId op : all_operators) {
        if (cfg.enabled.contains(op)) rows[op].op = op;
    }
    for (const FileMutations& f : files) {
        if (!f.parsed) {
            ++stats.skipped_invalid;
            continue;
        }
        ++stats.parsed_contracts;
        std::size_t file_sites = 0;
        for (const auto& [op, count] : f.sites) {
            rows[op].mutants += count;
            if (count > 0) ++rows[op].mutated_contracts;
            file_sites += count;
        }
        stats.total_mutants += file_sites;
        if (file_sites == 0) ++stats.no_pattern;
        else ++stats.mutated_contracts;
        stats.quarantined += f.quarantined.size();
    }
    double rate_sum = 0.0;
    for (auto& [op, row] : rows) {
        row.injection_rate = stats.parsed_contracts == 0
                                 ? 0.0
                                 : static_cast<double>(row.mutated_contracts) / static_cast<double>(stats.parsed_contracts);
        rate_sum += row.injection_rate;
        stats.rows.push_back(row);
    }
    std::stable_sort(stats.rows.begin(), stats.rows.end(),
                     [](const OperatorStats& a, const OperatorStats& b) { return a.injection_rate > b.injection_rate; });
    stats.average_injection_rate = stats.rows.empty() ? 0.0 : rate_sum / static_cast<double>(stats.rows.size());
    return stats;
}

}  // namespace

CampaignResult run_campaign(const fs::path& corpus_dir, const OperatorConfig& cfg, const fs::path& out_dir,
                            unsigned workers)
{
    if (cfg.cl_loop_bound < 1) throw CampaignError("cl_loop_bound must be at least 1");
    std::vector<fs::path> files = enumerate_corpus(corpus_dir);

    std::vector<std::string> layout_stems;
    std::vector<std::string> id_stems;
    std::set<std::string> used_ids;
    for (const fs::path& rel : files) {
        std::string layout = fs::path(rel).replace_extension().generic_string();
        std::string id = layout;
        std::replace(id.begin(), id.end(), '/', '_');
        std::string unique = id;
        for (int k = 2; used_ids.contains(unique); ++k) unique = id + "~" + std::to_string(k);
        used_ids.insert(unique);
        layout_stems.push_back(layout);
        id_stems.push_back(unique);
    }

    std::vector<FileMutations> results(files.size());
    detail::parallel_for(files.size(), workers, [&](std::size_t i) {
        std::string source_path = (corpus_dir / files[i]).lexically_normal().generic_string();
        try {
            auto source = std::make_shared<const SourceFile>(SourceFile::load(corpus_dir / files[i]));
            results[i] = mutate_source(source, source_path, id_stems[i], layout_stems[i], cfg);
        } catch (const std::exception& e) {
            results[i] = FileMutations{};
            results[i].diagnostics.push_back({{0, 0}, e.what()});
        }
    });

    CampaignResult result;
    result.stats = compute_stats(results, cfg);

    fs::create_directories(out_dir);
    std::string log;
    for (std::size_t i = 0; i < files.size(); ++i) {
        FileMutations& f = results[i];
        if (!f.parsed) {
            Diagnostic d = f.diagnostics.empty() ? Diagnostic{{0, 0}, "invalid"} : f.diagnostics.front();
            result.invalid_files.emplace_back((corpus_dir / files[i]).lexically_normal().generic_string(), d);
        }
        for (GeneratedMutant& g : f.mutants) {
            write_file(out_dir / g.mutant.output_path, g.text);
            log += to_json_line(g.mutant);
            log += '\n';
            result.mutants.push_back(std::move(g.mutant));
        }
        for (QuarantinedSite& q : f.quarantined) result.quarantined.push_back(std::move(q));
    }
    write_file(out_dir / mutation_log_name, log);
    write_file(out_dir / stats_file_name, format_stats_csv(result.stats));
    return result;
}

std::string format_stats_csv(const CampaignStats& stats)
{
    std::ostringstream out;
    out << "operator,mutated_contracts,mutants,injection_rate\n";
    for (const OperatorStats& row : stats.rows) {
        out << to_string(row.op) << ',' << row.mutated_contracts << ',' << row.mutants << ','
            << format_fixed(row.injection_rate, 6) << '\n';
    }
    out << "TOTAL," << stats.mutated_contracts << ',' << stats.total_mutants << ','
        << format_fixed(stats.average_injection_rate, 6) << '\n';
    return out.str();
}

std::string format_stats_table(const CampaignStats& stats)
{
    std::ostringstream out;
    char line[128];
    std::snprintf(line, sizeof line, "%-9s %14s %10s %15s\n", "Operator", "# Mutated SCs", "# Mutants", "Injection Rate");
    out << line;
    for (const OperatorStats& row : stats.rows) {
        std::snprintf(line, sizeof line, "%-9s %14zu %10zu %14s%%\n", std::string(to_string(row.op)).c_str(),
                      row.mutated_contracts, row.mutants, format_percent(row.injection_rate).c_str());
        out << line;
    }
    std::snprintf(line, sizeof line, "%-9s %14zu %10zu %14s%%\n", "-", stats.mutated_contracts, stats.total_mutants,
                  format_percent(stats.average_injection_rate).c_str());
    out << line;
    out << "corpus: " << stats.corpus_size << "  parsed: " << stats.parsed_contracts
        << "  invalid: " << stats.skipped_invalid << "  no pattern: " << stats.no_pattern
        << "  quarantined sites: " << stats.quarantined << '\n';
    return out.str();
}

}  // namespace vulnseed
