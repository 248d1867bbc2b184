// Acceptance suite: one test per criterion, with a PASS/FAIL line for each.

#include "vulnseed/campaign.hpp"
#include "vulnseed/cli.hpp"
#include "vulnseed/detection.hpp"

#include "lexer.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

using namespace vulnseed;
using vulnseed::test::fixtures;
using vulnseed::test::read_file;
using vulnseed::test::TempDir;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> tokens(std::string_view text)
{
    std::vector<std::string> out;
    for (const auto& t : detail::tokenize(text)) {
        if (t.kind != detail::TokenKind::End) out.emplace_back(t.text);
    }
    return out;
}

std::map<std::string, std::string> tree_contents(const fs::path& root)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = read_file(e.path());
    }
    return files;
}

int run_cli_args(std::vector<std::string> args)
{
    args.insert(args.begin(), "vulnseed");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace

// 1. Each listing's "Before" contract, mutated by its operator (CL bound 5), is token-identical
//    to the "After" listing.
TEST(Acceptance, Criterion1_GoldenListings)
{
    auto start = Clock::now();
    OperatorConfig cfg;
    cfg.cl_loop_bound = 5;
    const std::map<std::string, OperatorId> ops{{"uc", OperatorId::UC}, {"us", OperatorId::US}, {"tx", OperatorId::TX},
                                                {"ur", OperatorId::UR}, {"cl", OperatorId::CL}, {"dtu", OperatorId::DTU}};
    for (const auto& [name, op] : ops) {
        auto file = std::make_shared<const SourceFile>(SourceFile::load(fixtures() / "listings/before" / (name + ".sol")));
        ParseOutcome parsed = parse(file);
        ASSERT_TRUE(parsed.ok()) << name;
        auto sites = match(op, *parsed.tree, cfg);
        ASSERT_EQ(sites.size(), 1u) << name;
        std::string mutant = apply(*file, transform(*parsed.tree, sites[0], cfg));
        std::string golden = read_file(fixtures() / "listings/after" / (name + ".sol"));
        EXPECT_EQ(tokens(mutant), tokens(golden)) << name << " mutant:\n" << mutant;
    }
    EXPECT_LT(seconds_since(start), 1.0);
}

// 2. Campaign site counts equal the hand-enumerated table, per file and operator.
TEST(Acceptance, Criterion2_FixtureCorpusOracle)
{
    auto start = Clock::now();
    TempDir out("accept-oracle");
    CampaignResult r = run_campaign(fixtures() / "corpus", {}, out.path());

    std::map<std::pair<std::string, std::string>, int> got;
    for (const Mutant& m : r.mutants) {
        std::string rel = fs::path(m.source_path).lexically_relative(fs::path(fixtures() / "corpus").lexically_normal()).generic_string();
        ++got[{rel, std::string(to_string(m.op))}];
    }
    std::set<std::string> invalid;
    for (const auto& [file, diag] : r.invalid_files)
        invalid.insert(fs::path(file).lexically_relative(fs::path(fixtures() / "corpus").lexically_normal()).generic_string());

    std::istringstream table(read_file(fixtures() / "corpus_sites.csv"));
    std::string line;
    std::getline(table, line);
    ASSERT_EQ(line, "file,status,UC,US,TX,UR,CL,DTU");
    std::size_t rows = 0;
    std::map<std::string, int> totals;
    while (std::getline(table, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        ASSERT_EQ(cells.size(), 8u) << line;
        EXPECT_EQ(invalid.contains(cells[0]), cells[1] == "invalid") << cells[0];
        const char* names[] = {"UC", "US", "TX", "UR", "CL", "DTU"};
        for (int k = 0; k < 6; ++k) {
            int want = std::stoi(cells[2 + static_cast<std::size_t>(k)]);
            totals[names[k]] += want;
            EXPECT_EQ((got[{cells[0], names[k]}]), want) << cells[0] << " " << names[k];
        }
        ++rows;
    }
    EXPECT_EQ(rows, r.stats.corpus_size);
    for (const OperatorStats& row : r.stats.rows)
        EXPECT_EQ(static_cast<int>(row.mutants), totals[std::string(to_string(row.op))]) << to_string(row.op);
    EXPECT_LT(seconds_since(start), 5.0);
}

// 3. Every mutant of the fixture corpus re-parses; the two known failure modes have fixtures.
TEST(Acceptance, Criterion3_ParseValidity)
{
    TempDir out("accept-parse");
    CampaignResult r = run_campaign(fixtures() / "corpus", {}, out.path());
    ASSERT_FALSE(r.mutants.empty());
    EXPECT_TRUE(r.quarantined.empty());
    std::size_t semicolon = 0, collision = 0;
    for (const Mutant& m : r.mutants) {
        std::string text = read_file(out.path() / m.output_path);
        ParseOutcome p = parse_text(text);
        EXPECT_TRUE(p.ok()) << m.id << ": " << (p.ok() ? "" : p.diagnostics.front().message);
        if (m.source_path.find("09_string_semicolon") != std::string::npos) {
            ++semicolon;
            // string literals with semicolons survive unless the rewrite removed them on purpose
            for (const auto& t : detail::tokenize(read_file(m.source_path))) {
                if (t.kind != detail::TokenKind::String) continue;
                std::string lit(t.text);
                if (m.original_snippet.find(lit) != std::string::npos && m.mutated_snippet.find(lit) == std::string::npos)
                    continue;
                EXPECT_NE(text.find(lit), std::string::npos) << m.id << " lost " << lit;
            }
        }
        if (m.source_path.find("08_cl_collision") != std::string::npos) {
            ++collision;
            EXPECT_EQ(text.find("for (uint256 i = "), std::string::npos) << m.id;
        }
    }
    EXPECT_EQ(semicolon, 4u);
    EXPECT_EQ(collision, 2u);
    ValidationReport v = validate_mutants(out.path());
    EXPECT_EQ(v.reparse_failures, 0u);
    EXPECT_EQ(v.structural_failures(), 0u);
}

// 4. mutate with 1 and 8 workers produces byte-identical outputs.
TEST(Acceptance, Criterion4_Determinism)
{
    TempDir a("accept-det1");
    TempDir b("accept-det8");
    std::string corpus = (fixtures() / "corpus").string();
    ASSERT_EQ(run_cli_args({"mutate", "--corpus", corpus, "--out", a.path().string(), "--workers", "1"}), 0);
    ASSERT_EQ(run_cli_args({"mutate", "--corpus", corpus, "--out", b.path().string(), "--workers", "8"}), 0);
    auto first = tree_contents(a.path());
    auto second = tree_contents(b.path());
    EXPECT_TRUE(first.contains("mutations.jsonl"));
    EXPECT_TRUE(first.contains("stats.csv"));
    EXPECT_GT(first.size(), 70u);
    EXPECT_EQ(first, second);
}

// 5. Synthetic report pairs with the published per-operator counts reproduce the printed
//    recall/FNR values.
TEST(Acceptance, Criterion5_ScoreArithmetic)
{
    auto start = Clock::now();
    struct Row {
        OperatorId op;
        std::size_t tp, fn;
        const char* line;
    };
    const Row rows[] = {
        {OperatorId::UC, 4876, 0, "UC,4876,0,1.000,0.000"},
        {OperatorId::US, 3570, 0, "US,3570,0,1.000,0.000"},
        {OperatorId::CL, 45261, 10563, "CL,45261,10563,0.810,0.189"},
        {OperatorId::UR, 124858, 81184, "UR,124858,81184,0.605,0.394"},
        {OperatorId::TX, 21765, 42937, "TX,21765,42937,0.336,0.663"},
        {OperatorId::DTU, 15, 134, "DTU,15,134,0.100,0.899"},
    };
    DetectorMap map;
    const InjectedLines injected{{5}, {5}};
    const std::vector<Finding> original{{"solc-version", "c.sol", {1}}};
    std::vector<DetectionOutcome> outcomes;
    for (const Row& row : rows) {
        const std::vector<Finding> detected{{"solc-version", "m.sol", {1}}, {map.expected(row.op), "m.sol", {5}}};
        Mutant m;
        m.op = row.op;
        for (std::size_t k = 0; k < row.tp + row.fn; ++k) {
            m.id = std::to_string(k);
            outcomes.push_back(classify(m, injected, original, k < row.tp ? detected : original, map));
        }
    }
    std::string csv = format_scores_csv(score(outcomes));
    for (const Row& row : rows) EXPECT_NE(csv.find(std::string(row.line) + "\n"), std::string::npos) << row.line;
    EXPECT_NE(csv.find("TOTAL,200345,134818,0.597,0.402\n"), std::string::npos) << csv;
    std::cout << "    elapsed " << seconds_since(start) << " s for " << outcomes.size() << " classifications\n";
}

// 6. A 50-mutant synthetic campaign with hand-labelled verdicts and side effects.
TEST(Acceptance, Criterion6_ClassifierOracle)
{
    using L = std::set<int>;
    using Fs = std::vector<std::pair<std::string, L>>;
    using Names = std::vector<std::string>;
    struct Case {
        OperatorId op;
        L mutant_lines, original_lines;
        Fs before, after;
        bool report_missing;
        Verdict verdict;
        Names added, removed;
    };
    const auto UC = OperatorId::UC, US = OperatorId::US, TX = OperatorId::TX, UR = OperatorId::UR,
               CL = OperatorId::CL, DTU = OperatorId::DTU;
    const auto TP = Verdict::TP, FN = Verdict::FN, AF = Verdict::AnalyzerFailed;
    const L dtu_lines{3, 4, 5, 6, 12};
    const std::vector<Case> cases{
        /* 1*/ {UC, {10}, {10}, {}, {{"unchecked-lowlevel", {10}}}, false, TP, {}, {}},
        /* 2*/ {UC, {10}, {10}, {}, {}, false, FN, {}, {}},
        /* 3*/ {UC, {10}, {10}, {{"low-level-calls", {10}}}, {{"low-level-calls", {10}}, {"unchecked-lowlevel", {10}}}, false, TP, {}, {}},
        /* 4*/ {UC, {12}, {12, 13, 14}, {}, {{"unchecked-lowlevel", {11}}}, false, TP, {}, {}},
        /* 5*/ {UC, {12}, {12, 13, 14}, {}, {{"unchecked-lowlevel", {14}}}, false, FN, {}, {}},
        /* 6*/ {UC, {5}, {5}, {{"unchecked-lowlevel", {5}}}, {{"unchecked-lowlevel", {5}}}, false, FN, {}, {}},
        /* 7*/ {UC, {5}, {5}, {{"unchecked-lowlevel", {5}}}, {{"unchecked-lowlevel", {5}}, {"unchecked-lowlevel", {5, 6}}}, false, TP, {}, {}},
        /* 8*/ {UC, {20}, {20, 21, 22}, {{"deprecated-standards", {21}}}, {{"unchecked-lowlevel", {20}}}, false, TP, {}, {"deprecated-standards"}},
        /* 9*/ {US, {7}, {7}, {}, {{"unchecked-send", {7}}}, false, TP, {}, {}},
        /*10*/ {US, {7}, {7}, {}, {{"unchecked-send", {30}}}, false, FN, {}, {}},
        /*11*/ {US, {7}, {7, 8, 9}, {}, {{"unchecked-send", {8}}}, false, TP, {}, {}},
        /*12*/ {US, {7}, {7}, {{"reentrancy-eth", {15}}}, {{"reentrancy-eth", {15}}, {"unchecked-send", {7}}, {"reentrancy-eth", {16}}}, false, TP, {"reentrancy-eth"}, {}},
        /*13*/ {US, {7}, {7}, {}, {}, false, FN, {}, {}},
        /*14*/ {US, {7}, {7}, {}, {}, true, AF, {}, {}},
        /*15*/ {TX, {4}, {4}, {}, {{"tx-origin", {4}}}, false, TP, {}, {}},
        /*16*/ {TX, {4}, {4}, {}, {}, false, FN, {}, {}},
        /*17*/ {TX, {4}, {4}, {{"tx-origin", {30}}}, {{"tx-origin", {30}}}, false, FN, {}, {}},
        /*18*/ {TX, {4}, {4}, {{"tx-origin", {30}}}, {{"tx-origin", {30}}, {"tx-origin", {4}}}, false, TP, {}, {}},
        /*19*/ {TX, {4}, {4}, {{"tx-origin", {5}}}, {{"tx-origin", {5}}}, false, FN, {}, {}},
        /*20*/ {TX, {4}, {4}, {}, {{"tx-origin", {6}}}, false, FN, {}, {}},
        /*21*/ {TX, {4}, {4}, {{"solc-version", {1}}}, {{"solc-version", {1}}, {"tx-origin", {3}}}, false, TP, {}, {}},
        /*22*/ {TX, {4}, {4}, {{"solc-version", {1}}}, {}, true, AF, {}, {}},
        /*23*/ {UR, {15}, {15}, {}, {{"unused-return", {15}}}, false, TP, {}, {}},
        /*24*/ {UR, {15, 16}, {15}, {}, {{"unused-return", {16}}}, false, TP, {}, {}},
        /*25*/ {UR, {15, 16}, {15}, {}, {}, false, FN, {}, {}},
        /*26*/ {UR, {15}, {15}, {{"divide-before-multiply", {15}}}, {{"unused-return", {15}}}, false, TP, {}, {"divide-before-multiply"}},
        /*27*/ {UR, {15}, {15}, {{"unused-return", {40}}}, {{"unused-return", {40}}}, false, FN, {}, {}},
        /*28*/ {UR, {15}, {15}, {}, {{"unused-return", {15}}, {"missing-zero-check", {20}}}, false, TP, {"missing-zero-check"}, {}},
        /*29*/ {UR, {15}, {15}, {{"naming-convention", {3}}, {"naming-convention", {9}}}, {{"naming-convention", {3}}}, false, FN, {}, {"naming-convention"}},
        /*30*/ {UR, {15}, {15}, {}, {{"unused-return", {17}}}, false, FN, {}, {}},
        /*31*/ {CL, {10, 12}, {}, {}, {{"calls-loop", {11}}}, false, TP, {}, {}},
        /*32*/ {CL, {10, 12}, {}, {}, {}, false, FN, {}, {}},
        /*33*/ {CL, {10, 12}, {}, {{"calls-loop", {11}}}, {{"calls-loop", {12}}}, false, FN, {}, {}},
        /*34*/ {CL, {10, 12}, {}, {}, {{"calls-loop", {11}}, {"costly-loop", {11}}}, false, TP, {"costly-loop"}, {}},
        /*35*/ {CL, {10, 12}, {}, {}, {{"calls-loop", {25}}}, false, FN, {}, {}},
        /*36*/ {CL, {30, 34}, {}, {{"reentrancy-events", {31}}}, {{"reentrancy-events", {32}}, {"calls-loop", {32}}}, false, FN, {}, {}},
        /*37*/ {CL, {30, 32}, {}, {}, {{"calls-loop", {31}}}, false, TP, {}, {}},
        /*38*/ {CL, {30, 32}, {}, {}, {}, true, AF, {}, {}},
        /*39*/ {CL, {8, 10}, {}, {{"calls-loop", {9}}}, {{"calls-loop", {9}}, {"calls-loop", {9}}}, false, TP, {}, {}},
        /*40*/ {DTU, dtu_lines, {12}, {}, {{"controlled-delegatecall", {12}}}, false, TP, {}, {}},
        /*41*/ {DTU, dtu_lines, {12}, {}, {}, false, FN, {}, {}},
        /*42*/ {DTU, dtu_lines, {12}, {}, {{"controlled-delegatecall", {12}}, {"missing-zero-check", {4}}}, false, TP, {"missing-zero-check"}, {}},
        /*43*/ {DTU, dtu_lines, {12}, {{"low-level-calls", {12}}}, {{"low-level-calls", {12}}, {"naming-convention", {4}}}, false, FN, {"naming-convention"}, {}},
        /*44*/ {DTU, dtu_lines, {12}, {}, {}, true, AF, {}, {}},
        /*45*/ {DTU, dtu_lines, {12}, {{"controlled-delegatecall", {9}}}, {{"controlled-delegatecall", {13}}}, false, TP, {}, {}},
        /*46*/ {UC, {18}, {18}, {}, {{"unchecked-lowlevel", {17}}, {"unchecked-lowlevel", {40}}}, false, TP, {}, {}},
        /*47*/ {US, {22}, {22, 23, 24}, {{"unchecked-send", {50}}}, {}, false, FN, {}, {}},
        /*48*/ {TX, {9}, {9}, {{"timestamp", {9}}, {"timestamp", {9}}}, {{"tx-origin", {9}}}, false, TP, {}, {"timestamp", "timestamp"}},
        /*49*/ {UR, {5, 6}, {5}, {}, {{"unused-return", {7}}}, false, TP, {}, {}},
        /*50*/ {CL, {14, 16}, {}, {}, {{"calls-loop", {13}}}, false, TP, {}, {}},
    };
    ASSERT_EQ(cases.size(), 50u);

    auto findings = [](const Fs& fs) {
        std::vector<Finding> out;
        for (const auto& [d, l] : fs) out.push_back({d, "x.sol", l});
        return out;
    };
    DetectorMap map;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const Case& c = cases[i];
        Mutant m;
        m.id = "case-" + std::to_string(i + 1);
        m.op = c.op;
        DetectionOutcome o = c.report_missing
                                 ? analyzer_failed(m)
                                 : classify(m, {c.mutant_lines, c.original_lines}, findings(c.before), findings(c.after), map);
        bool same = o.verdict == c.verdict && o.side_effects_added == c.added && o.side_effects_removed == c.removed;
        EXPECT_TRUE(same) << m.id << ": got " << to_string(o.verdict);
        if (same) ++agree;
    }
    std::cout << "    agreement " << agree << "/" << cases.size() << "\n";
}

// 7. Corpus-scale figures need the full dataset and an analyzer run; what is checked here is
//    that the output schema carries them and that the published totals are self-consistent.
TEST(Acceptance, Criterion7_NonReproducibilityDocumented)
{
    // Published per-operator rows: mutated contracts, mutants, printed rate (percent).
    struct Published {
        OperatorId op;
        std::size_t mutated, mutants;
        double printed_rate;
    };
    const Published table2[] = {{OperatorId::UR, 33910, 213912, 71.50}, {OperatorId::TX, 32250, 65825, 68.00},
                                {OperatorId::CL, 26604, 61687, 56.00},  {OperatorId::UC, 4094, 4992, 8.60},
                                {OperatorId::US, 2248, 3928, 4.70},     {OperatorId::DTU, 113, 149, 0.23}};
    CampaignStats s;
    s.corpus_size = 47398;
    s.skipped_invalid = 71;
    s.parsed_contracts = s.corpus_size - s.skipped_invalid;
    s.mutated_contracts = 41337;
    s.no_pattern = 5990;
    double printed_sum = 0;
    for (const Published& p : table2) {
        s.rows.push_back({p.op, p.mutated, p.mutants, p.printed_rate / 100.0});
        s.total_mutants += p.mutants;
        printed_sum += p.printed_rate / 100.0;
    }
    s.average_injection_rate = printed_sum / 6.0;

    EXPECT_EQ(s.total_mutants, 350493u);
    // 41,337 mutated + 5,990 without a pattern + 71 invalid = 47,398 contracts.
    EXPECT_EQ(s.mutated_contracts + s.no_pattern + s.skipped_invalid, s.corpus_size);
    std::string table = format_stats_table(s);
    auto row_of = [&](const std::string& head) {
        std::size_t at = table.find("\n" + head + " ");
        return at == std::string::npos ? std::string() : table.substr(at + 1, table.find('\n', at + 1) - at - 1);
    };
    EXPECT_NE(row_of("UR").find("33910"), std::string::npos) << table;
    EXPECT_NE(row_of("UR").find("71.50%"), std::string::npos) << table;
    EXPECT_NE(row_of("DTU").find("0.23%"), std::string::npos) << table;
    EXPECT_NE(row_of("-").find("350493"), std::string::npos) << table;
    EXPECT_NE(row_of("-").find("34.83%"), std::string::npos) << table;
    std::string csv = format_stats_csv(s);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "operator,mutated_contracts,mutants,injection_rate");

    std::string readme = read_file(fs::path(VULNSEED_FIXTURES) / "../../README.md");
    EXPECT_NE(readme.find("350,493"), std::string::npos) << "README must document the non-reproducible figures";
    EXPECT_NE(readme.find("47,398"), std::string::npos);
    std::cout << "    corpus-scale counts are NOT reproduced here (dataset and analyzer run required);\n"
                 "    the table shapes and arithmetic are checked above\n";
}

// 8. mutate -> validate -> diff -> score over the fixture corpus with a stub analyzer.
TEST(Acceptance, Criterion8_EndToEndSmoke)
{
    auto start = Clock::now();
    TempDir out("accept-e2e");
    std::string bin = VULNSEED_CLI;
    std::string dir = " --out '" + out.path().string() + "'";
    std::string stub = "sh '" + (fixtures() / "stub_analyzer.sh").string() + "' {file} {report}";
    std::string quiet = " > '" + (out / "log.txt").string() + "' 2>&1";
    auto run = [&](const std::string& args) { return run_shell(bin + " " + args + dir + quiet); };

    ASSERT_EQ(run("mutate --corpus '" + (fixtures() / "corpus").string() + "' --workers 4"), 0);
    ASSERT_EQ(run("validate --workers 4"), 0);
    ASSERT_EQ(run("diff --workers 4 --run-cmd \"" + stub + "\""), 0);
    ASSERT_EQ(run("score"), 0);

    std::string scores = read_file(out / "scores.csv");
    EXPECT_EQ(scores.substr(0, scores.find('\n')), "operator,tp,fn,recall,fnr");
    EXPECT_TRUE(fs::exists(out / "side_effects.csv"));
    EXPECT_TRUE(fs::exists(out / "validation.json"));
    std::vector<std::string> outcome_lines;
    std::istringstream in(read_file(out / "outcomes.jsonl"));
    for (std::string l; std::getline(in, l);) outcome_lines.push_back(l);
    EXPECT_EQ(outcome_lines.size(), read_mutation_log(out.path()).size());
    double elapsed = seconds_since(start);
    std::cout << "    pipeline finished in " << elapsed << " s\n";
    EXPECT_LT(elapsed, 30.0);
}

namespace {

/// Prints one PASS/FAIL line per criterion after the gtest output.
class CriterionReporter : public testing::EmptyTestEventListener {
public:
    void OnTestEnd(const testing::TestInfo& info) override
    {
        std::string name = info.name();
        results_.emplace_back(name, info.result()->Passed());
    }
    void OnTestProgramEnd(const testing::UnitTest&) override
    {
        std::cout << "\nAcceptance criteria\n";
        for (const auto& [name, passed] : results_) {
            std::string label = name;
            std::replace(label.begin(), label.end(), '_', ' ');
            std::cout << (passed ? "  PASS  " : "  FAIL  ") << label << "\n";
        }
    }

private:
    std::vector<std::pair<std::string, bool>> results_;
};

}  // namespace

int main(int argc, char** argv)
{
    testing::InitGoogleTest(&argc, argv);
    testing::UnitTest::GetInstance()->listeners().Append(new CriterionReporter);
    return RUN_ALL_TESTS();
}
