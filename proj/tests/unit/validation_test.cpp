#include "vulnseed/campaign.hpp"

#include "test_util.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

using namespace vulnseed;
using vulnseed::test::fixtures;
using vulnseed::test::read_file;
using vulnseed::test::TempDir;
using vulnseed::test::write_file;

namespace {

void rewrite_log(const std::filesystem::path& out, const std::function<void(std::vector<Mutant>&)>& edit)
{
    auto log = read_mutation_log(out);
    edit(log);
    std::string text;
    for (const Mutant& m : log) text += to_json_line(m) + "\n";
    write_file(out / mutation_log_name, text);
}

}  // namespace

TEST(Validation, FixtureCampaignHasNoFailures)
{
    TempDir out("validate");
    run_campaign(fixtures() / "corpus", {}, out.path(), 2);
    ValidationReport r = validate_mutants(out.path(), std::nullopt, 2);
    EXPECT_EQ(r.results.size(), 75u);
    EXPECT_EQ(r.reparse_failures, 0u);
    EXPECT_EQ(r.log_failures, 0u);
    EXPECT_EQ(r.pattern_failures, 0u);
    EXPECT_EQ(r.failure_rate(), 0.0);
    for (const auto& v : r.results) EXPECT_TRUE(v.notes.empty()) << v.id << ": " << v.notes.front();

    auto json = nlohmann::json::parse(read_file(out / validation_file_name));
    EXPECT_EQ(json["total"], 75);
    EXPECT_EQ(json["failed_mutants"], 0);
    EXPECT_EQ(json["mutants"].size(), 75u);
}

TEST(Validation, WrongLineIsFlagged)
{
    TempDir out("wrongline");
    run_campaign(fixtures() / "listings/before", {}, out.path());
    rewrite_log(out.path(), [](std::vector<Mutant>& log) { log[0].line += 1; });
    ValidationReport r = validate_mutants(out.path());
    EXPECT_FALSE(r.results[0].log_consistent);
    EXPECT_EQ(r.log_failures, 1u);
    EXPECT_EQ(r.failed_mutants, 1u);
}

TEST(Validation, SnippetElsewhereIsFlagged)
{
    // TX listing: point the log at a msg.sender that the mutant did not touch.
    TempDir corpus("elsewhere");
    write_file(corpus / "t.sol",
               "contract T {\n    address o;\n    function f() public {\n        require(msg.sender == o);\n"
               "        require(msg.sender == o);\n    }\n}\n");
    TempDir out("elsewhere-out");
    run_campaign(corpus.path(), {}, out.path());
    rewrite_log(out.path(), [](std::vector<Mutant>& log) {
        ASSERT_EQ(log.size(), 2u);
        std::swap(log[0].line, log[1].line);
    });
    ValidationReport r = validate_mutants(out.path());
    EXPECT_EQ(r.log_failures, 2u);
}

TEST(Validation, BrokenMutantFailsReparse)
{
    TempDir out("broken");
    run_campaign(fixtures() / "listings/before", {}, out.path());
    auto log = read_mutation_log(out.path());
    write_file(out.path() / log[0].output_path, read_file(out.path() / log[0].output_path) + "\ncontract {");
    ValidationReport r = validate_mutants(out.path());
    EXPECT_FALSE(r.results[0].reparsed);
    EXPECT_EQ(r.reparse_failures, 1u);
}

TEST(Validation, WrongOperatorFailsPatternCheck)
{
    TempDir out("pattern");
    run_campaign(fixtures() / "listings/before", {}, out.path());
    rewrite_log(out.path(), [](std::vector<Mutant>& log) {
        for (Mutant& m : log) {
            if (m.op == OperatorId::TX) m.op = OperatorId::UR;
        }
    });
    ValidationReport r = validate_mutants(out.path());
    EXPECT_EQ(r.pattern_failures, 1u);
}

TEST(Validation, CompileCommand)
{
    TempDir out("compile");
    run_campaign(fixtures() / "listings/before", {}, out.path());
    ValidationReport ok = validate_mutants(out.path(), "test -f");
    for (const auto& v : ok.results) EXPECT_EQ(v.compile_exit, 0);
    EXPECT_EQ(ok.failed_mutants, 0u);

    ValidationReport bad = validate_mutants(out.path(), "grep -q tx.origin {file}");
    EXPECT_EQ(bad.compile_failures, bad.results.size() - 1);
    EXPECT_EQ(bad.structural_failures(), 0u);
}

TEST(Validation, MissingLogIsFatal)
{
    TempDir out("nolog");
    EXPECT_THROW(validate_mutants(out.path()), CampaignError);
}

TEST(ExpandCommand, QuotesValues)
{
    EXPECT_EQ(expand_command("run {file} > {report}", {{"file", "a b.sol"}, {"report", "it's.json"}}),
              "run 'a b.sol' > 'it'\\''s.json'");
    EXPECT_EQ(expand_command("x {file} {file}", {{"file", "{file}"}}), "x '{file}' '{file}'");
}
