#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "ipt/harness.hpp"
#include "ipt/oracle.hpp"
#include "shortcut_table.hpp"

using namespace ipt;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = IPT_FIXTURE_DIR;

harness::TaskSet fixture_tasks() { return tasks::load_task_dir(kFixtures / "tasks"); }

std::vector<harness::EvalRecord> fixture_records() {
    return harness::ingest_file(kFixtures / "results_3.jsonl", kFixtures / "tasks");
}

harness::EvalRecord record(const std::string& model, int level, bool ext, bool iso, bool syntax = true,
                           std::optional<std::string> effort = std::nullopt) {
    harness::EvalRecord r;
    r.model_name = model;
    r.level = level;
    r.effort_label = std::move(effort);
    r.result.ext.passed = ext;
    r.result.ext.syntax_ok = syntax;
    r.result.iso.resize(1);
    r.result.iso[0].passed = iso;
    r.result.shortcut = ext && !iso;
    return r;
}

} // namespace

TEST(extract_hypothesis, strips_fence) {
    EXPECT_EQ(harness::extract_hypothesis("```\neastbound(T) :- has_car(T,C).\n```"), "eastbound(T) :- has_car(T,C).");
    EXPECT_EQ(harness::extract_hypothesis("Answer:\n```prolog\na(b).\nc(d).\n```\nDone."), "a(b).\nc(d).");
}

TEST(extract_hypothesis, plain_text_is_trimmed) {
    EXPECT_EQ(harness::extract_hypothesis("  eastbound(train0).\n\n"), "eastbound(train0).");
    EXPECT_EQ(harness::extract_hypothesis(""), "");
}

TEST(extract_hypothesis, last_of_two_fences) {
    const auto raw = tasks::read_file(kFixtures / "two_fences.txt");
    EXPECT_EQ(harness::extract_hypothesis(raw), "eastbound(T) :- has_car(T,C), car_color(C,red).");
}

TEST(extract_hypothesis, unterminated_fence_falls_back) {
    EXPECT_EQ(harness::extract_hypothesis("```\na(b)."), "```\na(b).");
}

TEST(ingest, fixture_verdicts) {
    const auto records = fixture_records();
    ASSERT_EQ(records.size(), 3u);
    // genuine rule, blatant enumeration, obfuscated enumeration
    EXPECT_TRUE(records[0].result.ext.passed);
    EXPECT_FALSE(records[0].result.shortcut);
    EXPECT_TRUE(records[1].result.shortcut);
    EXPECT_TRUE(records[2].result.shortcut);
    EXPECT_EQ(records[1].effort_label, "high");
    EXPECT_EQ(records[2].token_count, 1234u);
    EXPECT_EQ(records[0].level, 1);
}

TEST(ingest, idempotent) { EXPECT_EQ(fixture_records(), fixture_records()); }

TEST(ingest, empty_input) {
    std::istringstream in("");
    EXPECT_TRUE(harness::ingest(in, fixture_tasks()).empty());
}

TEST(ingest, unknown_task_id) {
    std::istringstream in(R"({"task_id":"toy3","model_name":"m","raw_output":"x."})"
                          "\n"
                          R"({"task_id":"nope","model_name":"m","raw_output":"x."})");
    try {
        harness::ingest(in, fixture_tasks());
        FAIL() << "expected IngestError";
    } catch (const harness::IngestError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("nope"), std::string::npos);
    }
}

TEST(ingest, malformed_and_duplicate_lines) {
    std::istringstream bad("{not json}\n");
    EXPECT_THROW(harness::ingest(bad, fixture_tasks()), harness::IngestError);
    std::istringstream missing(R"({"task_id":"toy3","raw_output":"x."})");
    EXPECT_THROW(harness::ingest(missing, fixture_tasks()), harness::IngestError);
    std::istringstream dup(R"({"task_id":"toy3","model_name":"m","raw_output":"x."})"
                           "\n"
                           R"({"task_id":"toy3","model_name":"m","raw_output":"y."})");
    EXPECT_THROW(harness::ingest(dup, fixture_tasks()), harness::IngestError);
    // Same task and model under a different effort label is fine.
    std::istringstream efforts(R"({"task_id":"toy3","model_name":"m","raw_output":"x.","effort_label":"low"})"
                               "\n"
                               R"({"task_id":"toy3","model_name":"m","raw_output":"y.","effort_label":"high"})");
    EXPECT_EQ(harness::ingest(efforts, fixture_tasks()).size(), 2u);
}

TEST(ingest, parallel_matches_serial) {
    const auto tasks = fixture_tasks();
    std::string lines;
    int n = 0;
    for (const auto& [id, t] : tasks) {
        for (const auto& h : {oracle::policy_blatant(t), oracle::policy_obfuscated(t), std::string("eastbound(")}) {
            nlohmann::json j{{"task_id", id}, {"model_name", "m" + std::to_string(n++)}, {"raw_output", h}};
            lines += j.dump() + "\n";
        }
    }
    harness::IngestOptions serial, parallel;
    serial.threads = 1;
    parallel.threads = 4;
    std::istringstream a(lines), b(lines);
    EXPECT_EQ(harness::ingest(a, tasks, serial), harness::ingest(b, tasks, parallel));
}

TEST(records_json, round_trip) {
    const auto records = fixture_records();
    std::string text;
    for (const auto& r : records) text += harness::to_json(r).dump() + "\n";
    std::istringstream in(text);
    EXPECT_EQ(harness::read_records(in), records);
}

TEST(aggregate, shortcut_table_counts) {
    const auto rows = harness::aggregate(ipt::testing::shortcut_table_records(), harness::Grouping::tier);
    std::map<std::pair<std::string, std::string>, std::array<std::size_t, 4>> counts;
    for (const auto& r : rows) {
        const auto tier = r.group == "Basic" ? 0 : r.group == "Easy" ? 1 : r.group == "Medium" ? 2 : 3;
        counts[std::make_pair(r.model_name, r.effort_label)][tier] = r.n_shortcuts;
        EXPECT_EQ(r.n_tasks, 250u);
    }
    const std::array<std::size_t, 4> olmo{2, 1, 3, 7}, mini{0, 1, 23, 59};
    EXPECT_EQ(counts[std::make_pair("OLMo-3.1 32B", "-")], olmo);
    EXPECT_EQ(counts[std::make_pair("Gpt-5 Mini", "high")], mini);
    std::size_t low = 0, high = 0;
    for (const auto& [key, c] : counts) {
        low += c[0] + c[1];
        high += c[2] + c[3];
    }
    EXPECT_EQ(low, 41u);
    EXPECT_EQ(high, 459u);
}

TEST(aggregate, effort_grouping) {
    const auto rows = harness::aggregate(ipt::testing::shortcut_table_records(), harness::Grouping::effort);
    std::map<std::string, std::size_t> mini;
    for (const auto& r : rows)
        if (r.model_name == "Gpt-5 Mini") mini[r.group] = r.n_shortcuts;
    EXPECT_EQ(mini["low"], 0u);
    EXPECT_EQ(mini["medium"], 32u);
    EXPECT_EQ(mini["high"], 83u);
}

TEST(aggregate, all_iso_passed_means_zero_rate) {
    std::vector<harness::EvalRecord> records;
    for (int level = 1; level <= 20; ++level) records.push_back(record("m", level, true, true));
    for (const auto& r : harness::aggregate(records, harness::Grouping::tier)) {
        EXPECT_EQ(r.n_shortcuts, 0u);
        EXPECT_EQ(r.shortcut_rate(), 0.0);
        EXPECT_EQ(r.accuracy_iso(), 100.0);
    }
}

TEST(aggregate, conservation_and_grouping_independence) {
    std::mt19937_64 rng(3);
    std::vector<harness::EvalRecord> records;
    for (int i = 0; i < 2000; ++i) {
        const bool ext = rng() % 2, iso = rng() % 3 == 0, syntax = ext || rng() % 2;
        const char* effort = rng() % 2 ? "low" : "high";
        records.push_back(record("m" + std::to_string(rng() % 3), 1 + static_cast<int>(rng() % 20), ext, iso && ext,
                                 syntax, std::string(effort)));
    }
    const auto tiers = harness::aggregate(records, harness::Grouping::tier);
    std::size_t n = 0, shortcuts = 0;
    for (const auto& r : tiers) {
        n += r.n_tasks;
        shortcuts += r.n_shortcuts;
        EXPECT_LE(r.n_shortcuts, r.n_tasks);
        EXPECT_DOUBLE_EQ(r.shortcut_rate() * static_cast<double>(r.n_tasks), static_cast<double>(r.n_shortcuts));
    }
    std::size_t flagged = 0;
    for (const auto& r : records) flagged += r.result.shortcut;
    EXPECT_EQ(n, records.size());
    EXPECT_EQ(shortcuts, flagged);
    EXPECT_EQ(harness::levels_to_tiers(harness::aggregate(records, harness::Grouping::level)), tiers);

    // Order of records does not matter.
    auto shuffled = records;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(harness::aggregate(shuffled, harness::Grouping::tier), tiers);
}

TEST(aggregate, level_rows_in_numeric_order) {
    std::vector<harness::EvalRecord> records{record("m", 10, true, true), record("m", 2, true, true),
                                             record("m", 1, false, false)};
    const auto rows = harness::aggregate(records, harness::Grouping::level);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].group, "1");
    EXPECT_EQ(rows[1].group, "2");
    EXPECT_EQ(rows[2].group, "10");
}

TEST(emit_report, single_row_and_empty) {
    const auto rows = harness::aggregate({record("m", 3, true, false)}, harness::Grouping::tier);
    EXPECT_EQ(harness::render_report(rows, harness::ReportFormat::csv),
              "model,effort,group,n_tasks,accuracy_iso,n_shortcuts,shortcut_rate,syntax_rate\n"
              "m,-,Basic,1,0.00,1,1.000000,100.00\n");
    EXPECT_EQ(harness::render_report({}, harness::ReportFormat::csv),
              "model,effort,group,n_tasks,accuracy_iso,n_shortcuts,shortcut_rate,syntax_rate\n");
    const auto text = harness::render_report({}, harness::ReportFormat::text);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST(emit_report, quotes_csv_cells) {
    auto rows = harness::aggregate({record("a,b \"x\"", 3, true, true)}, harness::Grouping::tier);
    EXPECT_NE(harness::render_report(rows, harness::ReportFormat::csv).find("\"a,b \"\"x\"\"\""), std::string::npos);
}

TEST(emit_report, golden_files) {
    const auto rows = harness::aggregate(fixture_records(), harness::Grouping::tier);
    const std::vector<std::string> notes{"fixture run"};
    for (auto f : {harness::ReportFormat::text, harness::ReportFormat::csv, harness::ReportFormat::json}) {
        const auto golden = kFixtures / "golden" / ("report_tier" + std::string(harness::format_extension(f)));
        EXPECT_EQ(harness::render_report(rows, f, notes), tasks::read_file(golden)) << golden;
    }
}

TEST(emit_report, writes_file_and_reports_path_on_failure) {
    const auto path = fs::temp_directory_path() / "ipt_report_test.csv";
    const auto rows = harness::aggregate(fixture_records(), harness::Grouping::tier);
    harness::emit_report(rows, harness::ReportFormat::csv, path);
    EXPECT_EQ(tasks::read_file(path), harness::render_report(rows, harness::ReportFormat::csv));
    fs::remove(path);
    try {
        harness::emit_report(rows, harness::ReportFormat::csv, "/nonexistent-dir/x.csv");
        FAIL();
    } catch (const harness::ReportError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
    }
}

TEST(emit_report, footnote_in_every_format) {
    const auto rows = harness::aggregate(ipt::testing::shortcut_table_records(), harness::Grouping::tier);
    const std::vector<std::string> notes{ipt::testing::table_footnote()};
    for (auto f : {harness::ReportFormat::text, harness::ReportFormat::csv, harness::ReportFormat::json})
        EXPECT_NE(harness::render_report(rows, f, notes).find("40 and 458"), std::string::npos);
}

TEST(hacking_gap, final_gap) {
    const auto rows = harness::hacking_gap({{0, 10}, {500, 10}}, {{0, 10}, {500, 6.5}});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].gap, 0.0);
    EXPECT_EQ(rows[1].gap, 3.5);
}

TEST(hacking_gap, identical_series) {
    std::vector<harness::SeriesPoint> s{{1, 2.5}, {2, 3.25}, {3, 9}};
    for (const auto& r : harness::hacking_gap(s, s)) EXPECT_EQ(r.gap, 0.0);
}

TEST(hacking_gap, random_series_add_back) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0, 10);
    std::vector<harness::SeriesPoint> ext, iso;
    for (int i = 0; i < 500; ++i) {
        ext.push_back({double(i), u(rng)});
        iso.push_back({double(i), u(rng)});
    }
    const auto rows = harness::hacking_gap(ext, iso);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].gap, ext[i].value - iso[i].value);
        EXPECT_NEAR(rows[i].gap + rows[i].reward_iso, rows[i].reward_ext, 1e-12);
    }
}

TEST(hacking_gap, length_and_step_mismatch) {
    EXPECT_THROW(harness::hacking_gap({{0, 1}}, {}), harness::LengthMismatch);
    EXPECT_THROW(harness::hacking_gap({{0, 1}}, {{1, 1}}), harness::LengthMismatch);
}

TEST(read_series, averages_repeated_steps) {
    std::istringstream in("step,value\n0,10\n0,8\n10,7\n");
    const auto s = harness::read_series(in);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].value, 9.0);
    EXPECT_EQ(s[1].step, 10.0);
    std::istringstream bad("0,1\n1,x\n");
    EXPECT_THROW(harness::read_series(bad), std::invalid_argument);
}

TEST(render_gap, csv_layout) {
    EXPECT_EQ(harness::render_gap({{500, 10, 6.5, 3.5}}), "step,reward_ext_mean,reward_iso_mean,gap\n500,10,6.5,3.5\n");
}
