// ipt: command-line front end for task generation, verification, the
// reference solvers, batch evaluation and the reward service.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "ipt/detect.hpp"
#include "ipt/harness.hpp"
#include "ipt/oracle.hpp"
#include "ipt/reward.hpp"
#include "ipt/service.hpp"
#include "ipt/tasks.hpp"

namespace fs = std::filesystem;
using namespace ipt;

namespace {

std::string slurp(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    return tasks::read_file(path);
}

void write_out(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    tasks::write_file(path, content);
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(list);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.empty() || item[0] == '-') throw CLI::ValidationError("--iso-seeds", "bad seed '" + item + "'");
        std::size_t used = 0;
        out.push_back(std::stoull(item, &used));
        if (used != item.size()) throw CLI::ValidationError("--iso-seeds", "bad seed '" + item + "'");
    }
    if (out.empty()) throw CLI::ValidationError("--iso-seeds", "need at least one seed");
    return out;
}

struct BudgetFlags {
    std::size_t max_atoms = logic::EvalBudget{}.max_derived_atoms;
    std::size_t max_iterations = logic::EvalBudget{}.max_iterations;

    void attach(CLI::App* app) {
        app->add_option("--max-atoms", max_atoms, "derived atom budget")->capture_default_str();
        app->add_option("--max-iterations", max_iterations, "fixpoint round budget")->capture_default_str();
    }
    logic::EvalBudget budget() const { return logic::EvalBudget::make(max_atoms, max_iterations); }
};

reward::RewardService* g_service = nullptr;

extern "C" void on_signal(int) {
    if (g_service) g_service->stop();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isomorphic perturbation testing for inductive logic tasks"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate tasks");
    int gen_level = 1;
    std::size_t gen_count = 1;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    bool gen_rules = false;
    gen->add_option("--level", gen_level, "complexity level")->required()->check(CLI::Range(tasks::kMinLevel, tasks::kMaxLevel));
    gen->add_option("--count", gen_count, "number of tasks")->capture_default_str();
    gen->add_option("--seed", gen_seed, "first seed; task k uses seed+k")->capture_default_str();
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_flag("--with-rules", gen_rules, "also write <id>.rule with the generating rule");

    // verify
    auto* ver = app.add_subcommand("verify", "classify a hypothesis on a task");
    std::string ver_task, ver_hyp, ver_seeds = "0";
    BudgetFlags ver_budget;
    ver->add_option("--task", ver_task, "task file")->required();
    ver->add_option("--hypothesis", ver_hyp, "hypothesis file, - for stdin")->required();
    ver->add_option("--iso-seeds", ver_seeds, "comma-separated perturbation seeds")->capture_default_str();
    ver_budget.attach(ver);

    // perturb
    auto* per = app.add_subcommand("perturb", "write an isomorphic copy of a task");
    std::string per_task, per_out, per_mapping;
    std::uint64_t per_seed = 0;
    per->add_option("--task", per_task, "task file")->required();
    per->add_option("--seed", per_seed, "perturbation seed")->capture_default_str();
    per->add_option("--out", per_out, "output task file (default stdout)");
    per->add_option("--mapping", per_mapping, "also write the renaming as JSON");

    // induce
    auto* ind = app.add_subcommand("induce", "find a shortest rule that solves a task");
    std::string ind_task;
    std::size_t ind_max_body = 4, ind_vars = 4;
    BudgetFlags ind_budget;
    ind->add_option("--task", ind_task, "task file")->required();
    ind->add_option("--max-body", ind_max_body, "maximum body literals")->capture_default_str()->check(CLI::PositiveNumber);
    ind->add_option("--max-vars", ind_vars, "maximum distinct variables")->capture_default_str()->check(CLI::Range(1, 8));
    ind_budget.attach(ind);

    // policy
    auto* pol = app.add_subcommand("policy", "emit an enumeration shortcut");
    std::string pol_kind, pol_task;
    pol->add_option("--kind", pol_kind, "blatant or obfuscated")->required()->check(CLI::IsMember({"blatant", "obfuscated"}));
    pol->add_option("--task", pol_task, "task file")->required();

    // evaluate
    auto* eva = app.add_subcommand("evaluate", "ingest model outputs and write reports");
    std::string eva_tasks, eva_results, eva_group = "tier", eva_out, eva_seeds = "0";
    unsigned eva_threads = 0;
    BudgetFlags eva_budget;
    eva->add_option("--tasks", eva_tasks, "task directory")->required();
    eva->add_option("--results", eva_results, "JSONL model outputs")->required();
    eva->add_option("--group", eva_group, "tier, level or effort")->capture_default_str()->check(CLI::IsMember({"tier", "level", "effort"}));
    eva->add_option("--out", eva_out, "output directory")->required();
    eva->add_option("--iso-seeds", eva_seeds, "comma-separated perturbation seeds")->capture_default_str();
    eva->add_option("--threads", eva_threads, "worker threads (0 = all cores)");
    eva_budget.attach(eva);

    // report
    auto* rep = app.add_subcommand("report", "aggregate evaluated records");
    std::string rep_records, rep_group = "tier", rep_format = "text", rep_out;
    std::vector<std::string> rep_notes;
    rep->add_option("--records", rep_records, "records.jsonl written by evaluate")->required();
    rep->add_option("--group", rep_group, "tier, level or effort")->capture_default_str()->check(CLI::IsMember({"tier", "level", "effort"}));
    rep->add_option("--format", rep_format, "text, csv or json")->capture_default_str()->check(CLI::IsMember({"text", "csv", "json"}));
    rep->add_option("--out", rep_out, "output file (default stdout)");
    rep->add_option("--footnote", rep_notes, "footnote line (repeatable)");

    // gap
    auto* gap = app.add_subcommand("gap", "hacking gap between two reward series");
    std::string gap_ext, gap_iso, gap_out;
    gap->add_option("--ext", gap_ext, "step,value CSV of extensional reward")->required();
    gap->add_option("--iso", gap_iso, "step,value CSV of isomorphic reward")->required();
    gap->add_option("--out", gap_out, "output CSV (default stdout)");

    // serve
    auto* srv = app.add_subcommand("serve", "run the reward service");
    std::string srv_config, srv_host = "127.0.0.1";
    int srv_port = 8080;
    srv->add_option("--config", srv_config, "JSON config file");
    srv->add_option("--host", srv_host, "bind address")->capture_default_str();
    srv->add_option("--port", srv_port, "port (0 = any)")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            fs::create_directories(gen_out);
            for (std::size_t k = 0; k < gen_count; ++k) {
                const auto g = tasks::generate_task(gen_level, gen_seed + k);
                tasks::write_task_files(g.task, gen_out);
                if (gen_rules) tasks::write_file(fs::path(gen_out) / (g.task.id + ".rule"), logic::print_clause(g.ground_truth) + "\n");
                std::cout << g.task.id << "\n";
            }
        } else if (*ver) {
            const auto task = tasks::load_task_file(ver_task);
            const auto seeds = parse_seeds(ver_seeds);
            const auto r = detect::classify(task, slurp(ver_hyp), seeds, ver_budget.budget());
            std::cout << detect::to_json(r).dump(2) << "\n";
        } else if (*per) {
            const auto task = tasks::load_task_file(per_task);
            const auto phi = detect::make_perturbation(task, per_seed);
            write_out(per_out, tasks::serialize_task(detect::apply_perturbation(task, phi)));
            if (!per_mapping.empty())
                tasks::write_file(per_mapping, nlohmann::json{{"seed", phi.seed}, {"mapping", phi.mapping}}.dump(2) + "\n");
        } else if (*ind) {
            const auto task = tasks::load_task_file(ind_task);
            auto space = oracle::SearchSpace::for_task(task, ind_max_body);
            space.variable_budget = ind_vars;
            try {
                std::cout << logic::print_clause(oracle::induce_min_rule(task, space, ind_budget.budget())) << "\n";
            } catch (const oracle::NotFound& e) {
                std::cerr << "induce: " << e.what() << "\n";
                return 1;
            }
        } else if (*pol) {
            const auto task = tasks::load_task_file(pol_task);
            std::cout << (pol_kind == "blatant" ? oracle::policy_blatant(task) : oracle::policy_obfuscated(task)) << "\n";
        } else if (*eva) {
            harness::IngestOptions opts;
            opts.seeds = parse_seeds(eva_seeds);
            opts.budget = eva_budget.budget();
            opts.threads = eva_threads;
            std::vector<harness::EvalRecord> records;
            try {
                records = harness::ingest_file(eva_results, eva_tasks, opts);
            } catch (const harness::IngestError& e) {
                std::cerr << "evaluate: " << eva_results << ": " << e.what() << "\n";
                return 2;
            }
            fs::create_directories(eva_out);
            std::string lines;
            for (const auto& r : records) lines += harness::to_json(r).dump() + "\n";
            tasks::write_file(fs::path(eva_out) / "records.jsonl", lines);
            const auto rows = harness::aggregate(records, harness::parse_grouping(eva_group));
            for (auto f : {harness::ReportFormat::text, harness::ReportFormat::csv, harness::ReportFormat::json})
                harness::emit_report(rows, f, fs::path(eva_out) / ("report" + std::string(harness::format_extension(f))));
            std::cout << harness::render_report(rows, harness::ReportFormat::text);
        } else if (*rep) {
            std::ifstream in(rep_records);
            if (!in) throw std::runtime_error("cannot open " + rep_records);
            const auto records = harness::read_records(in);
            const auto rows = harness::aggregate(records, harness::parse_grouping(rep_group));
            const auto format = harness::parse_format(rep_format);
            if (rep_out.empty())
                std::cout << harness::render_report(rows, format, rep_notes);
            else
                harness::emit_report(rows, format, rep_out, rep_notes);
        } else if (*gap) {
            const auto rows = harness::hacking_gap(harness::load_series(gap_ext), harness::load_series(gap_iso));
            write_out(gap_out, harness::render_gap(rows));
        } else if (*srv) {
            auto config = srv_config.empty() ? reward::RewardConfig{} : reward::RewardConfig::load(srv_config);
            config.apply_env();
            reward::RewardService service(config);
            const int port = service.bind(srv_host, srv_port);
            g_service = &service;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "ipt serve: listening on " << srv_host << ":" << port << " (mode "
                      << reward::mode_name(config.mode) << ")\n";
            service.listen();
            g_service = nullptr;
        }
    } catch (const harness::IngestError& e) {
        std::cerr << app.get_subcommands().front()->get_name() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << app.get_subcommands().front()->get_name() << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
