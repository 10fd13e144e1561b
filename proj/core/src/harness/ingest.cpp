#include "ipt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

namespace ipt::harness {

IngestError::IngestError(const std::string& msg, std::size_t line)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

namespace {

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

EvalRecord parse_line(const std::string& text, std::size_t line, const TaskSet& tasks) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IngestError(std::string("malformed JSON: ") + e.what(), line);
    }
    if (!j.is_object()) throw IngestError("record is not an object", line);

    auto required = [&](const char* key) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string()) throw IngestError(std::string("missing string field '") + key + "'", line);
        return it->get<std::string>();
    };
    EvalRecord r;
    r.task_id = required("task_id");
    r.model_name = required("model_name");
    r.raw_output = required("raw_output");
    if (auto it = j.find("effort_label"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw IngestError("effort_label must be a string", line);
        r.effort_label = it->get<std::string>();
    }
    if (auto it = j.find("token_count"); it != j.end() && !it->is_null()) {
        if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0))
            throw IngestError("token_count must be a nonnegative integer", line);
        r.token_count = it->get<std::uint64_t>();
    }
    auto task = tasks.find(r.task_id);
    if (task == tasks.end()) throw IngestError("unknown task_id '" + r.task_id + "'", line);
    r.level = task->second.level;
    r.extracted_hypothesis = extract_hypothesis(r.raw_output);
    return r;
}

} // namespace

std::vector<EvalRecord> ingest(std::istream& in, const TaskSet& tasks, const IngestOptions& opts) {
    if (opts.seeds.empty()) throw std::invalid_argument("ingest needs at least one perturbation seed");

    std::vector<EvalRecord> records;
    std::set<std::tuple<std::string, std::string, std::optional<std::string>>> keys;
    std::string text;
    for (std::size_t line = 1; std::getline(in, text); ++line) {
        if (blank(text)) continue;
        EvalRecord r = parse_line(text, line, tasks);
        if (!keys.emplace(r.task_id, r.model_name, r.effort_label).second)
            throw IngestError("duplicate record for task '" + r.task_id + "', model '" + r.model_name + "', effort '" +
                                  r.effort_label.value_or("-") + "'",
                              line);
        records.push_back(std::move(r));
    }

    // Classification is pure per record; workers claim indices.
    unsigned n_threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, records.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < records.size();) {
            try {
                auto& r = records[i];
                r.result = detect::classify(tasks.at(r.task_id), r.extracted_hypothesis, opts.seeds, opts.budget);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < n_threads; ++k) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

std::vector<EvalRecord> ingest_file(const std::filesystem::path& results, const std::filesystem::path& task_dir,
                                    const IngestOptions& opts) {
    const TaskSet tasks = tasks::load_task_dir(task_dir);
    std::ifstream in(results);
    if (!in) throw IngestError("cannot open results file " + results.string(), 0);
    return ingest(in, tasks, opts);
}

nlohmann::json to_json(const EvalRecord& r) {
    nlohmann::json j{
        {"task_id", r.task_id},
        {"model_name", r.model_name},
        {"raw_output", r.raw_output},
        {"extracted_hypothesis", r.extracted_hypothesis},
        {"level", r.level},
        {"result", detect::to_json(r.result)},
    };
    j["effort_label"] = r.effort_label ? nlohmann::json(*r.effort_label) : nlohmann::json(nullptr);
    j["token_count"] = r.token_count ? nlohmann::json(*r.token_count) : nlohmann::json(nullptr);
    return j;
}

EvalRecord record_from_json(const nlohmann::json& j) {
    EvalRecord r;
    r.task_id = j.at("task_id").get<std::string>();
    r.model_name = j.at("model_name").get<std::string>();
    r.raw_output = j.value("raw_output", std::string());
    r.extracted_hypothesis = j.value("extracted_hypothesis", std::string());
    r.level = j.at("level").get<int>();
    r.result = detect::result_from_json(j.at("result"));
    if (auto it = j.find("effort_label"); it != j.end() && !it->is_null()) r.effort_label = it->get<std::string>();
    if (auto it = j.find("token_count"); it != j.end() && !it->is_null()) r.token_count = it->get<std::uint64_t>();
    return r;
}

std::vector<EvalRecord> read_records(std::istream& in) {
    std::vector<EvalRecord> out;
    std::string text;
    for (std::size_t line = 1; std::getline(in, text); ++line) {
        if (blank(text)) continue;
        try {
            out.push_back(record_from_json(nlohmann::json::parse(text)));
        } catch (const nlohmann::json::exception& e) {
            throw IngestError(std::string("malformed record: ") + e.what(), line);
        } catch (const logic::ParseError& e) {
            throw IngestError(std::string("malformed atom in record: ") + e.what(), line);
        }
    }
    return out;
}

} // namespace ipt::harness
