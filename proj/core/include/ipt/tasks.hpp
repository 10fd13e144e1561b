#pragma once

// Inductive tasks (background, positive and negative examples), the train
// domain schema, a seeded generator over 20 complexity levels, and the task
// file formats.

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ipt/logic.hpp"

namespace ipt::tasks {

/// Object arguments name entities and are renamed by perturbations;
/// attribute arguments carry descriptive values and stay fixed.
enum class Sort { object, attribute };

std::string_view sort_name(Sort s) noexcept;

struct PredicateSpec {
    std::string name;
    std::vector<Sort> sorts;

    std::size_t arity() const noexcept { return sorts.size(); }
    bool operator==(const PredicateSpec&) const = default;
};

class TaskError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Schema {
    std::vector<PredicateSpec> predicates;
    std::string target_predicate = "eastbound";
    std::string negative_predicate = "westbound";
    std::map<std::string, std::vector<std::string>> attribute_vocab;

    const PredicateSpec* find(std::string_view name) const noexcept;
    /// First predicate relating two objects (has_car in the train schema).
    const PredicateSpec* link_predicate() const noexcept;

    /// Throws TaskError on a malformed schema.
    void validate() const;

    /// has_car plus the four car attribute predicates.
    static Schema trains();

    bool operator==(const Schema&) const = default;
};

struct Task {
    std::string id;
    int level = 1;
    Schema schema;
    logic::Program background;
    std::vector<logic::Atom> positives;
    std::vector<logic::Atom> negatives;

    /// Constants in object-sorted positions of the background and examples.
    std::set<std::string> object_constants() const;
    /// Every constant in the task, object or attribute.
    std::set<std::string> all_constants() const;

    /// Throws TaskError when a task invariant does not hold.
    void validate() const;

    bool operator==(const Task&) const = default;
};

// --- complexity -----------------------------------------------------------

enum class Tier { basic, easy, medium, hard };

Tier tier_of(int level);
std::string_view tier_name(Tier t) noexcept;

struct GenProfile {
    std::size_t n_trains = 0;
    std::size_t min_cars = 1;
    std::size_t max_cars = 1;
    std::vector<std::string> active_attribute_predicates;
    std::size_t rule_body_length = 1;

    bool operator==(const GenProfile&) const = default;
};

constexpr int kMinLevel = 1;
constexpr int kMaxLevel = 20;

/// Throws std::out_of_range outside 1..20.
GenProfile complexity_profile(int level);

/// Literal count of generated ground-truth rules. A rule over the train
/// schema needs has_car plus at least one attribute literal to separate
/// trains, so this is max(2, rule_body_length).
std::size_t ground_truth_length(const GenProfile& p) noexcept;

// --- generation -----------------------------------------------------------

class GenerationExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GeneratedTask {
    Task task;
    logic::Clause ground_truth;
};

constexpr int kMaxGenerationAttempts = 1000;

/// Deterministic in (level, seed, schema). The schema must contain the link
/// predicate has_car/2 and the profile's attribute predicates.
GeneratedTask generate_task(int level, std::uint64_t seed, const Schema& schema = Schema::trains());

std::string default_task_id(int level, std::uint64_t seed);

// --- file formats ---------------------------------------------------------

/// Sectioned text: "% key: value" header lines, then background facts, then
/// example facts, all in clause syntax.
std::string serialize_task(const Task& t);

/// Accepts the serialized form as well as bare fact lists; header lines are
/// optional (defaults: train schema, level 1, id "task"). Throws
/// logic::ParseError for syntax problems and TaskError for invariant
/// violations.
Task parse_task(std::string_view text);

nlohmann::json task_to_json(const Task& t);
Task task_from_json(const nlohmann::json& j);

/// Reads `.json` sidecars or text task files (any other extension).
Task load_task_file(const std::filesystem::path& path);

/// All tasks in a directory keyed by id. Text files (`*.task`) take
/// precedence over sidecars with the same id.
std::map<std::string, Task> load_task_dir(const std::filesystem::path& dir);

/// Writes `<id>.task` and `<id>.json` into `dir`.
void write_task_files(const Task& t, const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

} // namespace ipt::tasks
