#pragma once

// Verification outcomes as scalar rewards, plus the request/response logic
// of the reward service (transport-free, so it can be driven directly).

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ipt/detect.hpp"
#include "ipt/tasks.hpp"

namespace ipt::reward {

enum class Mode { extensional, isomorphic, both };
enum class SeedPolicy { fixed, derived };

Mode parse_mode(std::string_view s);
std::string_view mode_name(Mode m) noexcept;
SeedPolicy parse_seed_policy(std::string_view s);
std::string_view seed_policy_name(SeedPolicy p) noexcept;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RewardConfig {
    double reward_scale = 10.0;
    double syntax_bonus = 0.0;
    Mode mode = Mode::both;
    /// derived: seeds come from a keyed hash of (seed_salt, task id), so a
    /// training run cannot memorize one renaming. fixed: `fixed_seeds`.
    SeedPolicy seed_policy = SeedPolicy::derived;
    std::vector<std::uint64_t> fixed_seeds{0};
    std::string seed_salt = "ipt";
    std::size_t derived_seed_count = 1;
    logic::EvalBudget budget;
    std::size_t max_request_bytes = 1 << 20;

    /// Throws ConfigError.
    void validate() const;

    /// Keys as in to_json; absent keys keep their defaults.
    static RewardConfig from_json(const nlohmann::json& j);
    static RewardConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    /// IPT_REWARD_SCALE, IPT_SYNTAX_BONUS, IPT_MODE, IPT_ISO_SEED_POLICY,
    /// IPT_ISO_SEEDS (comma list), IPT_SEED_SALT, IPT_MAX_DERIVED_ATOMS,
    /// IPT_MAX_ITERATIONS, IPT_MAX_REQUEST_BYTES.
    using EnvLookup = std::function<std::optional<std::string>(const char*)>;
    void apply_env(const EnvLookup& lookup);
    void apply_env();
};

/// scale when passed, else syntax_bonus when the hypothesis parsed, else 0.
double reward_of(bool passed, bool syntax_ok, const RewardConfig& config) noexcept;
double reward_of(const detect::VerifyOutcome& outcome, const RewardConfig& config) noexcept;
/// Isomorphic reward: every outcome must pass.
double reward_of(std::span<const detect::VerifyOutcome> outcomes, const RewardConfig& config) noexcept;

struct Rewards {
    double ext = 0;
    double iso = 0;
    /// ext, iso, or min(ext, iso) for Mode::both.
    double combined = 0;
};

Rewards rewards_of(const detect::IPTResult& r, const RewardConfig& config, Mode mode) noexcept;

/// Seeds the config's policy assigns to `task_id`.
std::vector<std::uint64_t> iso_seeds_for(const RewardConfig& config, std::string_view task_id);

/// Client-visible failure with a machine-readable code and HTTP status.
class RequestError : public std::runtime_error {
public:
    RequestError(int status, std::string code, const std::string& msg)
        : std::runtime_error(msg), status_(status), code_(std::move(code)) {}
    int status() const noexcept { return status_; }
    const std::string& code() const noexcept { return code_; }

private:
    int status_;
    std::string code_;
};

nlohmann::json error_body(const RequestError& e);

/// Task registry plus request handlers. Handlers are safe to call
/// concurrently; only registration takes the exclusive lock.
class RewardEngine {
public:
    explicit RewardEngine(RewardConfig config);

    const RewardConfig& config() const noexcept { return config_; }

    struct Reply {
        int status = 200;
        nlohmann::json body;
    };

    /// Request: task (text or JSON object) or task_id; hypothesis, or
    /// raw_output to extract from; optional iso_seeds, mode, model_name,
    /// effort_label. Throws RequestError.
    nlohmann::json verify(const nlohmann::json& request) const;

    Reply handle_verify(std::string_view body) const;
    Reply handle_verify_batch(std::string_view body) const;
    Reply handle_get_task(std::string_view id) const;
    Reply handle_register_task(std::string_view body);
    Reply handle_healthz() const;

    /// 201 when added, 200 when an identical task is already present,
    /// RequestError 409 for a different task under the same id.
    int register_task(tasks::Task t);
    std::optional<tasks::Task> find_task(std::string_view id) const;
    std::size_t task_count() const;

private:
    nlohmann::json parse_body(std::string_view body) const;
    tasks::Task resolve_task(const nlohmann::json& request) const;

    RewardConfig config_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, tasks::Task, std::less<>> registry_;
};

} // namespace ipt::reward
