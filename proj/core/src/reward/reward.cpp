#include "ipt/reward.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>

#include "ipt/detail/rng.hpp"
#include "ipt/harness.hpp"

namespace ipt::reward {

Mode parse_mode(std::string_view s) {
    if (s == "extensional" || s == "ext") return Mode::extensional;
    if (s == "isomorphic" || s == "iso") return Mode::isomorphic;
    if (s == "both") return Mode::both;
    throw ConfigError("unknown mode '" + std::string(s) + "' (extensional, isomorphic, both)");
}

std::string_view mode_name(Mode m) noexcept {
    switch (m) {
    case Mode::extensional: return "extensional";
    case Mode::isomorphic: return "isomorphic";
    case Mode::both: return "both";
    }
    return "?";
}

SeedPolicy parse_seed_policy(std::string_view s) {
    if (s == "fixed") return SeedPolicy::fixed;
    if (s == "derived") return SeedPolicy::derived;
    throw ConfigError("unknown iso seed policy '" + std::string(s) + "' (fixed, derived)");
}

std::string_view seed_policy_name(SeedPolicy p) noexcept { return p == SeedPolicy::fixed ? "fixed" : "derived"; }

// --- config -----------------------------------------------------------------

void RewardConfig::validate() const {
    if (!(reward_scale > 0) || !std::isfinite(reward_scale)) throw ConfigError("reward_scale must be positive");
    if (!(syntax_bonus >= 0) || !(syntax_bonus < reward_scale))
        throw ConfigError("syntax_bonus must be in [0, reward_scale)");
    if (seed_policy == SeedPolicy::fixed && fixed_seeds.empty()) throw ConfigError("fixed seed policy needs seeds");
    if (seed_policy == SeedPolicy::derived && derived_seed_count == 0)
        throw ConfigError("derived seed count must be positive");
    if (budget.max_derived_atoms == 0 || budget.max_iterations == 0) throw ConfigError("budget limits must be positive");
    if (max_request_bytes == 0) throw ConfigError("max_request_bytes must be positive");
}

RewardConfig RewardConfig::from_json(const nlohmann::json& j) {
    RewardConfig c;
    try {
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        c.reward_scale = j.value("reward_scale", c.reward_scale);
        c.syntax_bonus = j.value("syntax_bonus", c.syntax_bonus);
        if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
        if (j.contains("iso_seed_policy")) c.seed_policy = parse_seed_policy(j.at("iso_seed_policy").get<std::string>());
        if (j.contains("iso_seeds")) c.fixed_seeds = j.at("iso_seeds").get<std::vector<std::uint64_t>>();
        c.seed_salt = j.value("seed_salt", c.seed_salt);
        c.derived_seed_count = j.value("iso_seed_count", c.derived_seed_count);
        c.budget.max_derived_atoms = j.value("max_derived_atoms", c.budget.max_derived_atoms);
        c.budget.max_iterations = j.value("max_iterations", c.budget.max_iterations);
        c.max_request_bytes = j.value("max_request_bytes", c.max_request_bytes);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    c.validate();
    return c;
}

RewardConfig RewardConfig::load(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(tasks::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json RewardConfig::to_json() const {
    return {
        {"reward_scale", reward_scale},
        {"syntax_bonus", syntax_bonus},
        {"mode", mode_name(mode)},
        {"iso_seed_policy", seed_policy_name(seed_policy)},
        {"iso_seeds", fixed_seeds},
        {"seed_salt", seed_salt},
        {"iso_seed_count", derived_seed_count},
        {"max_derived_atoms", budget.max_derived_atoms},
        {"max_iterations", budget.max_iterations},
        {"max_request_bytes", max_request_bytes},
    };
}

namespace {

double env_double(const char* name, const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string(name) + ": not a number: '" + v + "'");
}

std::uint64_t env_uint(const char* name, const std::string& v) {
    try {
        std::size_t used = 0;
        if (!v.empty() && v[0] != '-') {
            auto n = std::stoull(v, &used);
            if (used == v.size()) return n;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string(name) + ": not a nonnegative integer: '" + v + "'");
}

} // namespace

void RewardConfig::apply_env(const EnvLookup& lookup) {
    if (auto v = lookup("IPT_REWARD_SCALE")) reward_scale = env_double("IPT_REWARD_SCALE", *v);
    if (auto v = lookup("IPT_SYNTAX_BONUS")) syntax_bonus = env_double("IPT_SYNTAX_BONUS", *v);
    if (auto v = lookup("IPT_MODE")) mode = parse_mode(*v);
    if (auto v = lookup("IPT_ISO_SEED_POLICY")) seed_policy = parse_seed_policy(*v);
    if (auto v = lookup("IPT_ISO_SEEDS")) {
        fixed_seeds.clear();
        std::stringstream ss(*v);
        for (std::string item; std::getline(ss, item, ',');) fixed_seeds.push_back(env_uint("IPT_ISO_SEEDS", item));
    }
    if (auto v = lookup("IPT_SEED_SALT")) seed_salt = *v;
    if (auto v = lookup("IPT_MAX_DERIVED_ATOMS")) budget.max_derived_atoms = env_uint("IPT_MAX_DERIVED_ATOMS", *v);
    if (auto v = lookup("IPT_MAX_ITERATIONS")) budget.max_iterations = env_uint("IPT_MAX_ITERATIONS", *v);
    if (auto v = lookup("IPT_MAX_REQUEST_BYTES")) max_request_bytes = env_uint("IPT_MAX_REQUEST_BYTES", *v);
    validate();
}

void RewardConfig::apply_env() {
    apply_env([](const char* name) -> std::optional<std::string> {
        const char* v = std::getenv(name);
        if (!v) return std::nullopt;
        return std::string(v);
    });
}

// --- rewards ----------------------------------------------------------------

double reward_of(bool passed, bool syntax_ok, const RewardConfig& config) noexcept {
    if (passed) return config.reward_scale;
    return syntax_ok ? config.syntax_bonus : 0.0;
}

double reward_of(const detect::VerifyOutcome& outcome, const RewardConfig& config) noexcept {
    return reward_of(outcome.passed, outcome.syntax_ok, config);
}

double reward_of(std::span<const detect::VerifyOutcome> outcomes, const RewardConfig& config) noexcept {
    if (outcomes.empty()) return 0.0;
    const bool passed = std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.passed; });
    return reward_of(passed, outcomes.front().syntax_ok, config);
}

Rewards rewards_of(const detect::IPTResult& r, const RewardConfig& config, Mode mode) noexcept {
    Rewards out;
    out.ext = reward_of(r.ext, config);
    out.iso = reward_of(std::span<const detect::VerifyOutcome>(r.iso), config);
    switch (mode) {
    case Mode::extensional: out.combined = out.ext; break;
    case Mode::isomorphic: out.combined = out.iso; break;
    case Mode::both: out.combined = std::min(out.ext, out.iso); break;
    }
    return out;
}

std::vector<std::uint64_t> iso_seeds_for(const RewardConfig& config, std::string_view task_id) {
    if (config.seed_policy == SeedPolicy::fixed) return config.fixed_seeds;
    std::vector<std::uint64_t> seeds;
    std::uint64_t h = detail::fnv1a64(task_id, detail::fnv1a64(config.seed_salt) ^ 0x5bd1e995ull);
    for (std::size_t k = 0; k < config.derived_seed_count; ++k) seeds.push_back(h = detail::splitmix64(h + k));
    return seeds;
}

nlohmann::json error_body(const RequestError& e) { return {{"error", {{"code", e.code()}, {"message", e.what()}}}}; }

// --- engine -----------------------------------------------------------------

RewardEngine::RewardEngine(RewardConfig config) : config_(std::move(config)) { config_.validate(); }

nlohmann::json RewardEngine::parse_body(std::string_view body) const {
    if (body.size() > config_.max_request_bytes)
        throw RequestError(413, "payload_too_large",
                           "request body of " + std::to_string(body.size()) + " bytes exceeds the limit of " +
                               std::to_string(config_.max_request_bytes));
    try {
        return nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw RequestError(400, "bad_json", std::string("request body is not valid JSON: ") + e.what());
    }
}

tasks::Task RewardEngine::resolve_task(const nlohmann::json& request) const {
    if (auto it = request.find("task"); it != request.end()) {
        try {
            if (it->is_string()) return tasks::parse_task(it->get<std::string>());
            if (it->is_object()) return tasks::task_from_json(*it);
        } catch (const logic::ParseError& e) {
            throw RequestError(400, "invalid_task", std::string("task does not parse: ") + e.what());
        } catch (const std::exception& e) {
            throw RequestError(400, "invalid_task", std::string("invalid task: ") + e.what());
        }
        throw RequestError(400, "invalid_task", "task must be task text or a task object");
    }
    if (auto it = request.find("task_id"); it != request.end()) {
        if (!it->is_string()) throw RequestError(400, "invalid_field", "task_id must be a string");
        auto t = find_task(it->get<std::string>());
        if (!t) throw RequestError(404, "unknown_task", "no registered task '" + it->get<std::string>() + "'");
        return *std::move(t);
    }
    throw RequestError(400, "missing_field", "request needs 'task' or 'task_id'");
}

nlohmann::json RewardEngine::verify(const nlohmann::json& request) const {
    if (!request.is_object()) throw RequestError(400, "invalid_request", "request must be a JSON object");
    const tasks::Task task = resolve_task(request);

    auto string_field = [&](const char* key) -> std::optional<std::string> {
        auto it = request.find(key);
        if (it == request.end() || it->is_null()) return std::nullopt;
        if (!it->is_string()) throw RequestError(400, "invalid_field", std::string(key) + " must be a string");
        return it->get<std::string>();
    };
    std::string raw, hypothesis;
    if (auto h = string_field("hypothesis")) {
        raw = hypothesis = *h;
    } else if (auto r = string_field("raw_output")) {
        raw = *r;
        hypothesis = harness::extract_hypothesis(raw);
    } else {
        throw RequestError(400, "missing_field", "request needs 'hypothesis' or 'raw_output'");
    }

    Mode mode = config_.mode;
    if (auto m = string_field("mode")) {
        try {
            mode = parse_mode(*m);
        } catch (const ConfigError& e) {
            throw RequestError(400, "invalid_mode", e.what());
        }
    }

    std::vector<std::uint64_t> seeds;
    if (auto it = request.find("iso_seeds"); it != request.end() && !it->is_null()) {
        if (!it->is_array() || it->empty()) throw RequestError(400, "invalid_seeds", "iso_seeds must be a nonempty array");
        for (const auto& s : *it) {
            const bool ok = s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0);
            if (!ok) throw RequestError(400, "invalid_seeds", "iso_seeds must be nonnegative integers");
            seeds.push_back(s.get<std::uint64_t>());
        }
    } else {
        seeds = iso_seeds_for(config_, task.id);
    }

    const detect::IPTResult result = detect::classify(task, hypothesis, seeds, config_.budget);
    const Rewards rewards = rewards_of(result, config_, mode);

    nlohmann::json iso = nlohmann::json::array();
    for (const auto& o : result.iso) iso.push_back(detect::to_json(o));
    nlohmann::json out{
        {"task_id", task.id},
        {"raw_output", raw},
        {"hypothesis", hypothesis},
        {"mode", mode_name(mode)},
        {"iso_seeds", seeds},
        {"syntax_ok", result.ext.syntax_ok},
        {"pass_ext", result.ext.passed},
        {"pass_iso", result.iso_passed()},
        {"shortcut", result.shortcut},
        {"iso_budget_shortcut", result.iso_budget_shortcut()},
        {"reward_ext", rewards.ext},
        {"reward_iso", rewards.iso},
        {"reward", rewards.combined},
        {"diagnostics", {{"ext", detect::to_json(result.ext)}, {"iso", iso}}},
    };
    if (auto m = string_field("model_name")) out["model_name"] = *m;
    if (auto e = string_field("effort_label")) out["effort_label"] = *e;
    return out;
}

RewardEngine::Reply RewardEngine::handle_verify(std::string_view body) const {
    try {
        return {200, verify(parse_body(body))};
    } catch (const RequestError& e) {
        return {e.status(), error_body(e)};
    }
}

RewardEngine::Reply RewardEngine::handle_verify_batch(std::string_view body) const {
    nlohmann::json items;
    try {
        nlohmann::json doc = parse_body(body);
        if (doc.is_object() && doc.contains("requests")) doc = doc.at("requests");
        if (!doc.is_array()) throw RequestError(400, "invalid_request", "batch must be an array or {\"requests\": [...]}");
        items = std::move(doc);
    } catch (const RequestError& e) {
        return {e.status(), error_body(e)};
    }
    // Per-item failures stay in their slot.
    nlohmann::json results = nlohmann::json::array();
    for (const auto& item : items) {
        try {
            results.push_back(verify(item));
        } catch (const RequestError& e) {
            auto err = error_body(e);
            err["status"] = e.status();
            results.push_back(std::move(err));
        }
    }
    return {200, {{"results", std::move(results)}}};
}

RewardEngine::Reply RewardEngine::handle_get_task(std::string_view id) const {
    auto t = find_task(id);
    if (!t) return {404, error_body(RequestError(404, "unknown_task", "no registered task '" + std::string(id) + "'"))};
    nlohmann::json body = tasks::task_to_json(*t);
    body["text"] = tasks::serialize_task(*t);
    return {200, std::move(body)};
}

RewardEngine::Reply RewardEngine::handle_register_task(std::string_view body) {
    try {
        if (body.size() > config_.max_request_bytes) parse_body(body); // raises 413
        tasks::Task t;
        const auto first = body.find_first_not_of(" \t\r\n");
        if (first != std::string_view::npos && body[first] == '{') {
            const nlohmann::json j = parse_body(body);
            t = resolve_task(j.contains("task") ? j : nlohmann::json{{"task", j}});
            if (auto it = j.find("id"); it != j.end()) {
                if (!it->is_string()) throw RequestError(400, "invalid_field", "id must be a string");
                t.id = it->get<std::string>();
            }
        } else {
            t = resolve_task(nlohmann::json{{"task", std::string(body)}});
        }
        const int status = register_task(t);
        return {status, {{"task_id", t.id}, {"level", t.level}}};
    } catch (const RequestError& e) {
        return {e.status(), error_body(e)};
    }
}

RewardEngine::Reply RewardEngine::handle_healthz() const {
    return {200, {{"status", "ok"}, {"tasks", task_count()}, {"mode", mode_name(config_.mode)}}};
}

int RewardEngine::register_task(tasks::Task t) {
    if (t.id.empty()) throw RequestError(400, "invalid_task", "task id must be nonempty");
    std::unique_lock lock(mutex_);
    auto [it, inserted] = registry_.try_emplace(t.id, t);
    if (inserted) return 201;
    if (it->second == t) return 200;
    throw RequestError(409, "task_conflict", "a different task is already registered as '" + t.id + "'");
}

std::optional<tasks::Task> RewardEngine::find_task(std::string_view id) const {
    std::shared_lock lock(mutex_);
    auto it = registry_.find(id);
    if (it == registry_.end()) return std::nullopt;
    return it->second;
}

std::size_t RewardEngine::task_count() const {
    std::shared_lock lock(mutex_);
    return registry_.size();
}

} // namespace ipt::reward
