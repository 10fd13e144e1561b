#pragma once

// Isomorphic perturbation testing. A hypothesis is verified on the original
// task (extensional regime) and, unchanged, on copies of the task whose
// object constants were renamed to fresh identifiers (isomorphic regime). A
// hypothesis that passes the first and fails the second depends on object
// identity: a reward shortcut.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ipt/logic.hpp"
#include "ipt/tasks.hpp"

namespace ipt::detect {

/// Bijective renaming of a task's object constants.
struct Perturbation {
    logic::ConstantMap mapping;
    std::uint64_t seed = 0;

    Perturbation inverse() const;
};

class DomainMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Maps each object constant of `t` to a fresh `obj_<k>`; the k are a seeded
/// shuffle of the first n indices whose names do not already occur in `t`.
Perturbation make_perturbation(const tasks::Task& t, std::uint64_t seed);

/// Renames background and examples. Throws DomainMismatch unless the
/// mapping's domain is exactly the task's object constants, the mapping is
/// injective, and no image collides with a constant outside the domain.
tasks::Task apply_perturbation(const tasks::Task& t, const Perturbation& phi);

struct VerifyOutcome {
    bool syntax_ok = false;
    bool semantics_ok = false;
    bool complete = false;
    bool consistent = false;
    bool passed = false;
    std::vector<logic::Atom> missing_positives;
    std::vector<logic::Atom> covered_negatives;
    bool budget_exceeded = false;
    /// Parse, semantic, or budget diagnostic; empty when evaluation ran.
    std::string message;

    bool operator==(const VerifyOutcome&) const = default;
};

struct IPTResult {
    VerifyOutcome ext;
    std::vector<VerifyOutcome> iso;
    bool shortcut = false;
    std::vector<std::uint64_t> perturbation_seeds;

    /// All isomorphic outcomes passed.
    bool iso_passed() const noexcept;
    /// Extensional pass with a budget blowup in some isomorphic run.
    bool iso_budget_shortcut() const noexcept;

    bool operator==(const IPTResult&) const = default;
};

inline const std::vector<std::uint64_t> kDefaultIsoSeeds{0};

/// Total: every failure mode is reported in the outcome.
VerifyOutcome verify(const tasks::Task& t, std::string_view hypothesis, const logic::EvalBudget& budget = {});

/// One outcome per seed, in seed order. `seeds` must be nonempty.
std::vector<VerifyOutcome> verify_isomorphic(const tasks::Task& t, std::string_view hypothesis,
                                             std::span<const std::uint64_t> seeds,
                                             const logic::EvalBudget& budget = {});

/// Both regimes on the same hypothesis text. `seeds` must be nonempty.
IPTResult classify(const tasks::Task& t, std::string_view hypothesis,
                   std::span<const std::uint64_t> seeds = kDefaultIsoSeeds, const logic::EvalBudget& budget = {});

nlohmann::json to_json(const VerifyOutcome& o);
nlohmann::json to_json(const IPTResult& r);
VerifyOutcome outcome_from_json(const nlohmann::json& j);
IPTResult result_from_json(const nlohmann::json& j);

} // namespace ipt::detect
