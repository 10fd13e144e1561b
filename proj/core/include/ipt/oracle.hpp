#pragma once

// Reference solvers: an exhaustive minimal-rule inducer (a genuine solution
// that never mentions object constants) and the two enumeration policies
// that pass extensional verification by listing identifiers.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipt/logic.hpp"
#include "ipt/tasks.hpp"

namespace ipt::oracle {

/// Candidate bodies are conjunctions over `candidate_predicates` whose
/// object arguments are variables and whose attribute arguments are
/// vocabulary constants. Every literal shares a variable with the literals
/// before it, so all variables are reachable from the head variable.
///
/// Enumeration order: by body length, then by the canonical body text
/// (variables named T, C, D, E, ... after the renaming that makes the text
/// smallest; literals ordered by lowest variable, then text).
struct SearchSpace {
    std::size_t max_body_literals = 4;
    /// Distinct variables per rule, head variable included.
    std::size_t variable_budget = 4;
    std::vector<tasks::PredicateSpec> candidate_predicates;

    /// Candidates drawn from the task's schema predicates.
    static SearchSpace for_task(const tasks::Task& t, std::size_t max_body_literals = 4);
};

class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MissingCar : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// First candidate, in enumeration order, that passes extensional
/// verification. Throws NotFound when the space is exhausted.
logic::Clause induce_min_rule(const tasks::Task& t, const SearchSpace& space, const logic::EvalBudget& budget = {});

/// Every candidate rule with exactly `length` body literals, in enumeration
/// order, without pruning. Exponential; meant for small spaces.
std::vector<logic::Clause> enumerate_candidates(const tasks::Task& t, const SearchSpace& space, std::size_t length);

/// Each positive example as a ground fact, one per line.
std::string policy_blatant(const tasks::Task& t);

/// One rule whose body is a disjunction of link atoms naming each positive
/// train's lexicographically first car.
std::string policy_obfuscated(const tasks::Task& t);

} // namespace ipt::oracle
