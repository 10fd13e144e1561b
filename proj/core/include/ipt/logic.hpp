#pragma once

// Function-free Horn clauses (Datalog with top-level body disjunction):
// syntax tree, parser, canonical printer, and a budgeted bottom-up evaluator.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ipt::logic {

struct Term {
    enum class Kind : std::uint8_t { variable, constant };

    Kind kind = Kind::constant;
    std::string name;

    static Term var(std::string name) { return {Kind::variable, std::move(name)}; }
    static Term constant(std::string name) { return {Kind::constant, std::move(name)}; }

    bool is_variable() const noexcept { return kind == Kind::variable; }
    bool is_constant() const noexcept { return kind == Kind::constant; }

    auto operator<=>(const Term&) const = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    std::size_t arity() const noexcept { return args.size(); }
    bool is_ground() const noexcept;

    auto operator<=>(const Atom&) const = default;
};

using Conjunction = std::vector<Atom>;

/// A head with a body in disjunctive normal form. An empty body is a fact.
struct Clause {
    Atom head;
    std::vector<Conjunction> body;

    bool is_fact() const noexcept { return body.empty(); }
    bool operator==(const Clause&) const = default;
};

struct Program {
    std::vector<Clause> clauses;

    bool empty() const noexcept { return clauses.empty(); }
    bool operator==(const Program&) const = default;
};

/// Hard resource limits for one least-model computation. Both limits must be
/// positive; `make` rejects zero.
struct EvalBudget {
    std::size_t max_derived_atoms = 100'000;
    std::size_t max_iterations = 1'000;

    static EvalBudget make(std::size_t max_derived_atoms, std::size_t max_iterations);
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    /// Message without the location prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string detail_;
    std::size_t line_;
    std::size_t column_;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- syntax ---------------------------------------------------------------

/// Parses a whole program. Enforces consistent arity per predicate, ground
/// facts, and range restriction of every disjunct.
Program parse_program(std::string_view text);

/// Parses a single ground atom, with or without a trailing period.
Atom parse_ground_atom(std::string_view text);

std::string print_term(const Term& t);
std::string print_atom(const Atom& a);
std::string print_clause(const Clause& c);
/// One clause per line, no trailing newline. The empty program prints as "".
std::string print_program(const Program& p);

bool is_variable_name(std::string_view name) noexcept;
bool is_constant_name(std::string_view name) noexcept;

/// Returns a description of the first predicate used with two different
/// arities, if any.
std::optional<std::string> arity_conflict(const Program& p);

// --- transformations ------------------------------------------------------

std::vector<Clause> desugar(const Clause& c);
Program desugar_all(const Program& p);

using ConstantMap = std::map<std::string, std::string>;

Atom rename_constants(const Atom& a, const ConstantMap& m);
Program rename_constants(const Program& p, const ConstantMap& m);

std::set<std::string> constants_of(const Program& p);
std::set<std::string> constants_of(const Atom& a);

/// Concatenation of clause lists.
Program merge(const Program& a, const Program& b);

// --- evaluation -----------------------------------------------------------

/// Result of a least-model computation. Membership queries do not allocate
/// new symbols.
class Model {
public:
    Model();
    Model(Model&&) noexcept;
    Model& operator=(Model&&) noexcept;
    ~Model();

    bool contains(const Atom& ground) const;
    std::size_t size() const noexcept;
    std::size_t iterations() const noexcept;
    std::set<Atom> atoms() const;

    struct Impl; // opaque

private:
    friend Model evaluate(const Program&, const EvalBudget&);
    std::unique_ptr<Impl> impl_;
};

/// Semi-naive bottom-up evaluation to fixpoint. Throws BudgetExceeded when
/// the model grows past `max_derived_atoms`, when more than `max_iterations`
/// rounds are needed, or when join work exceeds a cap proportional to
/// `max_derived_atoms`.
Model evaluate(const Program& p, const EvalBudget& budget = {});

std::set<Atom> least_model(const Program& p, const EvalBudget& budget = {});
bool entails(const Program& p, const Atom& query, const EvalBudget& budget = {});

} // namespace ipt::logic
