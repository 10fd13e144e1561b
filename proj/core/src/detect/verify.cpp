#include "ipt/detect.hpp"

#include <optional>

namespace ipt::detect {

namespace {

struct Hypothesis {
    bool syntax_ok = false;
    std::string message;
    logic::Program program;
};

Hypothesis parse_hypothesis(std::string_view text) {
    Hypothesis h;
    try {
        h.program = logic::parse_program(text);
        h.syntax_ok = true;
    } catch (const logic::ParseError& e) {
        h.message = std::string("syntax error at ") + e.what();
    }
    return h;
}

// Heads may define the target predicate or fresh auxiliary predicates only.
std::optional<std::string> semantic_violation(const tasks::Task& t, const logic::Program& h) {
    const auto& schema = t.schema;
    std::set<std::string> reserved;
    for (const auto& p : schema.predicates) reserved.insert(p.name);
    for (const auto& c : t.background.clauses) reserved.insert(c.head.predicate);

    for (const auto& c : h.clauses) {
        const auto& pred = c.head.predicate;
        if (pred == schema.target_predicate) {
            if (c.head.arity() != 1) return "target predicate '" + pred + "' must have arity 1";
        } else if (pred == schema.negative_predicate) {
            return "hypothesis may not define the negative predicate '" + pred + "'";
        } else if (reserved.count(pred)) {
            return "hypothesis may not define background predicate '" + pred + "'";
        }
    }
    for (const auto& c : h.clauses)
        for (const auto& conj : c.body)
            for (const auto& a : conj)
                if (a.predicate == schema.target_predicate && a.arity() != 1)
                    return "target predicate '" + a.predicate + "' must have arity 1";
    if (auto conflict = logic::arity_conflict(logic::merge(t.background, h))) return *conflict;
    return std::nullopt;
}

VerifyOutcome verify_parsed(const tasks::Task& t, const Hypothesis& h, const logic::EvalBudget& budget) {
    VerifyOutcome out;
    out.syntax_ok = h.syntax_ok;
    out.missing_positives = t.positives;
    out.message = h.message;
    if (!h.syntax_ok) return out;

    if (auto violation = semantic_violation(t, h.program)) {
        out.message = *violation;
        return out;
    }
    out.semantics_ok = true;

    try {
        const logic::Model model = logic::evaluate(logic::merge(t.background, h.program), budget);
        out.missing_positives.clear();
        for (const auto& a : t.positives)
            if (!model.contains(a)) out.missing_positives.push_back(a);
        for (const auto& a : t.negatives) {
            const logic::Atom target{t.schema.target_predicate, a.args};
            if (model.contains(target)) out.covered_negatives.push_back(a);
        }
    } catch (const logic::BudgetExceeded& e) {
        out.budget_exceeded = true;
        out.message = std::string("budget exceeded: ") + e.what();
    } catch (const std::exception& e) {
        out.semantics_ok = false;
        out.message = std::string("evaluation failed: ") + e.what();
    }

    out.complete = out.missing_positives.empty();
    out.consistent = out.covered_negatives.empty();
    out.passed = out.syntax_ok && out.semantics_ok && out.complete && out.consistent && !out.budget_exceeded;
    return out;
}

std::vector<VerifyOutcome> verify_iso_parsed(const tasks::Task& t, const Hypothesis& h,
                                             std::span<const std::uint64_t> seeds, const logic::EvalBudget& budget) {
    if (seeds.empty()) throw std::invalid_argument("isomorphic verification needs at least one seed");
    std::vector<VerifyOutcome> out;
    out.reserve(seeds.size());
    for (auto seed : seeds) out.push_back(verify_parsed(apply_perturbation(t, make_perturbation(t, seed)), h, budget));
    return out;
}

nlohmann::json atoms_json(const std::vector<logic::Atom>& atoms) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& a : atoms) out.push_back(logic::print_atom(a));
    return out;
}

std::vector<logic::Atom> atoms_from_json(const nlohmann::json& j) {
    std::vector<logic::Atom> out;
    for (const auto& s : j) out.push_back(logic::parse_ground_atom(s.get<std::string>()));
    return out;
}

} // namespace

bool IPTResult::iso_passed() const noexcept {
    for (const auto& o : iso)
        if (!o.passed) return false;
    return !iso.empty();
}

bool IPTResult::iso_budget_shortcut() const noexcept {
    if (!ext.passed) return false;
    for (const auto& o : iso)
        if (o.budget_exceeded) return true;
    return false;
}

VerifyOutcome verify(const tasks::Task& t, std::string_view hypothesis, const logic::EvalBudget& budget) {
    return verify_parsed(t, parse_hypothesis(hypothesis), budget);
}

std::vector<VerifyOutcome> verify_isomorphic(const tasks::Task& t, std::string_view hypothesis,
                                             std::span<const std::uint64_t> seeds, const logic::EvalBudget& budget) {
    return verify_iso_parsed(t, parse_hypothesis(hypothesis), seeds, budget);
}

IPTResult classify(const tasks::Task& t, std::string_view hypothesis, std::span<const std::uint64_t> seeds,
                   const logic::EvalBudget& budget) {
    const Hypothesis h = parse_hypothesis(hypothesis);
    IPTResult r;
    r.ext = verify_parsed(t, h, budget);
    r.iso = verify_iso_parsed(t, h, seeds, budget);
    r.perturbation_seeds.assign(seeds.begin(), seeds.end());
    r.shortcut = r.ext.passed && !r.iso_passed();
    return r;
}

nlohmann::json to_json(const VerifyOutcome& o) {
    return {
        {"syntax_ok", o.syntax_ok},
        {"semantics_ok", o.semantics_ok},
        {"complete", o.complete},
        {"consistent", o.consistent},
        {"passed", o.passed},
        {"budget_exceeded", o.budget_exceeded},
        {"missing_positives", atoms_json(o.missing_positives)},
        {"covered_negatives", atoms_json(o.covered_negatives)},
        {"message", o.message},
    };
}

nlohmann::json to_json(const IPTResult& r) {
    nlohmann::json iso = nlohmann::json::array();
    for (const auto& o : r.iso) iso.push_back(to_json(o));
    return {
        {"ext", to_json(r.ext)},
        {"iso", iso},
        {"pass_ext", r.ext.passed},
        {"pass_iso", r.iso_passed()},
        {"shortcut", r.shortcut},
        {"iso_budget_shortcut", r.iso_budget_shortcut()},
        {"perturbation_seeds", r.perturbation_seeds},
    };
}

VerifyOutcome outcome_from_json(const nlohmann::json& j) {
    VerifyOutcome o;
    o.syntax_ok = j.at("syntax_ok").get<bool>();
    o.semantics_ok = j.at("semantics_ok").get<bool>();
    o.complete = j.at("complete").get<bool>();
    o.consistent = j.at("consistent").get<bool>();
    o.passed = j.at("passed").get<bool>();
    o.budget_exceeded = j.at("budget_exceeded").get<bool>();
    o.missing_positives = atoms_from_json(j.at("missing_positives"));
    o.covered_negatives = atoms_from_json(j.at("covered_negatives"));
    o.message = j.value("message", std::string());
    return o;
}

IPTResult result_from_json(const nlohmann::json& j) {
    IPTResult r;
    r.ext = outcome_from_json(j.at("ext"));
    for (const auto& o : j.at("iso")) r.iso.push_back(outcome_from_json(o));
    r.shortcut = j.at("shortcut").get<bool>();
    r.perturbation_seeds = j.at("perturbation_seeds").get<std::vector<std::uint64_t>>();
    return r;
}

} // namespace ipt::detect
