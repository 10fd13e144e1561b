#include "ipt/logic.hpp"

#include <unordered_map>

namespace ipt::logic {

bool Atom::is_ground() const noexcept {
    for (const auto& t : args)
        if (t.is_variable()) return false;
    return true;
}

EvalBudget EvalBudget::make(std::size_t max_derived_atoms, std::size_t max_iterations) {
    if (max_derived_atoms == 0 || max_iterations == 0)
        throw std::invalid_argument("EvalBudget limits must be strictly positive");
    return EvalBudget{max_derived_atoms, max_iterations};
}

std::optional<std::string> arity_conflict(const Program& p) {
    std::unordered_map<std::string, std::size_t> seen;
    auto visit = [&](const Atom& a) -> std::optional<std::string> {
        auto [it, inserted] = seen.try_emplace(a.predicate, a.arity());
        if (!inserted && it->second != a.arity())
            return "predicate '" + a.predicate + "' used with arity " + std::to_string(it->second) + " and " +
                   std::to_string(a.arity());
        return std::nullopt;
    };
    for (const auto& c : p.clauses) {
        if (auto e = visit(c.head)) return e;
        for (const auto& conj : c.body)
            for (const auto& a : conj)
                if (auto e = visit(a)) return e;
    }
    return std::nullopt;
}

std::vector<Clause> desugar(const Clause& c) {
    if (c.body.size() <= 1) return {c};
    std::vector<Clause> out;
    out.reserve(c.body.size());
    for (const auto& conj : c.body) out.push_back(Clause{c.head, {conj}});
    return out;
}

Program desugar_all(const Program& p) {
    Program out;
    for (const auto& c : p.clauses)
        for (auto& d : desugar(c)) out.clauses.push_back(std::move(d));
    return out;
}

Atom rename_constants(const Atom& a, const ConstantMap& m) {
    Atom out = a;
    for (auto& t : out.args) {
        if (!t.is_constant()) continue;
        if (auto it = m.find(t.name); it != m.end()) t.name = it->second;
    }
    return out;
}

Program rename_constants(const Program& p, const ConstantMap& m) {
    Program out = p;
    for (auto& c : out.clauses) {
        c.head = rename_constants(c.head, m);
        for (auto& conj : c.body)
            for (auto& a : conj) a = rename_constants(a, m);
    }
    return out;
}

std::set<std::string> constants_of(const Atom& a) {
    std::set<std::string> out;
    for (const auto& t : a.args)
        if (t.is_constant()) out.insert(t.name);
    return out;
}

std::set<std::string> constants_of(const Program& p) {
    std::set<std::string> out;
    auto add = [&](const Atom& a) {
        for (const auto& t : a.args)
            if (t.is_constant()) out.insert(t.name);
    };
    for (const auto& c : p.clauses) {
        add(c.head);
        for (const auto& conj : c.body)
            for (const auto& a : conj) add(a);
    }
    return out;
}

Program merge(const Program& a, const Program& b) {
    Program out = a;
    out.clauses.insert(out.clauses.end(), b.clauses.begin(), b.clauses.end());
    return out;
}

} // namespace ipt::logic
