#include "ipt/oracle.hpp"

#include <map>

namespace ipt::oracle {

std::string policy_blatant(const tasks::Task& t) {
    std::string out;
    for (std::size_t i = 0; i < t.positives.size(); ++i) {
        if (i) out += '\n';
        out += logic::print_atom(t.positives[i]) + ".";
    }
    return out;
}

std::string policy_obfuscated(const tasks::Task& t) {
    const tasks::PredicateSpec* link = t.schema.link_predicate();
    if (!link) throw MissingCar("schema has no object-to-object predicate");

    std::map<std::string, std::string> first_car;
    for (const auto& c : t.background.clauses) {
        if (!c.is_fact() || c.head.predicate != link->name || c.head.arity() != 2) continue;
        const auto& train = c.head.args[0].name;
        const auto& car = c.head.args[1].name;
        auto [it, inserted] = first_car.try_emplace(train, car);
        if (!inserted && car < it->second) it->second = car;
    }

    logic::Clause rule;
    rule.head = logic::Atom{t.schema.target_predicate, {logic::Term::var("T")}};
    for (const auto& p : t.positives) {
        auto it = first_car.find(p.args.at(0).name);
        if (it == first_car.end()) throw MissingCar("positive example '" + logic::print_atom(p) + "' has no " + link->name + " fact");
        rule.body.push_back({logic::Atom{link->name, {logic::Term::var("T"), logic::Term::constant(it->second)}}});
    }
    return logic::print_clause(rule);
}

} // namespace ipt::oracle
