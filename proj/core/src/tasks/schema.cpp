#include "ipt/tasks.hpp"

#include <algorithm>

namespace ipt::tasks {

std::string_view sort_name(Sort s) noexcept {
    return s == Sort::object ? "object" : "attribute";
}

const PredicateSpec* Schema::find(std::string_view name) const noexcept {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

const PredicateSpec* Schema::link_predicate() const noexcept {
    for (const auto& p : predicates)
        if (p.sorts == std::vector<Sort>{Sort::object, Sort::object}) return &p;
    return nullptr;
}

void Schema::validate() const {
    if (!logic::is_constant_name(target_predicate)) throw TaskError("invalid target predicate name '" + target_predicate + "'");
    if (!logic::is_constant_name(negative_predicate))
        throw TaskError("invalid negative predicate name '" + negative_predicate + "'");
    if (target_predicate == negative_predicate) throw TaskError("target and negative predicates must differ");

    std::set<std::string> seen;
    for (const auto& p : predicates) {
        if (!logic::is_constant_name(p.name)) throw TaskError("invalid predicate name '" + p.name + "'");
        if (!seen.insert(p.name).second) throw TaskError("predicate '" + p.name + "' declared twice");
        if (p.name == target_predicate || p.name == negative_predicate)
            throw TaskError("schema predicate '" + p.name + "' collides with an example predicate");
    }
    for (const auto& [name, values] : attribute_vocab) {
        const PredicateSpec* p = find(name);
        if (!p) throw TaskError("attribute vocabulary for undeclared predicate '" + name + "'");
        if (std::find(p->sorts.begin(), p->sorts.end(), Sort::attribute) == p->sorts.end())
            throw TaskError("predicate '" + name + "' has no attribute argument but declares a vocabulary");
        if (values.empty()) throw TaskError("attribute vocabulary for '" + name + "' is empty");
        for (const auto& v : values)
            if (!logic::is_constant_name(v)) throw TaskError("invalid attribute constant '" + v + "' for '" + name + "'");
    }
}

Schema Schema::trains() {
    Schema s;
    s.predicates = {
        {"has_car", {Sort::object, Sort::object}},
        {"car_color", {Sort::object, Sort::attribute}},
        {"car_len", {Sort::object, Sort::attribute}},
        {"has_payload", {Sort::object, Sort::attribute}},
        {"car_shape", {Sort::object, Sort::attribute}},
    };
    s.attribute_vocab = {
        {"car_color", {"red", "blue", "green", "yellow", "white"}},
        {"car_len", {"short", "long"}},
        {"has_payload", {"circle", "triangle", "rectangle", "diamond"}},
        {"car_shape", {"u_shaped", "bucket", "hexagon", "ellipse"}},
    };
    return s;
}

std::set<std::string> Task::object_constants() const {
    std::set<std::string> out;
    for (const auto& c : background.clauses) {
        const PredicateSpec* p = schema.find(c.head.predicate);
        for (std::size_t i = 0; i < c.head.args.size(); ++i) {
            const auto& t = c.head.args[i];
            if (!t.is_constant()) continue;
            if (!p || i >= p->sorts.size() || p->sorts[i] == Sort::object) out.insert(t.name);
        }
    }
    for (const auto* examples : {&positives, &negatives})
        for (const auto& a : *examples)
            for (const auto& t : a.args)
                if (t.is_constant()) out.insert(t.name);
    return out;
}

std::set<std::string> Task::all_constants() const {
    auto out = logic::constants_of(background);
    for (const auto* examples : {&positives, &negatives})
        for (const auto& a : *examples) out.merge(logic::constants_of(a));
    return out;
}

void Task::validate() const {
    if (level < kMinLevel || level > kMaxLevel) throw TaskError("level " + std::to_string(level) + " outside 1..20");
    schema.validate();

    std::set<std::string> background_objects;
    for (const auto& c : background.clauses) {
        const auto shown = logic::print_clause(c);
        if (!c.is_fact()) throw TaskError("background must contain facts only: " + shown);
        if (!c.head.is_ground()) throw TaskError("background fact is not ground: " + shown);
        if (c.head.predicate == schema.target_predicate || c.head.predicate == schema.negative_predicate)
            throw TaskError("background mentions an example predicate: " + shown);
        const PredicateSpec* p = schema.find(c.head.predicate);
        if (!p) throw TaskError("background predicate not in schema: " + shown);
        if (p->arity() != c.head.arity()) throw TaskError("arity does not match schema: " + shown);
        for (std::size_t i = 0; i < p->arity(); ++i)
            if (p->sorts[i] == Sort::object) background_objects.insert(c.head.args[i].name);
    }

    auto check_examples = [&](const std::vector<logic::Atom>& examples, const std::string& pred, const char* what) {
        if (examples.empty()) throw TaskError(std::string("task has no ") + what + " examples");
        std::set<std::string> objects;
        for (const auto& a : examples) {
            const auto shown = logic::print_atom(a);
            if (a.predicate != pred || a.arity() != 1 || !a.is_ground())
                throw TaskError(std::string("malformed ") + what + " example: " + shown);
            if (!background_objects.count(a.args[0].name))
                throw TaskError("example object does not occur in background: " + shown);
            objects.insert(a.args[0].name);
        }
        return objects;
    };
    const auto pos = check_examples(positives, schema.target_predicate, "positive");
    const auto neg = check_examples(negatives, schema.negative_predicate, "negative");
    for (const auto& o : pos)
        if (neg.count(o)) throw TaskError("object '" + o + "' is labeled both positive and negative");
}

Tier tier_of(int level) {
    if (level < kMinLevel || level > kMaxLevel) throw std::out_of_range("level " + std::to_string(level) + " outside 1..20");
    return static_cast<Tier>((level - 1) / 5);
}

std::string_view tier_name(Tier t) noexcept {
    switch (t) {
    case Tier::basic: return "Basic";
    case Tier::easy: return "Easy";
    case Tier::medium: return "Medium";
    case Tier::hard: return "Hard";
    }
    return "?";
}

GenProfile complexity_profile(int level) {
    if (level < kMinLevel || level > kMaxLevel) throw std::out_of_range("level " + std::to_string(level) + " outside 1..20");
    static const std::vector<std::string> attribute_order{"car_color", "car_len", "has_payload", "car_shape"};
    const std::size_t quintile = static_cast<std::size_t>((level + 4) / 5); // ceil(level / 5)

    GenProfile p;
    p.n_trains = 4 + static_cast<std::size_t>(level);
    p.min_cars = 1;
    p.max_cars = 1 + quintile;
    const std::size_t n_active = std::min(attribute_order.size(), 1 + quintile);
    p.active_attribute_predicates.assign(attribute_order.begin(), attribute_order.begin() + static_cast<long>(n_active));
    p.rule_body_length = 1 + static_cast<std::size_t>((level - 1) / 5);
    return p;
}

std::size_t ground_truth_length(const GenProfile& p) noexcept {
    return std::max<std::size_t>(2, p.rule_body_length);
}

} // namespace ipt::tasks
