#include "ipt/tasks.hpp"

#include <algorithm>

#include "ipt/detail/rng.hpp"

namespace ipt::tasks {

namespace {

using logic::Atom;
using logic::Clause;
using logic::Term;

const std::vector<std::string>& vocab_of(const Schema& schema, const std::string& pred) {
    auto it = schema.attribute_vocab.find(pred);
    if (it == schema.attribute_vocab.end()) throw TaskError("schema has no vocabulary for '" + pred + "'");
    return it->second;
}

void check_generator_schema(const Schema& schema, const GenProfile& profile) {
    schema.validate();
    if (!schema.link_predicate()) throw TaskError("schema lacks an object-object link predicate");
    for (const auto& name : profile.active_attribute_predicates) {
        const PredicateSpec* p = schema.find(name);
        if (!p || p->sorts != std::vector<Sort>{Sort::object, Sort::attribute})
            throw TaskError("schema lacks attribute predicate " + name + "(object,attribute)");
        vocab_of(schema, name);
    }
}

logic::Program sample_background(detail::Rng& rng, const GenProfile& profile, const Schema& schema) {
    const std::string& link = schema.link_predicate()->name;
    logic::Program b;
    auto fact = [&](const std::string& pred, std::string a, std::string v) {
        b.clauses.push_back(Clause{Atom{pred, {Term::constant(std::move(a)), Term::constant(std::move(v))}}, {}});
    };
    for (std::size_t i = 0; i < profile.n_trains; ++i) {
        const std::string train = "train" + std::to_string(i);
        const auto n_cars = rng.between(profile.min_cars, profile.max_cars);
        for (std::size_t j = 1; j <= n_cars; ++j) {
            const std::string car = "car" + std::to_string(i) + "_" + std::to_string(j);
            fact(link, train, car);
            for (const auto& pred : profile.active_attribute_predicates) fact(pred, car, rng.pick(vocab_of(schema, pred)));
        }
    }
    return b;
}

// has_car(T,C), attr(C,v)... for one to L/2 cars, each constrained by at
// least one attribute literal; total literal count is exactly L.
Clause sample_rule(detail::Rng& rng, const GenProfile& profile, const Schema& schema) {
    static const std::vector<std::string> car_vars{"C", "D", "E", "F"};
    const std::string& link = schema.link_predicate()->name;
    const std::size_t length = ground_truth_length(profile);
    const std::size_t capacity = profile.active_attribute_predicates.size();

    const std::size_t n_cars = rng.between(1, std::min<std::size_t>(length / 2, car_vars.size()));
    std::vector<std::size_t> per_car(n_cars, 1);
    for (std::size_t extra = length - 2 * n_cars; extra > 0; --extra) {
        std::vector<std::size_t> open;
        for (std::size_t c = 0; c < n_cars; ++c)
            if (per_car[c] < capacity) open.push_back(c);
        if (open.empty()) throw TaskError("profile cannot host a rule of length " + std::to_string(length));
        ++per_car[rng.pick(open)];
    }

    Clause rule;
    rule.head = Atom{schema.target_predicate, {Term::var("T")}};
    logic::Conjunction body;
    for (std::size_t c = 0; c < n_cars; ++c) {
        body.push_back(Atom{link, {Term::var("T"), Term::var(car_vars[c])}});
        std::vector<std::size_t> preds(capacity);
        for (std::size_t k = 0; k < capacity; ++k) preds[k] = k;
        rng.shuffle(preds);
        preds.resize(per_car[c]);
        std::sort(preds.begin(), preds.end());
        for (auto k : preds) {
            const auto& name = profile.active_attribute_predicates[k];
            body.push_back(Atom{name, {Term::var(car_vars[c]), Term::constant(rng.pick(vocab_of(schema, name)))}});
        }
    }
    rule.body.push_back(std::move(body));
    return rule;
}

} // namespace

std::string default_task_id(int level, std::uint64_t seed) {
    std::string lv = std::to_string(level);
    if (lv.size() < 2) lv.insert(0, "0");
    return "trains-l" + lv + "-s" + std::to_string(seed);
}

GeneratedTask generate_task(int level, std::uint64_t seed, const Schema& schema) {
    const GenProfile profile = complexity_profile(level);
    check_generator_schema(schema, profile);
    detail::Rng rng(detail::splitmix64(seed) ^ static_cast<std::uint64_t>(level));

    for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
        logic::Program background = sample_background(rng, profile, schema);
        Clause rule = sample_rule(rng, profile, schema);

        logic::Program labeled = background;
        labeled.clauses.push_back(rule);
        const logic::Model model = logic::evaluate(labeled);

        Task t;
        t.id = default_task_id(level, seed);
        t.level = level;
        t.schema = schema;
        for (std::size_t i = 0; i < profile.n_trains; ++i) {
            const Term train = Term::constant("train" + std::to_string(i));
            if (model.contains(Atom{schema.target_predicate, {train}}))
                t.positives.push_back(Atom{schema.target_predicate, {train}});
            else
                t.negatives.push_back(Atom{schema.negative_predicate, {train}});
        }
        if (t.positives.empty() || t.negatives.empty()) continue;
        t.background = std::move(background);
        t.validate();
        return {std::move(t), std::move(rule)};
    }
    throw GenerationExhausted("no task with both positive and negative trains after " +
                              std::to_string(kMaxGenerationAttempts) + " attempts (level " + std::to_string(level) +
                              ", seed " + std::to_string(seed) + ")");
}

} // namespace ipt::tasks
