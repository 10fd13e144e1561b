#include "ipt/logic.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace ipt::logic {

namespace {

// Join work allowed per unit of the derived-atom budget. Bounds the time
// spent on rules whose bodies explode combinatorially without deriving much.
constexpr std::size_t kJoinStepsPerAtom = 200;

// Longest conjunction the engine will plan and join.
constexpr std::size_t kMaxBodyAtoms = 256;

constexpr std::uint32_t kUnbound = std::numeric_limits<std::uint32_t>::max();

struct Relation;

struct RowHash {
    const Relation* rel;
    std::size_t operator()(std::uint32_t row) const noexcept;
};

struct RowEq {
    const Relation* rel;
    bool operator()(std::uint32_t a, std::uint32_t b) const noexcept;
};

// Append-only tuple store. Rows [delta_begin, delta_end) are the facts
// derived in the previous round; rows past delta_end are being derived now.
struct Relation {
    explicit Relation(std::size_t arity_)
        : arity(arity_), index(arity_), dedup(16, RowHash{this}, RowEq{this}) {}

    Relation(const Relation&) = delete;
    Relation& operator=(const Relation&) = delete;

    const std::uint32_t* row(std::uint32_t r) const noexcept { return data.data() + std::size_t(r) * arity; }

    // Returns true when the tuple was not present before.
    bool insert(const std::uint32_t* tuple) {
        const auto id = static_cast<std::uint32_t>(rows);
        data.insert(data.end(), tuple, tuple + arity);
        ++rows;
        if (dedup.find(id) != dedup.end()) {
            data.resize(data.size() - arity);
            --rows;
            return false;
        }
        dedup.insert(id);
        for (std::size_t c = 0; c < arity; ++c) index[c][tuple[c]].push_back(id);
        return true;
    }

    bool contains(const std::vector<std::uint32_t>& tuple) const {
        if (arity == 0) return rows > 0;
        auto it = index[0].find(tuple[0]);
        if (it == index[0].end()) return false;
        for (auto r : it->second)
            if (std::equal(tuple.begin(), tuple.end(), row(r))) return true;
        return false;
    }

    std::size_t arity;
    std::size_t rows = 0;
    std::vector<std::uint32_t> data;
    std::vector<std::unordered_map<std::uint32_t, std::vector<std::uint32_t>>> index;
    std::unordered_set<std::uint32_t, RowHash, RowEq> dedup;
    std::size_t delta_begin = 0;
    std::size_t delta_end = 0;
};

std::size_t RowHash::operator()(std::uint32_t r) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    const auto* p = rel->row(r);
    for (std::size_t i = 0; i < rel->arity; ++i) h = (h ^ p[i]) * 0x100000001b3ull + (h >> 29);
    return h;
}

bool RowEq::operator()(std::uint32_t a, std::uint32_t b) const noexcept {
    return std::equal(rel->row(a), rel->row(a) + rel->arity, rel->row(b));
}

struct Slot {
    bool is_var;
    std::uint32_t id; // variable index or constant symbol
};

struct BodyAtom {
    std::uint32_t rel;
    std::vector<Slot> slots;
};

struct Rule {
    std::uint32_t head_rel = 0;
    std::vector<Slot> head;
    std::vector<BodyAtom> body;
    std::uint32_t n_vars = 0;
    // plans[i]: join order when body atom i reads the delta.
    std::vector<std::vector<std::uint32_t>> plans;
};

std::vector<std::uint32_t> plan_join(const Rule& r, std::uint32_t first) {
    std::vector<std::uint32_t> order{first};
    std::vector<bool> bound(r.n_vars, false);
    std::vector<bool> used(r.body.size(), false);
    auto bind_all = [&](std::uint32_t i) {
        used[i] = true;
        for (const auto& s : r.body[i].slots)
            if (s.is_var) bound[s.id] = true;
    };
    bind_all(first);
    while (order.size() < r.body.size()) {
        std::uint32_t best = 0;
        int best_score = -1;
        for (std::uint32_t i = 0; i < r.body.size(); ++i) {
            if (used[i]) continue;
            int score = 0;
            for (const auto& s : r.body[i].slots)
                if (!s.is_var || bound[s.id]) ++score;
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        order.push_back(best);
        bind_all(best);
    }
    return order;
}

} // namespace

struct Model::Impl {
    std::unordered_map<std::string, std::uint32_t> constants;
    std::unordered_map<std::string, std::uint32_t> predicates;
    std::vector<std::string> constant_names;
    std::vector<std::string> predicate_names;
    std::vector<std::unique_ptr<Relation>> relations;
    std::size_t total = 0;
    std::size_t iterations = 0;

    std::uint32_t intern_constant(const std::string& name) {
        auto [it, inserted] = constants.try_emplace(name, static_cast<std::uint32_t>(constant_names.size()));
        if (inserted) constant_names.push_back(name);
        return it->second;
    }

    std::uint32_t intern_predicate(const Atom& a) {
        auto [it, inserted] = predicates.try_emplace(a.predicate, static_cast<std::uint32_t>(relations.size()));
        if (inserted) {
            predicate_names.push_back(a.predicate);
            relations.push_back(std::make_unique<Relation>(a.arity()));
        } else if (relations[it->second]->arity != a.arity()) {
            throw std::invalid_argument("predicate '" + a.predicate + "' used with inconsistent arity");
        }
        return it->second;
    }
};

Model::Model() : impl_(std::make_unique<Impl>()) {}
Model::Model(Model&&) noexcept = default;
Model& Model::operator=(Model&&) noexcept = default;
Model::~Model() = default;

std::size_t Model::size() const noexcept { return impl_->total; }
std::size_t Model::iterations() const noexcept { return impl_->iterations; }

bool Model::contains(const Atom& ground) const {
    auto p = impl_->predicates.find(ground.predicate);
    if (p == impl_->predicates.end()) return false;
    const Relation& rel = *impl_->relations[p->second];
    if (rel.arity != ground.arity()) return false;
    std::vector<std::uint32_t> tuple;
    tuple.reserve(ground.arity());
    for (const auto& t : ground.args) {
        if (!t.is_constant()) return false;
        auto c = impl_->constants.find(t.name);
        if (c == impl_->constants.end()) return false;
        tuple.push_back(c->second);
    }
    return rel.contains(tuple);
}

std::set<Atom> Model::atoms() const {
    std::set<Atom> out;
    for (std::size_t r = 0; r < impl_->relations.size(); ++r) {
        const Relation& rel = *impl_->relations[r];
        for (std::uint32_t row = 0; row < rel.rows; ++row) {
            Atom a;
            a.predicate = impl_->predicate_names[r];
            for (std::size_t c = 0; c < rel.arity; ++c) a.args.push_back(Term::constant(impl_->constant_names[rel.row(row)[c]]));
            out.insert(std::move(a));
        }
    }
    return out;
}

namespace {

class Engine {
public:
    Engine(Model::Impl& m, const EvalBudget& budget)
        : m_(m), budget_(budget), max_steps_(budget.max_derived_atoms * kJoinStepsPerAtom) {}

    void load(const Program& p) {
        for (const auto& clause : p.clauses) {
            if (clause.is_fact()) {
                if (!clause.head.is_ground()) throw std::invalid_argument("non-ground fact: " + print_atom(clause.head));
                const auto rel = m_.intern_predicate(clause.head);
                std::vector<std::uint32_t> tuple;
                for (const auto& t : clause.head.args) tuple.push_back(m_.intern_constant(t.name));
                add(rel, tuple.data());
                continue;
            }
            for (const auto& conj : clause.body) compile(clause.head, conj);
        }
    }

    void run() {
        for (auto& rel : m_.relations) {
            rel->delta_begin = 0;
            rel->delta_end = rel->rows;
        }
        while (has_delta()) {
            if (++m_.iterations > budget_.max_iterations)
                throw BudgetExceeded("iteration limit of " + std::to_string(budget_.max_iterations) + " exceeded");
            for (const auto& rule : rules_)
                for (std::uint32_t i = 0; i < rule.body.size(); ++i) {
                    const Relation& d = *m_.relations[rule.body[i].rel];
                    if (d.delta_begin < d.delta_end) fire(rule, i);
                }
            for (auto& rel : m_.relations) {
                rel->delta_begin = rel->delta_end;
                rel->delta_end = rel->rows;
            }
        }
    }

private:
    bool has_delta() const {
        for (const auto& rel : m_.relations)
            if (rel->delta_begin < rel->delta_end) return true;
        return false;
    }

    void add(std::uint32_t rel, const std::uint32_t* tuple) {
        if (m_.relations[rel]->insert(tuple) && ++m_.total > budget_.max_derived_atoms)
            throw BudgetExceeded("derived-atom limit of " + std::to_string(budget_.max_derived_atoms) + " exceeded");
    }

    void compile(const Atom& head, const Conjunction& conj) {
        if (conj.size() > kMaxBodyAtoms)
            throw BudgetExceeded("rule body has " + std::to_string(conj.size()) + " atoms; limit is " +
                                 std::to_string(kMaxBodyAtoms));
        Rule r;
        std::unordered_map<std::string, std::uint32_t> vars;
        auto slot = [&](const Term& t) {
            if (t.is_constant()) return Slot{false, m_.intern_constant(t.name)};
            auto [it, inserted] = vars.try_emplace(t.name, static_cast<std::uint32_t>(vars.size()));
            return Slot{true, it->second};
        };
        for (const auto& a : conj) {
            BodyAtom b{m_.intern_predicate(a), {}};
            for (const auto& t : a.args) b.slots.push_back(slot(t));
            r.body.push_back(std::move(b));
        }
        r.head_rel = m_.intern_predicate(head);
        for (const auto& t : head.args) {
            if (t.is_variable() && !vars.count(t.name))
                throw std::invalid_argument("rule is not range-restricted: head variable " + t.name);
            r.head.push_back(slot(t));
        }
        r.n_vars = static_cast<std::uint32_t>(vars.size());
        for (std::uint32_t i = 0; i < r.body.size(); ++i) r.plans.push_back(plan_join(r, i));
        rules_.push_back(std::move(r));
    }

    void fire(const Rule& rule, std::uint32_t delta_pos) {
        ranges_.assign(rule.body.size(), {0, 0});
        for (std::uint32_t j = 0; j < rule.body.size(); ++j) {
            const Relation& rel = *m_.relations[rule.body[j].rel];
            if (j < delta_pos)
                ranges_[j] = {0, rel.delta_begin};
            else if (j == delta_pos)
                ranges_[j] = {rel.delta_begin, rel.delta_end};
            else
                ranges_[j] = {0, rel.delta_end};
        }
        bindings_.assign(rule.n_vars, kUnbound);
        head_.resize(rule.head.size());
        join(rule, rule.plans[delta_pos], 0);
    }

    void join(const Rule& rule, const std::vector<std::uint32_t>& order, std::size_t k) {
        if (k == order.size()) {
            for (std::size_t c = 0; c < rule.head.size(); ++c) {
                const Slot& s = rule.head[c];
                head_[c] = s.is_var ? bindings_[s.id] : s.id;
            }
            add(rule.head_rel, head_.data());
            return;
        }
        const std::uint32_t bi = order[k];
        const BodyAtom& atom = rule.body[bi];
        const Relation& rel = *m_.relations[atom.rel];
        const auto [lo, hi] = ranges_[bi];
        if (lo >= hi) return;

        // Probe the index of the first bound column, if any.
        const std::vector<std::uint32_t>* ids = nullptr;
        for (std::size_t c = 0; c < atom.slots.size(); ++c) {
            const Slot& s = atom.slots[c];
            const std::uint32_t v = s.is_var ? bindings_[s.id] : s.id;
            if (v == kUnbound) continue;
            auto it = rel.index[c].find(v);
            if (it == rel.index[c].end()) return;
            ids = &it->second;
            break;
        }

        auto visit = [&](std::uint32_t row) {
            if (++steps_ > max_steps_) throw BudgetExceeded("join work limit exceeded");
            const std::size_t mark = trail_.size();
            bool ok = true;
            const std::uint32_t* tuple = rel.row(row);
            for (std::size_t c = 0; c < atom.slots.size() && ok; ++c) {
                const Slot& s = atom.slots[c];
                if (!s.is_var) {
                    ok = tuple[c] == s.id;
                } else if (bindings_[s.id] == kUnbound) {
                    bindings_[s.id] = tuple[c];
                    trail_.push_back(s.id);
                } else {
                    ok = bindings_[s.id] == tuple[c];
                }
            }
            if (ok) join(rule, order, k + 1);
            while (trail_.size() > mark) {
                bindings_[trail_.back()] = kUnbound;
                trail_.pop_back();
            }
        };

        if (ids) {
            auto first = std::lower_bound(ids->begin(), ids->end(), static_cast<std::uint32_t>(lo));
            // Index vectors may grow while recursing; walk by position.
            for (std::size_t p = static_cast<std::size_t>(first - ids->begin()); p < ids->size() && (*ids)[p] < hi; ++p)
                visit((*ids)[p]);
        } else {
            for (std::size_t row = lo; row < hi; ++row) visit(static_cast<std::uint32_t>(row));
        }
    }

    Model::Impl& m_;
    EvalBudget budget_;
    std::size_t max_steps_;
    std::size_t steps_ = 0;
    std::vector<Rule> rules_;
    std::vector<std::pair<std::size_t, std::size_t>> ranges_;
    std::vector<std::uint32_t> bindings_;
    std::vector<std::uint32_t> trail_;
    std::vector<std::uint32_t> head_;
};

} // namespace

Model evaluate(const Program& p, const EvalBudget& budget) {
    if (budget.max_derived_atoms == 0 || budget.max_iterations == 0)
        throw std::invalid_argument("EvalBudget limits must be strictly positive");
    Model model;
    Engine engine(*model.impl_, budget);
    engine.load(p);
    engine.run();
    return model;
}

std::set<Atom> least_model(const Program& p, const EvalBudget& budget) {
    return evaluate(p, budget).atoms();
}

bool entails(const Program& p, const Atom& query, const EvalBudget& budget) {
    if (!query.is_ground()) throw std::invalid_argument("entails: query must be ground");
    return evaluate(p, budget).contains(query);
}

} // namespace ipt::logic
