#include "ipt/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "ipt/detect.hpp"

namespace ipt::oracle {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct Arg {
    bool is_var;
    std::uint32_t id; // variable index, or index into Space::constants

    bool operator==(const Arg&) const = default;
};

struct Lit {
    std::uint32_t pred;
    std::vector<Arg> args;

    bool operator==(const Lit&) const = default;
};

using Body = std::vector<Lit>;

std::string var_name(std::uint32_t v) {
    if (v == 0) return "T";
    if (v <= 17) return std::string(1, static_cast<char>('C' + v - 1)); // C..S
    return "V" + std::to_string(v);
}

std::uint32_t count_vars(const Body& b) {
    std::uint32_t n = 1;
    for (const auto& l : b)
        for (const auto& a : l.args)
            if (a.is_var) n = std::max(n, a.id + 1);
    return n;
}

// Search space flattened to indices.
struct Space {
    const SearchSpace& spec;
    std::vector<std::string> constants;
    std::vector<std::vector<std::vector<std::uint32_t>>> vocab; // [pred][arg] -> constant ids

    Space(const tasks::Task& t, const SearchSpace& s) : spec(s) {
        std::unordered_map<std::string, std::uint32_t> ids;
        for (const auto& p : s.candidate_predicates) {
            std::vector<std::vector<std::uint32_t>> per_arg(p.arity());
            auto it = t.schema.attribute_vocab.find(p.name);
            for (std::size_t i = 0; i < p.arity(); ++i) {
                if (p.sorts[i] != tasks::Sort::attribute || it == t.schema.attribute_vocab.end()) continue;
                for (const auto& v : it->second) {
                    auto [c, inserted] = ids.try_emplace(v, static_cast<std::uint32_t>(constants.size()));
                    if (inserted) constants.push_back(v);
                    per_arg[i].push_back(c->second);
                }
            }
            vocab.push_back(std::move(per_arg));
        }
    }

    std::string print(const Lit& l) const {
        std::string out = spec.candidate_predicates[l.pred].name + "(";
        for (std::size_t i = 0; i < l.args.size(); ++i) {
            if (i) out += ',';
            out += l.args[i].is_var ? var_name(l.args[i].id) : constants[l.args[i].id];
        }
        return out + ")";
    }

    std::string print(const Body& b) const {
        std::string out;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (i) out += ", ";
            out += print(b[i]);
        }
        return out;
    }

    logic::Clause clause(const tasks::Task& t, const Body& b) const {
        logic::Clause c;
        c.head = logic::Atom{t.schema.target_predicate, {logic::Term::var("T")}};
        logic::Conjunction conj;
        for (const auto& l : b) {
            logic::Atom a{spec.candidate_predicates[l.pred].name, {}};
            for (const auto& arg : l.args)
                a.args.push_back(arg.is_var ? logic::Term::var(var_name(arg.id)) : logic::Term::constant(constants[arg.id]));
            conj.push_back(std::move(a));
        }
        c.body.push_back(std::move(conj));
        return c;
    }

    // Variable renaming (T fixed) and literal order giving the smallest text.
    std::pair<std::string, Body> canonical(const Body& b) const {
        const std::uint32_t nv = count_vars(b);
        std::vector<std::uint32_t> perm(nv);
        std::iota(perm.begin(), perm.end(), 0u);
        std::string best_text;
        Body best;
        bool first = true;
        do {
            std::vector<std::pair<std::pair<std::uint32_t, std::string>, Lit>> keyed;
            for (const auto& l : b) {
                Lit r = l;
                std::uint32_t lowest = kNone;
                for (auto& a : r.args)
                    if (a.is_var) {
                        a.id = perm[a.id];
                        lowest = std::min(lowest, a.id);
                    }
                keyed.push_back({{lowest, print(r)}, std::move(r)});
            }
            std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
            std::string text;
            for (std::size_t i = 0; i < keyed.size(); ++i) {
                if (i) text += ", ";
                text += keyed[i].first.second;
            }
            if (first || text < best_text) {
                first = false;
                best_text = std::move(text);
                best.clear();
                for (auto& k : keyed) best.push_back(std::move(k.second));
            }
        } while (std::next_permutation(perm.begin() + 1, perm.end()));
        return {std::move(best_text), std::move(best)};
    }

    // All literals that can extend `b` while keeping it connected and within
    // the variable budget.
    std::vector<Lit> extensions(const Body& b) const {
        const std::uint32_t nv = b.empty() ? 1 : count_vars(b);
        std::vector<Lit> out;
        for (std::uint32_t p = 0; p < spec.candidate_predicates.size(); ++p) {
            const auto& pred = spec.candidate_predicates[p];
            Lit lit{p, std::vector<Arg>(pred.arity())};
            auto fill = [&](auto&& self, std::size_t i, std::uint32_t fresh, bool linked) -> void {
                if (i == pred.arity()) {
                    if (linked && std::find(b.begin(), b.end(), lit) == b.end()) out.push_back(lit);
                    return;
                }
                if (pred.sorts[i] == tasks::Sort::attribute) {
                    for (auto c : vocab[p][i]) {
                        lit.args[i] = Arg{false, c};
                        self(self, i + 1, fresh, linked);
                    }
                    return;
                }
                for (std::uint32_t v = 0; v < nv + fresh; ++v) {
                    lit.args[i] = Arg{true, v};
                    self(self, i + 1, fresh, linked || v < nv);
                }
                if (nv + fresh < spec.variable_budget) {
                    lit.args[i] = Arg{true, nv + fresh};
                    self(self, i + 1, fresh + 1, linked);
                }
            };
            fill(fill, 0, 0, false);
        }
        return out;
    }
};

// Background relations indexed for the candidate predicates.
class Coverage {
public:
    Coverage(const tasks::Task& t, const Space& space) : space_(space) {
        std::unordered_map<std::string, std::uint32_t> pred_ids;
        for (std::uint32_t p = 0; p < space.spec.candidate_predicates.size(); ++p) {
            const auto& spec = space.spec.candidate_predicates[p];
            pred_ids.emplace(spec.name, p);
            relations_.push_back(Relation{spec.arity(), {}, std::vector<Index>(spec.arity())});
        }
        for (const auto& c : t.background.clauses) {
            auto it = pred_ids.find(c.head.predicate);
            if (it == pred_ids.end() || !c.is_fact()) continue;
            Relation& rel = relations_[it->second];
            if (rel.arity != c.head.arity()) continue;
            const auto row = static_cast<std::uint32_t>(rel.data.size() / std::max<std::size_t>(rel.arity, 1));
            for (std::size_t i = 0; i < rel.arity; ++i) {
                const auto id = intern(c.head.args[i].name);
                rel.data.push_back(id);
                rel.index[i][id].push_back(row);
            }
            if (rel.arity == 0) rel.nullary = true;
        }
        for (const auto& name : space.constants) constant_ids_.push_back(lookup(name));
    }

    std::uint32_t lookup(const std::string& name) const {
        auto it = ids_.find(name);
        return it == ids_.end() ? kNone : it->second;
    }

    bool covers(const Body& b, std::uint32_t train) {
        bindings_.assign(space_.spec.variable_budget + 1, kNone);
        done_.assign(b.size(), false);
        bindings_[0] = train;
        return match(b, 0);
    }

private:
    using Index = std::unordered_map<std::uint32_t, std::vector<std::uint32_t>>;
    struct Relation {
        std::size_t arity;
        std::vector<std::uint32_t> data;
        std::vector<Index> index;
        bool nullary = false;
    };

    std::uint32_t intern(const std::string& name) {
        auto [it, inserted] = ids_.try_emplace(name, static_cast<std::uint32_t>(ids_.size()));
        return it->second;
    }

    std::uint32_t value(const Arg& a) const { return a.is_var ? bindings_[a.id] : constant_ids_[a.id]; }

    bool match(const Body& b, std::size_t matched) {
        if (matched == b.size()) return true;
        // Most-bound literal next.
        std::size_t pick = 0;
        int best = -1;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (done_[i]) continue;
            int bound = 0;
            for (const auto& a : b[i].args)
                if (!a.is_var || bindings_[a.id] != kNone) ++bound;
            if (bound > best) {
                best = bound;
                pick = i;
            }
        }
        const Lit& lit = b[pick];
        const Relation& rel = relations_[lit.pred];
        if (rel.arity == 0) {
            if (!rel.nullary) return false;
            done_[pick] = true;
            const bool ok = match(b, matched + 1);
            done_[pick] = false;
            return ok;
        }

        const std::vector<std::uint32_t>* rows = nullptr;
        for (std::size_t i = 0; i < lit.args.size(); ++i) {
            const auto v = value(lit.args[i]);
            if (!lit.args[i].is_var && v == kNone) return false; // constant absent from background
            if (v == kNone) continue;
            auto it = rel.index[i].find(v);
            if (it == rel.index[i].end()) return false;
            rows = &it->second;
            break;
        }
        const std::size_t n_rows = rel.data.size() / rel.arity;

        done_[pick] = true;
        auto attempt = [&](std::uint32_t row) {
            const std::uint32_t* tuple = rel.data.data() + std::size_t(row) * rel.arity;
            std::uint32_t newly[8];
            std::size_t n_new = 0;
            bool ok = true;
            for (std::size_t i = 0; i < lit.args.size() && ok; ++i) {
                const Arg& a = lit.args[i];
                const auto v = value(a);
                if (v == kNone) {
                    bindings_[a.id] = tuple[i];
                    newly[n_new++] = a.id;
                } else {
                    ok = v == tuple[i];
                }
            }
            ok = ok && match(b, matched + 1);
            for (std::size_t k = 0; k < n_new; ++k) bindings_[newly[k]] = kNone;
            return ok;
        };
        bool found = false;
        if (rows) {
            for (auto r : *rows)
                if ((found = attempt(r))) break;
        } else {
            for (std::uint32_t r = 0; r < n_rows && !found; ++r) found = attempt(r);
        }
        done_[pick] = false;
        return found;
    }

    const Space& space_;
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<Relation> relations_;
    std::vector<std::uint32_t> constant_ids_;
    std::vector<std::uint32_t> bindings_;
    std::vector<bool> done_;
};

struct Candidate {
    std::string text;
    Body body;
};

} // namespace

SearchSpace SearchSpace::for_task(const tasks::Task& t, std::size_t max_body_literals) {
    SearchSpace s;
    s.max_body_literals = max_body_literals;
    s.candidate_predicates = t.schema.predicates;
    return s;
}

logic::Clause induce_min_rule(const tasks::Task& t, const SearchSpace& spec, const logic::EvalBudget& budget) {
    if (spec.max_body_literals == 0 || spec.variable_budget == 0) throw std::invalid_argument("search space counts must be positive");
    if (spec.variable_budget > 8) throw std::invalid_argument("variable budget above 8 is not supported");
    const Space space(t, spec);
    Coverage coverage(t, space);

    std::vector<std::uint32_t> pos, neg;
    for (const auto& a : t.positives) pos.push_back(a.args.empty() ? kNone : coverage.lookup(a.args[0].name));
    for (const auto& a : t.negatives) neg.push_back(a.args.empty() ? kNone : coverage.lookup(a.args[0].name));

    auto complete = [&](const Body& b) {
        for (auto x : pos)
            if (x == kNone || !coverage.covers(b, x)) return false;
        return true;
    };
    auto consistent = [&](const Body& b) {
        for (auto x : neg)
            if (x != kNone && coverage.covers(b, x)) return false;
        return true;
    };

    // Refinement only shrinks coverage, so bodies that miss a positive are
    // never extended; every complete body has a complete connected parent.
    std::vector<Body> frontier{Body{}};
    std::unordered_set<std::string> seen;
    for (std::size_t length = 1; length <= spec.max_body_literals && !frontier.empty(); ++length) {
        std::vector<Candidate> complete_children;
        for (const Body& parent : frontier) {
            for (const Lit& lit : space.extensions(parent)) {
                Body child = parent;
                child.push_back(lit);
                auto [text, canon] = space.canonical(child);
                if (!seen.insert(text).second) continue;
                if (complete(canon)) complete_children.push_back({std::move(text), std::move(canon)});
            }
        }
        std::sort(complete_children.begin(), complete_children.end(),
                  [](const Candidate& a, const Candidate& b) { return a.text < b.text; });
        for (const auto& c : complete_children) {
            if (!consistent(c.body)) continue;
            logic::Clause rule = space.clause(t, c.body);
            const auto outcome = detect::verify(t, logic::print_clause(rule), budget);
            if (!outcome.passed)
                throw std::logic_error("coverage index disagrees with verifier on " + logic::print_clause(rule));
            return rule;
        }
        frontier.clear();
        for (auto& c : complete_children) frontier.push_back(std::move(c.body));
    }
    throw NotFound("no rule with at most " + std::to_string(spec.max_body_literals) + " body literals passes task '" +
                   t.id + "'");
}

std::vector<logic::Clause> enumerate_candidates(const tasks::Task& t, const SearchSpace& spec, std::size_t length) {
    const Space space(t, spec);
    std::vector<Body> level{Body{}};
    std::vector<Candidate> current;
    for (std::size_t l = 1; l <= length; ++l) {
        std::unordered_set<std::string> seen;
        current.clear();
        for (const Body& parent : level)
            for (const Lit& lit : space.extensions(parent)) {
                Body child = parent;
                child.push_back(lit);
                auto [text, canon] = space.canonical(child);
                if (seen.insert(text).second) current.push_back({std::move(text), std::move(canon)});
            }
        level.clear();
        for (const auto& c : current) level.push_back(c.body);
    }
    std::sort(current.begin(), current.end(), [](const Candidate& a, const Candidate& b) { return a.text < b.text; });
    std::vector<logic::Clause> out;
    for (const auto& c : current) out.push_back(space.clause(t, c.body));
    return out;
}

} // namespace ipt::oracle
