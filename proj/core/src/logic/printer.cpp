#include "ipt/logic.hpp"

namespace ipt::logic {

std::string print_term(const Term& t) {
    return t.name;
}

std::string print_atom(const Atom& a) {
    std::string out = a.predicate;
    if (a.args.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ',';
        out += a.args[i].name;
    }
    out += ')';
    return out;
}

std::string print_clause(const Clause& c) {
    std::string out = print_atom(c.head);
    if (!c.is_fact()) {
        out += " :- ";
        for (std::size_t d = 0; d < c.body.size(); ++d) {
            if (d) out += "; ";
            const auto& conj = c.body[d];
            for (std::size_t i = 0; i < conj.size(); ++i) {
                if (i) out += ", ";
                out += print_atom(conj[i]);
            }
        }
    }
    out += '.';
    return out;
}

std::string print_program(const Program& p) {
    std::string out;
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
        if (i) out += '\n';
        out += print_clause(p.clauses[i]);
    }
    return out;
}

} // namespace ipt::logic
