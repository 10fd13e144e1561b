#include "ipt/detect.hpp"

#include "ipt/detail/rng.hpp"

namespace ipt::detect {

Perturbation Perturbation::inverse() const {
    Perturbation inv;
    inv.seed = seed;
    for (const auto& [from, to] : mapping) inv.mapping.emplace(to, from);
    return inv;
}

Perturbation make_perturbation(const tasks::Task& t, std::uint64_t seed) {
    const auto objects = t.object_constants();
    const auto taken = t.all_constants();

    std::vector<std::string> fresh;
    fresh.reserve(objects.size());
    for (std::size_t k = 0; fresh.size() < objects.size(); ++k) {
        std::string name = "obj_" + std::to_string(k);
        if (!taken.count(name)) fresh.push_back(std::move(name));
    }
    detail::Rng rng(seed);
    rng.shuffle(fresh);

    Perturbation phi;
    phi.seed = seed;
    std::size_t i = 0;
    for (const auto& o : objects) phi.mapping.emplace(o, fresh[i++]);
    return phi;
}

tasks::Task apply_perturbation(const tasks::Task& t, const Perturbation& phi) {
    const auto objects = t.object_constants();
    std::set<std::string> domain, range;
    for (const auto& [from, to] : phi.mapping) {
        domain.insert(from);
        if (!range.insert(to).second) throw DomainMismatch("perturbation is not injective: two constants map to '" + to + "'");
        if (!logic::is_constant_name(to)) throw DomainMismatch("perturbation maps to invalid constant '" + to + "'");
    }
    if (domain != objects) {
        std::string detail;
        for (const auto& o : objects)
            if (!domain.count(o)) detail += " missing:" + o;
        for (const auto& d : domain)
            if (!objects.count(d)) detail += " extra:" + d;
        throw DomainMismatch("perturbation domain differs from the task's object constants:" + detail);
    }
    for (const auto& c : t.all_constants())
        if (!objects.count(c) && range.count(c))
            throw DomainMismatch("perturbation image '" + c + "' collides with an attribute constant");

    tasks::Task out = t;
    out.background = logic::rename_constants(t.background, phi.mapping);
    for (auto& a : out.positives) a = logic::rename_constants(a, phi.mapping);
    for (auto& a : out.negatives) a = logic::rename_constants(a, phi.mapping);
    return out;
}

} // namespace ipt::detect
