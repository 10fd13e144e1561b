#include "ipt/harness.hpp"

#include <tuple>

namespace ipt::harness {

namespace {

using Key = std::tuple<std::string, std::string, int, std::string>;

void add(std::map<Key, GroupReport>& rows, const Key& key, const GroupReport& delta) {
    auto [it, inserted] = rows.try_emplace(key);
    GroupReport& row = it->second;
    if (inserted) {
        row.model_name = std::get<0>(key);
        row.effort_label = std::get<1>(key);
        row.group = std::get<3>(key);
    }
    row.n_tasks += delta.n_tasks;
    row.n_iso_passed += delta.n_iso_passed;
    row.n_shortcuts += delta.n_shortcuts;
    row.n_syntax_ok += delta.n_syntax_ok;
}

std::vector<GroupReport> flatten(std::map<Key, GroupReport>&& rows) {
    std::vector<GroupReport> out;
    out.reserve(rows.size());
    for (auto& [key, row] : rows) out.push_back(std::move(row));
    return out;
}

double ratio(std::size_t num, std::size_t den) { return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0; }

} // namespace

Grouping parse_grouping(std::string_view s) {
    if (s == "tier") return Grouping::tier;
    if (s == "level") return Grouping::level;
    if (s == "effort") return Grouping::effort;
    throw std::invalid_argument("unknown grouping '" + std::string(s) + "' (tier, level, effort)");
}

std::string_view grouping_name(Grouping g) noexcept {
    switch (g) {
    case Grouping::tier: return "tier";
    case Grouping::level: return "level";
    case Grouping::effort: return "effort";
    }
    return "?";
}

double GroupReport::accuracy_iso() const noexcept { return 100.0 * ratio(n_iso_passed, n_tasks); }
double GroupReport::shortcut_rate() const noexcept { return ratio(n_shortcuts, n_tasks); }
double GroupReport::syntax_rate() const noexcept { return 100.0 * ratio(n_syntax_ok, n_tasks); }

std::vector<GroupReport> aggregate(const std::vector<EvalRecord>& records, Grouping grouping) {
    std::map<Key, GroupReport> rows;
    for (const auto& r : records) {
        const std::string effort = r.effort_label.value_or("-");
        int order = 0;
        std::string group;
        switch (grouping) {
        case Grouping::tier: {
            const auto tier = tasks::tier_of(r.level);
            order = static_cast<int>(tier);
            group = tasks::tier_name(tier);
            break;
        }
        case Grouping::level:
            order = r.level;
            group = std::to_string(r.level);
            break;
        case Grouping::effort:
            group = effort;
            break;
        }
        GroupReport delta;
        delta.n_tasks = 1;
        delta.n_iso_passed = r.result.iso_passed() ? 1 : 0;
        delta.n_shortcuts = r.result.shortcut ? 1 : 0;
        delta.n_syntax_ok = r.result.ext.syntax_ok ? 1 : 0;
        add(rows, {r.model_name, effort, order, group}, delta);
    }
    return flatten(std::move(rows));
}

std::vector<GroupReport> levels_to_tiers(const std::vector<GroupReport>& level_rows) {
    std::map<Key, GroupReport> rows;
    for (const auto& r : level_rows) {
        const auto tier = tasks::tier_of(std::stoi(r.group));
        add(rows, {r.model_name, r.effort_label, static_cast<int>(tier), std::string(tasks::tier_name(tier))}, r);
    }
    return flatten(std::move(rows));
}

} // namespace ipt::harness
