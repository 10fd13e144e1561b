#include "ipt/tasks.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace ipt::tasks {

namespace {

constexpr std::string_view kMagic = "ipt-task 1";
constexpr std::string_view kJsonFormat = "ipt-task/1";

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

Sort parse_sort(std::string_view s) {
    s = trim(s);
    if (s == "object") return Sort::object;
    if (s == "attribute") return Sort::attribute;
    throw TaskError("unknown sort '" + std::string(s) + "'");
}

std::string predicate_line(const Schema& schema, const PredicateSpec& p) {
    std::string out = std::string(p.name) + "(";
    for (std::size_t i = 0; i < p.sorts.size(); ++i) {
        if (i) out += ',';
        out += sort_name(p.sorts[i]);
    }
    out += ')';
    if (auto it = schema.attribute_vocab.find(p.name); it != schema.attribute_vocab.end()) {
        out += " =";
        for (const auto& v : it->second) out += " " + v;
    }
    return out;
}

// "name(sort,sort) = v1 v2"
void parse_predicate_line(std::string_view line, Schema& schema) {
    std::string_view decl = line;
    std::string_view vocab;
    if (auto eq = line.find('='); eq != std::string_view::npos) {
        decl = line.substr(0, eq);
        vocab = line.substr(eq + 1);
    }
    decl = trim(decl);
    const auto open = decl.find('(');
    if (open == std::string_view::npos || decl.back() != ')') throw TaskError("malformed predicate header: " + std::string(line));
    PredicateSpec p;
    p.name = std::string(trim(decl.substr(0, open)));
    std::string_view sorts = decl.substr(open + 1, decl.size() - open - 2);
    while (!sorts.empty()) {
        const auto comma = sorts.find(',');
        p.sorts.push_back(parse_sort(sorts.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        sorts.remove_prefix(comma + 1);
    }
    if (!vocab.empty()) {
        auto& values = schema.attribute_vocab[p.name];
        for (auto v : split_ws(vocab)) values.emplace_back(v);
    }
    schema.predicates.push_back(std::move(p));
}

int parse_level(std::string_view s) {
    int level = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), level);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw TaskError("malformed level header '" + std::string(s) + "'");
    return level;
}

void push_unique(std::vector<logic::Atom>& v, logic::Atom a) {
    if (std::find(v.begin(), v.end(), a) == v.end()) v.push_back(std::move(a));
}

// Splits facts into background and examples by predicate.
void distribute(Task& t, const logic::Program& facts) {
    for (const auto& c : facts.clauses) {
        if (!c.is_fact()) throw TaskError("task files contain facts only: " + logic::print_clause(c));
        if (c.head.predicate == t.schema.target_predicate)
            push_unique(t.positives, c.head);
        else if (c.head.predicate == t.schema.negative_predicate)
            push_unique(t.negatives, c.head);
        else
            t.background.clauses.push_back(c);
    }
}

} // namespace

std::string serialize_task(const Task& t) {
    std::ostringstream out;
    out << "% " << kMagic << "\n";
    out << "% id: " << t.id << "\n";
    out << "% level: " << t.level << "\n";
    out << "% target: " << t.schema.target_predicate << "\n";
    out << "% negative: " << t.schema.negative_predicate << "\n";
    for (const auto& p : t.schema.predicates) out << "% predicate: " << predicate_line(t.schema, p) << "\n";
    out << "% background\n";
    for (const auto& c : t.background.clauses) out << logic::print_clause(c) << "\n";
    out << "% examples\n";
    for (const auto& a : t.positives) out << logic::print_atom(a) << ".\n";
    for (const auto& a : t.negatives) out << logic::print_atom(a) << ".\n";
    return out.str();
}

Task parse_task(std::string_view text) {
    Task t;
    t.id = "task";
    bool have_predicates = false;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty() || line.front() != '%') continue;
        line = trim(line.substr(1));
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) continue;
        const std::string_view key = trim(line.substr(0, colon));
        const std::string_view value = trim(line.substr(colon + 1));
        if (key == "id") {
            t.id = std::string(value);
        } else if (key == "level") {
            t.level = parse_level(value);
        } else if (key == "target") {
            t.schema.target_predicate = std::string(value);
        } else if (key == "negative") {
            t.schema.negative_predicate = std::string(value);
        } else if (key == "predicate") {
            have_predicates = true;
            parse_predicate_line(value, t.schema);
        }
    }
    if (!have_predicates) {
        Schema defaults = Schema::trains();
        t.schema.predicates = std::move(defaults.predicates);
        t.schema.attribute_vocab = std::move(defaults.attribute_vocab);
    }

    distribute(t, logic::parse_program(text));
    t.validate();
    return t;
}

nlohmann::json task_to_json(const Task& t) {
    nlohmann::json preds = nlohmann::json::array();
    for (const auto& p : t.schema.predicates) {
        nlohmann::json sorts = nlohmann::json::array();
        for (auto s : p.sorts) sorts.push_back(std::string(sort_name(s)));
        preds.push_back({{"name", p.name}, {"sorts", sorts}});
    }
    nlohmann::json vocab = nlohmann::json::object();
    for (const auto& [name, values] : t.schema.attribute_vocab) vocab[name] = values;

    auto atoms = [](const std::vector<logic::Atom>& v) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& a : v) out.push_back(logic::print_atom(a));
        return out;
    };
    nlohmann::json background = nlohmann::json::array();
    for (const auto& c : t.background.clauses) background.push_back(logic::print_atom(c.head));

    return {
        {"format", kJsonFormat},
        {"id", t.id},
        {"level", t.level},
        {"schema",
         {{"target_predicate", t.schema.target_predicate},
          {"negative_predicate", t.schema.negative_predicate},
          {"predicates", preds},
          {"attribute_vocab", vocab}}},
        {"background", background},
        {"positives", atoms(t.positives)},
        {"negatives", atoms(t.negatives)},
    };
}

Task task_from_json(const nlohmann::json& j) {
    try {
        Task t;
        t.id = j.at("id").get<std::string>();
        t.level = j.at("level").get<int>();
        const auto& s = j.at("schema");
        t.schema.target_predicate = s.value("target_predicate", std::string("eastbound"));
        t.schema.negative_predicate = s.value("negative_predicate", std::string("westbound"));
        for (const auto& p : s.at("predicates")) {
            PredicateSpec spec;
            spec.name = p.at("name").get<std::string>();
            for (const auto& sort : p.at("sorts")) spec.sorts.push_back(parse_sort(sort.get<std::string>()));
            t.schema.predicates.push_back(std::move(spec));
        }
        if (s.contains("attribute_vocab"))
            for (const auto& [name, values] : s.at("attribute_vocab").items())
                t.schema.attribute_vocab[name] = values.get<std::vector<std::string>>();

        logic::Program facts;
        auto add = [&](const nlohmann::json& list) {
            for (const auto& a : list)
                facts.clauses.push_back(logic::Clause{logic::parse_ground_atom(a.get<std::string>()), {}});
        };
        add(j.at("background"));
        add(j.at("positives"));
        add(j.at("negatives"));
        if (auto conflict = logic::arity_conflict(facts)) throw TaskError(*conflict);
        distribute(t, facts);
        t.validate();
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw TaskError(std::string("malformed task document: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Task load_task_file(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        if (path.extension() == ".json") return task_from_json(nlohmann::json::parse(text));
        return parse_task(text);
    } catch (const logic::ParseError& e) {
        throw logic::ParseError(path.string() + ": " + e.detail(), e.line(), e.column());
    } catch (const nlohmann::json::parse_error& e) {
        throw TaskError(path.string() + ": " + e.what());
    } catch (const TaskError& e) {
        throw TaskError(path.string() + ": " + e.what());
    }
}

std::map<std::string, Task> load_task_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> text_files, json_files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() == ".task") text_files.push_back(entry.path());
        if (entry.path().extension() == ".json") json_files.push_back(entry.path());
    }
    std::sort(text_files.begin(), text_files.end());
    std::sort(json_files.begin(), json_files.end());

    std::map<std::string, Task> out;
    for (const auto& p : text_files) {
        Task t = load_task_file(p);
        const std::string id = t.id;
        if (!out.emplace(id, std::move(t)).second) throw TaskError("duplicate task id '" + id + "' in " + p.string());
    }
    for (const auto& p : json_files) {
        Task t = load_task_file(p);
        out.try_emplace(t.id, std::move(t));
    }
    return out;
}

void write_task_files(const Task& t, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_file(dir / (t.id + ".task"), serialize_task(t));
    write_file(dir / (t.id + ".json"), task_to_json(t).dump(2) + "\n");
}

} // namespace ipt::tasks
