#include "ipt/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace ipt::harness {

namespace {

const std::vector<std::string> kColumns{"model", "effort",        "group",         "n_tasks",
                                        "accuracy_iso", "n_shortcuts", "shortcut_rate", "syntax_rate"};

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::vector<std::string> cells(const GroupReport& r) {
    return {r.model_name,
            r.effort_label,
            r.group,
            std::to_string(r.n_tasks),
            fixed(r.accuracy_iso(), 2),
            std::to_string(r.n_shortcuts),
            fixed(r.shortcut_rate(), 6),
            fixed(r.syntax_rate(), 2)};
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string render_text(const std::vector<GroupReport>& rows, const std::vector<std::string>& footnotes) {
    std::vector<std::vector<std::string>> table{kColumns};
    for (const auto& r : rows) table.push_back(cells(r));
    std::vector<std::size_t> width(kColumns.size(), 0);
    for (const auto& line : table)
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());

    std::string out;
    for (const auto& line : table) {
        std::string text;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i) text += "  ";
            // Text columns left-aligned, numbers right-aligned.
            const std::string pad(width[i] - line[i].size(), ' ');
            text += i < 3 ? line[i] + pad : pad + line[i];
        }
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out += text + "\n";
    }
    if (!footnotes.empty()) out += "\n";
    for (std::size_t i = 0; i < footnotes.size(); ++i) out += "[" + std::to_string(i + 1) + "] " + footnotes[i] + "\n";
    return out;
}

std::string render_csv(const std::vector<GroupReport>& rows, const std::vector<std::string>& footnotes) {
    std::string out;
    auto line = [&](const std::vector<std::string>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out += ',';
            out += csv_cell(values[i]);
        }
        out += '\n';
    };
    line(kColumns);
    for (const auto& r : rows) line(cells(r));
    for (const auto& f : footnotes) out += "# " + f + "\n";
    return out;
}

std::string render_json(const std::vector<GroupReport>& rows, const std::vector<std::string>& footnotes) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({
            {"model", r.model_name},
            {"effort", r.effort_label},
            {"group", r.group},
            {"n_tasks", r.n_tasks},
            {"n_iso_passed", r.n_iso_passed},
            {"n_shortcuts", r.n_shortcuts},
            {"n_syntax_ok", r.n_syntax_ok},
            {"accuracy_iso", r.accuracy_iso()},
            {"shortcut_rate", r.shortcut_rate()},
            {"syntax_rate", r.syntax_rate()},
        });
    nlohmann::json doc{{"rows", arr}, {"notes", footnotes}};
    return doc.dump(2) + "\n";
}

} // namespace

ReportFormat parse_format(std::string_view s) {
    if (s == "text" || s == "txt") return ReportFormat::text;
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw std::invalid_argument("unknown report format '" + std::string(s) + "' (text, csv, json)");
}

std::string_view format_extension(ReportFormat f) noexcept {
    switch (f) {
    case ReportFormat::text: return ".txt";
    case ReportFormat::csv: return ".csv";
    case ReportFormat::json: return ".json";
    }
    return "";
}

std::string render_report(const std::vector<GroupReport>& rows, ReportFormat format,
                          const std::vector<std::string>& footnotes) {
    switch (format) {
    case ReportFormat::text: return render_text(rows, footnotes);
    case ReportFormat::csv: return render_csv(rows, footnotes);
    case ReportFormat::json: return render_json(rows, footnotes);
    }
    return {};
}

void emit_report(const std::vector<GroupReport>& rows, ReportFormat format, const std::filesystem::path& path,
                 const std::vector<std::string>& footnotes) {
    const std::string body = render_report(rows, format, footnotes);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ReportError("cannot open report file " + path.string());
    out << body;
    out.flush();
    if (!out) throw ReportError("failed writing report file " + path.string());
}

} // namespace ipt::harness
