#include "ipt/harness.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace ipt::harness {

std::vector<GapRow> hacking_gap(const std::vector<SeriesPoint>& ext, const std::vector<SeriesPoint>& iso) {
    if (ext.size() != iso.size())
        throw LengthMismatch("series lengths differ: " + std::to_string(ext.size()) + " vs " + std::to_string(iso.size()));
    std::vector<GapRow> out;
    out.reserve(ext.size());
    for (std::size_t i = 0; i < ext.size(); ++i) {
        if (ext[i].step != iso[i].step)
            throw LengthMismatch("series not step-aligned at row " + std::to_string(i));
        out.push_back({ext[i].step, ext[i].value, iso[i].value, ext[i].value - iso[i].value});
    }
    return out;
}

std::vector<SeriesPoint> read_series(std::istream& in) {
    std::map<double, std::pair<double, std::size_t>> sums;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string a, b;
        if (!std::getline(fields, a, ',') || !std::getline(fields, b)) {
            throw std::invalid_argument("series line " + std::to_string(n) + ": expected step,value");
        }
        double step = 0, value = 0;
        try {
            std::size_t used_a = 0, used_b = 0;
            step = std::stod(a, &used_a);
            value = std::stod(b, &used_b);
            if (a.find_first_not_of(" \t\r", used_a) != std::string::npos ||
                b.find_first_not_of(" \t\r", used_b) != std::string::npos)
                throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            if (n == 1) continue; // header
            throw std::invalid_argument("series line " + std::to_string(n) + ": non-numeric field");
        }
        auto& [sum, count] = sums[step];
        sum += value;
        ++count;
    }
    std::vector<SeriesPoint> out;
    for (const auto& [step, acc] : sums) out.push_back({step, acc.first / static_cast<double>(acc.second)});
    return out;
}

std::vector<SeriesPoint> load_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open series file " + path.string());
    return read_series(in);
}

std::string render_gap(const std::vector<GapRow>& rows) {
    std::string out = "step,reward_ext_mean,reward_iso_mean,gap\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g\n", r.step, r.reward_ext, r.reward_iso, r.gap);
        out += buf;
    }
    return out;
}

} // namespace ipt::harness
