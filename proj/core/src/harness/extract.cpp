#include "ipt/harness.hpp"

namespace ipt::harness {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

} // namespace

std::string extract_hypothesis(std::string_view raw) {
    // Pair fences in order; the content runs from the line after an opening
    // fence (language tag ignored) up to the closing fence.
    std::string_view last;
    bool found = false;
    std::size_t pos = 0;
    while (true) {
        const auto open = raw.find("```", pos);
        if (open == std::string_view::npos) break;
        const auto eol = raw.find('\n', open + 3);
        if (eol == std::string_view::npos) break;
        const auto close = raw.find("```", eol + 1);
        if (close == std::string_view::npos) break;
        std::string_view body = raw.substr(eol + 1, close - eol - 1);
        if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
        if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
        last = body;
        found = true;
        pos = close + 3;
    }
    return std::string(found ? last : trim(raw));
}

} // namespace ipt::harness
