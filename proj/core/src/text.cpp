#include "valueramp/text.hpp"

#include <charconv>

namespace valueramp::detail {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

std::vector<std::pair<std::size_t, std::vector<std::string_view>>> tokenize_lines(
    std::string_view text) {
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        std::vector<std::string_view> tokens;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && is_space(line[i])) {
                ++i;
            }
            const std::size_t begin = i;
            while (i < line.size() && !is_space(line[i])) {
                ++i;
            }
            if (i > begin) {
                tokens.push_back(line.substr(begin, i - begin));
            }
        }
        if (!tokens.empty()) {
            out.emplace_back(line_no, std::move(tokens));
        }
    }
    return out;
}

std::optional<std::uint64_t> parse_natural(std::string_view token) {
    if (token.empty()) {
        return std::nullopt;
    }
    std::uint64_t value = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        return std::nullopt;
    }
    return value;
}

}  // namespace valueramp::detail
