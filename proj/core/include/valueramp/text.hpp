#pragma once

// Small helpers shared by the line-oriented text formats.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace valueramp::detail {

/// Non-empty lines split on whitespace, `#` comments stripped, with 1-based
/// line numbers. Views point into `text`.
std::vector<std::pair<std::size_t, std::vector<std::string_view>>> tokenize_lines(
    std::string_view text);

/// Decimal natural without sign or leading '+'; nullopt on overflow or junk.
std::optional<std::uint64_t> parse_natural(std::string_view token);

}  // namespace valueramp::detail
