#pragma once
// Text and image exports. All text output uses LF line endings.

#include "valueramp/gridworld.hpp"
#include "valueramp/runner.hpp"
#include "valueramp/task.hpp"
#include "valueramp/value_function.hpp"

#include <span>
#include <string>
#include <string_view>

namespace valueramp {

/// `trace v1`:
///
///     trace v1
///     task <fingerprint, 16 hex digits>
///     k <K>
///     epsilon <decimal>
///     seed <n>
///     max_steps <n>
///     init zero|uniform:LO..HI
///     stop <condition>*
///     start <state>
///     initial <V(s0,a0) V(s0,a1) ...>          # row-major, |S| |A| entries
///     <step> <s> <a> <s'> <r> <v_before> <v_after> <explored 0|1>
///     ...
///     end <steps|fixpoint|good-configuration>
[[nodiscard]] std::string format_trace(const RunTrace& trace, const TaskModel& task);

/// Inverse of format_trace. Throws ParseError on malformed input and
/// ContractError when the fingerprint does not match `task`.
[[nodiscard]] RunTrace parse_trace(std::string_view text, const TaskModel& task);

/// CSV with header `state,action,value`, one row per pair in index order.
[[nodiscard]] std::string format_values_csv(const ValueFunction& values, const TaskModel& task);
[[nodiscard]] ValueFunction parse_values_csv(std::string_view text, const TaskModel& task);

/// `<state> <v>` per line.
[[nodiscard]] std::string format_state_table(std::span<const Value> state_values,
                                             const TaskModel& task);

/// One CSV row per grid row; walls are empty fields.
[[nodiscard]] std::string format_grid_csv(const ValueGrid& grid);
[[nodiscard]] ValueGrid parse_grid_csv(std::string_view text);

/// Binary 8-bit PGM (P5). Pixel = floor(v * 255 / max), walls 0, all black
/// when every value is 0.
[[nodiscard]] std::string format_pgm(const ValueGrid& grid);

}  // namespace valueramp
