#pragma once

#include "valueramp/task.hpp"

#include <string>
#include <string_view>

namespace valueramp {

/// Parse the line-oriented `task v1` format.
///
///     task v1
///     states <name>+
///     actions <name>+
///     start <state>+
///     tr <state> <action> <state>+     # one line per pair, covering S x A
///     reward <state> <action> <nat>    # optional, default 0
///
/// `#` starts a comment. Throws ParseError carrying the offending line.
[[nodiscard]] TaskModel load_graph_task(std::string_view text);

/// Canonical `task v1` text: declaration order, one tr line per pair, reward
/// lines only for nonzero rewards. Successor weights are not represented.
[[nodiscard]] std::string format_graph_task(const TaskModel& task);

}  // namespace valueramp
