#pragma once

#include "valueramp/random.hpp"
#include "valueramp/task.hpp"
#include "valueramp/value_function.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace valueramp {

enum class CellKind : std::uint8_t { wall, free, start, goal, swamp, jump };

enum class GridVariant : std::uint8_t {
    /// Deterministic and connected: one start, goals send the agent back to it.
    dc,
    /// Reducible and restartable: several starts, swamp and jump cells.
    rr,
};

[[nodiscard]] std::string_view to_string(GridVariant variant);

struct Cell {
    std::size_t x = 0;
    std::size_t y = 0;
    auto operator<=>(const Cell&) const = default;
};

/// 2D map, origin top-left, x to the right, y downwards.
class GridMap {
public:
    GridMap(std::size_t width, std::size_t height, std::vector<CellKind> cells,
            std::vector<std::pair<Cell, Reward>> goal_rewards,
            std::optional<GridVariant> declared_variant = std::nullopt);

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] CellKind kind(Cell c) const;
    [[nodiscard]] CellKind kind(std::size_t x, std::size_t y) const { return kind({x, y}); }
    [[nodiscard]] bool in_bounds(std::int64_t x, std::int64_t y) const noexcept;
    /// Reward annotated on a goal cell.
    [[nodiscard]] Reward goal_reward(Cell c) const;
    [[nodiscard]] std::optional<GridVariant> declared_variant() const noexcept {
        return variant_;
    }

    /// Task state of a non-wall cell; non-wall cells are numbered row-major.
    [[nodiscard]] std::optional<StateId> state_of(Cell c) const;
    [[nodiscard]] Cell cell_of(StateId s) const;
    [[nodiscard]] std::size_t n_open_cells() const noexcept { return open_cells_.size(); }

    bool operator==(const GridMap&) const = default;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<CellKind> cells_;
    std::vector<Reward> rewards_;
    std::optional<GridVariant> variant_;
    std::vector<std::optional<StateId>> state_of_;
    std::vector<Cell> open_cells_;
};

/// Parse the `map v1` format:
///
///     map v1
///     grid
///     #####
///     #S.G#
///     #####
///     end
///     goal 3 1 100
///     variant dc
///
/// Cells: '#' wall, '.' free, 'S' start, 'G' goal, 'X' swamp, 'J' jump.
[[nodiscard]] GridMap parse_map(std::string_view text);

struct GridSemantics {
    GridVariant variant = GridVariant::dc;
    /// When set, a swamp step restarts with this probability and otherwise
    /// applies an offset; unset means uniform over the successor set.
    std::optional<Probability> swamp_restart_probability;
    /// Direction multipliers applied by jump cells.
    std::set<std::uint32_t> jump_multipliers{2, 4};
};

/// Actions of every compiled grid task, in this order.
inline constexpr std::string_view kGridActions[] = {"left", "right", "up", "down", "finish"};

/// Compile a map into a task. dc output is deterministic and connected; rr
/// output is reducible and restartable. Either is verified, and compilation
/// fails with ContractError otherwise.
[[nodiscard]] TaskModel compile(const GridMap& map, const GridSemantics& semantics);

/// Per-cell state value; walls are absent.
struct ValueGrid {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::optional<Value>> cells;

    [[nodiscard]] const std::optional<Value>& at(std::size_t x, std::size_t y) const {
        return cells.at(y * width + x);
    }
    bool operator==(const ValueGrid&) const = default;
};

[[nodiscard]] ValueGrid render_values(const ValueFunction& values, const GridMap& map);

/// Same, from one value per task state (e.g. optimal values).
[[nodiscard]] ValueGrid render_state_values(std::span<const Value> state_values,
                                            const GridMap& map);

}  // namespace valueramp
