#include "valueramp/gridworld.hpp"

#include "valueramp/text.hpp"

#include <algorithm>
#include <map>

namespace valueramp {

std::string_view to_string(GridVariant variant) {
    return variant == GridVariant::dc ? "dc" : "rr";
}

// ---------------------------------------------------------------------------
// GridMap

GridMap::GridMap(std::size_t width, std::size_t height, std::vector<CellKind> cells,
                 std::vector<std::pair<Cell, Reward>> goal_rewards,
                 std::optional<GridVariant> declared_variant)
    : width_(width),
      height_(height),
      cells_(std::move(cells)),
      rewards_(width * height, 0),
      variant_(declared_variant),
      state_of_(width * height) {
    if (width == 0 || height == 0 || cells_.size() != width * height) {
        throw ContractError("grid dimensions do not match cell count");
    }
    for (const auto& [c, r] : goal_rewards) {
        if (c.x >= width_ || c.y >= height_ || kind(c) != CellKind::goal) {
            throw ContractError("goal reward at (" + std::to_string(c.x) + "," +
                                std::to_string(c.y) + ") is not on a goal cell");
        }
        if (r == 0 || r > kMaxReward) {
            throw ContractError("goal reward must be in [1, " + std::to_string(kMaxReward) + "]");
        }
        rewards_[c.y * width_ + c.x] = r;
    }
    bool any_start = false;
    for (std::size_t y = 0; y < height_; ++y) {
        for (std::size_t x = 0; x < width_; ++x) {
            const CellKind k = cells_[y * width_ + x];
            const bool border = x == 0 || y == 0 || x + 1 == width_ || y + 1 == height_;
            if (border && k != CellKind::wall) {
                throw ContractError("boundary cell (" + std::to_string(x) + "," +
                                    std::to_string(y) + ") is not a wall");
            }
            if (k == CellKind::goal && rewards_[y * width_ + x] == 0) {
                throw ContractError("goal cell (" + std::to_string(x) + "," + std::to_string(y) +
                                    ") has no reward");
            }
            any_start = any_start || k == CellKind::start;
            if (k != CellKind::wall) {
                state_of_[y * width_ + x] = StateId(open_cells_.size());
                open_cells_.push_back({x, y});
            }
        }
    }
    if (!any_start) {
        throw ContractError("map has no start cell");
    }
}

CellKind GridMap::kind(Cell c) const {
    if (c.x >= width_ || c.y >= height_) {
        throw DomainError("cell outside map");
    }
    return cells_[c.y * width_ + c.x];
}

bool GridMap::in_bounds(std::int64_t x, std::int64_t y) const noexcept {
    return x >= 0 && y >= 0 && static_cast<std::size_t>(x) < width_ &&
           static_cast<std::size_t>(y) < height_;
}

Reward GridMap::goal_reward(Cell c) const {
    if (kind(c) != CellKind::goal) {
        throw DomainError("cell is not a goal");
    }
    return rewards_[c.y * width_ + c.x];
}

std::optional<StateId> GridMap::state_of(Cell c) const {
    if (c.x >= width_ || c.y >= height_) {
        return std::nullopt;
    }
    return state_of_[c.y * width_ + c.x];
}

Cell GridMap::cell_of(StateId s) const {
    if (s.index >= open_cells_.size()) {
        throw DomainError("state outside map");
    }
    return open_cells_[s.index];
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string_view trim_right(std::string_view s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        lines.push_back(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    }
    return lines;
}

std::optional<CellKind> cell_kind(char c) {
    switch (c) {
        case '#':
            return CellKind::wall;
        case '.':
            return CellKind::free;
        case 'S':
            return CellKind::start;
        case 'G':
            return CellKind::goal;
        case 'X':
            return CellKind::swamp;
        case 'J':
            return CellKind::jump;
        default:
            return std::nullopt;
    }
}

}  // namespace

GridMap parse_map(std::string_view text) {
    const auto lines = split_lines(text);
    enum class Section { header, body, grid, annotations } section = Section::header;

    std::vector<std::string_view> rows;
    std::size_t grid_first_line = 0;
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> annotations;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        std::string_view line = trim_right(lines[i]);
        if (section == Section::grid) {
            if (line == "end") {
                section = Section::annotations;
            } else {
                rows.push_back(line);
            }
            continue;
        }
        // Outside the grid block '#' starts a comment.
        auto tokenized = detail::tokenize_lines(line);
        if (tokenized.empty()) {
            continue;
        }
        auto& tokens = tokenized.front().second;
        if (section == Section::header) {
            if (tokens.size() != 2 || tokens[0] != "map" || tokens[1] != "v1") {
                throw ParseError(line_no, "expected header 'map v1'");
            }
            section = Section::body;
        } else if (section == Section::body) {
            if (tokens.size() != 1 || tokens[0] != "grid") {
                throw ParseError(line_no, "expected 'grid'");
            }
            section = Section::grid;
            grid_first_line = line_no + 1;
        } else {
            annotations.emplace_back(line_no, std::move(tokens));
        }
    }
    if (section == Section::header) {
        throw ParseError(0, "empty map file");
    }
    if (section == Section::body) {
        throw ParseError(0, "map has no grid block");
    }
    if (section == Section::grid) {
        throw ParseError(0, "grid block is not terminated by 'end'");
    }
    if (rows.empty()) {
        throw ParseError(grid_first_line, "grid block is empty");
    }

    const std::size_t width = rows.front().size();
    const std::size_t height = rows.size();
    std::vector<CellKind> cells;
    cells.reserve(width * height);
    for (std::size_t y = 0; y < height; ++y) {
        if (rows[y].size() != width) {
            throw ParseError(grid_first_line + y, "ragged row: expected width " +
                                                      std::to_string(width) + ", got " +
                                                      std::to_string(rows[y].size()));
        }
        for (std::size_t x = 0; x < width; ++x) {
            const auto k = cell_kind(rows[y][x]);
            if (!k) {
                throw ParseError(grid_first_line + y,
                                 std::string("unknown cell character '") + rows[y][x] + "'");
            }
            cells.push_back(*k);
        }
    }

    std::vector<std::pair<Cell, Reward>> goals;
    std::map<Cell, std::size_t> goal_lines;
    std::optional<GridVariant> variant;
    for (const auto& [line_no, tokens] : annotations) {
        if (tokens[0] == "goal") {
            if (tokens.size() != 4) {
                throw ParseError(line_no, "goal needs x, y and a reward");
            }
            const auto x = detail::parse_natural(tokens[1]);
            const auto y = detail::parse_natural(tokens[2]);
            const auto r = detail::parse_natural(tokens[3]);
            if (!x || !y || !r) {
                throw ParseError(line_no, "goal coordinates and reward must be naturals");
            }
            if (*x >= width || *y >= height) {
                throw ParseError(line_no, "goal coordinate outside grid");
            }
            const Cell c{*x, *y};
            const CellKind k = cells[c.y * width + c.x];
            if (k == CellKind::wall) {
                throw ParseError(line_no, "goal annotation references a wall cell");
            }
            if (k != CellKind::goal) {
                throw ParseError(line_no, "goal annotation references a cell that is not 'G'");
            }
            if (*r == 0) {
                throw ParseError(line_no, "goal reward must be positive");
            }
            if (*r > kMaxReward) {
                throw ParseError(line_no, "goal reward exceeds cap");
            }
            if (!goal_lines.emplace(c, line_no).second) {
                throw ParseError(line_no, "duplicate goal annotation for this cell");
            }
            goals.emplace_back(c, *r);
        } else if (tokens[0] == "variant") {
            if (tokens.size() != 2 || (tokens[1] != "dc" && tokens[1] != "rr")) {
                throw ParseError(line_no, "variant must be 'dc' or 'rr'");
            }
            if (variant) {
                throw ParseError(line_no, "variant declared twice");
            }
            variant = tokens[1] == "dc" ? GridVariant::dc : GridVariant::rr;
        } else {
            throw ParseError(line_no, "unknown annotation '" + std::string(tokens[0]) + "'");
        }
    }
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            if (cells[y * width + x] == CellKind::goal && !goal_lines.count(Cell{x, y})) {
                throw ParseError(grid_first_line + y, "goal cell (" + std::to_string(x) + "," +
                                                          std::to_string(y) +
                                                          ") has no goal annotation");
            }
        }
    }
    try {
        return GridMap(width, height, std::move(cells), std::move(goals), variant);
    } catch (const ContractError& e) {
        throw ParseError(0, e.what());
    }
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

struct Direction {
    std::int64_t dx;
    std::int64_t dy;
};

constexpr Direction kMoves[] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
constexpr std::size_t kFinish = 4;

std::string cell_name(Cell c) { return "c" + std::to_string(c.x) + "_" + std::to_string(c.y); }

}  // namespace

TaskModel compile(const GridMap& map, const GridSemantics& semantics) {
    const auto n = map.n_open_cells();
    std::vector<std::string> state_names;
    std::vector<StateId> starts;
    for (std::size_t s = 0; s < n; ++s) {
        const Cell c = map.cell_of(StateId(s));
        state_names.push_back(cell_name(c));
        if (map.kind(c) == CellKind::start) {
            starts.emplace_back(s);
        }
    }
    std::vector<std::string> action_names(std::begin(kGridActions), std::end(kGridActions));
    TaskBuilder builder(std::move(state_names), std::move(action_names));
    for (StateId s : starts) {
        builder.add_start(s);
    }

    const bool dc = semantics.variant == GridVariant::dc;
    if (dc && starts.size() != 1) {
        throw ContractError("dc map needs exactly one start cell, found " +
                            std::to_string(starts.size()));
    }
    if (!dc) {
        for (auto m : semantics.jump_multipliers) {
            if (m < 2) {
                throw ContractError("jump multipliers must be at least 2");
            }
        }
        if (semantics.jump_multipliers.empty()) {
            throw ContractError("jump cells need at least one multiplier");
        }
        if (const auto& p = semantics.swamp_restart_probability;
            p && (p->is_zero() || p->is_one())) {
            throw ContractError("swamp restart probability must lie strictly in (0,1)");
        }
    }

    auto open = [&](std::int64_t x, std::int64_t y) -> std::optional<StateId> {
        if (!map.in_bounds(x, y)) {
            return std::nullopt;
        }
        return map.state_of({static_cast<std::size_t>(x), static_cast<std::size_t>(y)});
    };

    for (std::size_t si = 0; si < n; ++si) {
        const StateId s(si);
        const Cell c = map.cell_of(s);
        const auto x = static_cast<std::int64_t>(c.x);
        const auto y = static_cast<std::int64_t>(c.y);
        const CellKind kind = map.kind(c);

        if (dc && (kind == CellKind::swamp || kind == CellKind::jump)) {
            throw ContractError("dc map contains a swamp or jump cell at (" +
                                std::to_string(c.x) + "," + std::to_string(c.y) + ")");
        }

        if (kind == CellKind::swamp) {
            std::vector<StateId> offsets;
            for (const Direction d : {Direction{0, 0}, kMoves[0], kMoves[1], kMoves[2], kMoves[3]}) {
                if (const auto t = open(x + d.dx, y + d.dy)) {
                    offsets.push_back(*t);
                }
            }
            for (std::size_t a = 0; a < std::size(kGridActions); ++a) {
                if (const auto& p = semantics.swamp_restart_probability) {
                    std::vector<StateId> next;
                    std::vector<std::uint64_t> weights;
                    for (StateId t : starts) {
                        next.push_back(t);
                        weights.push_back(p->numerator() * offsets.size());
                    }
                    for (StateId t : offsets) {
                        next.push_back(t);
                        weights.push_back((p->denominator() - p->numerator()) * starts.size());
                    }
                    builder.set_weighted_successors(s, ActionId(a), std::move(next),
                                                    std::move(weights));
                } else {
                    std::vector<StateId> next = starts;
                    next.insert(next.end(), offsets.begin(), offsets.end());
                    builder.set_successors(s, ActionId(a), std::move(next));
                }
            }
            continue;
        }

        for (std::size_t a = 0; a < std::size(kMoves); ++a) {
            const Direction d = kMoves[a];
            std::vector<StateId> next;
            if (kind == CellKind::jump) {
                // Only the landing cell is checked; jumps pass over walls.
                for (auto m : semantics.jump_multipliers) {
                    if (const auto t = open(x + d.dx * m, y + d.dy * m)) {
                        next.push_back(*t);
                    }
                }
            } else if (const auto t = open(x + d.dx, y + d.dy)) {
                next.push_back(*t);
            }
            if (next.empty()) {
                next.push_back(s);
            }
            builder.set_successors(s, ActionId(a), std::move(next));
        }

        if (kind == CellKind::goal) {
            builder.set_successors(s, ActionId(kFinish), starts);
            builder.set_reward(s, ActionId(kFinish), map.goal_reward(c));
        } else {
            builder.set_successors(s, ActionId(kFinish), {s});
        }
    }

    TaskModel task = builder.build();
    if (dc) {
        if (!is_deterministic(task)) {
            throw ContractError("compiled dc map is not deterministic");
        }
        if (!is_connected(task)) {
            throw ContractError("compiled dc map is not connected: some open cells cannot reach "
                                "or be reached from the rest");
        }
    } else {
        const auto report = reducibility(task);
        if (!is_reducible(task, report)) {
            std::string detail = "compiled rr map is not reducible";
            for (StateId s : task.start_states()) {
                if (!report.is_reducible_state(s)) {
                    detail += "; start " + task.state_name(s) + " is not reducible";
                }
            }
            if (detail.find(';') == std::string::npos) {
                detail += "; some non-reducible cell has no escape to every start";
            }
            throw ContractError(detail);
        }
        if (!is_restartable(task)) {
            throw ContractError("compiled rr map is not restartable");
        }
    }
    return task;
}

// ---------------------------------------------------------------------------
// Rendering

ValueGrid render_state_values(std::span<const Value> state_values, const GridMap& map) {
    if (state_values.size() != map.n_open_cells()) {
        throw ContractError("value table has " + std::to_string(state_values.size()) +
                            " states but the map has " + std::to_string(map.n_open_cells()) +
                            " open cells");
    }
    ValueGrid grid{map.width(), map.height(), {}};
    grid.cells.resize(map.width() * map.height());
    for (std::size_t y = 0; y < map.height(); ++y) {
        for (std::size_t x = 0; x < map.width(); ++x) {
            if (const auto s = map.state_of({x, y})) {
                grid.cells[y * map.width() + x] = state_values[s->index];
            }
        }
    }
    return grid;
}

ValueGrid render_values(const ValueFunction& values, const GridMap& map) {
    if (values.n_actions() != std::size(kGridActions)) {
        throw ContractError("value function does not belong to a grid task");
    }
    std::vector<Value> state_values(values.n_states());
    for (std::size_t s = 0; s < values.n_states(); ++s) {
        state_values[s] = values.state_value(StateId(s));
    }
    return render_state_values(state_values, map);
}

}  // namespace valueramp
