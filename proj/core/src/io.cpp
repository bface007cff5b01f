#include "valueramp/io.hpp"

#include "valueramp/text.hpp"

#include <charconv>
#include <cstdio>

namespace valueramp {

namespace {

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t natural_or_throw(std::string_view token, std::size_t line, const char* what) {
    const auto v = detail::parse_natural(token);
    if (!v) {
        throw ParseError(line, std::string("expected a natural for ") + what + ", got '" +
                                   std::string(token) + "'");
    }
    return *v;
}

StateId state_or_throw(const TaskModel& task, std::string_view name, std::size_t line) {
    if (const auto s = task.find_state(name)) {
        return *s;
    }
    throw ParseError(line, "unknown state '" + std::string(name) + "'");
}

ActionId action_or_throw(const TaskModel& task, std::string_view name, std::size_t line) {
    if (const auto a = task.find_action(name)) {
        return *a;
    }
    throw ParseError(line, "unknown action '" + std::string(name) + "'");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto i = s.find(sep);
        out.push_back(s.substr(0, i));
        if (i == std::string_view::npos) {
            return out;
        }
        s.remove_prefix(i + 1);
    }
}

std::vector<std::string_view> plain_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    return lines;
}

}  // namespace

// ---------------------------------------------------------------------------
// Traces

std::string format_trace(const RunTrace& trace, const TaskModel& task) {
    const auto& v = trace.initial_values;
    if (v.n_states() != task.n_states() || v.n_actions() != task.n_actions()) {
        throw ContractError("trace does not belong to this task");
    }
    std::string out = "trace v1\n";
    out += "task " + hex16(trace.task_fingerprint) + "\n";
    out += "k " + std::to_string(trace.step_size) + "\n";
    out += "epsilon " + trace.params.epsilon.text() + "\n";
    out += "seed " + std::to_string(trace.params.seed) + "\n";
    out += "max_steps " + std::to_string(trace.params.max_steps) + "\n";
    out += "init " + to_string(trace.params.init) + "\n";
    out += "stop";
    for (const auto& s : trace.params.stop) {
        out += " " + to_string(s);
    }
    out += "\nstart " + task.state_name(trace.initial_state) + "\n";
    out += "initial";
    for (Value x : v.flat()) {
        out += " " + std::to_string(x);
    }
    out += "\n";
    for (const auto& r : trace.records) {
        out += std::to_string(r.step_index);
        out += ' ';
        out += task.state_name(r.state);
        out += ' ';
        out += task.action_name(r.action);
        out += ' ';
        out += task.state_name(r.next_state);
        out += ' ';
        out += std::to_string(r.reward);
        out += ' ';
        out += std::to_string(r.value_before);
        out += ' ';
        out += std::to_string(r.value_after);
        out += r.explored ? " 1\n" : " 0\n";
    }
    out += "end ";
    out += to_string(trace.stop_reason);
    out += "\n";
    return out;
}

RunTrace parse_trace(std::string_view text, const TaskModel& task) {
    const auto lines = detail::tokenize_lines(text);
    std::size_t i = 0;
    auto expect = [&](std::string_view key, std::size_t min_tokens,
                      std::size_t max_tokens) -> const std::vector<std::string_view>& {
        if (i >= lines.size()) {
            throw ParseError(0, "trace ends before '" + std::string(key) + "'");
        }
        const auto& [line, tokens] = lines[i];
        if (tokens[0] != key || tokens.size() < min_tokens || tokens.size() > max_tokens) {
            throw ParseError(line, "expected '" + std::string(key) + "' line");
        }
        ++i;
        return tokens;
    };
    const auto line_at = [&] { return lines[i - 1].first; };

    if (expect("trace", 2, 2)[1] != "v1") {
        throw ParseError(line_at(), "expected header 'trace v1'");
    }
    RunTrace trace;
    {
        const auto tok = expect("task", 2, 2)[1];
        std::uint64_t fp = 0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), fp, 16);
        if (ec != std::errc{} || p != tok.data() + tok.size() || tok.size() != 16) {
            throw ParseError(line_at(), "bad task fingerprint");
        }
        if (fp != task.fingerprint()) {
            throw ContractError("trace was recorded on a different task (fingerprint " +
                                std::string(tok) + ", expected " + hex16(task.fingerprint()) +
                                ")");
        }
        trace.task_fingerprint = fp;
    }
    trace.step_size = natural_or_throw(expect("k", 2, 2)[1], line_at(), "k");
    try {
        trace.params.epsilon = Probability::parse(expect("epsilon", 2, 2)[1]);
        trace.params.seed = natural_or_throw(expect("seed", 2, 2)[1], line_at(), "seed");
        trace.params.max_steps =
            natural_or_throw(expect("max_steps", 2, 2)[1], line_at(), "max_steps");
        trace.params.init = parse_init_spec(expect("init", 2, 2)[1]);
        const auto& stops = expect("stop", 1, 4);
        for (std::size_t j = 1; j < stops.size(); ++j) {
            trace.params.stop.push_back(parse_stop_condition(stops[j]));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(line_at(), e.what());
    }
    trace.initial_state = state_or_throw(task, expect("start", 2, 2)[1], line_at());
    {
        const std::size_t n = task.n_states() * task.n_actions();
        const auto& tokens = expect("initial", n + 1, n + 1);
        std::vector<Value> flat;
        flat.reserve(n);
        for (std::size_t j = 1; j <= n; ++j) {
            flat.push_back(natural_or_throw(tokens[j], line_at(), "initial value"));
        }
        trace.initial_values = ValueFunction(task.n_states(), task.n_actions(), std::move(flat));
    }
    for (; i < lines.size(); ++i) {
        const auto& [line, t] = lines[i];
        if (t[0] == "end") {
            if (t.size() != 2 || i + 1 != lines.size()) {
                throw ParseError(line, "'end <reason>' must be the last line");
            }
            try {
                trace.stop_reason = parse_stop_reason(t[1]);
            } catch (const ContractError& e) {
                throw ParseError(line, e.what());
            }
            return trace;
        }
        if (t.size() != 8) {
            throw ParseError(line, "record needs 8 fields");
        }
        TransitionRecord r;
        r.step_index = natural_or_throw(t[0], line, "step");
        r.state = state_or_throw(task, t[1], line);
        r.action = action_or_throw(task, t[2], line);
        r.next_state = state_or_throw(task, t[3], line);
        r.reward = natural_or_throw(t[4], line, "reward");
        r.value_before = natural_or_throw(t[5], line, "v_before");
        r.value_after = natural_or_throw(t[6], line, "v_after");
        if (t[7] != "0" && t[7] != "1") {
            throw ParseError(line, "explored flag must be 0 or 1");
        }
        r.explored = t[7] == "1";
        trace.records.push_back(r);
    }
    throw ParseError(0, "trace has no 'end' line");
}

// ---------------------------------------------------------------------------
// Value tables

std::string format_values_csv(const ValueFunction& values, const TaskModel& task) {
    if (values.n_states() != task.n_states() || values.n_actions() != task.n_actions()) {
        throw ContractError("value function does not match task shape");
    }
    std::string out = "state,action,value\n";
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            out += task.state_name(StateId(s)) + "," + task.action_name(ActionId(a)) + "," +
                   std::to_string(values.at(StateId(s), ActionId(a))) + "\n";
        }
    }
    return out;
}

ValueFunction parse_values_csv(std::string_view text, const TaskModel& task) {
    const auto lines = plain_lines(text);
    if (lines.empty() || lines[0] != "state,action,value") {
        throw ParseError(1, "expected header 'state,action,value'");
    }
    ValueFunction values(task.n_states(), task.n_actions());
    std::vector<bool> seen(task.n_states() * task.n_actions(), false);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line = i + 1;
        const auto fields = split(lines[i], ',');
        if (fields.size() != 3) {
            throw ParseError(line, "expected 3 fields");
        }
        const StateId s = state_or_throw(task, fields[0], line);
        const ActionId a = action_or_throw(task, fields[1], line);
        auto&& flag = seen[s.index * task.n_actions() + a.index];
        if (flag) {
            throw ParseError(line, "duplicate row for this pair");
        }
        flag = true;
        values.set(s, a, natural_or_throw(fields[2], line, "value"));
    }
    for (std::size_t j = 0; j < seen.size(); ++j) {
        if (!seen[j]) {
            throw ParseError(0, "missing value for pair (" +
                                    task.state_name(StateId(j / task.n_actions())) + "," +
                                    task.action_name(ActionId(j % task.n_actions())) + ")");
        }
    }
    return values;
}

std::string format_state_table(std::span<const Value> state_values, const TaskModel& task) {
    if (state_values.size() != task.n_states()) {
        throw ContractError("state table does not match task");
    }
    std::string out;
    for (std::size_t s = 0; s < state_values.size(); ++s) {
        out += task.state_name(StateId(s)) + " " + std::to_string(state_values[s]) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Heat-maps

std::string format_grid_csv(const ValueGrid& grid) {
    std::string out;
    for (std::size_t y = 0; y < grid.height; ++y) {
        for (std::size_t x = 0; x < grid.width; ++x) {
            if (x > 0) {
                out += ',';
            }
            if (const auto& v = grid.at(x, y)) {
                out += std::to_string(*v);
            }
        }
        out += '\n';
    }
    return out;
}

ValueGrid parse_grid_csv(std::string_view text) {
    const auto lines = plain_lines(text);
    if (lines.empty()) {
        throw ParseError(0, "empty grid");
    }
    ValueGrid grid;
    grid.height = lines.size();
    for (std::size_t y = 0; y < lines.size(); ++y) {
        const auto fields = split(lines[y], ',');
        if (y == 0) {
            grid.width = fields.size();
        } else if (fields.size() != grid.width) {
            throw ParseError(y + 1, "ragged row");
        }
        for (const auto f : fields) {
            if (f.empty()) {
                grid.cells.emplace_back();
            } else {
                grid.cells.emplace_back(natural_or_throw(f, y + 1, "cell value"));
            }
        }
    }
    return grid;
}

std::string format_pgm(const ValueGrid& grid) {
    Value max = 0;
    for (const auto& c : grid.cells) {
        if (c) {
            max = std::max(max, *c);
        }
    }
    std::string out = "P5\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) +
                      "\n255\n";
    for (const auto& c : grid.cells) {
        // Values stay below 2^33, so v * 255 cannot overflow.
        const Value px = (!c || max == 0) ? 0 : *c * 255 / max;
        out += static_cast<char>(static_cast<unsigned char>(px));
    }
    return out;
}

}  // namespace valueramp
