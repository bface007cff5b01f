#include "valueramp/analysis.hpp"

#include "valueramp/learning_rule.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <string>

namespace valueramp {

namespace {

void require_deterministic(const TaskModel& task, const char* what) {
    if (!is_deterministic(task)) {
        throw UnsupportedError(std::string(what) + " is only defined for deterministic tasks");
    }
}

StateId only_successor(const TaskModel& task, StateId s, ActionId a) {
    return task.successors(s, a).front();
}

// clamp(max(v_next, r) - K)
Value one_step_expectation(Value v_next, Reward r, StepSize k) {
    return clamp(static_cast<std::int64_t>(std::max(v_next, r)) - k.signed_value());
}

Value reward_at_position(Reward r, std::size_t position, StepSize k) {
    return clamp(static_cast<std::int64_t>(r) -
                 static_cast<std::int64_t>(position) * k.signed_value());
}

}  // namespace

// ---------------------------------------------------------------------------
// Action paths

bool is_feasible(const TaskModel& task, std::span<const StateAction> path) {
    if (path.empty()) {
        return false;
    }
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (!task.contains(path[i].state) || !task.contains(path[i].action)) {
            return false;
        }
        if (i + 1 < path.size()) {
            const auto next = task.successors(path[i].state, path[i].action);
            if (!std::binary_search(next.begin(), next.end(), path[i + 1].state)) {
                return false;
            }
        }
    }
    return true;
}

Value path_value(const TaskModel& task, std::span<const StateAction> path, StepSize k) {
    if (!is_feasible(task, path)) {
        throw ContractError("action path is empty or infeasible for this task");
    }
    Value best = 0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        best = std::max(best, reward_at_position(task.reward(path[i].state, path[i].action),
                                                 i + 1, k));
    }
    return best;
}

ActionPath decycle(const TaskModel& task, std::span<const StateAction> path, StepSize k) {
    const Value target = path_value(task, path, k);
    std::size_t attain = 0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (reward_at_position(task.reward(path[i].state, path[i].action), i + 1, k) == target) {
            attain = i;
            break;
        }
    }

    ActionPath out;
    std::vector<std::optional<std::size_t>> position(task.n_states());
    for (std::size_t i = 0; i <= attain; ++i) {
        const auto& [s, a] = path[i];
        if (const auto prev = position[s.index]) {
            // Cycle (s,a_prev) ... (s,a): keep only (s,a).
            for (std::size_t j = *prev; j < out.size(); ++j) {
                position[out[j].state.index].reset();
            }
            out.resize(*prev);
        }
        position[s.index] = out.size();
        out.push_back({s, a});
    }
    return out;
}

bool has_repeated_state(std::span<const StateAction> path) {
    std::vector<StateId> states;
    states.reserve(path.size());
    for (const auto& p : path) {
        states.push_back(p.state);
    }
    std::sort(states.begin(), states.end());
    return std::adjacent_find(states.begin(), states.end()) != states.end();
}

std::optional<std::size_t> rewarding_length(const TaskModel& task,
                                            std::span<const StateAction> path) {
    if (!is_feasible(task, path)) {
        throw ContractError("action path is empty or infeasible for this task");
    }
    const Reward m = task.max_reward();
    if (m == 0) {
        return std::nullopt;
    }
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (task.reward(path[i].state, path[i].action) == m) {
            return i + 1;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Optimal values

std::vector<Value> optimal_values(const TaskModel& task, StepSize k) {
    require_deterministic(task, "optimal value");
    const auto n = task.n_states();
    std::vector<Value> v(n, 0);
    for (std::size_t round = 0; round < n; ++round) {
        std::vector<Value> next(n, 0);
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t a = 0; a < task.n_actions(); ++a) {
                const StateId t = only_successor(task, StateId(s), ActionId(a));
                const Reward r = task.reward(StateId(s), ActionId(a));
                next[s] = std::max({next[s], reward_at_position(r, 1, k),
                                    reward_at_position(v[t.index], 1, k)});
            }
        }
        v = std::move(next);
    }
    return v;
}

Value optimal_value(const TaskModel& task, StateId s, StepSize k) {
    if (!task.contains(s)) {
        throw DomainError("state " + std::to_string(s.index) + " outside task domain");
    }
    return optimal_values(task, k).at(s.index);
}

Value optimal_value_by_enumeration(const TaskModel& task, StateId s, StepSize k) {
    require_deterministic(task, "optimal value");
    if (!task.contains(s)) {
        throw DomainError("state " + std::to_string(s.index) + " outside task domain");
    }
    std::vector<bool> on_path(task.n_states(), false);
    Value best = 0;
    // Extend a cycle-free prefix whose best contribution so far is `prefix`.
    std::function<void(StateId, std::size_t, Value)> extend = [&](StateId at,
                                                                  std::size_t position,
                                                                  Value prefix) {
        on_path[at.index] = true;
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            const Value here = std::max(
                prefix, reward_at_position(task.reward(at, ActionId(a)), position, k));
            best = std::max(best, here);
            const StateId next = only_successor(task, at, ActionId(a));
            if (!on_path[next.index]) {
                extend(next, position + 1, here);
            }
        }
        on_path[at.index] = false;
    };
    extend(s, 1, 0);
    return best;
}

std::vector<Value> optimal_values_by_enumeration(const TaskModel& task, StepSize k) {
    std::vector<Value> out;
    out.reserve(task.n_states());
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        out.push_back(optimal_value_by_enumeration(task, StateId(s), k));
    }
    return out;
}

std::vector<Value> optimal_values_by_distance(const TaskModel& task, StepSize k) {
    require_deterministic(task, "optimal value");
    const auto n = task.n_states();
    std::vector<std::vector<StateId>> adj(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            adj[s].push_back(only_successor(task, StateId(s), ActionId(a)));
        }
    }
    std::vector<Value> out(n, 0);
    std::vector<std::size_t> dist(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), SIZE_MAX);
        std::deque<std::size_t> queue{s};
        dist[s] = 0;
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop_front();
            for (StateId t : adj[u]) {
                if (dist[t.index] == SIZE_MAX) {
                    dist[t.index] = dist[u] + 1;
                    queue.push_back(t.index);
                }
            }
        }
        for (std::size_t g = 0; g < n; ++g) {
            if (dist[g] == SIZE_MAX) {
                continue;
            }
            for (std::size_t a = 0; a < task.n_actions(); ++a) {
                out[s] = std::max(out[s], reward_at_position(task.reward(StateId(g), ActionId(a)),
                                                             dist[g] + 1, k));
            }
        }
    }
    return out;
}

ValueFunction optimal_value_function(const TaskModel& task, StepSize k) {
    const auto v = optimal_values(task, k);
    ValueFunction q(task.n_states(), task.n_actions());
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            const StateId t = only_successor(task, StateId(s), ActionId(a));
            q.set(StateId(s), ActionId(a),
                  one_step_expectation(v[t.index], task.reward(StateId(s), ActionId(a)), k));
        }
    }
    return q;
}

// ---------------------------------------------------------------------------
// Validity, consistency, violations

bool is_violation(const ValueFunction& values, const TaskModel& task, StateAction pair,
                  StepSize k) {
    require_deterministic(task, "violation");
    const StateId t = only_successor(task, pair.state, pair.action);
    return values.at(pair.state, pair.action) >
           one_step_expectation(values.state_value(t), task.reward(pair.state, pair.action), k);
}

std::optional<StateAction> find_violation(const ValueFunction& values, const TaskModel& task,
                                          StepSize k) {
    require_deterministic(task, "validity");
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            const StateAction pair{StateId(s), ActionId(a)};
            if (is_violation(values, task, pair, k)) {
                return pair;
            }
        }
    }
    return std::nullopt;
}

bool is_valid(const ValueFunction& values, const TaskModel& task, StepSize k) {
    return !find_violation(values, task, k).has_value();
}

std::optional<StateAction> find_inconsistency(const ValueFunction& values, const TaskModel& task,
                                              StepSize k) {
    require_deterministic(task, "consistency");
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        const StateId state(s);
        const Value v = values.state_value(state);
        for (ActionId a : values.preferred_actions(state)) {
            const StateId t = only_successor(task, state, a);
            if (v != one_step_expectation(values.state_value(t), task.reward(state, a), k)) {
                return StateAction{state, a};
            }
        }
    }
    return std::nullopt;
}

bool is_consistent(const ValueFunction& values, const TaskModel& task, StepSize k) {
    return !find_inconsistency(values, task, k).has_value();
}

ViolationReport violations(const ValueFunction& values, const TaskModel& task, StepSize k) {
    require_deterministic(task, "violation");
    ViolationReport report;
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            const StateAction pair{StateId(s), ActionId(a)};
            if (is_violation(values, task, pair, k)) {
                report.pairs.push_back(pair);
                report.violmax = std::max(report.violmax, values.at(pair.state, pair.action));
            }
        }
    }
    return report;
}

CeilingReport ceil_and_highest(const ValueFunction& values, const TaskModel& task) {
    const auto flat = values.flat();
    const Value highest = flat.empty() ? 0 : *std::max_element(flat.begin(), flat.end());
    return {std::max<Value>(highest, task.max_reward()), highest};
}

// ---------------------------------------------------------------------------
// Value-sprints

SprintDecomposition sprints(const ValueFunction& initial,
                            std::span<const TransitionRecord> records, StepSize k) {
    SprintDecomposition out;
    ValueFunction values = initial;
    std::optional<Sprint> open;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!open) {
            open = Sprint{i, i, {}};
        }
        open->path.push_back({r.state, r.action});
        open->end_index = i;
        // Condition evaluated under the value function before this step.
        const auto here = static_cast<std::int64_t>(values.state_value(r.state));
        const auto there = static_cast<std::int64_t>(values.state_value(r.next_state));
        const bool climbs = here <= there - k.signed_value();
        if (!climbs) {
            out.sprints.push_back(std::move(*open));
            open.reset();
        }
        values.set(r.state, r.action, r.value_after);
    }
    out.incomplete = std::move(open);
    return out;
}

SprintDecomposition sprints(const RunTrace& trace, StepSize k) {
    return sprints(trace.initial_values, trace.records, k);
}

// ---------------------------------------------------------------------------
// Shortest reward distance

std::vector<std::optional<std::size_t>> shortest_reward_distances(const TaskModel& task) {
    const auto n = task.n_states();
    std::vector<std::optional<std::size_t>> dist(n);
    const auto summary = goals_and_rewards(task);
    if (!summary.max_reward) {
        return dist;
    }
    std::vector<std::vector<StateId>> rev(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            for (StateId t : task.successors(StateId(s), ActionId(a))) {
                rev[t.index].emplace_back(s);
            }
        }
    }
    // Multi-source BFS backwards from goals; a goal is one rewarding pair away.
    std::deque<StateId> queue;
    for (StateId g : summary.goals) {
        dist[g.index] = 1;
        queue.push_back(g);
    }
    while (!queue.empty()) {
        const StateId u = queue.front();
        queue.pop_front();
        for (StateId p : rev[u.index]) {
            if (!dist[p.index]) {
                dist[p.index] = *dist[u.index] + 1;
                queue.push_back(p);
            }
        }
    }
    return dist;
}

std::optional<std::size_t> shortest_reward_distance(const TaskModel& task, StateId s) {
    if (!task.contains(s)) {
        throw DomainError("state " + std::to_string(s.index) + " outside task domain");
    }
    return shortest_reward_distances(task).at(s.index);
}

// ---------------------------------------------------------------------------
// Strategies

bool StrategyReport::contains(StateId s) const {
    return std::binary_search(members.begin(), members.end(), s);
}

StrategyReport strategy(const ValueFunction& values, const TaskModel& task, StepSize k) {
    if (!is_navigation_problem(task, k)) {
        throw UnsupportedError("strategy is only defined for navigation problems");
    }
    const auto m = static_cast<std::int64_t>(task.max_reward());
    const auto kk = k.signed_value();
    const auto n = task.n_states();

    std::vector<Value> state_values(n);
    for (std::size_t s = 0; s < n; ++s) {
        state_values[s] = values.state_value(StateId(s));
    }
    auto rewarding = [&](StateId s, ActionId a) {
        return static_cast<std::int64_t>(task.reward(s, a)) == m;
    };

    StrategyReport report;
    std::vector<bool> in_strategy(n, false);
    for (std::size_t i = 1; i <= n + 1; ++i) {
        const std::int64_t level = m - static_cast<std::int64_t>(i) * kk;
        if (level < 0) {
            break;
        }
        std::vector<StateId> added;
        for (std::size_t s = 0; s < n; ++s) {
            const StateId state(s);
            if (in_strategy[s] || static_cast<std::int64_t>(state_values[s]) != level) {
                continue;
            }
            const auto preferred = values.preferred_actions(state);
            bool ok = true;
            for (ActionId a : preferred) {
                if (i == 1) {
                    ok = rewarding(state, a);
                } else {
                    const auto next = task.successors(state, a);
                    ok = !rewarding(state, a) &&
                         std::all_of(next.begin(), next.end(),
                                     [&](StateId t) { return in_strategy[t.index]; }) &&
                         std::any_of(next.begin(), next.end(), [&](StateId t) {
                             return static_cast<std::int64_t>(state_values[t.index]) ==
                                    level + kk;
                         });
                }
                if (!ok) {
                    break;
                }
            }
            if (ok) {
                added.push_back(state);
            }
        }
        // No additions at layer i means none at any later layer either: a
        // layer-(i+1) state needs a successor at level M - iK, which only a
        // layer-i addition could supply.
        if (added.empty()) {
            break;
        }
        for (StateId s : added) {
            in_strategy[s.index] = true;
        }
        std::vector<StateId> layer;
        for (std::size_t s = 0; s < n; ++s) {
            if (in_strategy[s]) {
                layer.emplace_back(s);
            }
        }
        report.layers.push_back(std::move(layer));
        report.fixp = i;
    }
    if (!report.layers.empty()) {
        report.members = report.layers.back();
    }
    return report;
}

bool is_good_configuration(const Configuration& config, const TaskModel& task, StepSize k) {
    const auto report = strategy(config.values, task, k);
    if (!report.contains(config.state)) {
        return false;
    }
    const auto starts = task.start_states();
    return std::all_of(starts.begin(), starts.end(),
                       [&](StateId s) { return report.contains(s); });
}

// ---------------------------------------------------------------------------
// Cycle audit

std::vector<CycleViolation> audit_cycles(std::span<const TransitionRecord> records,
                                         std::size_t from_index) {
    if (from_index > records.size()) {
        throw ContractError("audit start index beyond trace length");
    }
    std::vector<CycleViolation> out;
    if (records.empty()) {
        return out;
    }
    // rewarded[i] = number of rewarding records among [0, i).
    std::vector<std::size_t> rewarded(records.size() + 1, 0);
    std::uint32_t max_state = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        rewarded[i + 1] = rewarded[i] + (records[i].reward > 0 ? 1 : 0);
        max_state = std::max({max_state, records[i].state.index, records[i].next_state.index});
    }
    std::vector<std::optional<std::size_t>> last_visit(static_cast<std::size_t>(max_state) + 1);
    auto state_at = [&](std::size_t pos) {
        return pos < records.size() ? records[pos].state : records.back().next_state;
    };
    for (std::size_t pos = from_index; pos <= records.size(); ++pos) {
        const StateId s = state_at(pos);
        if (const auto prev = last_visit[s.index]; prev && rewarded[pos] == rewarded[*prev]) {
            out.push_back({*prev, pos, s});
        }
        last_visit[s.index] = pos;
    }
    return out;
}

std::vector<CycleViolation> audit_cycles(const RunTrace& trace, std::size_t from_index) {
    return audit_cycles(trace.records, from_index);
}

}  // namespace valueramp
