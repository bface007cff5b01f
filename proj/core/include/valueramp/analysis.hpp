#pragma once

#include "valueramp/runner.hpp"
#include "valueramp/task.hpp"
#include "valueramp/types.hpp"
#include "valueramp/value_function.hpp"

#include <optional>
#include <span>
#include <vector>

namespace valueramp {

// ---------------------------------------------------------------------------
// Action paths

/// (s1,a1),...,(sn,an) with s(i+1) in tr(si, ai). Nonempty when feasible.
using ActionPath = std::vector<StateAction>;

[[nodiscard]] bool is_feasible(const TaskModel& task, std::span<const StateAction> path);

/// max over 1-based i of clamp(R(si,ai) - i K). Throws ContractError on an
/// infeasible or empty path.
[[nodiscard]] Value path_value(const TaskModel& task, std::span<const StateAction> path,
                               StepSize k);

/// Cycle-free path from the same state with path_value no smaller: truncate
/// after the first value-attaining pair, then collapse every state cycle
/// (s,a)...(s,a') to (s,a').
[[nodiscard]] ActionPath decycle(const TaskModel& task, std::span<const StateAction> path,
                                 StepSize k);

[[nodiscard]] bool has_repeated_state(std::span<const StateAction> path);

/// Smallest 1-based i with R(si,ai) equal to the task's maximal reward M.
[[nodiscard]] std::optional<std::size_t> rewarding_length(const TaskModel& task,
                                                          std::span<const StateAction> path);

// ---------------------------------------------------------------------------
// Optimal values (deterministic tasks only; others throw UnsupportedError)

/// v*(s) for every state by |S| rounds of
/// v(s) <- max_a max(clamp(R(s,a) - K), clamp(v(s') - K)) from v = 0.
[[nodiscard]] std::vector<Value> optimal_values(const TaskModel& task, StepSize k);
[[nodiscard]] Value optimal_value(const TaskModel& task, StateId s, StepSize k);

/// v*(s) by exhaustive enumeration of cycle-free action paths from s. No
/// memoization; exponential, intended for small tasks and as an oracle.
[[nodiscard]] Value optimal_value_by_enumeration(const TaskModel& task, StateId s, StepSize k);
[[nodiscard]] std::vector<Value> optimal_values_by_enumeration(const TaskModel& task,
                                                               StepSize k);

/// v*(s) = max over rewarding pairs (g,a) of clamp(R(g,a) - (d(s,g)+1) K), d
/// the BFS state distance. Polynomial; usable as an oracle on large maps.
[[nodiscard]] std::vector<Value> optimal_values_by_distance(const TaskModel& task, StepSize k);

/// Q(s,a) = clamp(max(v*(s'), R(s,a)) - K). Valid, optimal and consistent.
[[nodiscard]] ValueFunction optimal_value_function(const TaskModel& task, StepSize k);

// ---------------------------------------------------------------------------
// Validity, consistency, violations (deterministic tasks only)

/// The pair (s,a) is a violation when V(s,a) > clamp(max(V(s'), R(s,a)) - K).
[[nodiscard]] bool is_violation(const ValueFunction& values, const TaskModel& task,
                                StateAction pair, StepSize k);

/// First violating pair in (state, action) order, if any.
[[nodiscard]] std::optional<StateAction> find_violation(const ValueFunction& values,
                                                        const TaskModel& task, StepSize k);
[[nodiscard]] bool is_valid(const ValueFunction& values, const TaskModel& task, StepSize k);

/// First (s,a), a preferred at s, with V(s) != clamp(max(V(s'), R(s,a)) - K).
[[nodiscard]] std::optional<StateAction> find_inconsistency(const ValueFunction& values,
                                                            const TaskModel& task, StepSize k);
[[nodiscard]] bool is_consistent(const ValueFunction& values, const TaskModel& task,
                                 StepSize k);

struct ViolationReport {
    std::vector<StateAction> pairs;
    /// Largest value among violating pairs, 0 when there are none.
    Value violmax = 0;
};

[[nodiscard]] ViolationReport violations(const ValueFunction& values, const TaskModel& task,
                                         StepSize k);

struct CeilingReport {
    /// max(max reward, max value).
    Value ceil = 0;
    /// max value.
    Value highest = 0;
};

[[nodiscard]] CeilingReport ceil_and_highest(const ValueFunction& values, const TaskModel& task);

// ---------------------------------------------------------------------------
// Value-sprints

/// Records [start_index, end_index] of a trace. Every step before the end
/// climbs, V(s_i) <= V(s_{i+1}) - K, under the value function in force just
/// before that step; the end step does not.
struct Sprint {
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    ActionPath path;

    [[nodiscard]] std::size_t length() const noexcept { return end_index - start_index + 1; }
};

struct SprintDecomposition {
    std::vector<Sprint> sprints;
    /// Trailing records that climbed all the way to the end of the trace.
    std::optional<Sprint> incomplete;
};

[[nodiscard]] SprintDecomposition sprints(const RunTrace& trace, StepSize k);
[[nodiscard]] SprintDecomposition sprints(const ValueFunction& initial,
                                          std::span<const TransitionRecord> records, StepSize k);

// ---------------------------------------------------------------------------
// Shortest reward distance

/// Minimum n such that some path of n pairs from s ends in a pair carrying
/// the maximal reward; absent when no such pair is reachable.
[[nodiscard]] std::optional<std::size_t> shortest_reward_distance(const TaskModel& task,
                                                                  StateId s);
[[nodiscard]] std::vector<std::optional<std::size_t>> shortest_reward_distances(
    const TaskModel& task);

// ---------------------------------------------------------------------------
// Strategies (navigation problems only; others throw UnsupportedError)

struct StrategyReport {
    /// Cumulative layers strat1 ⊆ strat2 ⊆ ... up to the fixpoint index.
    std::vector<std::vector<StateId>> layers;
    std::vector<StateId> members;
    /// Smallest n after which no layer adds states; 0 for an empty strategy.
    std::size_t fixp = 0;

    [[nodiscard]] bool contains(StateId s) const;
};

/// strat1: V(s) = M - K and every preferred action is rewarding.
/// strat_i: V(s) = M - iK and every preferred action is non-rewarding, has
/// all successors in strat_(i-1) and some successor valued M - (i-1)K.
[[nodiscard]] StrategyReport strategy(const ValueFunction& values, const TaskModel& task,
                                      StepSize k);

/// Every start state and the current state are in the strategy.
[[nodiscard]] bool is_good_configuration(const Configuration& config, const TaskModel& task,
                                         StepSize k);

// ---------------------------------------------------------------------------
// Cycle audit

/// A recurrence s_begin = s_end with no reward observed on records
/// [begin, end).
struct CycleViolation {
    std::size_t begin = 0;
    std::size_t end = 0;
    StateId state;

    bool operator==(const CycleViolation&) const = default;
};

/// Minimal (most-recent-prior-visit) state cycles at or after `from_index`
/// that contain no rewarding transition.
[[nodiscard]] std::vector<CycleViolation> audit_cycles(std::span<const TransitionRecord> records,
                                                       std::size_t from_index = 0);
[[nodiscard]] std::vector<CycleViolation> audit_cycles(const RunTrace& trace,
                                                       std::size_t from_index = 0);

}  // namespace valueramp
