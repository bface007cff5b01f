#pragma once

#include "valueramp/types.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace valueramp {

/// A finite task (S, S_start, A, tr, R) with dense state and action ids.
///
/// Immutable once built; construct through TaskBuilder. Successor sets are
/// stored sorted and duplicate-free. A task may optionally carry integer
/// sampling weights per successor; these only bias the runner and play no
/// role in any structural predicate.
class TaskModel {
public:
    [[nodiscard]] std::size_t n_states() const noexcept { return state_names_.size(); }
    [[nodiscard]] std::size_t n_actions() const noexcept { return action_names_.size(); }

    [[nodiscard]] std::span<const StateId> start_states() const noexcept { return starts_; }
    [[nodiscard]] std::span<const StateId> successors(StateId s, ActionId a) const;
    /// Empty span means uniform sampling over successors(s, a).
    [[nodiscard]] std::span<const std::uint64_t> successor_weights(StateId s, ActionId a) const;
    [[nodiscard]] Reward reward(StateId s, ActionId a) const;

    [[nodiscard]] bool is_start(StateId s) const;

    [[nodiscard]] const std::string& state_name(StateId s) const;
    [[nodiscard]] const std::string& action_name(ActionId a) const;
    [[nodiscard]] std::optional<StateId> find_state(std::string_view name) const;
    [[nodiscard]] std::optional<ActionId> find_action(std::string_view name) const;

    [[nodiscard]] bool contains(StateId s) const noexcept { return s.index < n_states(); }
    [[nodiscard]] bool contains(ActionId a) const noexcept { return a.index < n_actions(); }

    [[nodiscard]] Reward max_reward() const noexcept { return max_reward_; }

    /// FNV-1a over the canonical task text; identifies a task in trace files.
    [[nodiscard]] std::uint64_t fingerprint() const noexcept { return fingerprint_; }

    bool operator==(const TaskModel& other) const;

private:
    friend class TaskBuilder;
    TaskModel() = default;

    [[nodiscard]] std::size_t pair_index(StateId s, ActionId a) const;

    std::vector<std::string> state_names_;
    std::vector<std::string> action_names_;
    std::vector<StateId> starts_;
    std::vector<std::vector<StateId>> successors_;
    std::vector<std::vector<std::uint64_t>> weights_;
    std::vector<Reward> rewards_;
    std::vector<bool> is_start_;
    Reward max_reward_ = 0;
    std::uint64_t fingerprint_ = 0;
};

/// Collects task parts and validates them into a TaskModel.
class TaskBuilder {
public:
    TaskBuilder(std::vector<std::string> state_names, std::vector<std::string> action_names);
    /// Anonymous states "s0".."s{n-1}" and actions "a0".."a{m-1}".
    TaskBuilder(std::size_t n_states, std::size_t n_actions);

    TaskBuilder& add_start(StateId s);
    TaskBuilder& set_successors(StateId s, ActionId a, std::vector<StateId> next);
    /// Weighted successors; weights must be positive and align with `next`.
    /// Duplicate successors have their weights summed.
    TaskBuilder& set_weighted_successors(StateId s, ActionId a, std::vector<StateId> next,
                                         std::vector<std::uint64_t> weights);
    TaskBuilder& set_reward(StateId s, ActionId a, Reward r);

    [[nodiscard]] bool has_successors(StateId s, ActionId a) const;

    /// Throws ContractError when tr is not total or a start set is empty.
    [[nodiscard]] TaskModel build() const;

private:
    [[nodiscard]] std::size_t pair_index(StateId s, ActionId a) const;

    std::vector<std::string> state_names_;
    std::vector<std::string> action_names_;
    std::vector<StateId> starts_;
    std::vector<std::vector<StateId>> successors_;
    std::vector<std::vector<std::uint64_t>> weights_;
    std::vector<Reward> rewards_;
};

// ---------------------------------------------------------------------------
// Structural predicates

/// Every successor set is a singleton.
[[nodiscard]] bool is_deterministic(const TaskModel& task);

/// Every ordered pair of states is joined by a directed path.
[[nodiscard]] bool is_connected(const TaskModel& task);

struct RewardSummary {
    /// Pairs carrying the maximal nonzero reward M.
    std::vector<StateAction> rewarding_pairs;
    /// States owning at least one rewarding pair, ascending.
    std::vector<StateId> goals;
    /// Largest nonzero reward; absent when all rewards are zero.
    std::optional<Reward> max_reward;
};

[[nodiscard]] RewardSummary goals_and_rewards(const TaskModel& task);

/// Exactly one nonzero reward quantity M, present at least once, M > |S| K.
[[nodiscard]] bool is_navigation_problem(const TaskModel& task, StepSize k);

struct ReducibilityReport {
    /// Cumulative layers R1 ⊆ R2 ⊆ ... up to and including the fixpoint.
    std::vector<std::vector<StateId>> layers;
    std::vector<StateId> reducible;
    std::vector<StateId> non_reducible;
    /// 1-based index of the first layer containing each state.
    std::vector<std::optional<std::size_t>> layer_index;

    [[nodiscard]] bool is_reducible_state(StateId s) const {
        return layer_index.at(s.index).has_value();
    }
};

/// Layer fixpoint: R1 = goals, Ri adds states with an action whose whole
/// successor set lies in R(i-1).
[[nodiscard]] ReducibilityReport reducibility(const TaskModel& task);

/// Starts are reducible and every non-reducible state can reach every start
/// through non-reducible intermediates.
[[nodiscard]] bool is_reducible(const TaskModel& task);
[[nodiscard]] bool is_reducible(const TaskModel& task, const ReducibilityReport& report);

/// Every rewarding pair's successor set equals the start set.
[[nodiscard]] bool is_restartable(const TaskModel& task);

}  // namespace valueramp
