#pragma once
// Executable convergence and invariant checks. Each suite returns one result
// per named property; text() renders them as `CHECK <name> PASS|FAIL <details>`.

#include "valueramp/random.hpp"
#include "valueramp/runner.hpp"
#include "valueramp/task.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace valueramp {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string details;
};

class CheckReport {
public:
    void add(std::string name, bool passed, std::string details = {});
    void append(const CheckReport& other);

    [[nodiscard]] bool passed() const noexcept;
    [[nodiscard]] const std::vector<CheckResult>& results() const noexcept { return results_; }
    [[nodiscard]] std::string text() const;

private:
    std::vector<CheckResult> results_;
};

// ---------------------------------------------------------------------------
// Random tasks

struct RandomTaskOptions {
    std::size_t max_states = 8;
    std::size_t max_actions = 3;
    /// 1 gives deterministic tasks.
    std::size_t max_successors = 1;
    std::size_t max_starts = 2;
    /// Each pair carries a reward with probability 1/reward_one_in.
    std::uint64_t reward_one_in = 4;
    Reward max_reward = 20;
};

[[nodiscard]] TaskModel random_task(SplitMix64& rng, const RandomTaskOptions& options);

/// Like random_task, with every reward equal to one magnitude M > |S| K and
/// at least one rewarding pair.
[[nodiscard]] TaskModel random_navigation_task(SplitMix64& rng, const RandomTaskOptions& options,
                                               StepSize k);

// ---------------------------------------------------------------------------
// Suites

/// Exploring runs to a detected fixpoint on a deterministic task. Per seed:
/// fixpoint reached, state values equal the optimal values, V consistent, and
/// 10 |S| |A| further least-executed-action steps plus a sweep over every
/// transition change nothing.
struct ExploreCheck {
    StepSize k{1};
    InitSpec init = ZeroInit{};
    Probability epsilon{1, 1};
    std::vector<std::uint64_t> seeds{1};
    std::uint64_t max_steps = 50'000'000;
    std::optional<std::uint64_t> window;
};
[[nodiscard]] CheckReport check_explore(const TaskModel& task, const ExploreCheck& options);

/// A greedy run seeded with the optimal value function on a deterministic
/// navigation problem. Every completed sprint must have path value v*(first
/// state) and length equal to the shortest reward distance.
struct SprintCheck {
    StepSize k{1};
    std::uint64_t seed = 1;
    std::size_t min_sprints = 50;
    std::uint64_t max_steps = 1'000'000;
};
[[nodiscard]] CheckReport check_sprint(const TaskModel& task, const SprintCheck& options);

/// Greedy runs on a navigation problem. Per seed: a good configuration within
/// the budget, then no rewardless cycle in the following audit_steps steps.
struct GreedyCheck {
    StepSize k{1};
    InitSpec init = ZeroInit{};
    std::vector<std::uint64_t> seeds{1};
    std::uint64_t budget = 2'000'000;
    std::uint64_t audit_steps = 100'000;
};
[[nodiscard]] CheckReport check_greedy(const TaskModel& task, const GreedyCheck& options);

/// Three-state fluctuation task (states 1, 2, 3; actions a, b): exploring run
/// from zero, then the final values and the number of times V(1,a) moved
/// between 1 and 2.
struct FluctuateCheck {
    StepSize k{1};
    std::uint64_t seed = 1;
    std::uint64_t steps = 10'000;
    std::size_t min_alternations = 10;
};
[[nodiscard]] CheckReport check_fluctuate(const TaskModel& task, const FluctuateCheck& options);

/// Step-by-step invariants on random tasks with at most max_states states.
struct InvariantCheck {
    std::uint64_t seed = 1;
    std::uint64_t transitions = 10'000;
    std::size_t max_states = 8;
};
[[nodiscard]] CheckReport check_invariants(const InvariantCheck& options);

/// Agreement between independent oracles on random deterministic tasks.
struct OracleCheck {
    std::uint64_t seed = 1;
    std::size_t tasks = 200;
    std::size_t max_states = 8;
};
[[nodiscard]] CheckReport check_oracles(const OracleCheck& options);

}  // namespace valueramp
