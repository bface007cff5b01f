#pragma once

#include "valueramp/random.hpp"
#include "valueramp/task.hpp"
#include "valueramp/types.hpp"
#include "valueramp/value_function.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace valueramp {

// ---------------------------------------------------------------------------
// Parameters

struct ZeroInit {
    bool operator==(const ZeroInit&) const = default;
};

/// Each entry i.i.d. uniform in [lo, hi].
struct UniformInit {
    Value lo = 0;
    Value hi = 0;
    bool operator==(const UniformInit&) const = default;
};

using InitSpec = std::variant<ZeroInit, UniformInit>;

/// "zero" or "uniform:LO..HI".
[[nodiscard]] InitSpec parse_init_spec(std::string_view text);
[[nodiscard]] std::string to_string(const InitSpec& spec);

/// Stop after exactly n transitions.
struct StepsStop {
    std::uint64_t n = 0;
    bool operator==(const StepsStop&) const = default;
};

/// Stop once the last `window` transitions changed nothing and covered every
/// pair. Default window is 50 |S| |A|.
struct FixpointStop {
    std::optional<std::uint64_t> window;
    bool operator==(const FixpointStop&) const = default;
};

/// Stop at a good configuration, testing every `check_every` steps
/// (default |S|). Only meaningful on navigation problems.
struct GoodConfigStop {
    std::optional<std::uint64_t> check_every;
    bool operator==(const GoodConfigStop&) const = default;
};

using StopCondition = std::variant<StepsStop, FixpointStop, GoodConfigStop>;

[[nodiscard]] std::string to_string(const StopCondition& stop);
/// "steps:N", "fixpoint", "fixpoint:W", "good-config" or "good-config:N".
[[nodiscard]] StopCondition parse_stop_condition(std::string_view text);

struct RunnerParams {
    Probability epsilon;
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 0;
    InitSpec init = ZeroInit{};
    std::vector<StopCondition> stop;
};

enum class StopReason {
    steps,  // step condition or the max_steps budget
    fixpoint,
    good_configuration,
};

[[nodiscard]] std::string_view to_string(StopReason reason);
[[nodiscard]] StopReason parse_stop_reason(std::string_view text);

// ---------------------------------------------------------------------------
// Traces

/// One step (s, a, s') of a run with the single value entry it touched.
struct TransitionRecord {
    std::uint64_t step_index = 0;
    StateId state;
    ActionId action;
    StateId next_state;
    Reward reward = 0;
    Value value_before = 0;
    Value value_after = 0;
    bool explored = false;

    [[nodiscard]] bool changed() const noexcept { return value_before != value_after; }
    bool operator==(const TransitionRecord&) const = default;
};

/// Finite prefix of a run. Replaying the records over `initial_values`
/// reconstructs every intermediate value function.
struct RunTrace {
    ValueFunction initial_values;
    StateId initial_state;
    std::vector<TransitionRecord> records;
    RunnerParams params;
    std::uint64_t step_size = 1;
    std::uint64_t task_fingerprint = 0;
    StopReason stop_reason = StopReason::steps;

    [[nodiscard]] ValueFunction final_values() const;
    [[nodiscard]] Configuration final_configuration() const;
};

/// Apply each record's value_after in order.
[[nodiscard]] ValueFunction replay(const ValueFunction& initial,
                                   std::span<const TransitionRecord> records);

// ---------------------------------------------------------------------------
// Operations

[[nodiscard]] ValueFunction init_values(const TaskModel& task, const InitSpec& spec,
                                        std::uint64_t seed);

/// Random sources consumed by a single step.
struct StepRandomness {
    SplitMix64 action;
    SplitMix64 successor;
};

/// One iteration of the run loop: a uniformly random preferred action,
/// replaced with probability epsilon by a uniformly random action; a successor
/// sampled from tr(s,a); then the value update. `config` advances in place.
TransitionRecord step(const TaskModel& task, Configuration& config, StepSize k,
                      const Probability& epsilon, StepRandomness& rng,
                      std::uint64_t step_index);

/// Same as step() with the action fixed by the caller.
TransitionRecord step_with_action(const TaskModel& task, Configuration& config, StepSize k,
                                  ActionId action, SplitMix64& successor_rng,
                                  std::uint64_t step_index);

/// Stateful stepping engine; run() is built on it. Holds a reference to the task.
class Simulator {
public:
    /// Initial values and start state drawn from params.seed.
    Simulator(const TaskModel& task, StepSize k, const RunnerParams& params);
    /// Explicit initial configuration.
    Simulator(const TaskModel& task, StepSize k, Probability epsilon, std::uint64_t seed,
              Configuration initial);

    [[nodiscard]] const Configuration& configuration() const noexcept { return config_; }
    [[nodiscard]] std::uint64_t steps_taken() const noexcept { return steps_; }
    [[nodiscard]] StepSize step_size() const noexcept { return k_; }

    TransitionRecord step();
    TransitionRecord step_with_action(ActionId action);

    void set_epsilon(Probability epsilon) { epsilon_ = std::move(epsilon); }

private:
    const TaskModel* task_;
    StepSize k_;
    Probability epsilon_;
    StepRandomness rng_;
    Configuration config_;
    std::uint64_t steps_ = 0;
};

/// Uniformly random start state, then step until a stop condition fires or
/// params.max_steps transitions were taken.
[[nodiscard]] RunTrace run(const TaskModel& task, const RunnerParams& params, StepSize k);

/// True iff no record in `window` changed a value and every (s,a) pair of an
/// n_states x n_actions task was executed at least once in it.
[[nodiscard]] bool detect_fixpoint(std::span<const TransitionRecord> window,
                                   std::size_t n_states, std::size_t n_actions);

[[nodiscard]] std::uint64_t default_fixpoint_window(const TaskModel& task);

/// Incremental form of detect_fixpoint over a growing stream of records.
class FixpointMonitor {
public:
    FixpointMonitor(std::size_t n_states, std::size_t n_actions, std::uint64_t window);

    /// Feed the next record; returns true if the trailing window is a fixpoint.
    bool observe(const TransitionRecord& record);

private:
    std::size_t n_actions_;
    std::uint64_t window_;
    std::uint64_t seen_ = 0;
    std::optional<std::uint64_t> last_change_;
    std::vector<std::optional<std::uint64_t>> last_exec_;
    std::optional<std::size_t> blocking_pair_;
};

}  // namespace valueramp
