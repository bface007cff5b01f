#include "valueramp/runner.hpp"

#include "valueramp/analysis.hpp"
#include "valueramp/learning_rule.hpp"
#include "valueramp/text.hpp"

#include <algorithm>

namespace valueramp {

// ---------------------------------------------------------------------------
// Parameter text forms

InitSpec parse_init_spec(std::string_view text) {
    if (text == "zero") {
        return ZeroInit{};
    }
    constexpr std::string_view prefix = "uniform:";
    if (text.substr(0, prefix.size()) == prefix) {
        const auto body = text.substr(prefix.size());
        const auto dots = body.find("..");
        if (dots != std::string_view::npos) {
            const auto lo = detail::parse_natural(body.substr(0, dots));
            const auto hi = detail::parse_natural(body.substr(dots + 2));
            if (lo && hi) {
                if (*lo > *hi) {
                    throw ContractError("init interval has lo > hi");
                }
                if (*hi > kMaxReward) {
                    throw ContractError("init upper bound exceeds arithmetic cap");
                }
                return UniformInit{*lo, *hi};
            }
        }
    }
    throw ContractError("init must be 'zero' or 'uniform:LO..HI', got '" + std::string(text) +
                        "'");
}

std::string to_string(const InitSpec& spec) {
    if (const auto* u = std::get_if<UniformInit>(&spec)) {
        return "uniform:" + std::to_string(u->lo) + ".." + std::to_string(u->hi);
    }
    return "zero";
}

std::string to_string(const StopCondition& stop) {
    if (const auto* s = std::get_if<StepsStop>(&stop)) {
        return "steps:" + std::to_string(s->n);
    }
    if (const auto* f = std::get_if<FixpointStop>(&stop)) {
        return f->window ? "fixpoint:" + std::to_string(*f->window) : "fixpoint";
    }
    const auto& g = std::get<GoodConfigStop>(stop);
    return g.check_every ? "good-config:" + std::to_string(*g.check_every) : "good-config";
}

StopCondition parse_stop_condition(std::string_view text) {
    const auto colon = text.find(':');
    const auto head = text.substr(0, colon);
    std::optional<std::uint64_t> arg;
    if (colon != std::string_view::npos) {
        arg = detail::parse_natural(text.substr(colon + 1));
        if (!arg) {
            throw ContractError("bad stop condition argument in '" + std::string(text) + "'");
        }
    }
    if (head == "steps" && arg) {
        return StepsStop{*arg};
    }
    if (head == "fixpoint") {
        return FixpointStop{arg};
    }
    if (head == "good-config") {
        return GoodConfigStop{arg};
    }
    throw ContractError("unknown stop condition '" + std::string(text) + "'");
}

std::string_view to_string(StopReason reason) {
    switch (reason) {
        case StopReason::steps:
            return "steps";
        case StopReason::fixpoint:
            return "fixpoint";
        case StopReason::good_configuration:
            return "good-configuration";
    }
    return "steps";
}

StopReason parse_stop_reason(std::string_view text) {
    if (text == "steps") {
        return StopReason::steps;
    }
    if (text == "fixpoint") {
        return StopReason::fixpoint;
    }
    if (text == "good-configuration") {
        return StopReason::good_configuration;
    }
    throw ContractError("unknown stop reason '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Traces

ValueFunction replay(const ValueFunction& initial, std::span<const TransitionRecord> records) {
    ValueFunction values = initial;
    for (const auto& r : records) {
        values.set(r.state, r.action, r.value_after);
    }
    return values;
}

ValueFunction RunTrace::final_values() const { return replay(initial_values, records); }

Configuration RunTrace::final_configuration() const {
    return {records.empty() ? initial_state : records.back().next_state, final_values()};
}

// ---------------------------------------------------------------------------
// Stepping

ValueFunction init_values(const TaskModel& task, const InitSpec& spec, std::uint64_t seed) {
    ValueFunction values(task.n_states(), task.n_actions());
    if (const auto* u = std::get_if<UniformInit>(&spec)) {
        if (u->lo > u->hi) {
            throw ContractError("init interval has lo > hi");
        }
        if (u->hi > kMaxReward) {
            throw ContractError("init upper bound exceeds arithmetic cap");
        }
        auto rng = derive_stream(seed, RandomStream::initial_values);
        for (std::size_t s = 0; s < task.n_states(); ++s) {
            for (std::size_t a = 0; a < task.n_actions(); ++a) {
                values.set(StateId(s), ActionId(a), rng.uniform_between(u->lo, u->hi));
            }
        }
    }
    return values;
}

TransitionRecord step_with_action(const TaskModel& task, Configuration& config, StepSize k,
                                  ActionId action, SplitMix64& successor_rng,
                                  std::uint64_t step_index) {
    const StateId s = config.state;
    const auto next = task.successors(s, action);
    const auto weights = task.successor_weights(s, action);
    const std::size_t pick = weights.empty() ? successor_rng.uniform_below(next.size())
                                             : successor_rng.weighted_index(weights);
    const StateId s_next = next[pick];
    const Reward r = task.reward(s, action);
    const auto result = update_in_place(config.values, s, action, s_next, r, k);
    config.state = s_next;
    return {step_index, s, action, s_next, r, result.before, result.after, false};
}

TransitionRecord step(const TaskModel& task, Configuration& config, StepSize k,
                      const Probability& epsilon, StepRandomness& rng,
                      std::uint64_t step_index) {
    // Draw the exploration coin first so the action stream consumption does
    // not depend on how many actions are preferred.
    const bool explored = epsilon.sample(rng.action);
    ActionId action;
    if (explored) {
        action = ActionId(rng.action.uniform_below(task.n_actions()));
    } else {
        const auto preferred = config.values.preferred_actions(config.state);
        action = preferred[rng.action.uniform_below(preferred.size())];
    }
    auto record = step_with_action(task, config, k, action, rng.successor, step_index);
    record.explored = explored;
    return record;
}

namespace {

StateId draw_start(const TaskModel& task, std::uint64_t seed) {
    auto rng = derive_stream(seed, RandomStream::start_state);
    const auto starts = task.start_states();
    return starts[rng.uniform_below(starts.size())];
}

}  // namespace

Simulator::Simulator(const TaskModel& task, StepSize k, const RunnerParams& params)
    : Simulator(task, k, params.epsilon, params.seed,
                Configuration{draw_start(task, params.seed),
                              init_values(task, params.init, params.seed)}) {}

Simulator::Simulator(const TaskModel& task, StepSize k, Probability epsilon, std::uint64_t seed,
                     Configuration initial)
    : task_(&task),
      k_(k),
      epsilon_(std::move(epsilon)),
      rng_{derive_stream(seed, RandomStream::action_choice),
           derive_stream(seed, RandomStream::successor_choice)},
      config_(std::move(initial)) {
    if (!task.contains(config_.state)) {
        throw DomainError("initial state outside task domain");
    }
    if (config_.values.n_states() != task.n_states() ||
        config_.values.n_actions() != task.n_actions()) {
        throw DomainError("initial value function does not match task shape");
    }
}

TransitionRecord Simulator::step() {
    return valueramp::step(*task_, config_, k_, epsilon_, rng_, steps_++);
}

TransitionRecord Simulator::step_with_action(ActionId action) {
    return valueramp::step_with_action(*task_, config_, k_, action, rng_.successor, steps_++);
}

// ---------------------------------------------------------------------------
// Fixpoint detection

bool detect_fixpoint(std::span<const TransitionRecord> window, std::size_t n_states,
                     std::size_t n_actions) {
    if (window.empty()) {
        return false;
    }
    std::vector<bool> covered(n_states * n_actions, false);
    std::size_t n_covered = 0;
    for (const auto& r : window) {
        if (r.changed()) {
            return false;
        }
        const auto i = static_cast<std::size_t>(r.state.index) * n_actions + r.action.index;
        if (i >= covered.size()) {
            throw DomainError("record outside task domain");
        }
        if (!covered[i]) {
            covered[i] = true;
            ++n_covered;
        }
    }
    return n_covered == covered.size();
}

std::uint64_t default_fixpoint_window(const TaskModel& task) {
    return 50 * static_cast<std::uint64_t>(task.n_states()) * task.n_actions();
}

FixpointMonitor::FixpointMonitor(std::size_t n_states, std::size_t n_actions,
                                 std::uint64_t window)
    : n_actions_(n_actions), window_(window), last_exec_(n_states * n_actions) {
    if (window == 0) {
        throw ContractError("fixpoint window must be at least 1");
    }
}

bool FixpointMonitor::observe(const TransitionRecord& record) {
    const std::uint64_t t = seen_++;
    const auto pair = static_cast<std::size_t>(record.state.index) * n_actions_ +
                      record.action.index;
    last_exec_.at(pair) = t;
    if (record.changed()) {
        last_change_ = t;
    }
    if (seen_ < window_) {
        return false;
    }
    const std::uint64_t window_start = seen_ - window_;
    if (last_change_ && *last_change_ >= window_start) {
        return false;
    }
    // A pair that fell out of the window blocks success until it is executed
    // again, so the full coverage scan only runs after that happens.
    if (blocking_pair_ && *last_exec_[*blocking_pair_] < window_start) {
        return false;
    }
    blocking_pair_.reset();
    for (std::size_t i = 0; i < last_exec_.size(); ++i) {
        if (!last_exec_[i] || *last_exec_[i] < window_start) {
            blocking_pair_ = i;
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Runs

RunTrace run(const TaskModel& task, const RunnerParams& params, StepSize k) {
    Simulator sim(task, k, params);

    RunTrace trace;
    trace.initial_values = sim.configuration().values;
    trace.initial_state = sim.configuration().state;
    trace.params = params;
    trace.step_size = k.value();
    trace.task_fingerprint = task.fingerprint();
    trace.stop_reason = StopReason::steps;

    std::optional<std::uint64_t> step_limit;
    std::optional<FixpointMonitor> fixpoint;
    std::optional<std::uint64_t> good_every;
    for (const auto& stop : params.stop) {
        if (const auto* s = std::get_if<StepsStop>(&stop)) {
            step_limit = std::min(step_limit.value_or(s->n), s->n);
        } else if (const auto* f = std::get_if<FixpointStop>(&stop)) {
            fixpoint.emplace(task.n_states(), task.n_actions(),
                             f->window.value_or(default_fixpoint_window(task)));
        } else {
            const auto& g = std::get<GoodConfigStop>(stop);
            const auto every = g.check_every.value_or(task.n_states());
            if (every == 0) {
                throw ContractError("good-configuration check interval must be positive");
            }
            if (!is_navigation_problem(task, k)) {
                throw ContractError("good-configuration stop requires a navigation problem");
            }
            good_every = every;
        }
    }
    const std::uint64_t budget = std::min(params.max_steps, step_limit.value_or(params.max_steps));

    auto good_now = [&] {
        return good_every && sim.steps_taken() % *good_every == 0 &&
               is_good_configuration(sim.configuration(), task, k);
    };

    if (good_now()) {
        trace.stop_reason = StopReason::good_configuration;
        return trace;
    }
    while (sim.steps_taken() < budget) {
        trace.records.push_back(sim.step());
        if (fixpoint && fixpoint->observe(trace.records.back())) {
            trace.stop_reason = StopReason::fixpoint;
            break;
        }
        if (good_now()) {
            trace.stop_reason = StopReason::good_configuration;
            break;
        }
    }
    return trace;
}

}  // namespace valueramp
