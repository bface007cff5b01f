#include "valueramp/checks.hpp"

#include "valueramp/analysis.hpp"
#include "valueramp/learning_rule.hpp"

#include <algorithm>
#include <future>
#include <functional>

namespace valueramp {

void CheckReport::add(std::string name, bool passed, std::string details) {
    results_.push_back({std::move(name), passed, std::move(details)});
}

void CheckReport::append(const CheckReport& other) {
    results_.insert(results_.end(), other.results_.begin(), other.results_.end());
}

bool CheckReport::passed() const noexcept {
    return std::all_of(results_.begin(), results_.end(),
                       [](const CheckResult& r) { return r.passed; });
}

std::string CheckReport::text() const {
    std::string out;
    for (const auto& r : results_) {
        out += "CHECK " + r.name + (r.passed ? " PASS" : " FAIL");
        if (!r.details.empty()) {
            out += " " + r.details;
        }
        out += "\n";
    }
    return out;
}

namespace {

std::string tag(std::string_view name, std::uint64_t seed) {
    return std::string(name) + "[seed=" + std::to_string(seed) + "]";
}

std::string pair_text(const TaskModel& task, StateAction p) {
    return "(" + task.state_name(p.state) + "," + task.action_name(p.action) + ")";
}

// Runs one job per seed concurrently and concatenates the reports in seed
// order.
CheckReport fan_out(const std::vector<std::uint64_t>& seeds,
                    const std::function<CheckReport(std::uint64_t)>& job) {
    std::vector<std::future<CheckReport>> futures;
    futures.reserve(seeds.size());
    for (auto seed : seeds) {
        futures.push_back(std::async(std::launch::async, job, seed));
    }
    CheckReport report;
    for (auto& f : futures) {
        report.append(f.get());
    }
    return report;
}

std::vector<Value> state_values(const ValueFunction& v) {
    std::vector<Value> out(v.n_states());
    for (std::size_t s = 0; s < out.size(); ++s) {
        out[s] = v.state_value(StateId(s));
    }
    return out;
}

// First state where the two tables differ, as "name got/expected".
std::string first_mismatch(const TaskModel& task, const std::vector<Value>& got,
                           const std::vector<Value>& expected) {
    for (std::size_t s = 0; s < got.size(); ++s) {
        if (got[s] != expected[s]) {
            return task.state_name(StateId(s)) + " " + std::to_string(got[s]) + "/" +
                   std::to_string(expected[s]);
        }
    }
    return {};
}

}  // namespace

// ---------------------------------------------------------------------------
// Random tasks

TaskModel random_task(SplitMix64& rng, const RandomTaskOptions& options) {
    const auto n = rng.uniform_between(1, std::max<std::size_t>(1, options.max_states));
    const auto m = rng.uniform_between(1, std::max<std::size_t>(1, options.max_actions));
    TaskBuilder builder(n, m);
    const auto n_starts = rng.uniform_between(1, std::min<std::uint64_t>(options.max_starts, n));
    for (std::uint64_t i = 0; i < n_starts; ++i) {
        builder.add_start(StateId(rng.uniform_below(n)));
    }
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < m; ++a) {
            const auto width = rng.uniform_between(1, std::max<std::size_t>(1, options.max_successors));
            std::vector<StateId> next;
            for (std::uint64_t i = 0; i < width; ++i) {
                next.emplace_back(rng.uniform_below(n));
            }
            builder.set_successors(StateId(s), ActionId(a), std::move(next));
            if (options.reward_one_in > 0 && rng.uniform_below(options.reward_one_in) == 0) {
                builder.set_reward(StateId(s), ActionId(a),
                                   rng.uniform_between(1, options.max_reward));
            }
        }
    }
    return builder.build();
}

TaskModel random_navigation_task(SplitMix64& rng, const RandomTaskOptions& options, StepSize k) {
    RandomTaskOptions shape = options;
    shape.reward_one_in = 0;
    const TaskModel base = random_task(rng, shape);
    const auto n = base.n_states();
    const auto m = base.n_actions();
    const Reward big = n * k.value() + rng.uniform_between(1, 20);

    TaskBuilder builder(n, m);
    for (StateId s : base.start_states()) {
        builder.add_start(s);
    }
    bool any = false;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < m; ++a) {
            const auto next = base.successors(StateId(s), ActionId(a));
            builder.set_successors(StateId(s), ActionId(a), {next.begin(), next.end()});
            const auto one_in = std::max<std::uint64_t>(options.reward_one_in, 1);
            if (rng.uniform_below(one_in) == 0) {
                builder.set_reward(StateId(s), ActionId(a), big);
                any = true;
            }
        }
    }
    if (!any) {
        builder.set_reward(StateId(rng.uniform_below(n)), ActionId(rng.uniform_below(m)), big);
    }
    return builder.build();
}

// ---------------------------------------------------------------------------
// explore

CheckReport check_explore(const TaskModel& task, const ExploreCheck& options) {
    if (!is_deterministic(task)) {
        CheckReport report;
        report.add("explore.deterministic", false, "task is not deterministic");
        return report;
    }
    const auto optimal = optimal_values(task, options.k);
    const auto n_pairs = task.n_states() * task.n_actions();

    auto job = [&](std::uint64_t seed) {
        CheckReport report;
        RunnerParams params;
        params.epsilon = options.epsilon;
        params.seed = seed;
        params.init = options.init;
        Simulator sim(task, options.k, params);
        FixpointMonitor monitor(task.n_states(), task.n_actions(),
                                options.window.value_or(default_fixpoint_window(task)));
        bool fixed = false;
        while (!fixed && sim.steps_taken() < options.max_steps) {
            fixed = monitor.observe(sim.step());
        }
        report.add(tag("explore.fixpoint", seed), fixed,
                   "steps=" + std::to_string(sim.steps_taken()));

        const auto& values = sim.configuration().values;
        const auto got = state_values(values);
        const auto mismatch = first_mismatch(task, got, optimal);
        report.add(tag("explore.optimal", seed), mismatch.empty(),
                   mismatch.empty() ? "states=" + std::to_string(got.size())
                                    : "first mismatch " + mismatch);

        const auto bad = find_inconsistency(values, task, options.k);
        report.add(tag("explore.consistent", seed), !bad,
                   bad ? "inconsistent at " + pair_text(task, *bad) : "");

        // Forced coverage: always take the least executed action here.
        std::vector<std::uint64_t> executed(n_pairs, 0);
        std::uint64_t changes = 0;
        const std::uint64_t forced = 10 * static_cast<std::uint64_t>(n_pairs);
        for (std::uint64_t i = 0; i < forced; ++i) {
            const StateId s = sim.configuration().state;
            const auto row = executed.begin() + static_cast<std::ptrdiff_t>(s.index * task.n_actions());
            const auto a = static_cast<std::size_t>(
                std::min_element(row, row + static_cast<std::ptrdiff_t>(task.n_actions())) - row);
            ++executed[s.index * task.n_actions() + a];
            changes += sim.step_with_action(ActionId(a)).changed() ? 1 : 0;
        }
        const auto covered = static_cast<std::size_t>(
            std::count_if(executed.begin(), executed.end(), [](auto c) { return c > 0; }));
        std::uint64_t sweep_changes = 0;
        const auto& after = sim.configuration().values;
        for (std::size_t s = 0; s < task.n_states(); ++s) {
            for (std::size_t a = 0; a < task.n_actions(); ++a) {
                for (StateId t : task.successors(StateId(s), ActionId(a))) {
                    ValueFunction copy = after;
                    const auto r = task.reward(StateId(s), ActionId(a));
                    if (update_in_place(copy, StateId(s), ActionId(a), t, r, options.k).changed()) {
                        ++sweep_changes;
                    }
                }
            }
        }
        report.add(tag("explore.fixed", seed), changes == 0 && sweep_changes == 0,
                   "forced_steps=" + std::to_string(forced) + " covered=" +
                       std::to_string(covered) + "/" + std::to_string(n_pairs) +
                       " changes=" + std::to_string(changes) +
                       " sweep_changes=" + std::to_string(sweep_changes));
        return report;
    };
    return fan_out(options.seeds, job);
}

// ---------------------------------------------------------------------------
// sprint

CheckReport check_sprint(const TaskModel& task, const SprintCheck& options) {
    CheckReport report;
    const bool ok = is_deterministic(task) && is_navigation_problem(task, options.k);
    report.add("sprint.navigation", ok, ok ? "" : "task is not a deterministic navigation problem");
    if (!ok) {
        return report;
    }
    const auto optimal = optimal_values(task, options.k);
    const auto distance = shortest_reward_distances(task);
    const ValueFunction seeded = optimal_value_function(task, options.k);
    report.add("sprint.seed_consistent",
               is_valid(seeded, task, options.k) && is_consistent(seeded, task, options.k));

    RunnerParams params;
    params.seed = options.seed;
    const StateId start =
        Simulator(task, options.k, params).configuration().state;
    Simulator sim(task, options.k, Probability{}, options.seed, Configuration{start, seeded});

    // Count sprint ends on the fly; the value table is not expected to move.
    std::vector<TransitionRecord> records;
    std::size_t ends = 0;
    while (ends < options.min_sprints && sim.steps_taken() < options.max_steps) {
        const auto& before = sim.configuration().values;
        const auto here = static_cast<std::int64_t>(before.state_value(sim.configuration().state));
        records.push_back(sim.step());
        const auto& r = records.back();
        const auto& v = sim.configuration().values;
        // s' is not the updated state, except on a self-loop, so its value
        // before the step is recoverable from the post-step table.
        auto there = static_cast<std::int64_t>(v.state_value(r.next_state));
        if (r.next_state == r.state) {
            there = here;
        }
        if (here > there - options.k.signed_value()) {
            ++ends;
        }
    }
    const auto decomposition = sprints(seeded, records, options.k);
    std::size_t bad_value = 0;
    std::size_t bad_length = 0;
    std::string first;
    for (const auto& sp : decomposition.sprints) {
        const StateId s = sp.path.front().state;
        const auto pv = path_value(task, sp.path, options.k);
        const auto d = distance[s.index];
        const bool value_ok = pv == optimal[s.index];
        const bool length_ok = d && sp.length() == *d;
        bad_value += value_ok ? 0 : 1;
        bad_length += length_ok ? 0 : 1;
        if ((!value_ok || !length_ok) && first.empty()) {
            first = " first_bad=[" + std::to_string(sp.start_index) + "," +
                    std::to_string(sp.end_index) + "] pval=" + std::to_string(pv) +
                    " v*=" + std::to_string(optimal[s.index]) +
                    " length=" + std::to_string(sp.length()) +
                    " distance=" + (d ? std::to_string(*d) : std::string("none"));
        }
    }
    const auto n = decomposition.sprints.size();
    report.add("sprint.count", n >= options.min_sprints,
               "sprints=" + std::to_string(n) + " steps=" + std::to_string(records.size()));
    report.add("sprint.optimal", n > 0 && bad_value == 0,
               "bad=" + std::to_string(bad_value) + first);
    report.add("sprint.shortest", n > 0 && bad_length == 0,
               "bad=" + std::to_string(bad_length) + first);
    return report;
}

// ---------------------------------------------------------------------------
// greedy

CheckReport check_greedy(const TaskModel& task, const GreedyCheck& options) {
    if (!is_navigation_problem(task, options.k)) {
        CheckReport report;
        report.add("greedy.navigation", false, "task is not a navigation problem");
        return report;
    }
    auto job = [&](std::uint64_t seed) {
        CheckReport report;
        RunnerParams params;
        params.seed = seed;
        params.init = options.init;
        Simulator sim(task, options.k, params);
        const auto every = static_cast<std::uint64_t>(task.n_states());
        bool good = is_good_configuration(sim.configuration(), task, options.k);
        while (!good && sim.steps_taken() < options.budget) {
            sim.step();
            good = sim.steps_taken() % every == 0 &&
                   is_good_configuration(sim.configuration(), task, options.k);
        }
        report.add(tag("greedy.good_configuration", seed), good,
                   "steps=" + std::to_string(sim.steps_taken()));
        if (!good) {
            report.add(tag("greedy.no_rewardless_cycle", seed), false, "not audited");
            return report;
        }
        std::vector<TransitionRecord> records;
        records.reserve(options.audit_steps);
        for (std::uint64_t i = 0; i < options.audit_steps; ++i) {
            records.push_back(sim.step());
        }
        const auto cycles = audit_cycles(records);
        std::string details = "audited=" + std::to_string(records.size()) +
                              " violations=" + std::to_string(cycles.size());
        if (!cycles.empty()) {
            details += " first=[" + std::to_string(cycles.front().begin) + "," +
                       std::to_string(cycles.front().end) + ") at " +
                       task.state_name(cycles.front().state);
        }
        report.add(tag("greedy.no_rewardless_cycle", seed), cycles.empty(), details);
        return report;
    };
    return fan_out(options.seeds, job);
}

// ---------------------------------------------------------------------------
// fluctuate

CheckReport check_fluctuate(const TaskModel& task, const FluctuateCheck& options) {
    CheckReport report;
    const auto s1 = task.find_state("1");
    const auto s2 = task.find_state("2");
    const auto s3 = task.find_state("3");
    const auto a = task.find_action("a");
    const auto b = task.find_action("b");
    if (!s1 || !s2 || !s3 || !a || !b) {
        report.add("fluctuate.shape", false, "task needs states 1 2 3 and actions a b");
        return report;
    }
    RunnerParams params;
    params.epsilon = Probability(1, 1);
    params.seed = options.seed;
    Simulator sim(task, options.k, params);
    std::size_t alternations = 0;
    while (sim.steps_taken() < options.steps) {
        const auto r = sim.step();
        if (r.state == *s1 && r.action == *a &&
            std::min(r.value_before, r.value_after) == 1 &&
            std::max(r.value_before, r.value_after) == 2) {
            ++alternations;
        }
    }
    const auto& v = sim.configuration().values;
    auto expect = [&](std::string name, StateId s, ActionId act, Value want) {
        const Value got = v.at(s, act);
        report.add(std::move(name), got == want,
                   "V(" + task.state_name(s) + "," + task.action_name(act) +
                       ")=" + std::to_string(got) + " expected=" + std::to_string(want));
    };
    expect("fluctuate.v3a", *s3, *a, 3);
    expect("fluctuate.v3b", *s3, *b, 3);
    expect("fluctuate.v2a", *s2, *a, 2);
    expect("fluctuate.v2b", *s2, *b, 2);
    expect("fluctuate.v1b", *s1, *b, 1);
    report.add("fluctuate.v1a_alternates", alternations >= options.min_alternations,
               "alternations=" + std::to_string(alternations) +
                   " final=" + std::to_string(v.at(*s1, *a)));
    return report;
}

// ---------------------------------------------------------------------------
// invariants

namespace {

struct Tally {
    std::uint64_t checked = 0;
    std::uint64_t failed = 0;
    std::string first;

    void check(bool ok, const std::string& what) {
        ++checked;
        if (!ok) {
            if (failed == 0) {
                first = what;
            }
            ++failed;
        }
    }
    [[nodiscard]] std::string details() const {
        auto d = "checked=" + std::to_string(checked) + " failed=" + std::to_string(failed);
        if (failed > 0) {
            d += " first=" + first;
        }
        return d;
    }
};

bool contains_state(const std::vector<StateId>& sorted, StateId s) {
    return std::binary_search(sorted.begin(), sorted.end(), s);
}

}  // namespace

CheckReport check_invariants(const InvariantCheck& options) {
    SplitMix64 rng(options.seed);
    Tally ceil_tally, violmax_tally, valid_tally, monotone_tally, below_opt_tally, highest_tally,
        strat_bounds_tally, fixp_tally, strat_reduce_tally;
    std::uint64_t transitions = 0;
    std::uint64_t tasks = 0;

    while (transitions < options.transitions) {
        ++tasks;
        const StepSize k(rng.uniform_between(1, 3));
        RandomTaskOptions shape;
        shape.max_states = options.max_states;
        const bool deterministic = rng.uniform_below(2) == 0;
        shape.max_successors = deterministic ? 1 : 3;
        const bool navigation = rng.uniform_below(2) == 0;
        const TaskModel task =
            navigation ? random_navigation_task(rng, shape, k) : random_task(rng, shape);
        const std::string where = "task#" + std::to_string(tasks);

        const auto m = task.max_reward();
        const bool greedy = rng.uniform_below(3) == 0;
        RunnerParams params;
        params.seed = rng.next();
        params.epsilon = greedy ? Probability{} : Probability(rng.uniform_between(1, 4), 4);
        switch (rng.uniform_below(3)) {
            case 0:
                params.init = ZeroInit{};
                break;
            case 1:
                params.init = UniformInit{0, m > 0 ? m - 1 : 0};
                break;
            default:
                params.init = UniformInit{0, m + 10};
                break;
        }
        Simulator sim(task, k, params);
        const bool init_below_m = ceil_and_highest(sim.configuration().values, task).highest < m;

        std::optional<std::vector<Value>> optimal;
        std::optional<ReducibilityReport> reduce;
        if (deterministic) {
            optimal = optimal_values(task, k);
        }
        if (navigation) {
            reduce = reducibility(task);
        }

        const std::uint64_t length = 100;
        for (std::uint64_t i = 0; i < length && transitions < options.transitions;
             ++i, ++transitions) {
            const ValueFunction before = sim.configuration().values;
            const auto rec = sim.step();
            const ValueFunction& after = sim.configuration().values;
            const std::string at = where + "/step" + std::to_string(i);

            ceil_tally.check(
                ceil_and_highest(after, task).ceil <= ceil_and_highest(before, task).ceil, at);

            if (deterministic) {
                violmax_tally.check(violations(after, task, k).violmax <=
                                        violations(before, task, k).violmax,
                                    at);
                if (is_valid(before, task, k)) {
                    valid_tally.check(is_valid(after, task, k), at);
                    bool up = true;
                    for (std::size_t s = 0; s < task.n_states(); ++s) {
                        up = up && after.state_value(StateId(s)) >= before.state_value(StateId(s));
                    }
                    monotone_tally.check(up, at);
                }
                if (is_valid(after, task, k)) {
                    bool below = true;
                    for (std::size_t s = 0; s < task.n_states(); ++s) {
                        below = below && after.state_value(StateId(s)) <= (*optimal)[s];
                    }
                    below_opt_tally.check(below, at);
                }
            }

            if (navigation) {
                if (greedy && init_below_m) {
                    highest_tally.check(ceil_and_highest(after, task).highest < m, at);
                }
                const auto strat = strategy(after, task, k);
                bool bounds = true;
                for (StateId s : strat.members) {
                    const Value v = after.state_value(s);
                    bounds = bounds && v > 0 && v <= m - k.value();
                }
                strat_bounds_tally.check(bounds, at);
                fixp_tally.check(strat.fixp <= strat.members.size(), at);
                bool subset = true;
                for (StateId s : strat.members) {
                    subset = subset && contains_state(reduce->reducible, s);
                }
                strat_reduce_tally.check(subset, at);
            }
            (void)rec;
        }
    }

    CheckReport report;
    const auto add = [&](const char* name, const Tally& t) {
        report.add(name, t.failed == 0 && t.checked > 0, t.details());
    };
    report.add("invariants.transitions", transitions >= options.transitions,
               "transitions=" + std::to_string(transitions) + " tasks=" + std::to_string(tasks));
    add("invariants.ceil_non_increasing", ceil_tally);
    add("invariants.violmax_non_increasing", violmax_tally);
    add("invariants.validity_preserved", valid_tally);
    add("invariants.state_values_non_decreasing", monotone_tally);
    add("invariants.valid_below_optimal", below_opt_tally);
    add("invariants.greedy_highest_below_reward", highest_tally);
    add("invariants.strategy_value_bounds", strat_bounds_tally);
    add("invariants.strategy_fixp_bound", fixp_tally);
    add("invariants.strategy_within_reducible", strat_reduce_tally);
    return report;
}

// ---------------------------------------------------------------------------
// oracles

CheckReport check_oracles(const OracleCheck& options) {
    SplitMix64 rng(options.seed);
    Tally enum_tally, distance_tally, decycle_tally, sprint_tally;

    for (std::size_t t = 0; t < options.tasks; ++t) {
        const StepSize k(rng.uniform_between(1, 3));
        RandomTaskOptions shape;
        shape.max_states = options.max_states;
        shape.max_reward = 30;
        const TaskModel task = random_task(rng, shape);
        const std::string where = "task#" + std::to_string(t);

        const auto iterated = optimal_values(task, k);
        const auto enumerated = optimal_values_by_enumeration(task, k);
        enum_tally.check(iterated == enumerated,
                         where + " " + first_mismatch(task, enumerated, iterated));
        const auto by_distance = optimal_values_by_distance(task, k);
        distance_tally.check(iterated == by_distance,
                             where + " " + first_mismatch(task, by_distance, iterated));

        // Random walks as action paths.
        for (int w = 0; w < 5; ++w) {
            ActionPath path;
            StateId s(rng.uniform_below(task.n_states()));
            const auto len = rng.uniform_between(1, 16);
            for (std::uint64_t i = 0; i < len; ++i) {
                const ActionId a(rng.uniform_below(task.n_actions()));
                path.push_back({s, a});
                s = task.successors(s, a).front();
            }
            const auto cut = decycle(task, path, k);
            decycle_tally.check(!cut.empty() && cut.front().state == path.front().state &&
                                    is_feasible(task, cut) && !has_repeated_state(cut) &&
                                    path_value(task, cut, k) >= path_value(task, path, k),
                                where + "/walk" + std::to_string(w));
        }

        // Sprint decomposition of a random run: contiguous cover, climbing
        // interiors, non-climbing ends.
        RunnerParams params;
        params.seed = rng.next();
        params.epsilon = Probability(rng.uniform_below(5), 4);
        params.init = UniformInit{0, 40};
        params.max_steps = rng.uniform_between(0, 120);
        const auto trace = run(task, params, k);
        const auto parts = sprints(trace, k);
        std::vector<bool> climbs;
        {
            ValueFunction v = trace.initial_values;
            for (const auto& r : trace.records) {
                climbs.push_back(static_cast<std::int64_t>(v.state_value(r.state)) <=
                                 static_cast<std::int64_t>(v.state_value(r.next_state)) -
                                     k.signed_value());
                v.set(r.state, r.action, r.value_after);
            }
        }
        std::vector<Sprint> all = parts.sprints;
        if (parts.incomplete) {
            all.push_back(*parts.incomplete);
        }
        bool cover = true;
        std::size_t next = 0;
        for (std::size_t i = 0; i < all.size(); ++i) {
            const auto& sp = all[i];
            const bool last_incomplete = parts.incomplete && i + 1 == all.size();
            cover = cover && sp.start_index == next && sp.end_index >= sp.start_index &&
                    sp.path.size() == sp.length();
            if (!cover) {
                break;
            }
            for (std::size_t j = sp.start_index; j <= sp.end_index; ++j) {
                const auto& r = trace.records[j];
                cover = cover && sp.path[j - sp.start_index] == StateAction{r.state, r.action};
                const bool is_end = j == sp.end_index && !last_incomplete;
                cover = cover && climbs[j] == !is_end;
            }
            next = sp.end_index + 1;
        }
        cover = cover && next == trace.records.size();
        sprint_tally.check(cover, where);
    }

    CheckReport report;
    const auto add = [&](const char* name, const Tally& t) {
        report.add(name, t.failed == 0 && t.checked > 0, t.details());
    };
    add("oracles.enumeration_matches_iteration", enum_tally);
    add("oracles.distance_matches_iteration", distance_tally);
    add("oracles.decycle", decycle_tally);
    add("oracles.sprint_cover", sprint_tally);
    return report;
}

}  // namespace valueramp
