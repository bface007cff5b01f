#include "support.hpp"

#include "valueramp/analysis.hpp"
#include "valueramp/checks.hpp"
#include "valueramp/runner.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

using namespace valueramp;
using test::A;
using test::S;

namespace {

// u can idle or move to g; leaving g pays 10.
const char* kDetour = R"(task v1
states u g
actions stay go
start u
tr u stay u
tr u go g
tr g stay u
tr g go u
reward g go 10
)";

// Every action sequence of length <= |S| from s; a cycle-free optimum is
// never longer than that.
Value brute_force_value(const TaskModel& t, StateId s, StepSize k) {
    const auto kk = static_cast<std::int64_t>(k.value());
    Value best = 0;
    std::function<void(StateId, std::size_t)> walk = [&](StateId at, std::size_t depth) {
        if (depth == t.n_states()) {
            return;
        }
        for (std::size_t a = 0; a < t.n_actions(); ++a) {
            const auto r = static_cast<std::int64_t>(t.reward(at, A(a)));
            const auto i = static_cast<std::int64_t>(depth + 1);
            best = std::max(best, static_cast<Value>(std::max<std::int64_t>(r - i * kk, 0)));
            walk(t.successors(at, A(a))[0], depth + 1);
        }
    };
    walk(s, 0);
    return best;
}

}  // namespace

TEST(Paths, ValueAndFeasibility) {
    const TaskModel t = test::load_task("chain3.task");
    const ActionPath p{{S(0), A(0)}, {S(1), A(0)}, {S(2), A(0)}};
    EXPECT_TRUE(is_feasible(t, p));
    EXPECT_EQ(path_value(t, p, StepSize(1)), 1u);
    EXPECT_EQ(path_value(t, p, StepSize(2)), 0u);
    EXPECT_EQ(rewarding_length(t, p), 3u);
    const ActionPath broken{{S(0), A(0)}, {S(2), A(0)}};
    EXPECT_FALSE(is_feasible(t, broken));
    EXPECT_THROW((void)path_value(t, broken, StepSize(1)), ContractError);
    EXPECT_THROW((void)path_value(t, ActionPath{}, StepSize(1)), ContractError);
}

TEST(Paths, DecycleCollapsesLoops) {
    const TaskModel t = load_graph_task(kDetour);
    const ActionPath p{{S(0), A(0)}, {S(0), A(1)}, {S(1), A(1)}, {S(0), A(1)}};
    const ActionPath d = decycle(t, p, StepSize(1));
    EXPECT_EQ(d, (ActionPath{{S(0), A(1)}, {S(1), A(1)}}));
    EXPECT_FALSE(has_repeated_state(d));
    EXPECT_TRUE(has_repeated_state(p));
    EXPECT_GE(path_value(t, d, StepSize(1)), path_value(t, p, StepSize(1)));
    EXPECT_EQ(path_value(t, d, StepSize(1)), 8u);
}

TEST(OptimalValues, ChainByHand) {
    const TaskModel t = test::load_task("chain3.task");
    EXPECT_EQ(optimal_values(t, StepSize(1)), (std::vector<Value>{1, 2, 3}));
    EXPECT_EQ(optimal_values(t, StepSize(2)), (std::vector<Value>{0, 0, 2}));
    EXPECT_EQ(optimal_value(t, S(1), StepSize(1)), 2u);
    EXPECT_EQ(optimal_values_by_enumeration(t, StepSize(1)), (std::vector<Value>{1, 2, 3}));
    EXPECT_EQ(optimal_values_by_distance(t, StepSize(2)), (std::vector<Value>{0, 0, 2}));
    EXPECT_EQ(optimal_values(test::load_task("zero.task"), StepSize(1)),
              (std::vector<Value>{0, 0}));
}

TEST(OptimalValues, AgreeWithBruteForceOnRandomTasks) {
    SplitMix64 rng(2024);
    RandomTaskOptions options;
    options.max_states = 6;
    for (int i = 0; i < 150; ++i) {
        const TaskModel t = random_task(rng, options);
        for (std::uint64_t kv : {1, 2, 5}) {
            const StepSize k(kv);
            const auto v = optimal_values(t, k);
            for (std::size_t s = 0; s < t.n_states(); ++s) {
                ASSERT_EQ(v[s], brute_force_value(t, S(s), k)) << format_graph_task(t);
            }
        }
    }
}

TEST(OptimalValues, OptimalFunctionIsValidAndConsistent) {
    const TaskModel t = load_graph_task(kDetour);
    const auto q = optimal_value_function(t, StepSize(1));
    EXPECT_EQ(q.at(S(1), A(1)), 9u);
    EXPECT_EQ(q.at(S(0), A(1)), 8u);
    EXPECT_EQ(q.at(S(0), A(0)), 7u);
    EXPECT_TRUE(is_valid(q, t, StepSize(1)));
    EXPECT_TRUE(is_consistent(q, t, StepSize(1)));
}

TEST(OptimalValues, NondeterministicTasksAreUnsupported) {
    const TaskModel t = test::load_task("fluct.task");
    EXPECT_THROW((void)optimal_values(t, StepSize(1)), UnsupportedError);
    EXPECT_THROW((void)optimal_values_by_enumeration(t, StepSize(1)), UnsupportedError);
    EXPECT_THROW((void)optimal_values_by_distance(t, StepSize(1)), UnsupportedError);
    EXPECT_THROW((void)is_valid(ValueFunction(3, 2), t, StepSize(1)), UnsupportedError);
}

TEST(Violations, ByHand) {
    const TaskModel t = test::load_task("chain3.task");
    ValueFunction v(3, 1);
    v.set(S(0), A(0), 5);
    v.set(S(2), A(0), 3);
    const auto report = violations(v, t, StepSize(1));
    EXPECT_EQ(report.pairs, (std::vector<StateAction>{{S(0), A(0)}}));
    EXPECT_EQ(report.violmax, 5u);
    EXPECT_EQ(find_violation(v, t, StepSize(1)), (StateAction{S(0), A(0)}));
    EXPECT_FALSE(is_valid(v, t, StepSize(1)));
    const auto c = ceil_and_highest(v, t);
    EXPECT_EQ(c.ceil, 5u);
    EXPECT_EQ(c.highest, 5u);
    v.set(S(0), A(0), 0);
    EXPECT_TRUE(is_valid(v, t, StepSize(1)));
    EXPECT_EQ(ceil_and_highest(v, t).ceil, 4u);
    // V(2) = 0 but the preferred action there promises clamp(3 - 1) = 2.
    EXPECT_EQ(find_inconsistency(v, t, StepSize(1)), (StateAction{S(1), A(0)}));
}

TEST(Sprints, GreedyOnOptimalValuesClimbsToTheReward) {
    const TaskModel t = test::load_task("chain3.task");
    const StepSize k(1);
    Simulator sim(t, k, Probability{}, 3, Configuration{S(0), optimal_value_function(t, k)});
    std::vector<TransitionRecord> records;
    for (int i = 0; i < 7; ++i) {
        records.push_back(sim.step());
    }
    const auto d = sprints(optimal_value_function(t, k), records, k);
    ASSERT_EQ(d.sprints.size(), 2u);
    EXPECT_EQ(d.sprints[0].start_index, 0u);
    EXPECT_EQ(d.sprints[0].end_index, 2u);
    EXPECT_EQ(d.sprints[1].start_index, 3u);
    EXPECT_EQ(d.sprints[1].path, (ActionPath{{S(0), A(0)}, {S(1), A(0)}, {S(2), A(0)}}));
    ASSERT_TRUE(d.incomplete.has_value());
    EXPECT_EQ(d.incomplete->start_index, 6u);
    EXPECT_EQ(d.incomplete->length(), 1u);
}

TEST(Sprints, FlatValuesGiveOneStepSprints) {
    const TaskModel t = test::load_task("zero.task");
    RunnerParams p;
    p.epsilon = Probability(1, 1);
    p.max_steps = 20;
    p.stop.push_back(StepsStop{20});
    const RunTrace trace = run(t, p, StepSize(1));
    const auto d = sprints(trace, StepSize(1));
    EXPECT_EQ(d.sprints.size(), 20u);
    for (const auto& s : d.sprints) {
        EXPECT_EQ(s.length(), 1u);
    }
    EXPECT_FALSE(d.incomplete.has_value());
}

TEST(Distances, ShortestRewardDistance) {
    const TaskModel t = test::load_task("chain3.task");
    const auto d = shortest_reward_distances(t);
    EXPECT_EQ(d, (std::vector<std::optional<std::size_t>>{3, 2, 1}));
    EXPECT_FALSE(shortest_reward_distance(test::load_task("zero.task"), S(0)).has_value());
}

TEST(Strategy, ChainLayers) {
    const TaskModel t = test::load_task("chain3.task");
    const StepSize k(1);
    const auto q = optimal_value_function(t, k);
    const auto r = strategy(q, t, k);
    ASSERT_EQ(r.layers.size(), 3u);
    EXPECT_EQ(r.layers[0], (std::vector<StateId>{S(2)}));
    EXPECT_EQ(r.layers[2].size(), 3u);
    EXPECT_EQ(r.fixp, 3u);
    EXPECT_TRUE(r.contains(S(0)));
    EXPECT_TRUE(is_good_configuration(Configuration{S(1), q}, t, k));
    EXPECT_FALSE(is_good_configuration(Configuration{S(0), ValueFunction(3, 1)}, t, k));
    EXPECT_TRUE(strategy(ValueFunction(3, 1), t, k).members.empty());
    EXPECT_THROW((void)strategy(q, t, StepSize(2)), UnsupportedError);
}

TEST(Strategy, PartialStrategyExcludesStart) {
    const TaskModel t = test::load_task("chain3.task");
    const StepSize k(1);
    ValueFunction v(3, 1);
    v.set(S(2), A(0), 3);
    v.set(S(1), A(0), 2);
    const auto r = strategy(v, t, k);
    EXPECT_EQ(r.members, (std::vector<StateId>{S(1), S(2)}));
    EXPECT_FALSE(is_good_configuration(Configuration{S(1), v}, t, k));
}

TEST(CycleAudit, FindsRewardlessRecurrence) {
    auto rec = [](std::uint32_t s, std::uint32_t next, Reward r) {
        TransitionRecord x;
        x.state = StateId(s);
        x.next_state = StateId(next);
        x.reward = r;
        return x;
    };
    const std::vector<TransitionRecord> quiet{rec(0, 1, 0), rec(1, 0, 0)};
    EXPECT_EQ(audit_cycles(quiet), (std::vector<CycleViolation>{{0, 2, S(0)}}));
    const std::vector<TransitionRecord> paid{rec(0, 1, 0), rec(1, 0, 7), rec(0, 1, 0)};
    EXPECT_TRUE(audit_cycles(paid).empty());
    EXPECT_TRUE(audit_cycles(quiet, 1).empty());
}
