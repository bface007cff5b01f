#include "support.hpp"

#include "valueramp/analysis.hpp"
#include "valueramp/runner.hpp"

#include <gtest/gtest.h>

using namespace valueramp;
using test::A;
using test::S;

namespace {

RunnerParams params_with(std::string_view eps, std::uint64_t seed, std::uint64_t steps,
                         InitSpec init = ZeroInit{}) {
    RunnerParams p;
    p.epsilon = Probability::from_decimal(eps);
    p.seed = seed;
    p.max_steps = steps;
    p.init = init;
    p.stop.push_back(StepsStop{steps});
    return p;
}

}  // namespace

TEST(RunnerText, InitSpec) {
    EXPECT_EQ(parse_init_spec("zero"), InitSpec{ZeroInit{}});
    EXPECT_EQ(parse_init_spec("uniform:0..200"), (InitSpec{UniformInit{0, 200}}));
    EXPECT_EQ(to_string(parse_init_spec("uniform:3..4")), "uniform:3..4");
    EXPECT_THROW((void)parse_init_spec("uniform:5..4"), ContractError);
    EXPECT_THROW((void)parse_init_spec("gauss"), ContractError);
}

TEST(RunnerText, StopConditions) {
    EXPECT_EQ(parse_stop_condition("steps:10"), StopCondition{StepsStop{10}});
    EXPECT_EQ(parse_stop_condition("fixpoint"), StopCondition{FixpointStop{}});
    EXPECT_EQ(parse_stop_condition("good-config:7"), (StopCondition{GoodConfigStop{7}}));
    EXPECT_EQ(to_string(StopCondition{FixpointStop{12}}), "fixpoint:12");
    EXPECT_THROW((void)parse_stop_condition("steps"), ContractError);
    EXPECT_EQ(parse_stop_reason("good-configuration"), StopReason::good_configuration);
}

TEST(Runner, ReplayDeterminism) {
    const TaskModel t = test::load_task("fluct.task");
    const auto p = params_with("0.5", 11, 500, UniformInit{0, 9});
    const RunTrace a = run(t, p, StepSize(1));
    const RunTrace b = run(t, p, StepSize(1));
    EXPECT_EQ(a.records, b.records);
    EXPECT_EQ(a.initial_values, b.initial_values);
    EXPECT_EQ(a.initial_state, b.initial_state);

    auto q = p;
    q.seed = 12;
    EXPECT_NE(run(t, q, StepSize(1)).records, a.records);
}

TEST(Runner, LongerBudgetKeepsPrefix) {
    const TaskModel t = test::load_task("fluct.task");
    const RunTrace shorter = run(t, params_with("1", 3, 100), StepSize(1));
    const RunTrace longer = run(t, params_with("1", 3, 300), StepSize(1));
    ASSERT_EQ(shorter.records.size(), 100u);
    ASSERT_EQ(longer.records.size(), 300u);
    EXPECT_TRUE(std::equal(shorter.records.begin(), shorter.records.end(), longer.records.begin()));
}

TEST(Runner, RecordsAreConsistentWithTheTask) {
    const TaskModel t = test::load_task("fluct.task");
    const RunTrace trace = run(t, params_with("0.3", 5, 400, UniformInit{0, 6}), StepSize(1));
    ValueFunction v = trace.initial_values;
    StateId at = trace.initial_state;
    EXPECT_TRUE(t.is_start(at));
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const auto& r = trace.records[i];
        EXPECT_EQ(r.step_index, i);
        EXPECT_EQ(r.state, at);
        const auto next = t.successors(r.state, r.action);
        EXPECT_NE(std::find(next.begin(), next.end(), r.next_state), next.end());
        EXPECT_EQ(r.reward, t.reward(r.state, r.action));
        EXPECT_EQ(r.value_before, v.at(r.state, r.action));
        // Independent recomputation of the rule.
        const auto here = static_cast<std::int64_t>(v.state_value(r.state));
        const auto there = static_cast<std::int64_t>(v.state_value(r.next_state));
        const auto hi = std::max<std::int64_t>(there, static_cast<std::int64_t>(r.reward));
        const auto raw = static_cast<std::int64_t>(r.value_before) + hi - 1 - here;
        EXPECT_EQ(r.value_after, static_cast<Value>(std::max<std::int64_t>(raw, 0)));
        v.set(r.state, r.action, r.value_after);
        at = r.next_state;
    }
    EXPECT_EQ(v, trace.final_values());
}

TEST(Runner, GreedyOnlyTakesPreferredActions) {
    const TaskModel t = test::load_task("fluct.task");
    const RunTrace trace = run(t, params_with("0", 8, 300, UniformInit{0, 5}), StepSize(1));
    ValueFunction v = trace.initial_values;
    for (const auto& r : trace.records) {
        EXPECT_FALSE(r.explored);
        EXPECT_EQ(v.at(r.state, r.action), v.state_value(r.state));
        v.set(r.state, r.action, r.value_after);
    }
}

TEST(Runner, TiesAndSuccessorsAreSampledUniformly) {
    // One state, two actions that always tie at zero, one of them splitting
    // over two successors.
    const TaskModel t = load_graph_task(R"(task v1
states s t
actions x y
start s
tr s x s
tr s y s t
tr t x s
tr t y s
)");
    const RunTrace trace = run(t, params_with("0", 2, 20000), StepSize(1));
    std::size_t from_s = 0;
    std::size_t took_y = 0;
    std::size_t y_to_t = 0;
    for (const auto& r : trace.records) {
        if (r.state == S(0)) {
            ++from_s;
            if (r.action == A(1)) {
                ++took_y;
                y_to_t += r.next_state == S(1) ? 1 : 0;
            }
        }
    }
    EXPECT_NEAR(static_cast<double>(took_y) / static_cast<double>(from_s), 0.5, 0.02);
    EXPECT_NEAR(static_cast<double>(y_to_t) / static_cast<double>(took_y), 0.5, 0.02);
}

TEST(Runner, WeightedSuccessorsBiasSampling) {
    TaskBuilder b(3, 1);
    b.add_start(S(0));
    b.set_weighted_successors(S(0), A(0), {S(1), S(2)}, {1, 3});
    b.set_successors(S(1), A(0), {S(0)});
    b.set_successors(S(2), A(0), {S(0)});
    const TaskModel t = b.build();
    const RunTrace trace = run(t, params_with("1", 4, 20000), StepSize(1));
    std::size_t to_two = 0;
    std::size_t total = 0;
    for (const auto& r : trace.records) {
        if (r.state == S(0)) {
            ++total;
            to_two += r.next_state == S(2) ? 1 : 0;
        }
    }
    EXPECT_NEAR(static_cast<double>(to_two) / static_cast<double>(total), 0.75, 0.02);
}

TEST(Runner, FixpointStopOnChain) {
    const TaskModel t = test::load_task("chain3.task");
    RunnerParams p;
    p.epsilon = Probability(1, 1);
    p.seed = 1;
    p.max_steps = 100000;
    p.stop.push_back(FixpointStop{});
    const RunTrace trace = run(t, p, StepSize(1));
    EXPECT_EQ(trace.stop_reason, StopReason::fixpoint);
    const auto v = trace.final_values();
    EXPECT_EQ(v.at(S(0), A(0)), 1u);
    EXPECT_EQ(v.at(S(1), A(0)), 2u);
    EXPECT_EQ(v.at(S(2), A(0)), 3u);
}

TEST(Runner, StepBudgetWinsOverFixpoint) {
    const TaskModel t = test::load_task("chain3.task");
    RunnerParams p;
    p.epsilon = Probability(1, 1);
    p.max_steps = 5;
    p.stop.push_back(FixpointStop{});
    const RunTrace trace = run(t, p, StepSize(1));
    EXPECT_EQ(trace.records.size(), 5u);
    EXPECT_EQ(trace.stop_reason, StopReason::steps);
}

TEST(Runner, GoodConfigurationStop) {
    const TaskModel t = test::load_task("chain3.task");
    RunnerParams p;
    p.max_steps = 10000;
    p.stop.push_back(GoodConfigStop{1});
    const RunTrace trace = run(t, p, StepSize(1));
    EXPECT_EQ(trace.stop_reason, StopReason::good_configuration);
    EXPECT_TRUE(is_good_configuration(trace.final_configuration(), t, StepSize(1)));

    // Not a navigation problem for K = 2.
    EXPECT_THROW((void)run(t, p, StepSize(2)), ContractError);
}

TEST(Fixpoint, DetectRequiresCoverageAndNoChange) {
    auto rec = [](std::uint32_t s, std::uint32_t a, Value before, Value after) {
        TransitionRecord r;
        r.state = StateId(s);
        r.action = ActionId(a);
        r.value_before = before;
        r.value_after = after;
        return r;
    };
    const std::vector<TransitionRecord> covered{rec(0, 0, 1, 1), rec(0, 1, 0, 0), rec(1, 0, 2, 2),
                                                rec(1, 1, 0, 0)};
    EXPECT_TRUE(detect_fixpoint(covered, 2, 2));
    EXPECT_FALSE(detect_fixpoint(std::span(covered).first(3), 2, 2));
    auto changed = covered;
    changed[2].value_after = 3;
    EXPECT_FALSE(detect_fixpoint(changed, 2, 2));
    EXPECT_FALSE(detect_fixpoint({}, 2, 2));
}

TEST(Fixpoint, MonitorAgreesWithWindowScan) {
    const TaskModel t = test::load_task("fluct.task");
    const RunTrace trace = run(t, params_with("1", 9, 3000, UniformInit{0, 3}), StepSize(1));
    const std::uint64_t window = 12;
    FixpointMonitor monitor(t.n_states(), t.n_actions(), window);
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const bool incremental = monitor.observe(trace.records[i]);
        const bool scanned =
            i + 1 >= window &&
            detect_fixpoint(std::span(trace.records).subspan(i + 1 - window, window), t.n_states(),
                            t.n_actions());
        ASSERT_EQ(incremental, scanned) << "at record " << i;
    }
}

TEST(Simulator, ExplicitConfigurationIsValidated) {
    const TaskModel t = test::load_task("chain3.task");
    EXPECT_THROW(Simulator(t, StepSize(1), Probability{}, 0, Configuration{S(7), ValueFunction(3, 1)}),
                 DomainError);
    EXPECT_THROW(Simulator(t, StepSize(1), Probability{}, 0, Configuration{S(0), ValueFunction(2, 1)}),
                 DomainError);
    Simulator sim(t, StepSize(1), Probability{}, 0, Configuration{S(2), ValueFunction(3, 1)});
    const auto r = sim.step_with_action(A(0));
    EXPECT_EQ(r.reward, 4u);
    EXPECT_EQ(r.value_after, 3u);
    EXPECT_EQ(sim.configuration().state, S(0));
    EXPECT_EQ(sim.steps_taken(), 1u);
}
