#include "support.hpp"

#include <gtest/gtest.h>

using namespace valueramp;
using test::A;
using test::S;

namespace {

// g is the only goal; b reaches it through a nondeterministic pair; x can get
// stuck on itself and is never reducible.
const char* kLayered = R"(task v1
states g a b c x
actions p q
start a
tr g p a
tr g q g
tr a p g
tr a q x
tr b p a x
tr b q a
tr c p b
tr c q c
tr x p x a
tr x q x c
reward g p 10
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    text.replace(text.find(from), from.size(), to);
    return text;
}

}  // namespace

TEST(TaskBuilder, NamesAndShape) {
    const TaskModel t = TaskBuilder(2, 3)
                            .add_start(S(1))
                            .set_successors(S(0), A(0), {S(1)})
                            .set_successors(S(0), A(1), {S(1), S(0), S(1)})
                            .set_successors(S(0), A(2), {S(0)})
                            .set_successors(S(1), A(0), {S(0)})
                            .set_successors(S(1), A(1), {S(0)})
                            .set_successors(S(1), A(2), {S(0)})
                            .build();
    EXPECT_EQ(t.state_name(S(1)), "s1");
    EXPECT_EQ(t.action_name(A(2)), "a2");
    const auto next = t.successors(S(0), A(1));
    EXPECT_EQ(std::vector<StateId>(next.begin(), next.end()), (std::vector<StateId>{S(0), S(1)}));
    EXPECT_TRUE(t.is_start(S(1)));
    EXPECT_FALSE(t.is_start(S(0)));
    EXPECT_TRUE(t.successor_weights(S(0), A(0)).empty());
}

TEST(TaskBuilder, RejectsPartialTransitionFunction) {
    TaskBuilder b(2, 1);
    b.add_start(S(0)).set_successors(S(0), A(0), {S(1)});
    EXPECT_THROW((void)b.build(), ContractError);
}

TEST(TaskBuilder, RejectsMissingStartAndBadIds) {
    TaskBuilder b(1, 1);
    b.set_successors(S(0), A(0), {S(0)});
    EXPECT_THROW((void)b.build(), ContractError);
    EXPECT_THROW(b.add_start(S(3)), DomainError);
    EXPECT_THROW(b.set_successors(S(0), A(0), {S(1)}), DomainError);
    EXPECT_THROW(b.set_reward(S(0), A(0), kMaxReward + 1), ContractError);
}

TEST(TaskBuilder, WeightedSuccessorsMerge) {
    TaskBuilder b(2, 1);
    b.add_start(S(0));
    b.set_weighted_successors(S(0), A(0), {S(1), S(0), S(1)}, {2, 1, 3});
    b.set_successors(S(1), A(0), {S(0)});
    const TaskModel t = b.build();
    const auto w = t.successor_weights(S(0), A(0));
    EXPECT_EQ(std::vector<std::uint64_t>(w.begin(), w.end()), (std::vector<std::uint64_t>{1, 5}));
    // Unweighted pairs of a weighted task get unit weights.
    EXPECT_EQ(t.successor_weights(S(1), A(0)).size(), 1u);
}

TEST(TaskIo, LoadsFluctuationTask) {
    const TaskModel t = test::load_task("fluct.task");
    EXPECT_EQ(t.n_states(), 3u);
    EXPECT_EQ(t.n_actions(), 2u);
    const auto s1 = *t.find_state("1");
    const auto a = *t.find_action("a");
    EXPECT_EQ(t.successors(s1, a).size(), 2u);
    EXPECT_EQ(t.reward(*t.find_state("3"), *t.find_action("b")), 4u);
    EXPECT_FALSE(is_deterministic(t));
}

TEST(TaskIo, RoundTripsThroughCanonicalText) {
    const TaskModel t = load_graph_task(kLayered);
    const TaskModel u = load_graph_task(format_graph_task(t));
    EXPECT_EQ(t, u);
    EXPECT_EQ(t.fingerprint(), u.fingerprint());
    EXPECT_EQ(format_graph_task(u), format_graph_task(t));
}

TEST(TaskIo, FingerprintTracksContent) {
    const TaskModel t = load_graph_task(kLayered);
    const TaskModel u = load_graph_task(replace(kLayered, "reward g p 10", "reward g p 11"));
    EXPECT_NE(t.fingerprint(), u.fingerprint());
}

TEST(TaskIo, ErrorsCarryLineNumbers) {
    const auto line_of = [](const std::string& text) -> std::size_t {
        try {
            (void)load_graph_task(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 999;
    };
    EXPECT_EQ(line_of("task v2\n"), 1u);
    EXPECT_EQ(line_of(replace(kLayered, "tr c q c", "tr c q nowhere")), 12u);
    EXPECT_EQ(line_of(replace(kLayered, "tr c q c", "tr c p c")), 12u);
    EXPECT_EQ(line_of(replace(kLayered, "reward g p 10", "reward g p ten")), 15u);
    EXPECT_EQ(line_of(replace(kLayered, "start a", "begin a")), 4u);
    // Missing pair is only detectable at the end.
    EXPECT_EQ(line_of(replace(kLayered, "tr c q c\n", "")), 0u);
}

TEST(TaskPredicates, DeterministicAndConnected) {
    const TaskModel chain = test::load_task("chain3.task");
    EXPECT_TRUE(is_deterministic(chain));
    EXPECT_TRUE(is_connected(chain));
    const TaskModel layered = load_graph_task(kLayered);
    EXPECT_FALSE(is_deterministic(layered));
    EXPECT_TRUE(is_connected(layered));
    // x only loops on itself.
    const TaskModel trapped = load_graph_task(
        replace(replace(kLayered, "tr x p x a", "tr x p x"), "tr x q x c", "tr x q x"));
    EXPECT_FALSE(is_connected(trapped));
}

TEST(TaskPredicates, NavigationNeedsSingleLargeReward) {
    const TaskModel chain = test::load_task("chain3.task");
    EXPECT_TRUE(is_navigation_problem(chain, StepSize(1)));   // 4 > 3
    EXPECT_FALSE(is_navigation_problem(chain, StepSize(2)));  // 4 <= 6
    EXPECT_FALSE(is_navigation_problem(test::load_task("zero.task"), StepSize(1)));
    const std::string two = R"(task v1
states x y
actions a
start x
tr x a y
tr y a x
reward x a 50
reward y a 60
)";
    EXPECT_FALSE(is_navigation_problem(load_graph_task(two), StepSize(1)));
    const auto summary = goals_and_rewards(load_graph_task(two));
    EXPECT_EQ(summary.max_reward, 60u);
    EXPECT_EQ(summary.goals, (std::vector<StateId>{S(1)}));
}

TEST(Reducibility, LayersByHand) {
    const TaskModel t = load_graph_task(kLayered);
    const auto r = reducibility(t);
    const auto id = [&](const char* n) { return *t.find_state(n); };
    ASSERT_EQ(r.layers.size(), 4u);
    EXPECT_EQ(r.layers[0], (std::vector<StateId>{id("g")}));
    EXPECT_EQ(r.layers[1].size(), 2u);
    EXPECT_EQ(r.layers[3].size(), 4u);
    EXPECT_EQ(r.layer_index[id("g").index], 1u);
    EXPECT_EQ(r.layer_index[id("a").index], 2u);
    EXPECT_EQ(r.layer_index[id("b").index], 3u);
    EXPECT_EQ(r.layer_index[id("c").index], 4u);
    EXPECT_FALSE(r.layer_index[id("x").index].has_value());
    EXPECT_EQ(r.non_reducible, (std::vector<StateId>{id("x")}));
    EXPECT_TRUE(is_reducible(t));
    EXPECT_TRUE(is_restartable(t));
}

TEST(Reducibility, TrappedStateBreaksEscapeCondition) {
    const TaskModel t = load_graph_task(
        replace(replace(kLayered, "tr x p x a", "tr x p x"), "tr x q x c", "tr x q x"));
    EXPECT_FALSE(is_reducible(t));
}

TEST(Reducibility, NonReducibleStartFails) {
    const TaskModel t = load_graph_task(replace(kLayered, "start a", "start a x"));
    EXPECT_FALSE(is_reducible(t));
    EXPECT_FALSE(is_restartable(t));
}

TEST(Reducibility, NoRewardsMeansEmptyLayer) {
    const auto r = reducibility(test::load_task("zero.task"));
    ASSERT_EQ(r.layers.size(), 1u);
    EXPECT_TRUE(r.layers[0].empty());
    EXPECT_EQ(r.non_reducible.size(), 2u);
}
