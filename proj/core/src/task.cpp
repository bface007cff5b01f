#include "valueramp/task.hpp"

#include "valueramp/task_io.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace valueramp {

namespace {

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::vector<std::string> anonymous_names(char prefix, std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back(std::string(1, prefix) + std::to_string(i));
    }
    return names;
}

// Forward adjacency over states, ignoring actions.
std::vector<std::vector<StateId>> state_graph(const TaskModel& task) {
    std::vector<std::vector<StateId>> adj(task.n_states());
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            for (StateId t : task.successors(StateId(s), ActionId(a))) {
                adj[s].push_back(t);
            }
        }
        std::sort(adj[s].begin(), adj[s].end());
        adj[s].erase(std::unique(adj[s].begin(), adj[s].end()), adj[s].end());
    }
    return adj;
}

std::vector<bool> reachable_from(const std::vector<std::vector<StateId>>& adj, StateId root) {
    std::vector<bool> seen(adj.size(), false);
    std::deque<StateId> queue{root};
    seen[root.index] = true;
    while (!queue.empty()) {
        const StateId s = queue.front();
        queue.pop_front();
        for (StateId t : adj[s.index]) {
            if (!seen[t.index]) {
                seen[t.index] = true;
                queue.push_back(t);
            }
        }
    }
    return seen;
}

}  // namespace

// ---------------------------------------------------------------------------
// TaskModel

std::size_t TaskModel::pair_index(StateId s, ActionId a) const {
    if (!contains(s) || !contains(a)) {
        throw DomainError("pair (" + std::to_string(s.index) + "," + std::to_string(a.index) +
                          ") outside task domain");
    }
    return static_cast<std::size_t>(s.index) * n_actions() + a.index;
}

std::span<const StateId> TaskModel::successors(StateId s, ActionId a) const {
    return successors_[pair_index(s, a)];
}

std::span<const std::uint64_t> TaskModel::successor_weights(StateId s, ActionId a) const {
    const auto i = pair_index(s, a);
    if (weights_.empty()) {
        return {};
    }
    return weights_[i];
}

Reward TaskModel::reward(StateId s, ActionId a) const { return rewards_[pair_index(s, a)]; }

bool TaskModel::is_start(StateId s) const {
    if (!contains(s)) {
        throw DomainError("state " + std::to_string(s.index) + " outside task domain");
    }
    return is_start_[s.index];
}

const std::string& TaskModel::state_name(StateId s) const {
    if (!contains(s)) {
        throw DomainError("state " + std::to_string(s.index) + " outside task domain");
    }
    return state_names_[s.index];
}

const std::string& TaskModel::action_name(ActionId a) const {
    if (!contains(a)) {
        throw DomainError("action " + std::to_string(a.index) + " outside task domain");
    }
    return action_names_[a.index];
}

std::optional<StateId> TaskModel::find_state(std::string_view name) const {
    const auto it = std::find(state_names_.begin(), state_names_.end(), name);
    if (it == state_names_.end()) {
        return std::nullopt;
    }
    return StateId(static_cast<std::size_t>(it - state_names_.begin()));
}

std::optional<ActionId> TaskModel::find_action(std::string_view name) const {
    const auto it = std::find(action_names_.begin(), action_names_.end(), name);
    if (it == action_names_.end()) {
        return std::nullopt;
    }
    return ActionId(static_cast<std::size_t>(it - action_names_.begin()));
}

bool TaskModel::operator==(const TaskModel& other) const {
    return state_names_ == other.state_names_ && action_names_ == other.action_names_ &&
           starts_ == other.starts_ && successors_ == other.successors_ &&
           weights_ == other.weights_ && rewards_ == other.rewards_;
}

// ---------------------------------------------------------------------------
// TaskBuilder

TaskBuilder::TaskBuilder(std::vector<std::string> state_names,
                         std::vector<std::string> action_names)
    : state_names_(std::move(state_names)), action_names_(std::move(action_names)) {
    if (state_names_.empty()) {
        throw ContractError("task needs at least one state");
    }
    if (action_names_.empty()) {
        throw ContractError("task needs at least one action");
    }
    const auto pairs = state_names_.size() * action_names_.size();
    successors_.resize(pairs);
    weights_.resize(pairs);
    rewards_.assign(pairs, 0);
}

TaskBuilder::TaskBuilder(std::size_t n_states, std::size_t n_actions)
    : TaskBuilder(anonymous_names('s', n_states), anonymous_names('a', n_actions)) {}

std::size_t TaskBuilder::pair_index(StateId s, ActionId a) const {
    if (s.index >= state_names_.size() || a.index >= action_names_.size()) {
        throw DomainError("pair (" + std::to_string(s.index) + "," + std::to_string(a.index) +
                          ") outside task domain");
    }
    return static_cast<std::size_t>(s.index) * action_names_.size() + a.index;
}

TaskBuilder& TaskBuilder::add_start(StateId s) {
    if (s.index >= state_names_.size()) {
        throw DomainError("start state " + std::to_string(s.index) + " outside task domain");
    }
    starts_.push_back(s);
    return *this;
}

TaskBuilder& TaskBuilder::set_successors(StateId s, ActionId a, std::vector<StateId> next) {
    for (StateId t : next) {
        if (t.index >= state_names_.size()) {
            throw DomainError("successor " + std::to_string(t.index) + " outside task domain");
        }
    }
    const auto i = pair_index(s, a);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    successors_[i] = std::move(next);
    weights_[i].clear();
    return *this;
}

TaskBuilder& TaskBuilder::set_weighted_successors(StateId s, ActionId a,
                                                  std::vector<StateId> next,
                                                  std::vector<std::uint64_t> weights) {
    if (next.size() != weights.size()) {
        throw ContractError("successor weights do not align with successors");
    }
    std::map<StateId, std::uint64_t> merged;
    for (std::size_t i = 0; i < next.size(); ++i) {
        if (next[i].index >= state_names_.size()) {
            throw DomainError("successor " + std::to_string(next[i].index) +
                              " outside task domain");
        }
        if (weights[i] == 0) {
            throw ContractError("successor weights must be positive");
        }
        merged[next[i]] += weights[i];
    }
    const auto i = pair_index(s, a);
    successors_[i].clear();
    weights_[i].clear();
    for (const auto& [t, w] : merged) {
        successors_[i].push_back(t);
        weights_[i].push_back(w);
    }
    return *this;
}

TaskBuilder& TaskBuilder::set_reward(StateId s, ActionId a, Reward r) {
    if (r > kMaxReward) {
        throw ContractError("reward " + std::to_string(r) + " exceeds cap " +
                            std::to_string(kMaxReward));
    }
    rewards_[pair_index(s, a)] = r;
    return *this;
}

bool TaskBuilder::has_successors(StateId s, ActionId a) const {
    return !successors_[pair_index(s, a)].empty();
}

TaskModel TaskBuilder::build() const {
    if (starts_.empty()) {
        throw ContractError("task needs at least one start state");
    }
    const auto n_actions = action_names_.size();
    for (std::size_t i = 0; i < successors_.size(); ++i) {
        if (successors_[i].empty()) {
            throw ContractError("tr(" + state_names_[i / n_actions] + "," +
                                action_names_[i % n_actions] + ") is empty");
        }
    }

    TaskModel task;
    task.state_names_ = state_names_;
    task.action_names_ = action_names_;
    task.starts_ = starts_;
    std::sort(task.starts_.begin(), task.starts_.end());
    task.starts_.erase(std::unique(task.starts_.begin(), task.starts_.end()), task.starts_.end());
    task.successors_ = successors_;
    task.rewards_ = rewards_;
    task.is_start_.assign(state_names_.size(), false);
    for (StateId s : task.starts_) {
        task.is_start_[s.index] = true;
    }
    task.max_reward_ = *std::max_element(rewards_.begin(), rewards_.end());

    const bool weighted = std::any_of(weights_.begin(), weights_.end(),
                                      [](const auto& w) { return !w.empty(); });
    if (weighted) {
        task.weights_ = weights_;
        for (std::size_t i = 0; i < task.weights_.size(); ++i) {
            if (task.weights_[i].empty()) {
                task.weights_[i].assign(task.successors_[i].size(), 1);
            }
        }
    }

    std::uint64_t h = fnv1a(format_graph_task(task));
    for (const auto& w : task.weights_) {
        for (auto x : w) {
            h = fnv1a(std::to_string(x) + ",", h);
        }
    }
    task.fingerprint_ = h;
    return task;
}

// ---------------------------------------------------------------------------
// Predicates

bool is_deterministic(const TaskModel& task) {
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            if (task.successors(StateId(s), ActionId(a)).size() != 1) {
                return false;
            }
        }
    }
    return true;
}

bool is_connected(const TaskModel& task) {
    // Strongly connected iff everything is reachable from state 0 and state 0
    // is reachable from everything (reverse graph).
    const auto adj = state_graph(task);
    std::vector<std::vector<StateId>> rev(adj.size());
    for (std::size_t s = 0; s < adj.size(); ++s) {
        for (StateId t : adj[s]) {
            rev[t.index].emplace_back(s);
        }
    }
    const auto fwd = reachable_from(adj, StateId(0));
    const auto bwd = reachable_from(rev, StateId(0));
    return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
           std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

RewardSummary goals_and_rewards(const TaskModel& task) {
    RewardSummary out;
    if (task.max_reward() == 0) {
        return out;
    }
    const Reward m = task.max_reward();
    out.max_reward = m;
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        bool goal = false;
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            if (task.reward(StateId(s), ActionId(a)) == m) {
                out.rewarding_pairs.push_back({StateId(s), ActionId(a)});
                goal = true;
            }
        }
        if (goal) {
            out.goals.emplace_back(s);
        }
    }
    return out;
}

bool is_navigation_problem(const TaskModel& task, StepSize k) {
    const Reward m = task.max_reward();
    if (m == 0) {
        return false;
    }
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            const Reward r = task.reward(StateId(s), ActionId(a));
            if (r != 0 && r != m) {
                return false;
            }
        }
    }
    // M > |S| K, evaluated without overflow: both sides are below 2^64 since
    // |S| < 2^32 and K <= kMaxReward.
    return m > static_cast<std::uint64_t>(task.n_states()) * k.value();
}

ReducibilityReport reducibility(const TaskModel& task) {
    const auto n = task.n_states();
    ReducibilityReport report;
    report.layer_index.assign(n, std::nullopt);

    std::vector<bool> in_layer(n, false);
    for (StateId g : goals_and_rewards(task).goals) {
        in_layer[g.index] = true;
        report.layer_index[g.index] = 1;
    }
    auto snapshot = [&] {
        std::vector<StateId> layer;
        for (std::size_t s = 0; s < n; ++s) {
            if (in_layer[s]) {
                layer.emplace_back(s);
            }
        }
        return layer;
    };
    report.layers.push_back(snapshot());

    for (std::size_t i = 2;; ++i) {
        // Decide additions against the previous layer only.
        std::vector<StateId> added;
        for (std::size_t s = 0; s < n; ++s) {
            if (in_layer[s]) {
                continue;
            }
            for (std::size_t a = 0; a < task.n_actions(); ++a) {
                const auto next = task.successors(StateId(s), ActionId(a));
                if (std::all_of(next.begin(), next.end(),
                                [&](StateId t) { return in_layer[t.index]; })) {
                    added.emplace_back(s);
                    break;
                }
            }
        }
        if (added.empty()) {
            break;
        }
        for (StateId s : added) {
            in_layer[s.index] = true;
            report.layer_index[s.index] = i;
        }
        report.layers.push_back(snapshot());
    }

    for (std::size_t s = 0; s < n; ++s) {
        (in_layer[s] ? report.reducible : report.non_reducible).emplace_back(s);
    }
    return report;
}

bool is_reducible(const TaskModel& task) { return is_reducible(task, reducibility(task)); }

bool is_reducible(const TaskModel& task, const ReducibilityReport& report) {
    for (StateId s : task.start_states()) {
        if (!report.is_reducible_state(s)) {
            return false;
        }
    }
    if (report.non_reducible.empty()) {
        return true;
    }

    const auto n = task.n_states();
    std::vector<bool> non_reducible(n, false);
    for (StateId s : report.non_reducible) {
        non_reducible[s.index] = true;
    }
    const auto adj = state_graph(task);
    std::vector<std::vector<StateId>> rev(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (StateId t : adj[s]) {
            rev[t.index].emplace_back(s);
        }
    }

    // Per start, walk backwards: a non-reducible state escapes if it has an
    // edge to the start or to a non-reducible state that already escapes.
    for (StateId start : task.start_states()) {
        std::vector<bool> escapes(n, false);
        std::deque<StateId> queue;
        for (StateId p : rev[start.index]) {
            if (non_reducible[p.index] && !escapes[p.index]) {
                escapes[p.index] = true;
                queue.push_back(p);
            }
        }
        while (!queue.empty()) {
            const StateId s = queue.front();
            queue.pop_front();
            for (StateId p : rev[s.index]) {
                if (non_reducible[p.index] && !escapes[p.index]) {
                    escapes[p.index] = true;
                    queue.push_back(p);
                }
            }
        }
        for (StateId s : report.non_reducible) {
            if (!escapes[s.index]) {
                return false;
            }
        }
    }
    return true;
}

bool is_restartable(const TaskModel& task) {
    const auto starts = task.start_states();
    for (const auto& [s, a] : goals_and_rewards(task).rewarding_pairs) {
        const auto next = task.successors(s, a);
        if (!std::equal(next.begin(), next.end(), starts.begin(), starts.end())) {
            return false;
        }
    }
    return true;
}

}  // namespace valueramp
