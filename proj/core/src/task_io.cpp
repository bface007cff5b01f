#include "valueramp/task_io.hpp"

#include "valueramp/text.hpp"

#include <map>
#include <set>
#include <sstream>

namespace valueramp {

namespace {

std::vector<std::string> declare_names(const std::vector<std::string_view>& tokens,
                                       std::size_t line, const char* what) {
    if (tokens.size() < 2) {
        throw ParseError(line, std::string(what) + " declaration needs at least one name");
    }
    std::vector<std::string> names;
    std::set<std::string_view> seen;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (!seen.insert(tokens[i]).second) {
            throw ParseError(line, std::string("duplicate ") + what + " name '" +
                                       std::string(tokens[i]) + "'");
        }
        names.emplace_back(tokens[i]);
    }
    return names;
}

}  // namespace

TaskModel load_graph_task(std::string_view text) {
    std::optional<std::vector<std::string>> states;
    std::optional<std::vector<std::string>> actions;
    std::map<std::string, StateId, std::less<>> state_ids;
    std::map<std::string, ActionId, std::less<>> action_ids;
    std::optional<TaskBuilder> builder;
    bool header_seen = false;
    bool start_seen = false;
    std::set<std::pair<std::uint32_t, std::uint32_t>> tr_seen;
    std::set<std::pair<std::uint32_t, std::uint32_t>> reward_seen;

    auto state_of = [&](std::string_view name, std::size_t line) {
        const auto it = state_ids.find(name);
        if (it == state_ids.end()) {
            throw ParseError(line, "unknown state '" + std::string(name) + "'");
        }
        return it->second;
    };
    auto action_of = [&](std::string_view name, std::size_t line) {
        const auto it = action_ids.find(name);
        if (it == action_ids.end()) {
            throw ParseError(line, "unknown action '" + std::string(name) + "'");
        }
        return it->second;
    };
    auto ensure_builder = [&](std::size_t line) -> TaskBuilder& {
        if (!states || !actions) {
            throw ParseError(line, "states and actions must be declared first");
        }
        if (!builder) {
            builder.emplace(*states, *actions);
        }
        return *builder;
    };

    for (const auto& [line_no, tokens] : detail::tokenize_lines(text)) {
        const std::string_view keyword = tokens.front();
        if (!header_seen) {
            if (tokens.size() != 2 || keyword != "task" || tokens[1] != "v1") {
                throw ParseError(line_no, "expected header 'task v1'");
            }
            header_seen = true;
            continue;
        }
        if (keyword == "states") {
            if (states) {
                throw ParseError(line_no, "states declared twice");
            }
            states = declare_names(tokens, line_no, "state");
            for (std::size_t i = 0; i < states->size(); ++i) {
                state_ids.emplace((*states)[i], StateId(i));
            }
        } else if (keyword == "actions") {
            if (actions) {
                throw ParseError(line_no, "actions declared twice");
            }
            actions = declare_names(tokens, line_no, "action");
            for (std::size_t i = 0; i < actions->size(); ++i) {
                action_ids.emplace((*actions)[i], ActionId(i));
            }
        } else if (keyword == "start") {
            auto& b = ensure_builder(line_no);
            if (tokens.size() < 2) {
                throw ParseError(line_no, "start needs at least one state");
            }
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                b.add_start(state_of(tokens[i], line_no));
            }
            start_seen = true;
        } else if (keyword == "tr") {
            auto& b = ensure_builder(line_no);
            if (tokens.size() < 4) {
                throw ParseError(line_no, "tr needs a state, an action and at least one successor");
            }
            const StateId s = state_of(tokens[1], line_no);
            const ActionId a = action_of(tokens[2], line_no);
            if (!tr_seen.insert({s.index, a.index}).second) {
                throw ParseError(line_no, "duplicate tr line for (" + std::string(tokens[1]) +
                                              "," + std::string(tokens[2]) + ")");
            }
            std::vector<StateId> next;
            for (std::size_t i = 3; i < tokens.size(); ++i) {
                next.push_back(state_of(tokens[i], line_no));
            }
            b.set_successors(s, a, std::move(next));
        } else if (keyword == "reward") {
            auto& b = ensure_builder(line_no);
            if (tokens.size() != 4) {
                throw ParseError(line_no, "reward needs a state, an action and a natural");
            }
            const StateId s = state_of(tokens[1], line_no);
            const ActionId a = action_of(tokens[2], line_no);
            if (!reward_seen.insert({s.index, a.index}).second) {
                throw ParseError(line_no, "duplicate reward line for (" + std::string(tokens[1]) +
                                              "," + std::string(tokens[2]) + ")");
            }
            const auto r = detail::parse_natural(tokens[3]);
            if (!r || *r > kMaxReward) {
                throw ParseError(line_no, "reward must be a natural at most " +
                                              std::to_string(kMaxReward));
            }
            b.set_reward(s, a, *r);
        } else {
            throw ParseError(line_no, "unknown keyword '" + std::string(keyword) + "'");
        }
    }

    if (!header_seen) {
        throw ParseError(0, "empty task file");
    }
    if (!builder) {
        throw ParseError(0, "task declares no states or actions");
    }
    if (!start_seen) {
        throw ParseError(0, "task declares no start states");
    }
    for (std::size_t s = 0; s < states->size(); ++s) {
        for (std::size_t a = 0; a < actions->size(); ++a) {
            if (!builder->has_successors(StateId(s), ActionId(a))) {
                throw ParseError(0, "tr is not total: missing pair (" + (*states)[s] + "," +
                                        (*actions)[a] + ")");
            }
        }
    }
    return builder->build();
}

std::string format_graph_task(const TaskModel& task) {
    std::ostringstream out;
    out << "task v1\nstates";
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        out << ' ' << task.state_name(StateId(s));
    }
    out << "\nactions";
    for (std::size_t a = 0; a < task.n_actions(); ++a) {
        out << ' ' << task.action_name(ActionId(a));
    }
    out << "\nstart";
    for (StateId s : task.start_states()) {
        out << ' ' << task.state_name(s);
    }
    out << '\n';
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            out << "tr " << task.state_name(StateId(s)) << ' ' << task.action_name(ActionId(a));
            for (StateId t : task.successors(StateId(s), ActionId(a))) {
                out << ' ' << task.state_name(t);
            }
            out << '\n';
        }
    }
    for (std::size_t s = 0; s < task.n_states(); ++s) {
        for (std::size_t a = 0; a < task.n_actions(); ++a) {
            const Reward r = task.reward(StateId(s), ActionId(a));
            if (r != 0) {
                out << "reward " << task.state_name(StateId(s)) << ' '
                    << task.action_name(ActionId(a)) << ' ' << r << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace valueramp
