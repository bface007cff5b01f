#include "valueramp/value_function.hpp"

#include <algorithm>
#include <string>

namespace valueramp {

ValueFunction::ValueFunction(std::size_t n_states, std::size_t n_actions, Value fill)
    : n_states_(n_states), n_actions_(n_actions), values_(n_states * n_actions, fill) {
    if (n_states == 0 || n_actions == 0) {
        throw DomainError("value function needs at least one state and one action");
    }
}

ValueFunction::ValueFunction(std::size_t n_states, std::size_t n_actions,
                             std::vector<Value> values)
    : n_states_(n_states), n_actions_(n_actions), values_(std::move(values)) {
    if (n_states == 0 || n_actions == 0) {
        throw DomainError("value function needs at least one state and one action");
    }
    if (values_.size() != n_states * n_actions) {
        throw DomainError("value table has " + std::to_string(values_.size()) +
                          " entries, expected " + std::to_string(n_states * n_actions));
    }
}

std::size_t ValueFunction::offset(StateId s, ActionId a) const {
    if (!contains(s, a)) {
        throw DomainError("pair (" + std::to_string(s.index) + "," + std::to_string(a.index) +
                          ") outside value function domain");
    }
    return static_cast<std::size_t>(s.index) * n_actions_ + a.index;
}

Value ValueFunction::at(StateId s, ActionId a) const { return values_[offset(s, a)]; }

void ValueFunction::set(StateId s, ActionId a, Value v) { values_[offset(s, a)] = v; }

std::span<const Value> ValueFunction::row(StateId s) const {
    if (!contains(s)) {
        throw DomainError("state " + std::to_string(s.index) + " outside value function domain");
    }
    return std::span<const Value>(values_).subspan(
        static_cast<std::size_t>(s.index) * n_actions_, n_actions_);
}

Value ValueFunction::state_value(StateId s) const {
    const auto r = row(s);
    return *std::max_element(r.begin(), r.end());
}

std::vector<ActionId> ValueFunction::preferred_actions(StateId s) const {
    const auto r = row(s);
    const Value best = *std::max_element(r.begin(), r.end());
    std::vector<ActionId> out;
    for (std::size_t a = 0; a < r.size(); ++a) {
        if (r[a] == best) {
            out.emplace_back(a);
        }
    }
    return out;
}

}  // namespace valueramp
