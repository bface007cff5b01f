#pragma once

#include "valueramp/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace valueramp {

/// Dense table of natural values over S x A, stored row-major by state.
///
/// The shape is fixed at construction. Entries are naturals by type; there is
/// no way to store a negative or fractional value.
class ValueFunction {
public:
    ValueFunction() = default;
    ValueFunction(std::size_t n_states, std::size_t n_actions, Value fill = 0);
    ValueFunction(std::size_t n_states, std::size_t n_actions, std::vector<Value> values);

    [[nodiscard]] std::size_t n_states() const noexcept { return n_states_; }
    [[nodiscard]] std::size_t n_actions() const noexcept { return n_actions_; }

    [[nodiscard]] Value at(StateId s, ActionId a) const;
    void set(StateId s, ActionId a, Value v);

    [[nodiscard]] Value operator()(StateId s, ActionId a) const { return at(s, a); }

    /// V(s) = max_a V(s,a).
    [[nodiscard]] Value state_value(StateId s) const;

    /// Actions attaining state_value(s), ascending. Never empty.
    [[nodiscard]] std::vector<ActionId> preferred_actions(StateId s) const;

    [[nodiscard]] std::span<const Value> row(StateId s) const;
    [[nodiscard]] std::span<const Value> flat() const noexcept { return values_; }

    [[nodiscard]] bool contains(StateId s) const noexcept { return s.index < n_states_; }
    [[nodiscard]] bool contains(StateId s, ActionId a) const noexcept {
        return s.index < n_states_ && a.index < n_actions_;
    }

    bool operator==(const ValueFunction&) const = default;

private:
    [[nodiscard]] std::size_t offset(StateId s, ActionId a) const;

    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<Value> values_;
};

/// The run state (s, V).
struct Configuration {
    StateId state;
    ValueFunction values;

    bool operator==(const Configuration&) const = default;
};

}  // namespace valueramp
