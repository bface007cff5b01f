#pragma once

#include "valueramp/types.hpp"
#include "valueramp/value_function.hpp"

#include <cstdint>

namespace valueramp {

/// Negative integers map to 0; naturals are unchanged.
[[nodiscard]] constexpr Value clamp(std::int64_t x) noexcept {
    return x < 0 ? Value{0} : static_cast<Value>(x);
}

/// max(v_next, r) - K - v, exact and possibly negative.
///
/// `v` is the state value of the current state, `v_next` the state value of
/// the observed successor, both taken from the value function before the
/// transition. Operands are bounded by kMaxReward-sized quantities in practice,
/// so the signed 64-bit result cannot overflow.
[[nodiscard]] constexpr std::int64_t delta(StepSize k, Value v, Value v_next, Reward r) noexcept {
    const auto hi = static_cast<std::int64_t>(v_next > r ? v_next : r);
    return hi - k.signed_value() - static_cast<std::int64_t>(v);
}

/// Before/after of the single entry touched by an update.
struct UpdateResult {
    Value before = 0;
    Value after = 0;

    [[nodiscard]] bool changed() const noexcept { return before != after; }
};

/// Apply one transition (s, a, s_next) with observed reward r to `values`.
///
/// Only V(s,a) changes. Its new value is clamp(V(s,a) + delta) where delta uses
/// the state values of s and s_next under the old table.
UpdateResult update_in_place(ValueFunction& values, StateId s, ActionId a, StateId s_next,
                             Reward r, StepSize k);

/// Pure form of update_in_place: returns the successor value function.
[[nodiscard]] ValueFunction update(const ValueFunction& values, StateId s, ActionId a,
                                   StateId s_next, Reward r, StepSize k);

}  // namespace valueramp
