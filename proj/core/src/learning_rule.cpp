#include "valueramp/learning_rule.hpp"

namespace valueramp {

UpdateResult update_in_place(ValueFunction& values, StateId s, ActionId a, StateId s_next,
                             Reward r, StepSize k) {
    if (!values.contains(s, a) || !values.contains(s_next)) {
        throw DomainError("transition references ids outside the value function domain");
    }
    // Read everything from the old table before writing.
    const Value current = values.at(s, a);
    const std::int64_t d = delta(k, values.state_value(s), values.state_value(s_next), r);
    const Value next = clamp(static_cast<std::int64_t>(current) + d);
    values.set(s, a, next);
    return {current, next};
}

ValueFunction update(const ValueFunction& values, StateId s, ActionId a, StateId s_next,
                     Reward r, StepSize k) {
    ValueFunction out = values;
    update_in_place(out, s, a, s_next, r, k);
    return out;
}

}  // namespace valueramp
