#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace valueramp {

/// Natural-number value stored in a value function.
using Value = std::uint64_t;

/// Natural-number reward quantity.
using Reward = std::uint64_t;

/// Rewards and values loaded from files must not exceed this cap, so that
/// every intermediate of the learning rule fits in a signed 64-bit integer.
inline constexpr Reward kMaxReward = 0xFFFF'FFFFull;

/// Dense 0-based index of a task state.
struct StateId {
    std::uint32_t index = 0;

    constexpr StateId() = default;
    constexpr explicit StateId(std::uint32_t i) : index(i) {}
    constexpr explicit StateId(std::size_t i) : index(static_cast<std::uint32_t>(i)) {}
    constexpr explicit StateId(int i) : index(static_cast<std::uint32_t>(i)) {}

    constexpr auto operator<=>(const StateId&) const = default;
};

/// Dense 0-based index of a task action.
struct ActionId {
    std::uint32_t index = 0;

    constexpr ActionId() = default;
    constexpr explicit ActionId(std::uint32_t i) : index(i) {}
    constexpr explicit ActionId(std::size_t i) : index(static_cast<std::uint32_t>(i)) {}
    constexpr explicit ActionId(int i) : index(static_cast<std::uint32_t>(i)) {}

    constexpr auto operator<=>(const ActionId&) const = default;
};

struct StateAction {
    StateId state;
    ActionId action;

    constexpr auto operator<=>(const StateAction&) const = default;
};

/// Step size K of the learning rule; always at least 1.
class StepSize {
public:
    constexpr explicit StepSize(std::uint64_t k) : k_(k) {
        if (k == 0) {
            throw std::invalid_argument("step size K must be at least 1");
        }
        if (k > kMaxReward) {
            throw std::invalid_argument("step size K exceeds arithmetic cap");
        }
    }

    [[nodiscard]] constexpr std::uint64_t value() const noexcept { return k_; }
    [[nodiscard]] constexpr std::int64_t signed_value() const noexcept {
        return static_cast<std::int64_t>(k_);
    }

    auto operator<=>(const StepSize&) const = default;

private:
    std::uint64_t k_;
};

// Error hierarchy. Everything derives from std::runtime_error so callers that
// only care about failure can catch one type.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An id was outside the domain of the task or value function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A checker or oracle was asked about a task class it is not defined for.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Input violated a documented precondition (infeasible path, bad params).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Text input could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace valueramp

template <>
struct std::hash<valueramp::StateId> {
    std::size_t operator()(valueramp::StateId s) const noexcept {
        return std::hash<std::uint32_t>{}(s.index);
    }
};
