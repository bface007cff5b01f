#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace valueramp {

/// SplitMix64 generator. Chosen over <random> engines plus distributions
/// because the distributions are implementation-defined, and traces must be
/// byte-identical across standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_below(std::uint64_t n) noexcept;

    /// Uniform integer in [lo, hi].
    std::uint64_t uniform_between(std::uint64_t lo, std::uint64_t hi) noexcept;

    /// Index drawn proportionally to positive integer weights.
    std::size_t weighted_index(std::span<const std::uint64_t> weights) noexcept;

    /// Top 53 bits of the next output, i.e. a uniform fraction in units of 2^-53.
    std::uint64_t fraction53() noexcept { return next() >> 11; }

private:
    std::uint64_t state_;
};

/// Independent random streams derived from one user seed, one per purpose, so
/// that consuming more of one stream never shifts another.
enum class RandomStream : std::uint64_t {
    initial_values = 1,
    start_state = 2,
    action_choice = 3,
    successor_choice = 4,
};

[[nodiscard]] SplitMix64 derive_stream(std::uint64_t seed, RandomStream stream) noexcept;

/// Exact rational probability in [0, 1].
class Probability {
public:
    /// Probability 0.
    Probability() = default;
    /// numerator / denominator; throws std::invalid_argument outside [0,1].
    Probability(std::uint64_t numerator, std::uint64_t denominator);

    /// Parses "1", "0.25", "1.000", ".5". At most 18 fractional digits.
    static Probability from_decimal(std::string_view text);
    /// Decimal as above, or "num/den"; the inverse of text().
    static Probability parse(std::string_view text);

    [[nodiscard]] std::uint64_t numerator() const noexcept { return num_; }
    [[nodiscard]] std::uint64_t denominator() const noexcept { return den_; }
    [[nodiscard]] bool is_zero() const noexcept { return num_ == 0; }
    [[nodiscard]] bool is_one() const noexcept { return num_ == den_; }

    /// The decimal text it was parsed from, or "num/den".
    [[nodiscard]] std::string text() const;

    /// True with exactly this probability, measured on a 53-bit grid: the
    /// draw u in [0, 2^53) fires when u / 2^53 < num / den.
    bool sample(SplitMix64& rng) const noexcept;

    bool operator==(const Probability& other) const noexcept {
        return static_cast<unsigned __int128>(num_) * other.den_ ==
               static_cast<unsigned __int128>(other.num_) * den_;
    }

private:
    std::uint64_t num_ = 0;
    std::uint64_t den_ = 1;
    std::string decimal_;
};

}  // namespace valueramp
