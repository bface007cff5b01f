#include "valueramp/random.hpp"

#include "valueramp/text.hpp"

#include <stdexcept>

namespace valueramp {

std::uint64_t SplitMix64::uniform_below(std::uint64_t n) noexcept {
    // Lemire's multiply-shift with rejection; exact and platform independent.
    std::uint64_t x = next();
    auto m = static_cast<unsigned __int128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            x = next();
            m = static_cast<unsigned __int128>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t SplitMix64::uniform_between(std::uint64_t lo, std::uint64_t hi) noexcept {
    const std::uint64_t span = hi - lo;
    if (span == ~std::uint64_t{0}) {
        return next();
    }
    return lo + uniform_below(span + 1);
}

std::size_t SplitMix64::weighted_index(std::span<const std::uint64_t> weights) noexcept {
    std::uint64_t total = 0;
    for (auto w : weights) {
        total += w;
    }
    std::uint64_t pick = uniform_below(total);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (pick < weights[i]) {
            return i;
        }
        pick -= weights[i];
    }
    return weights.size() - 1;
}

SplitMix64 derive_stream(std::uint64_t seed, RandomStream stream) noexcept {
    SplitMix64 mixer(seed ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ull));
    return SplitMix64(mixer.next());
}

Probability::Probability(std::uint64_t numerator, std::uint64_t denominator)
    : num_(numerator), den_(denominator) {
    if (denominator == 0) {
        throw std::invalid_argument("probability denominator must be positive");
    }
    if (numerator > denominator) {
        throw std::invalid_argument("probability must lie in [0,1]");
    }
}

Probability Probability::from_decimal(std::string_view text) {
    const std::string original(text);
    const auto bad = [&] {
        return std::invalid_argument("'" + original + "' is not a decimal in [0,1]");
    };
    if (text.empty()) {
        throw bad();
    }
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac =
        dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) {
        throw bad();
    }
    if (frac.size() > 18 || whole.size() > 18) {
        throw bad();
    }
    std::uint64_t w = 0;
    for (char c : whole) {
        if (c < '0' || c > '9') {
            throw bad();
        }
        w = w * 10 + static_cast<std::uint64_t>(c - '0');
    }
    std::uint64_t f = 0;
    std::uint64_t den = 1;
    for (char c : frac) {
        if (c < '0' || c > '9') {
            throw bad();
        }
        f = f * 10 + static_cast<std::uint64_t>(c - '0');
        den *= 10;
    }
    if (w > 1 || (w == 1 && f != 0)) {
        throw bad();
    }
    Probability p(w * den + f, den);
    p.decimal_ = original;
    return p;
}

Probability Probability::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return from_decimal(text);
    }
    const auto num = detail::parse_natural(text.substr(0, slash));
    const auto den = detail::parse_natural(text.substr(slash + 1));
    if (!num || !den || *den == 0) {
        throw std::invalid_argument("bad probability '" + std::string(text) + "'");
    }
    return Probability(*num, *den);
}

std::string Probability::text() const {
    if (!decimal_.empty()) {
        return decimal_;
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

bool Probability::sample(SplitMix64& rng) const noexcept {
    const auto u = static_cast<unsigned __int128>(rng.fraction53());
    return u * den_ < (static_cast<unsigned __int128>(num_) << 53);
}

}  // namespace valueramp
