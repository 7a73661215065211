#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace phasim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angle in radians, always held in [0, 2pi).
class Phase {
public:
    constexpr Phase() = default;
    explicit Phase(double radians) : value_(normalize(radians)) {}

    static double normalize(double radians);

    double value() const noexcept { return value_; }

    friend bool operator==(Phase, Phase) = default;

private:
    double value_ = 0.0;
};

/// Signed distance a - b wrapped into [-pi, pi).
double wrapped_difference(double a, double b);

enum class Outcome : std::uint8_t { Even, Odd };

/// (-1)^u
constexpr double parity_sign(Outcome u) { return u == Outcome::Even ? 1.0 : -1.0; }

constexpr std::string_view to_string(Outcome u) { return u == Outcome::Even ? "even" : "odd"; }

/// Finite binary expansion pi * sum_{k=0}^{K} a_k / 2^k.
///
/// Bits are indexed by k; bit(0) carries weight pi and bit(K) weight pi/2^K.
/// The textual form lists a_K first and a_0 last.
class DyadicPhase {
public:
    DyadicPhase() : bits_(1, 0) {}
    /// bits[k] = a_k, k = 0..K.
    explicit DyadicPhase(std::vector<std::uint8_t> bits);

    /// Nearest K-digit dyadic phase to `phase`.
    static DyadicPhase from_phase(Phase phase, int depth);
    /// Parses "a_K...a_0", e.g. "101".
    static DyadicPhase from_string(std::string_view digits);
    /// Integer m with to_phase() = pi * m / 2^K.
    static DyadicPhase from_index(std::uint64_t m, int depth);

    int depth() const noexcept { return static_cast<int>(bits_.size()) - 1; }
    int bit(int k) const { return bits_.at(static_cast<std::size_t>(k)); }
    std::uint64_t index() const;

    Phase to_phase() const;
    std::string to_string() const;

    friend bool operator==(const DyadicPhase&, const DyadicPhase&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

}  // namespace phasim
