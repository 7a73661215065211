#include "phasim/phase.hpp"

#include <cmath>

#include "phasim/errors.hpp"

namespace phasim {

double Phase::normalize(double radians) {
    double r = std::fmod(radians, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod + shift can land on 2pi exactly for tiny negative inputs
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double wrapped_difference(double a, double b) {
    double d = std::remainder(a - b, kTwoPi);
    if (d >= kPi) d -= kTwoPi;
    return d;
}

DyadicPhase::DyadicPhase(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw Error(ErrorKind::InvalidArgument, "dyadic phase needs at least one digit");
    if (bits_.size() > 53) throw Error(ErrorKind::InvalidArgument, "dyadic depth above 52 is not representable");
    for (auto b : bits_) {
        if (b > 1) throw Error(ErrorKind::InvalidArgument, "dyadic digits must be 0 or 1");
    }
}

DyadicPhase DyadicPhase::from_index(std::uint64_t m, int depth) {
    if (depth < 0 || depth > 52) throw Error(ErrorKind::InvalidArgument, "dyadic depth out of range");
    const auto K = static_cast<std::size_t>(depth);
    m &= (std::uint64_t{2} << K) - 1;
    std::vector<std::uint8_t> bits(K + 1);
    for (std::size_t k = 0; k <= K; ++k) bits[k] = static_cast<std::uint8_t>((m >> (K - k)) & 1U);
    return DyadicPhase(std::move(bits));
}

DyadicPhase DyadicPhase::from_phase(Phase phase, int depth) {
    if (depth < 0 || depth > 52) throw Error(ErrorKind::InvalidArgument, "dyadic depth out of range");
    const double scaled = phase.value() / kPi * std::ldexp(1.0, depth);
    const auto m = static_cast<std::uint64_t>(std::llround(scaled));
    return from_index(m, depth);
}

DyadicPhase DyadicPhase::from_string(std::string_view digits) {
    if (digits.empty()) throw Error(ErrorKind::InvalidArgument, "empty dyadic digit string");
    std::vector<std::uint8_t> bits(digits.size());
    for (std::size_t i = 0; i < digits.size(); ++i) {
        const char c = digits[i];
        if (c != '0' && c != '1') {
            throw Error(ErrorKind::InvalidArgument, "dyadic digit string may contain only 0 and 1: " + std::string(digits));
        }
        bits[digits.size() - 1 - i] = static_cast<std::uint8_t>(c - '0');
    }
    return DyadicPhase(std::move(bits));
}

std::uint64_t DyadicPhase::index() const {
    const auto K = bits_.size() - 1;
    std::uint64_t m = 0;
    for (std::size_t k = 0; k <= K; ++k) m |= std::uint64_t{bits_[k]} << (K - k);
    return m;
}

Phase DyadicPhase::to_phase() const {
    return Phase(kPi * std::ldexp(static_cast<double>(index()), -depth()));
}

std::string DyadicPhase::to_string() const {
    std::string out(bits_.size(), '0');
    for (std::size_t k = 0; k < bits_.size(); ++k) out[bits_.size() - 1 - k] = static_cast<char>('0' + bits_[k]);
    return out;
}

}  // namespace phasim
