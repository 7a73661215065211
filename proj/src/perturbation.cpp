#include "phasim/perturbation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "phasim/errors.hpp"

namespace phasim::perturbation {

namespace {

constexpr Amplitude kI{0.0, 1.0};
using Gauss = boost::math::quadrature::gauss<double, 20>;
constexpr int kNodesPerPanel = 20;

void require_nonzero(double v, ErrorKind kind, const char* what) {
    if (v == 0.0) throw Error(kind, what);
}

void require_detunings(const FourLevelParams& p) {
    require_nonzero(p.delta1_plus, ErrorKind::ZeroDetuning, "Delta_1+ is zero");
    require_nonzero(p.delta1_minus, ErrorKind::ZeroDetuning, "Delta_1- is zero");
    require_nonzero(p.delta2_plus, ErrorKind::ZeroDetuning, "Delta_2+ is zero");
    require_nonzero(p.delta2_minus, ErrorKind::ZeroDetuning, "Delta_2- is zero");
}

Amplitude cis(double theta) { return std::polar(1.0, theta); }

// Interaction-picture frequencies of the three factors for one choice of
// beam branch in each factor, and the accompanying spatial phase.
struct Path {
    double w1;  // |a><c2| signal, time t1
    double w2;  // |c2><c1| drive (conjugate term), time t2
    double w3;  // |c1><b| signal, time t3
    double spatial;
};

std::array<Path, 8> enumerate_paths(const FourLevelParams& p, double x) {
    const double d1[2] = {p.delta1_plus, p.delta1_minus};
    const double d2[2] = {p.delta2_plus, p.delta2_minus};
    const double k[2] = {p.k_plus, p.k_minus};
    std::array<Path, 8> paths{};
    int idx = 0;
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
            for (int s3 = 0; s3 < 2; ++s3)
                paths[static_cast<std::size_t>(idx++)] = {d2[s1], -(d1[s2] + d2[s2]), d1[s3], (k[s1] + k[s3]) * x};
    return paths;
}

double shortest_period_frequency(const std::array<Path, 8>& paths) {
    double w = 0.0;
    for (const auto& q : paths) w = std::max(w, std::abs(q.w1) + std::abs(q.w2) + std::abs(q.w3));
    return w;
}

// Ordered triple integral of exp(i(w1 t1 + w2 t2 + w3 t3)) over
// 0 <= t3 <= t2 <= t1 <= t split into `panels` equal panels.
//
// F3, F2, F1 carry the cumulative one-, two- and three-fold integrals up to
// the current panel boundary. Within a panel the integrand differs from the
// first panel's only by the constant factor e^{i w tau}, so the cell
// integrals G are computed once.
Amplitude ordered_triple_integral(const Path& q, double t, long long panels) {
    const double h = t / static_cast<double>(panels);
    auto e = [](double w) { return [w](double s) { return cis(w * s); }; };

    const Amplitude G1 = Gauss::integrate(e(q.w1), 0.0, h);
    const Amplitude G2 = Gauss::integrate(e(q.w2), 0.0, h);
    const Amplitude G3 = Gauss::integrate(e(q.w3), 0.0, h);
    const Amplitude G23 = Gauss::integrate(
        [&](double s) { return cis(q.w2 * s) * Gauss::integrate(e(q.w3), 0.0, s); }, 0.0, h);
    const Amplitude G12 = Gauss::integrate(
        [&](double s) { return cis(q.w1 * s) * Gauss::integrate(e(q.w2), 0.0, s); }, 0.0, h);
    const Amplitude G123 = Gauss::integrate(
        [&](double s1) {
            return cis(q.w1 * s1) * Gauss::integrate(
                                        [&](double s2) {
                                            return cis(q.w2 * s2) * Gauss::integrate(e(q.w3), 0.0, s2);
                                        },
                                        0.0, s1);
        },
        0.0, h);

    const Amplitude step1 = cis(q.w1 * h), step2 = cis(q.w2 * h), step3 = cis(q.w3 * h);
    Amplitude P1{1.0, 0.0}, P2{1.0, 0.0}, P3{1.0, 0.0};
    Amplitude F1{}, F2{}, F3{};
    for (long long k = 0; k < panels; ++k) {
        if ((k & 1023) == 0) {
            // re-anchor the phase recurrences
            const double tau = static_cast<double>(k) * h;
            P1 = cis(q.w1 * tau);
            P2 = cis(q.w2 * tau);
            P3 = cis(q.w3 * tau);
        }
        F1 += P1 * (F2 * G1 + P2 * (F3 * G12 + P3 * G123));
        F2 += P2 * (F3 * G2 + P3 * G23);
        F3 += P3 * G3;
        P1 *= step1;
        P2 *= step2;
        P3 *= step3;
    }
    return F1;
}

}  // namespace

FourLevelParams FourLevelParams::make(double omega_s, double omega_d, double delta1_plus, double delta1_minus,
                                      double delta2_plus, double delta2_minus, double k_plus, double k_minus,
                                      double t) {
    for (double v : {omega_s, omega_d, delta1_plus, delta1_minus, delta2_plus, delta2_minus, k_plus, k_minus, t}) {
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite four-level parameter");
    }
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "interaction time must be positive");
    const double beat1 = delta1_minus - delta1_plus;
    const double beat2 = delta2_minus - delta2_plus;
    const double scale = std::max({1.0, std::abs(delta1_plus), std::abs(delta2_plus)});
    if (std::abs(beat1 - beat2) > 1e-9 * scale) {
        throw Error(ErrorKind::InvalidArgument, "beat frequency differs between transitions: " + std::to_string(beat1) +
                                                    " vs " + std::to_string(beat2));
    }
    FourLevelParams p;
    p.omega_s = omega_s;
    p.omega_d = omega_d;
    p.delta1_plus = delta1_plus;
    p.delta1_minus = delta1_minus;
    p.delta2_plus = delta2_plus;
    p.delta2_minus = delta2_minus;
    p.delta = beat1;
    p.k_plus = k_plus;
    p.k_minus = k_minus;
    p.t = t;
    return p;
}

FourLevelParams FourLevelParams::from_beat(double omega_s, double omega_d, double delta1_plus, double delta2_plus,
                                           double delta, double k_plus, double k_minus, double t) {
    return make(omega_s, omega_d, delta1_plus, delta1_plus + delta, delta2_plus, delta2_plus + delta, k_plus, k_minus,
                t);
}

bool FourLevelParams::detunings_large() const {
    return std::min({std::abs(delta1_plus), std::abs(delta1_minus), std::abs(delta2_plus), std::abs(delta2_minus)}) *
               t >
           10.0;
}

bool FourLevelParams::beat_resolved() const { return std::abs(delta) * t > 10.0; }

Amplitude oscillation_factor(double theta) {
    if (theta == 0.0) return {1.0, 0.0};
    // e^{i theta/2} sin(theta/2) / (theta/2) avoids cancellation at small theta
    const double half = 0.5 * theta;
    return cis(half) * (std::sin(half) / half);
}

Amplitude first_order_full(const FourLevelParams& p, double x) {
    require_detunings(p);
    require_nonzero(p.delta, ErrorKind::ZeroBeat, "beat frequency delta is zero");
    const double shifted_plus = p.delta2_plus + 2.0 * p.delta;
    const double shifted_minus = p.delta2_minus - 2.0 * p.delta;
    require_nonzero(shifted_plus, ErrorKind::ZeroShiftedDetuning, "Delta_2+ + 2 delta is zero");
    require_nonzero(shifted_minus, ErrorKind::ZeroShiftedDetuning, "Delta_2- - 2 delta is zero");

    const double dt = p.delta * p.t;
    const Amplitude fringe_plus = cis(2.0 * p.k_plus * x);
    const Amplitude fringe_minus = cis(2.0 * p.k_minus * x);
    const Amplitude fringe_cross = cis((p.k_plus + p.k_minus) * x);

    const Amplitude resonant =
        fringe_plus / (p.delta1_plus * p.delta2_plus) + fringe_minus / (p.delta1_minus * p.delta2_minus);

    // drive photon exchanged between the branches: oscillates at 2 delta
    const Amplitude drive_exchange = oscillation_factor(-2.0 * dt) * fringe_plus / (p.delta1_plus * shifted_plus) +
                                     oscillation_factor(2.0 * dt) * fringe_minus / (p.delta1_minus * shifted_minus);

    // signal photon exchanged: oscillates at delta
    const Amplitude signal_exchange =
        (oscillation_factor(dt) / (p.delta1_minus * shifted_minus) +
         oscillation_factor(dt) / (p.delta1_plus * p.delta2_plus) +
         oscillation_factor(-dt) / (p.delta1_minus * p.delta2_minus) +
         oscillation_factor(-dt) / (p.delta1_plus * shifted_plus)) *
        fringe_cross;

    return kI * p.omega_s * p.omega_s * p.omega_d * p.t * (resonant + drive_exchange + signal_exchange);
}

Amplitude first_order_resonant(const FourLevelParams& p, double x) {
    require_detunings(p);
    return kI * p.omega_s * p.omega_s * p.omega_d * p.t *
           (cis(2.0 * p.k_plus * x) / (p.delta1_plus * p.delta2_plus) +
            cis(2.0 * p.k_minus * x) / (p.delta1_minus * p.delta2_minus));
}

long long quadrature_panels(const FourLevelParams& p, const QuadratureBudget& budget) {
    if (budget.nodes_per_period < 20) {
        throw Error(ErrorKind::BudgetTooSmall, "at least 20 nodes per oscillation period are required, got " +
                                                   std::to_string(budget.nodes_per_period));
    }
    const double w = shortest_period_frequency(enumerate_paths(p, 0.0));
    const double periods = w * p.t / kTwoPi;
    const double panels = std::ceil(periods * budget.nodes_per_period / kNodesPerPanel);
    return std::max(1LL, static_cast<long long>(panels));
}

Amplitude quadrature_oracle(const FourLevelParams& p, double x, const QuadratureBudget& budget) {
    const long long panels = quadrature_panels(p, budget);
    if (p.omega_s == 0.0 || p.omega_d == 0.0) return {};

    const auto paths = enumerate_paths(p, x);
    std::array<Amplitude, 8> parts{};
    const int threads = std::clamp(budget.threads, 1, 8);
    if (threads == 1) {
        for (std::size_t i = 0; i < paths.size(); ++i) parts[i] = ordered_triple_integral(paths[i], p.t, panels);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = static_cast<std::size_t>(w); i < paths.size(); i += static_cast<std::size_t>(threads))
                    parts[i] = ordered_triple_integral(paths[i], p.t, panels);
            });
        }
    }
    Amplitude sum{};
    for (std::size_t i = 0; i < paths.size(); ++i) sum += cis(paths[i].spatial) * parts[i];
    // (-i)^3 = i
    return kI * p.omega_s * p.omega_s * p.omega_d * sum;
}

RabiFactors second_order_factors(const FourLevelParams& p) {
    require_detunings(p);
    const double d1p = p.delta1_plus, d1m = p.delta1_minus, d2p = p.delta2_plus, d2m = p.delta2_minus;
    const double dl = p.delta;
    const double s2 = p.omega_s * p.omega_s * p.t;
    const double w2 = p.omega_d * p.omega_d;

    // shifted detunings from the stacked-sign fractions; upper and lower choice
    const double a_upper = d2m + dl, a_lower = d2p - dl;  // Delta_{2-/+} +/- delta
    const double b_upper = d1m + dl, b_lower = d1p - dl;  // Delta_{1-/+} +/- delta
    for (double v : {a_upper, a_lower, b_upper, b_lower}) {
        require_nonzero(v, ErrorKind::ZeroShiftedDetuning, "shifted detuning Delta +/- delta is zero");
    }

    RabiFactors r;
    r.r1 = s2 / d1p + s2 / d1m;
    r.r2 = s2 / d2p + s2 / d2m;
    r.r3 = w2 / (d1p * d2p) + w2 / (d1m * d2m) + 0.5 * (w2 / (d1p * a_upper) + w2 / (d1m * a_lower)) +
           0.5 * (w2 / (b_upper * d2p) + w2 / (b_lower * d2m));
    return r;
}

Amplitude second_order_amplitude(const FourLevelParams& p, Phase phi, Phase feedback) {
    const RabiFactors r = second_order_factors(p);
    const Amplitude first = kI * p.omega_s * p.omega_s * p.omega_d * p.t *
                            (cis(2.0 * phi.value()) / (p.delta1_plus * p.delta2_plus) +
                             cis(2.0 * feedback.value()) / (p.delta1_minus * p.delta2_minus));
    return first * (kI * r.r1 - kI * r.r2 - r.r3);
}

Amplitude nonresonant_amplitude_general(int n, double omega_eff, double t, double delta, Phase phi, Phase feedback) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "photon number n must be at least 1");
    require_nonzero(delta, ErrorKind::ZeroBeat, "beat frequency delta is zero");
    const double nd = static_cast<double>(n);
    const double a = phi.value(), b = feedback.value();
    const Amplitude exchange = cis((nd - 1.0) * a + b) + cis(a + (nd - 1.0) * b);
    return omega_eff * t * (cis(nd * a) + cis(nd * b) + nd * oscillation_factor(delta * t) * exchange);
}

}  // namespace phasim::perturbation
