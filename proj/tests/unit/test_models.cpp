#include <gtest/gtest.h>

#include <cmath>

#include "phasim/models.hpp"
#include "phasim/rng.hpp"

using namespace phasim;
using namespace phasim::models;

namespace {

DetectorConfig detector(int n, double delta = 100.0, double t = 1.0) {
    return DetectorConfig::uniform(n, 0.5, 0.5, 1.0e4, delta, t);
}

}  // namespace

TEST(NoonOutcome, Examples) {
    EXPECT_EQ(noon_outcome_prob(1, Phase(0), Phase(0), Outcome::Even), 1.0);
    EXPECT_NEAR(noon_outcome_prob(2, Phase(kPi / 4), Phase(0), Outcome::Even), 0.5, 1e-15);
    for (int K = 0; K <= 6; ++K) {
        const int n = 1 << K;
        EXPECT_NEAR(noon_outcome_prob(n, Phase(0.0), Phase(0), Outcome::Even), 1.0, 1e-12);
        EXPECT_NEAR(noon_outcome_prob(n, Phase(kPi / n), Phase(0), Outcome::Even), 0.0, 1e-12);
    }
}

TEST(NoonOutcome, OutcomesSumToOne) {
    CounterRng rng(3);
    for (int i = 0; i < 5000; ++i) {
        const int n = 1 + static_cast<int>(rng.below(64));
        const Phase phi(kTwoPi * rng.uniform()), fb(kTwoPi * rng.uniform());
        EXPECT_NEAR(noon_outcome_prob(n, phi, fb, Outcome::Even) + noon_outcome_prob(n, phi, fb, Outcome::Odd), 1.0,
                    1e-12);
    }
}

TEST(EffectiveRabi, Examples) {
    const double omega = 0.3, d = 50.0;
    EXPECT_NEAR(effective_rabi(DetectorConfig::uniform(2, omega, omega, d, 1.0, 1.0)), omega * omega * omega / (d * d),
                1e-18);
    EXPECT_DOUBLE_EQ(effective_rabi(DetectorConfig::uniform(1, 0.7, 5.0, 10.0, 1.0, 1.0)), 0.7);
    EXPECT_NEAR(effective_rabi(DetectorConfig::uniform(3, 2.0, 1.0, 10.0, 1.0, 1.0)), 8e-4, 1e-18);
}

TEST(EffectiveRabi, ZeroDetuningIsRejected) {
    auto cfg = DetectorConfig::uniform(2, 1.0, 1.0, 10.0, 1.0, 1.0);
    cfg.detunings[1].plus = 0.0;
    try {
        effective_rabi(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroDetuning);
    }
}

TEST(ClassicalExcitation, ResonantFringe) {
    const auto cfg = detector(4);
    const double w = effective_rabi(cfg) * cfg.t;
    EXPECT_NEAR(classical_excitation_prob(cfg, Phase(1.0), Phase(1.0), false) / (4 * w * w), 1.0, 1e-14);
    EXPECT_NEAR(classical_excitation_prob(cfg, Phase(1.0 + kPi / 4), Phase(1.0), false), 0.0, 1e-30);
}

TEST(ClassicalExcitation, NonresonantMatchesResonantWhenSineVanishes) {
    const double delta = 100 * kPi;  // sin(delta t) = 0 up to round-off
    const auto cfg = detector(2, delta);
    CounterRng rng(5);
    for (int i = 0; i < 200; ++i) {
        const Phase phi(kTwoPi * rng.uniform()), fb(kTwoPi * rng.uniform());
        const double r = classical_excitation_prob(cfg, phi, fb, false);
        const double nr = classical_excitation_prob(cfg, phi, fb, true);
        EXPECT_NEAR(nr, r, 1e-14 * classical_excitation_prob(cfg, phi, phi, false));
    }
}

TEST(ClassicalExcitation, PerturbativeViolationCarriesPrecondition) {
    const auto cfg = DetectorConfig::uniform(1, 2.0, 1.0, 10.0, 100.0, 1.0);
    try {
        classical_excitation_prob(cfg, Phase(0), Phase(0), false);
        FAIL();
    } catch (const RegimeViolation& e) {
        EXPECT_EQ(e.which(), Precondition::Perturbative);
        EXPECT_EQ(e.kind(), ErrorKind::RegimeViolation);
    }
}

TEST(ClassicalExcitation, NonresonantSuppressionViolation) {
    const auto cfg = detector(8, 1.0);  // 8 |sin 1| / 1 > 1
    EXPECT_NO_THROW(classical_excitation_prob(cfg, Phase(0), Phase(0), false));
    try {
        classical_excitation_prob(cfg, Phase(0), Phase(0), true);
        FAIL();
    } catch (const RegimeViolation& e) {
        EXPECT_EQ(e.which(), Precondition::NonresonantSuppression);
    }
}

TEST(ClassicalExcitation, ZeroBeatRejectedForNonresonant) {
    const auto cfg = detector(2, 0.0);
    try {
        classical_excitation_prob(cfg, Phase(0), Phase(0), true);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroBeat);
    }
}

TEST(ClassicalOutcome, ResonantEqualsNoonExactly) {
    CounterRng rng(17);
    for (int i = 0; i < 10000; ++i) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const Phase phi(kTwoPi * rng.uniform()), fb(kTwoPi * rng.uniform());
        const auto cfg = detector(n);
        for (auto u : {Outcome::Even, Outcome::Odd}) {
            EXPECT_LT(std::abs(classical_outcome_prob(cfg, phi, fb, u, false) - noon_outcome_prob(n, phi, fb, u)), 1e-12);
        }
    }
    EXPECT_EQ(classical_outcome_prob(detector(3), Phase(2.0), Phase(2.0), Outcome::Even, false), 1.0);
    EXPECT_NEAR(classical_outcome_prob(detector(2), Phase(kPi / 4), Phase(0), Outcome::Even, false), 0.5, 1e-15);
}

TEST(ClassicalOutcome, ResonantPeriodicInPhaseDifference) {
    CounterRng rng(23);
    for (int i = 0; i < 2000; ++i) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const double phi = kTwoPi * rng.uniform(), fb = kTwoPi * rng.uniform();
        const auto cfg = detector(n);
        const double a = classical_outcome_prob(cfg, Phase(phi), Phase(fb), Outcome::Even, false);
        const double b = classical_outcome_prob(cfg, Phase(phi + kTwoPi / n), Phase(fb), Outcome::Even, false);
        EXPECT_NEAR(a, b, 1e-12);
        EXPECT_NEAR(noon_outcome_prob(n, Phase(phi), Phase(fb), Outcome::Odd),
                    noon_outcome_prob(n, Phase(phi + kTwoPi / n), Phase(fb), Outcome::Odd), 1e-12);
    }
}

TEST(ClassicalOutcome, NonresonantExampleAtBeatHundred) {
    const auto cfg = detector(2, 100.0);
    const auto p = classical_outcome_detail(cfg, Phase(0.3), Phase(0.3), Outcome::Even, true);
    // braces = 2 + 4 * 2 sin(100)/100, normalized by 2
    const double expected = 1.0 + 4.0 * std::sin(100.0) / 100.0;
    EXPECT_NEAR(p.value, expected, 1e-14);
    EXPECT_FALSE(p.clamped);
    EXPECT_LE(std::abs(p.value - 1.0), 8.0 * 2 / 100.0);
}

TEST(ClassicalOutcome, ClampingIsFlagged) {
    const auto cfg = detector(2, 100.0 + kPi / 2 - std::fmod(100.0, kTwoPi) + kTwoPi);  // sin(delta t) = 1
    const auto p = classical_outcome_detail(cfg, Phase(0), Phase(0), Outcome::Even, true);
    EXPECT_TRUE(p.clamped);
    EXPECT_EQ(p.value, 1.0);
}

TEST(ClassicalExcitation, NonresonantDeviationBound) {
    CounterRng rng(29);
    for (double dt : {1e2, 1e3, 1e4}) {
        for (int n : {2, 4, 8}) {
            const auto cfg = detector(n, dt);
            const double w = effective_rabi(cfg) * cfg.t;
            for (int i = 0; i < 1000; ++i) {
                const Phase phi(kTwoPi * rng.uniform()), fb(kTwoPi * rng.uniform());
                const double diff = classical_excitation_prob(cfg, phi, fb, true) - classical_excitation_prob(cfg, phi, fb, false);
                EXPECT_LE(std::abs(diff), 8.0 * n * w * w / dt * std::abs(std::sin(dt)) * (1 + 1e-12));
            }
        }
    }
}

TEST(Rates, MaxExcitationRate) {
    auto cfg = DetectorConfig::uniform(1, 0.01, 1.0, 1.0, 1.0, 10.0);
    EXPECT_NEAR(max_excitation_rate(cfg), 8e-3, 1e-18);
    cfg.omega_s = 0.0;
    EXPECT_EQ(max_excitation_rate(cfg), 0.0);
}

TEST(Rates, RateMatchesDerivativeOfFringeMaximum) {
    const auto cfg = detector(2, 100.0, 2.0);
    const double h = 1e-4;
    auto at = [&](double t) {
        auto c = cfg;
        c.t = t;
        return classical_excitation_prob(c, Phase(0), Phase(0), false);
    };
    const double derivative = (at(cfg.t + h) - at(cfg.t - h)) / (2 * h);
    EXPECT_NEAR(derivative / max_excitation_rate(cfg), 1.0, 1e-8);
}

TEST(Rates, RateScalingExample) {
    const auto cfg = DetectorConfig::uniform(2, 1.0, 1.0, 10.0, 0.0, 1.0);
    auto c = cfg;
    for (auto& d : c.detunings) d.minus = -d.plus;
    const auto rs = rate_scaling(c);
    EXPECT_NEAR(rs.eta, 1e-4, 1e-18);
    EXPECT_NEAR(rs.r_max, 8e-4, 1e-15);
    EXPECT_NEAR(rs.r_max / max_excitation_rate(c), 1.0, 1e-9);
}

TEST(Rates, RateScalingAgreesWithMaxRateAndFollowsExponentLaw) {
    double prev_eta = 1.0;
    for (double d : {20.0, 40.0, 80.0}) {
        const auto cfg = DetectorConfig::uniform(2, 1.0, 1.0, d, 0.0, 1.0);
        auto c = cfg;
        for (auto& p : c.detunings) p.minus = -p.plus;
        const auto rs = rate_scaling(c);
        EXPECT_LT(rs.eta, prev_eta);
        prev_eta = rs.eta;
    }
    std::vector<double> logs;
    double eta = 0;
    for (int n = 2; n <= 6; ++n) {
        auto c = DetectorConfig::uniform(n, 0.5, 0.8, 30.0, 0.0, 3.0);
        for (auto& p : c.detunings) p.minus = -p.plus;
        const auto rs = rate_scaling(c);
        EXPECT_NEAR(rs.r_max / max_excitation_rate(c), 1.0, 1e-9);
        logs.push_back(std::log(rs.r_max));
        eta = rs.eta;
    }
    for (std::size_t i = 1; i < logs.size(); ++i) EXPECT_NEAR(logs[i] - logs[i - 1], std::log(eta), 1e-9);
}

TEST(Rates, NonUniformDetuningsRejected) {
    auto cfg = DetectorConfig::uniform(3, 1.0, 1.0, 10.0, 1.0, 1.0);
    try {
        rate_scaling(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonUniformDetunings);
    }
}

TEST(AccuracyFactor, Examples) {
    EXPECT_NEAR(accuracy_factor(detector(2, 100 * kPi)), 1.0, 1e-13);
    EXPECT_NEAR(accuracy_factor(detector(2, 100.0)), 1.0 / (1.0 + 4.0 * std::sin(100.0) / 100.0), 1e-15);
    EXPECT_NEAR(accuracy_factor(detector(2, 100.0)), 1.0207, 1e-4);
    EXPECT_NEAR(accuracy_factor(detector(4, 1e6)), 1.0, 1e-5);
}

TEST(AccuracyFactor, ViolationWhenCorrectionTooLarge) {
    try {
        accuracy_factor(detector(4, 2.0));
        FAIL();
    } catch (const RegimeViolation& e) {
        EXPECT_EQ(e.which(), Precondition::AccuracyFactor);
    }
}

TEST(RegimeReport, FlagsThresholds) {
    const auto ok = validity_report(detector(2, 100.0));
    EXPECT_TRUE(ok.perturbative);
    EXPECT_TRUE(ok.perturbative_margin);
    EXPECT_TRUE(ok.beat_resolved);
    EXPECT_TRUE(ok.narrow_band);
    EXPECT_TRUE(ok.nonresonant_small);
    EXPECT_TRUE(ok.branches_balanced);
    EXPECT_TRUE(ok.all_hard_ok());

    const auto slow = validity_report(detector(2, 5.0));
    EXPECT_FALSE(slow.beat_resolved);

    const auto strong = validity_report(DetectorConfig::uniform(1, 0.5, 1.0, 1.0, 100.0, 1.0));
    EXPECT_TRUE(strong.perturbative);
    EXPECT_FALSE(strong.perturbative_margin);

    const auto unbalanced = validity_report(DetectorConfig::uniform(2, 0.1, 0.1, 10.0, 5.0, 100.0));
    EXPECT_FALSE(unbalanced.branches_balanced);
}

TEST(MeasurementModel, NamesRoundTrip) {
    for (auto k : {ModelKind::Ideal, ModelKind::ClassicalResonant, ModelKind::ClassicalNonresonant}) {
        EXPECT_EQ(parse_model_kind(to_string(k)), k);
    }
    EXPECT_THROW(parse_model_kind("quantum"), Error);
}

TEST(MeasurementModel, ResonantBackEndIsBitIdenticalToIdeal) {
    const auto ideal = MeasurementModel::ideal();
    const auto resonant = MeasurementModel::classical_resonant({});
    CounterRng rng(31);
    for (int i = 0; i < 5000; ++i) {
        const int n = 1 << rng.below(7);
        const Phase phi(kTwoPi * rng.uniform()), fb(kTwoPi * rng.uniform());
        EXPECT_EQ(ideal.probability(n, phi, fb, Outcome::Even), resonant.probability(n, phi, fb, Outcome::Even));
    }
}
