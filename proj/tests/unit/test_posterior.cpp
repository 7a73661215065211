#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "phasim/errors.hpp"
#include "phasim/estimator.hpp"
#include "phasim/posterior.hpp"
#include "phasim/rng.hpp"

using namespace phasim;
using namespace phasim::estimator;

namespace {

constexpr int kGrid = 4096;

double grid_phi(int g) { return kTwoPi * g / kGrid; }

// Pointwise density on the grid, updated by multiply-and-normalize.
struct GridPosterior {
    std::vector<double> values = std::vector<double>(kGrid, 1.0 / kTwoPi);

    void update(const LikelihoodKernel& kernel) {
        double mass = 0.0;
        for (int g = 0; g < kGrid; ++g) {
            values[static_cast<std::size_t>(g)] *= kernel.evaluate(grid_phi(g));
            mass += values[static_cast<std::size_t>(g)];
        }
        mass *= kTwoPi / kGrid;
        for (auto& v : values) v /= mass;
    }
};

struct RandomPair {
    Posterior fourier;
    GridPosterior grid;
};

RandomPair random_posterior(std::uint64_t seed) {
    CounterRng rng(seed);
    RandomPair pr{Posterior::uniform(400), {}};
    const int steps = 1 + static_cast<int>(rng.below(12));
    const auto model = MeasurementModel::ideal();
    for (int s = 0; s < steps; ++s) {
        const int n = 1 << rng.below(5);
        const Phase fb(kTwoPi * rng.uniform());
        const Outcome u = rng.uniform() < 0.5 ? Outcome::Even : Outcome::Odd;
        const auto kernel = inference_kernel(model, n, fb, u);
        pr.fourier.multiply(kernel);
        pr.grid.update(kernel);
    }
    return pr;
}

}  // namespace

TEST(Posterior, UniformIsNormalizedAndFlat) {
    const auto p = Posterior::uniform(8);
    EXPECT_EQ(p.degree(), 0);
    EXPECT_EQ(p.degree_cap(), 8);
    EXPECT_DOUBLE_EQ(p.coeff(0).real(), 1.0 / kTwoPi);
    EXPECT_EQ(p.sharpness(), 0.0);
    EXPECT_NEAR(p.density(1.234), 1.0 / kTwoPi, 1e-15);
}

TEST(Posterior, FromCoefficientsNormalizesAndTrims) {
    const auto p = Posterior::from_coefficients({{2.0, 0.0}, {0.5, 0.25}, {0.0, 0.0}}, 5);
    EXPECT_EQ(p.degree(), 1);
    EXPECT_NEAR(p.coeff(0).real(), 1.0 / kTwoPi, 1e-15);
    EXPECT_NEAR(std::abs(p.coeff(1) - Complex(0.25, 0.125) / kPi * 0.5), 0.0, 1e-15);
    EXPECT_EQ(p.coeff(-1), std::conj(p.coeff(1)));
    EXPECT_EQ(p.coeff(7), Complex{});
    EXPECT_THROW(Posterior::from_coefficients({{1, 0}, {0, 0}, {0.1, 0}}, 1), Error);
    EXPECT_THROW(Posterior::from_coefficients({}, 1), Error);
    EXPECT_THROW(Posterior::from_coefficients({{0, 0}}, 1), Error);
}

TEST(Posterior, CosineDensityHasSharpnessOneHalf) {
    for (double phi0 : {0.0, 0.4, 2.5, 5.9}) {
        // (1 + cos(phi - phi0)) / 2pi has c_1 = e^{-i phi0} / 4pi
        const auto p = Posterior::from_coefficients({{1.0 / kTwoPi, 0.0}, std::polar(1.0 / (2 * kTwoPi), -phi0)}, 1);
        EXPECT_NEAR(p.sharpness(), 0.5, 1e-12);
        EXPECT_NEAR(holevo_from_sharpness(p.sharpness()), 3.0, 1e-11);
        EXPECT_NEAR(std::abs(wrapped_difference(p.mean_direction().value(), phi0)), 0.0, 1e-12);
        EXPECT_NEAR(p.density(phi0), 2.0 / kTwoPi, 1e-15);
    }
}

TEST(Posterior, FourierMatchesGridOracle) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto pr = random_posterior(1000 + s);
        double worst = 0.0;
        for (int g = 0; g < kGrid; ++g) {
            worst = std::max(worst, std::abs(pr.fourier.density(grid_phi(g)) - pr.grid.values[static_cast<std::size_t>(g)]));
        }
        EXPECT_LT(worst, 1e-10) << "posterior " << s;
    }
}

TEST(Posterior, StaysNormalizedAndNonnegative) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto pr = random_posterior(5000 + s);
        EXPECT_NEAR(pr.fourier.coeff(0).real(), 1.0 / kTwoPi, 1e-12);
        EXPECT_EQ(pr.fourier.coeff(0).imag(), 0.0);
        EXPECT_GE(pr.fourier.min_density(4 * std::max(1, pr.fourier.degree())), -1e-9);
        EXPECT_LE(pr.fourier.sharpness(), 1.0 + 1e-12);
    }
}

TEST(Posterior, DegreeCapIsEnforced) {
    auto p = Posterior::uniform(3);
    const auto kernel = inference_kernel(MeasurementModel::ideal(), 4, Phase(0), Outcome::Even);
    try {
        p.multiply(kernel);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegreeOverflow);
    }
    EXPECT_EQ(p.degree(), 0);
}

TEST(LikelihoodKernel, OutcomeBranchesSumToOne) {
    CounterRng rng(9);
    const auto model = MeasurementModel::ideal();
    for (int i = 0; i < 500; ++i) {
        const int n = 1 + static_cast<int>(rng.below(16));
        const Phase fb(kTwoPi * rng.uniform());
        const double phi = kTwoPi * rng.uniform();
        const auto even = inference_kernel(model, n, fb, Outcome::Even);
        const auto odd = inference_kernel(model, n, fb, Outcome::Odd);
        EXPECT_NEAR(even.evaluate(phi) + odd.evaluate(phi), 1.0, 1e-14);
        EXPECT_NEAR(even.evaluate(phi), model.probability(n, Phase(phi), fb, Outcome::Even), 1e-14);
        EXPECT_EQ(even.degree(), n);
    }
}
