#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "phasim/phase.hpp"

namespace phasim::estimator {

using Complex = std::complex<double>;

/// Real trigonometric polynomial L(phi) = sum_m w_m e^{i m phi} with
/// w_{-m} = conj(w_m). Only m >= 0 terms are stored.
struct LikelihoodKernel {
    std::vector<std::pair<int, Complex>> terms;

    int degree() const;
    double evaluate(double phi) const;
};

/// Circular density p(phi) = sum_{|j| <= J} c_j e^{i j phi}, c_{-j} = conj(c_j),
/// stored as c_0 .. c_J. Normalized means c_0 = 1/(2 pi).
class Posterior {
public:
    /// Uniform density with room for `degree_cap` harmonics.
    static Posterior uniform(int degree_cap);
    /// Takes c_0..c_J as given, then normalizes.
    static Posterior from_coefficients(std::vector<Complex> coeffs, int degree_cap);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    int degree_cap() const noexcept { return cap_; }
    std::span<const Complex> coefficients() const noexcept { return coeffs_; }

    /// c_j for any integer j; zero beyond the current degree.
    Complex coeff(int j) const;

    double density(double phi) const;
    /// |<e^{i phi}>| = 2 pi |c_1|
    double sharpness() const;
    /// arg <e^{i phi}>
    Phase mean_direction() const;

    /// p <- p * kernel / normalization. Throws DegreeOverflow past the cap.
    void multiply(const LikelihoodKernel& kernel);

    /// Smallest density value over `samples` equally spaced points.
    double min_density(int samples) const;

    friend bool operator==(const Posterior&, const Posterior&) = default;

private:
    Posterior(std::vector<Complex> coeffs, int cap) : coeffs_(std::move(coeffs)), cap_(cap) {}
    void normalize();

    std::vector<Complex> coeffs_;
    int cap_ = 0;
};

}  // namespace phasim::estimator
