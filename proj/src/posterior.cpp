#include "phasim/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "phasim/errors.hpp"

namespace phasim::estimator {

int LikelihoodKernel::degree() const {
    int d = 0;
    for (const auto& [m, w] : terms) d = std::max(d, m);
    return d;
}

double LikelihoodKernel::evaluate(double phi) const {
    double value = 0.0;
    for (const auto& [m, w] : terms) {
        const Complex z = w * std::polar(1.0, m * phi);
        value += m == 0 ? z.real() : 2.0 * z.real();
    }
    return value;
}

Posterior Posterior::uniform(int degree_cap) {
    if (degree_cap < 0) throw Error(ErrorKind::InvalidArgument, "degree cap must be non-negative");
    return Posterior({Complex(1.0 / kTwoPi, 0.0)}, degree_cap);
}

Posterior Posterior::from_coefficients(std::vector<Complex> coeffs, int degree_cap) {
    if (coeffs.empty()) throw Error(ErrorKind::InvalidArgument, "posterior needs c_0");
    if (static_cast<int>(coeffs.size()) - 1 > degree_cap) {
        throw Error(ErrorKind::DegreeOverflow, "initial degree exceeds cap");
    }
    Posterior p(std::move(coeffs), degree_cap);
    p.normalize();
    return p;
}

Complex Posterior::coeff(int j) const {
    const int a = j < 0 ? -j : j;
    if (a > degree()) return {};
    const Complex c = coeffs_[static_cast<std::size_t>(a)];
    return j < 0 ? std::conj(c) : c;
}

double Posterior::density(double phi) const {
    double value = coeffs_[0].real();
    for (int j = 1; j <= degree(); ++j) value += 2.0 * (coeffs_[static_cast<std::size_t>(j)] * std::polar(1.0, j * phi)).real();
    return value;
}

double Posterior::sharpness() const { return kTwoPi * std::abs(coeff(1)); }

Phase Posterior::mean_direction() const {
    // <e^{i phi}> = 2 pi c_{-1}
    const Complex m = coeff(-1);
    return Phase(std::arg(m));
}

void Posterior::multiply(const LikelihoodKernel& kernel) {
    const int new_degree = degree() + kernel.degree();
    if (new_degree > cap_) {
        throw Error(ErrorKind::DegreeOverflow, "update would raise the posterior degree to " +
                                                   std::to_string(new_degree) + " above the cap " + std::to_string(cap_));
    }
    std::vector<Complex> out(static_cast<std::size_t>(new_degree) + 1);
    for (int j = 0; j <= new_degree; ++j) {
        Complex acc{};
        for (const auto& [m, w] : kernel.terms) {
            acc += w * coeff(j - m);
            if (m != 0) acc += std::conj(w) * coeff(j + m);
        }
        out[static_cast<std::size_t>(j)] = acc;
    }
    coeffs_ = std::move(out);
    normalize();
}

void Posterior::normalize() {
    const double mass = coeffs_[0].real() * kTwoPi;
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw Error(ErrorKind::InvalidArgument, "posterior has no probability mass");
    }
    const double scale = 1.0 / mass;
    for (auto& c : coeffs_) c *= scale;
    coeffs_[0] = Complex(1.0 / kTwoPi, 0.0);
    // trailing zeros do not count toward the degree
    while (coeffs_.size() > 1 && coeffs_.back() == Complex{}) coeffs_.pop_back();
}

double Posterior::min_density(int samples) const {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) lo = std::min(lo, density(kTwoPi * i / samples));
    return lo;
}

}  // namespace phasim::estimator
