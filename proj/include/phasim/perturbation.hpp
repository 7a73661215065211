#pragma once

// Perturbative excitation amplitudes of the four-level detector
// |b> -> |c1> -> |c2> -> |a> driven by two counter-propagating signal
// beams (+/-) and the drive field, plus a numerical time-ordered
// integral used as an independent check on the closed forms.

#include <complex>

#include "phasim/phase.hpp"

namespace phasim::perturbation {

using Amplitude = std::complex<double>;

struct FourLevelParams {
    double omega_s = 0.0;
    double omega_d = 0.0;
    double delta1_plus = 0.0;
    double delta1_minus = 0.0;
    double delta2_plus = 0.0;
    double delta2_minus = 0.0;
    double delta = 0.0;  ///< Delta_{j-} - Delta_{j+}
    double k_plus = 0.0;
    double k_minus = 0.0;
    double t = 0.0;

    /// Derives delta from the detunings; throws InvalidArgument unless
    /// Delta_{1-} - Delta_{1+} = Delta_{2-} - Delta_{2+} to 1e-9.
    static FourLevelParams make(double omega_s, double omega_d, double delta1_plus, double delta1_minus,
                                double delta2_plus, double delta2_minus, double k_plus, double k_minus, double t);
    /// Minus-branch detunings set to plus + delta.
    static FourLevelParams from_beat(double omega_s, double omega_d, double delta1_plus, double delta2_plus,
                                     double delta, double k_plus, double k_minus, double t);

    /// |Delta_{j+/-} t| > 10 for every detuning.
    bool detunings_large() const;
    /// delta t > 10
    bool beat_resolved() const;
};

/// (e^{i theta} - 1) / (i theta), equal to 1 at theta = 0.
Amplitude oscillation_factor(double theta);

/// Full first-order (three-photon) amplitude: resonant terms plus the
/// +/-2 delta and +/-delta cross-branch terms.
Amplitude first_order_full(const FourLevelParams& p, double x);

/// Resonant part only: i Omega_S^2 Omega_D t (e^{2ik+x}/(D1+ D2+) + e^{2ik-x}/(D1- D2-)).
Amplitude first_order_resonant(const FourLevelParams& p, double x);

struct QuadratureBudget {
    /// Gauss-Legendre nodes per shortest oscillation period of the integrand.
    int nodes_per_period = 20;
    /// Worker threads; the result does not depend on this.
    int threads = 1;
};

/// Numerical value of
///   (-i)^3 int_0^t dt1 int_0^t1 dt2 int_0^t2 dt3 <a|H(t1) H(t2) H(t3)|b>
/// with both beam branches kept in every interaction factor.
///
/// The ordered simplex is cut into equal time panels; every cell of the
/// panel product is integrated with 20-point Gauss-Legendre, using a
/// collapsed (Duffy) map on the diagonal cells.
Amplitude quadrature_oracle(const FourLevelParams& p, double x, const QuadratureBudget& budget = {});

/// Number of panels the oracle uses for a given budget.
long long quadrature_panels(const FourLevelParams& p, const QuadratureBudget& budget);

struct RabiFactors {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
};

/// Second-order Rabi-correction factors. The two stacked-sign fractions of
/// r3 are averaged over the upper and lower sign choice.
RabiFactors second_order_factors(const FourLevelParams& p);

/// i Omega_S^2 Omega_D t (e^{2i phi}/(D1+ D2+) + e^{2i Phi}/(D1- D2-)) (i r1 - i r2 - r3)
Amplitude second_order_amplitude(const FourLevelParams& p, Phase phi, Phase feedback);

/// Leading non-resonant amplitude for an n-photon resonance with
/// one photon exchanged between the branches.
Amplitude nonresonant_amplitude_general(int n, double omega_eff, double t, double delta, Phase phi, Phase feedback);

}  // namespace phasim::perturbation
