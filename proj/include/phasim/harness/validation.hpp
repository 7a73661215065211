#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phasim/perturbation.hpp"

namespace phasim::harness {

struct OracleSet {
    int set_id = 0;
    perturbation::FourLevelParams params;
    double x = 0.0;
};

/// Random parameter sets inside the perturbative, beat-resolved regime:
/// same-sign detunings with |Delta t| in [scale, 2 scale], delta t in [50, 200],
/// weak fields and x uniform on [0, 2pi).
std::vector<OracleSet> oracle_parameter_sets(int count, std::uint64_t seed, double detuning_scale = 1.0e7);

struct OracleComparison {
    int set_id = 0;
    perturbation::Amplitude closed_form;
    perturbation::Amplitude oracle;
    double rel_err = 0.0;
};

OracleComparison compare_with_oracle(const OracleSet& set, const perturbation::QuadratureBudget& budget);

/// set_id,cf_re,cf_im,oracle_re,oracle_im,rel_err
std::string validation_csv(const std::vector<OracleComparison>& rows);

}  // namespace phasim::harness
