#include "phasim/harness/validation.hpp"

#include <sstream>

#include "phasim/errors.hpp"
#include "phasim/harness/campaign.hpp"
#include "phasim/rng.hpp"

namespace phasim::harness {

std::vector<OracleSet> oracle_parameter_sets(int count, std::uint64_t seed, double detuning_scale) {
    if (count < 1) throw Error(ErrorKind::InvalidArgument, "need at least one parameter set");
    if (!(detuning_scale >= 10.0)) throw Error(ErrorKind::InvalidArgument, "detuning scale must be at least 10");
    constexpr double t = 1.0;
    constexpr double field = 1.0e-3;
    std::vector<OracleSet> sets;
    for (int i = 0; i < count; ++i) {
        CounterRng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
        const double d1 = detuning_scale * (1.0 + rng.uniform()) / t;
        const double d2 = detuning_scale * (1.0 + rng.uniform()) / t;
        const double delta = (50.0 + 150.0 * rng.uniform()) / t;
        const double x = kTwoPi * rng.uniform();
        sets.push_back({i, perturbation::FourLevelParams::from_beat(field, field, d1, d2, delta, 1.0, 0.9, t), x});
    }
    return sets;
}

OracleComparison compare_with_oracle(const OracleSet& set, const perturbation::QuadratureBudget& budget) {
    OracleComparison row;
    row.set_id = set.set_id;
    row.closed_form = perturbation::first_order_full(set.params, set.x);
    row.oracle = perturbation::quadrature_oracle(set.params, set.x, budget);
    row.rel_err = std::abs(row.closed_form - row.oracle) / std::abs(row.oracle);
    return row;
}

std::string validation_csv(const std::vector<OracleComparison>& rows) {
    std::ostringstream out;
    out << "set_id,cf_re,cf_im,oracle_re,oracle_im,rel_err\r\n";
    for (const auto& r : rows) {
        out << r.set_id << ',' << format_number(r.closed_form.real()) << ',' << format_number(r.closed_form.imag())
            << ',' << format_number(r.oracle.real()) << ',' << format_number(r.oracle.imag()) << ','
            << format_number(r.rel_err) << "\r\n";
    }
    return out.str();
}

}  // namespace phasim::harness
