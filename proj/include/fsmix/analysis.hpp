#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <span>
#include <utility>
#include <vector>

#include "fsmix/protocols.hpp"
#include "fsmix/qubo.hpp"
#include "fsmix/statevector.hpp"

namespace fsmix {

/// Thrown when |<psi|U|psi>| is too small for its argument to mean anything.
class UndefinedPhaseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/**
 * arg <psi| U(gamma, beta) |psi> for one unmodified layer, in (-pi, pi].
 * No unwrapping; callers keep |phi| well below pi.
 */
double layer_phase(const StateVector &psi, const QuboMatrix &q, double gamma, double beta,
                   LayerOrder order = LayerOrder::prose,
                   MixerConvention convention = MixerConvention::power);

struct PhaseMap {
    std::vector<double> r_grid;
    double tau = 0.0;
    std::vector<double> phase_true;
    std::vector<double> phase_false;
    /**
     * +1 where the true state is favored, -1 where the false state is, 0 on a
     * tie. Under exp(-i gamma E) a lower energy means a higher phase, so the
     * favored state is the one with the larger phase.
     */
    std::vector<int> favored;
};

/**
 * For each r: gamma = r tau, beta = (1 - r) tau, and the layer phase of both
 * states. Each state must be supported on basis states of one energy (an
 * eigenstate of the phase separator) and keep a nonzero layer overlap.
 */
PhaseMap phase_difference_map(const QuboMatrix &q, const StateVector &state_true,
                              const StateVector &state_false, double tau,
                              std::span<const double> r_grid,
                              MixerConvention convention = MixerConvention::power);

/// Linearly interpolated r where `favored` first changes sign, if it does.
std::optional<double> phase_map_crossing(const PhaseMap &map);

/// `count` points evenly spaced strictly inside (0, 1).
std::vector<double> uniform_r_grid(std::size_t count);

double success_probability(const StateVector &psi, const GroundTruth &truth);
double success_probability(const RunRecord &record);
double false_min_probability(const StateVector &psi, const GroundTruth &truth);
double false_min_probability(const RunRecord &record);

/// Qubit 2 resolved in the X basis; qubits 0 and 1 in the computational basis.
struct ThreeQubitQuantities {
    double p00_plus = 0.0;
    double p00_minus = 0.0;
    double p11_plus = 0.0;
    double p11_minus = 0.0;
    /// (sqrt P(11+) + sqrt P(11-))^2 / 2, an upper bound on P(110).
    double p110_upper = 0.0;
    /// (P(00+) + P(00-) + p110_upper) / 3
    double mean = 0.0;
};

ThreeQubitQuantities three_qubit_quantities(const StateVector &psi);

/// Sorted (value, fraction <= value); ties share the fraction of the last rank.
std::vector<std::pair<double, double>> cdf(std::span<const double> values);

/// Sample standard deviation (ddof = 1) / sqrt(N); 0 for fewer than two samples.
double standard_error(std::span<const double> samples);

/// Fraction of `values` that are <= x.
double cdf_at(std::span<const double> sorted_values, double x);

struct HammingPhasePoint {
    double mean_hamming_weight = 0.0;
    double phase = 0.0;
    /// Other supplied states whose support is one bit flip away from this one's.
    std::size_t flip_neighbors = 0;
};

/// Data behind a phase-vs-Hamming-weight scatter for a set of eigenstates.
std::vector<HammingPhasePoint> hamming_phase_export(const QuboMatrix &q,
                                                    std::span<const StateVector> states,
                                                    double gamma, double beta,
                                                    MixerConvention convention =
                                                        MixerConvention::power);

} // namespace fsmix
