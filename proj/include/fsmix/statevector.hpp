#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "fsmix/qubo.hpp"
#include "fsmix/rng.hpp"

namespace fsmix {

using Complex = std::complex<double>;

/**
 * How the per-qubit mixer angle beta * zeta_j becomes a rotation.
 *
 * power:       X_j^(-beta zeta_j / pi), i.e. exp(+i (beta zeta_j / 2) X_j) once the
 *              global phase exp(-i beta zeta_j / 2) is dropped. This is the gate a
 *              circuit simulator applies for the fractional-power mixer and the
 *              default everywhere.
 * exponential: exp(-i beta zeta_j X_j).
 */
enum class MixerConvention { power, exponential };

/// Angle theta such that the mixer acts on qubit j as exp(-i theta X_j).
double mixer_rotation_angle(double beta, double zeta, MixerConvention convention);

/**
 * Dense statevector over n qubits. Bit j of an amplitude index is the value
 * of qubit j (qubit 0 is the least significant bit).
 */
class StateVector {
  public:
    static StateVector plus_state(std::size_t n);
    static StateVector basis_state(std::size_t n, std::uint64_t index);
    /// Takes ownership of amplitudes that must already be normalized to 1e-10.
    static StateVector from_amplitudes(std::size_t n, std::vector<Complex> amps);
    /**
     * Product state from one character per qubit (qubit 0 first):
     * '0', '1', '+' or '-'.
     */
    static StateVector product_state(std::string_view spec);

    [[nodiscard]] std::size_t num_qubits() const { return n_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amps_; }
    [[nodiscard]] std::span<Complex> amplitudes() { return amps_; }
    [[nodiscard]] const Complex &operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] double norm_squared() const;

  private:
    StateVector(std::size_t n, std::vector<Complex> amps);

    std::size_t n_;
    std::vector<Complex> amps_;
};

/// amp[z] *= exp(-i gamma E(z)) using a precomputed energy table.
void apply_phase_separator(StateVector &psi, std::span<const double> energies, double gamma);
void apply_phase_separator(StateVector &psi, const QuboMatrix &q, double gamma);

/// exp(-i theta X) on one qubit.
void apply_x_rotation(StateVector &psi, std::size_t qubit, double theta);
void apply_hadamard(StateVector &psi, std::size_t qubit);

/// Product of per-qubit X rotations with angles beta * zeta_j; zeta_j in [0, 1].
void apply_mixer(StateVector &psi, double beta, std::span<const double> zeta,
                 MixerConvention convention = MixerConvention::power);

double x_expectation(const StateVector &psi, std::size_t j);
double xx_expectation(const StateVector &psi, std::size_t j, std::size_t k);

double probability(const StateVector &psi, const Bitstring &x);
double manifold_probability(const StateVector &psi, std::span<const Bitstring> states);
std::vector<double> probabilities(const StateVector &psi);

/// Computational-basis draws as amplitude indices.
std::vector<std::uint64_t> sample_indices(const StateVector &psi, std::size_t shots, Rng &rng);
std::vector<Bitstring> sample(const StateVector &psi, std::size_t shots, Rng &rng);

/// One X-basis measurement record: +1 / -1 per qubit.
using XSample = std::vector<std::int8_t>;
std::vector<XSample> sample_x_basis(const StateVector &psi, std::size_t shots, Rng &rng);

/// <psi|phi>
Complex overlap(const StateVector &psi, const StateVector &phi);

/// Debug dump, one `index,re,im` row per amplitude.
void write_amplitudes_csv(const StateVector &psi, std::ostream &out);

} // namespace fsmix
