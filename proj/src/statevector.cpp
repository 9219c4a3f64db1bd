#include "fsmix/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fsmix {

namespace {

void check_qubit(const StateVector &psi, std::size_t j) {
    if (j >= psi.num_qubits()) {
        throw std::out_of_range("qubit index " + std::to_string(j) + " out of range for " +
                                std::to_string(psi.num_qubits()) + " qubits");
    }
}

void check_cap(std::size_t n) {
    if (n == 0 || n > kMaxQubits) {
        throw std::invalid_argument("qubit count " + std::to_string(n) +
                                    " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
}

} // namespace

double mixer_rotation_angle(double beta, double zeta, MixerConvention convention) {
    return convention == MixerConvention::power ? -0.5 * beta * zeta : beta * zeta;
}

StateVector::StateVector(std::size_t n, std::vector<Complex> amps)
    : n_(n), amps_(std::move(amps)) {}

StateVector StateVector::plus_state(std::size_t n) {
    check_cap(n);
    const std::size_t dim = std::size_t{1} << n;
    const double a = 1.0 / std::sqrt(static_cast<double>(dim));
    return StateVector(n, std::vector<Complex>(dim, Complex(a, 0.0)));
}

StateVector StateVector::basis_state(std::size_t n, std::uint64_t index) {
    check_cap(n);
    const std::size_t dim = std::size_t{1} << n;
    if (index >= dim) {
        throw std::out_of_range("basis_state: index out of range");
    }
    std::vector<Complex> amps(dim);
    amps[index] = 1.0;
    return StateVector(n, std::move(amps));
}

StateVector StateVector::from_amplitudes(std::size_t n, std::vector<Complex> amps) {
    check_cap(n);
    if (amps.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("from_amplitudes: expected 2^n amplitudes");
    }
    StateVector psi(n, std::move(amps));
    if (std::abs(psi.norm_squared() - 1.0) > 1e-10) {
        throw std::invalid_argument("from_amplitudes: state is not normalized");
    }
    return psi;
}

StateVector StateVector::product_state(std::string_view spec) {
    const std::size_t n = spec.size();
    check_cap(n);
    const double r = std::numbers::sqrt2 / 2.0;
    std::vector<Complex> amps(std::size_t{1} << n, Complex(1.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        double a0 = 0.0;
        double a1 = 0.0;
        switch (spec[j]) {
        case '0': a0 = 1.0; break;
        case '1': a1 = 1.0; break;
        case '+': a0 = r; a1 = r; break;
        case '-': a0 = r; a1 = -r; break;
        default:
            throw std::invalid_argument("product_state: unexpected character '" +
                                        std::string(1, spec[j]) + "'");
        }
        for (std::size_t z = 0; z < amps.size(); ++z) {
            amps[z] *= ((z >> j) & 1U) != 0U ? a1 : a0;
        }
    }
    return StateVector(n, std::move(amps));
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

void apply_phase_separator(StateVector &psi, std::span<const double> energies, double gamma) {
    if (energies.size() != psi.dim()) {
        throw std::invalid_argument("apply_phase_separator: energy table has " +
                                    std::to_string(energies.size()) + " entries, state has " +
                                    std::to_string(psi.dim()));
    }
    if (gamma == 0.0) {
        return;
    }
    auto amps = psi.amplitudes();
    for (std::size_t z = 0; z < amps.size(); ++z) {
        const double angle = -gamma * energies[z];
        amps[z] *= Complex(std::cos(angle), std::sin(angle));
    }
}

void apply_phase_separator(StateVector &psi, const QuboMatrix &q, double gamma) {
    if (q.size() != psi.num_qubits()) {
        throw std::invalid_argument("apply_phase_separator: QUBO size " +
                                    std::to_string(q.size()) + " != qubit count " +
                                    std::to_string(psi.num_qubits()));
    }
    apply_phase_separator(psi, basis_energies(q), gamma);
}

void apply_x_rotation(StateVector &psi, std::size_t qubit, double theta) {
    check_qubit(psi, qubit);
    if (theta == 0.0) {
        return;
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto amps = psi.amplitudes();
    const std::size_t stride = std::size_t{1} << qubit;
    // [[c, -i s], [-i s, c]] on each (i0, i0 | stride) pair.
    for (std::size_t block = 0; block < amps.size(); block += 2 * stride) {
        for (std::size_t i0 = block; i0 < block + stride; ++i0) {
            const Complex v0 = amps[i0];
            const Complex v1 = amps[i0 + stride];
            amps[i0] = Complex(c * v0.real() + s * v1.imag(), c * v0.imag() - s * v1.real());
            amps[i0 + stride] =
                Complex(s * v0.imag() + c * v1.real(), -s * v0.real() + c * v1.imag());
        }
    }
}

void apply_hadamard(StateVector &psi, std::size_t qubit) {
    check_qubit(psi, qubit);
    const double r = std::numbers::sqrt2 / 2.0;
    auto amps = psi.amplitudes();
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t block = 0; block < amps.size(); block += 2 * stride) {
        for (std::size_t i0 = block; i0 < block + stride; ++i0) {
            const Complex v0 = amps[i0];
            const Complex v1 = amps[i0 + stride];
            amps[i0] = r * (v0 + v1);
            amps[i0 + stride] = r * (v0 - v1);
        }
    }
}

void apply_mixer(StateVector &psi, double beta, std::span<const double> zeta,
                 MixerConvention convention) {
    if (zeta.size() != psi.num_qubits()) {
        throw std::invalid_argument("apply_mixer: zeta has " + std::to_string(zeta.size()) +
                                    " entries, state has " + std::to_string(psi.num_qubits()) +
                                    " qubits");
    }
    for (double z : zeta) {
        if (!(z >= 0.0 && z <= 1.0)) {
            throw std::invalid_argument("apply_mixer: zeta entries must lie in [0, 1]");
        }
    }
    for (std::size_t j = 0; j < zeta.size(); ++j) {
        apply_x_rotation(psi, j, mixer_rotation_angle(beta, zeta[j], convention));
    }
}

double x_expectation(const StateVector &psi, std::size_t j) {
    check_qubit(psi, j);
    const auto amps = psi.amplitudes();
    const std::size_t stride = std::size_t{1} << j;
    double acc = 0.0;
    for (std::size_t block = 0; block < amps.size(); block += 2 * stride) {
        for (std::size_t i0 = block; i0 < block + stride; ++i0) {
            const Complex a = amps[i0];
            const Complex b = amps[i0 + stride];
            acc += a.real() * b.real() + a.imag() * b.imag();
        }
    }
    return 2.0 * acc;
}

double xx_expectation(const StateVector &psi, std::size_t j, std::size_t k) {
    check_qubit(psi, j);
    check_qubit(psi, k);
    if (j == k) {
        return 1.0;
    }
    const auto amps = psi.amplitudes();
    const std::size_t flip = (std::size_t{1} << j) | (std::size_t{1} << k);
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const Complex a = amps[i];
        const Complex b = amps[i ^ flip];
        acc += a.real() * b.real() + a.imag() * b.imag();
    }
    return acc;
}

double probability(const StateVector &psi, const Bitstring &x) {
    if (x.size() != psi.num_qubits()) {
        throw std::invalid_argument("probability: bitstring length does not match state");
    }
    return std::norm(psi[x.to_index()]);
}

double manifold_probability(const StateVector &psi, std::span<const Bitstring> states) {
    double p = 0.0;
    for (const auto &s : states) {
        p += probability(psi, s);
    }
    return p;
}

std::vector<double> probabilities(const StateVector &psi) {
    std::vector<double> out(psi.dim());
    const auto amps = psi.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        out[i] = std::norm(amps[i]);
    }
    return out;
}

std::vector<std::uint64_t> sample_indices(const StateVector &psi, std::size_t shots, Rng &rng) {
    std::vector<double> cumulative(psi.dim());
    double total = 0.0;
    const auto amps = psi.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        total += std::norm(amps[i]);
        cumulative[i] = total;
    }
    std::vector<std::uint64_t> out(shots);
    for (auto &o : out) {
        const double u = rng.uniform01() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) {
            --it;
        }
        // upper_bound never lands on a zero-probability entry.
        o = static_cast<std::uint64_t>(it - cumulative.begin());
    }
    return out;
}

std::vector<Bitstring> sample(const StateVector &psi, std::size_t shots, Rng &rng) {
    std::vector<Bitstring> out;
    out.reserve(shots);
    for (auto idx : sample_indices(psi, shots, rng)) {
        out.push_back(Bitstring::from_index(idx, psi.num_qubits()));
    }
    return out;
}

std::vector<XSample> sample_x_basis(const StateVector &psi, std::size_t shots, Rng &rng) {
    StateVector rotated = psi;
    for (std::size_t j = 0; j < psi.num_qubits(); ++j) {
        apply_hadamard(rotated, j);
    }
    std::vector<XSample> out;
    out.reserve(shots);
    for (auto idx : sample_indices(rotated, shots, rng)) {
        XSample s(psi.num_qubits());
        for (std::size_t j = 0; j < s.size(); ++j) {
            s[j] = ((idx >> j) & 1U) != 0U ? std::int8_t{-1} : std::int8_t{1};
        }
        out.push_back(std::move(s));
    }
    return out;
}

Complex overlap(const StateVector &psi, const StateVector &phi) {
    if (psi.dim() != phi.dim()) {
        throw std::invalid_argument("overlap: states have different sizes");
    }
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        acc += std::conj(psi[i]) * phi[i];
    }
    return acc;
}

void write_amplitudes_csv(const StateVector &psi, std::ostream &out) {
    out << "index,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, psi[i].real(), psi[i].imag());
        out << buf;
    }
}

} // namespace fsmix
