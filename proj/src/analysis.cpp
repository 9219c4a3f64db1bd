#include "fsmix/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fsmix {

namespace {

constexpr double kSupportTol = 1e-24;

void require_phase_eigenstate(const StateVector &psi, std::span<const double> energies,
                              const char *label) {
    std::optional<double> e0;
    for (std::size_t z = 0; z < psi.dim(); ++z) {
        if (std::norm(psi[z]) <= kSupportTol) {
            continue;
        }
        if (!e0) {
            e0 = energies[z];
        } else if (std::abs(energies[z] - *e0) > 1e-8) {
            throw std::invalid_argument(std::string("phase_difference_map: ") + label +
                                        " state is not an eigenstate of the phase separator");
        }
    }
}

double layer_phase_with(const StateVector &psi, std::span<const double> energies, double gamma,
                        double beta, LayerOrder order, MixerConvention convention) {
    StateVector out = psi;
    const std::vector<double> ones(psi.num_qubits(), 1.0);
    apply_layer(out, energies, gamma, beta, ones, order, convention);
    const Complex ov = overlap(psi, out);
    if (std::abs(ov) < 1e-12) {
        throw UndefinedPhaseError("layer_phase: overlap magnitude below 1e-12");
    }
    return std::arg(ov);
}

} // namespace

double layer_phase(const StateVector &psi, const QuboMatrix &q, double gamma, double beta,
                   LayerOrder order, MixerConvention convention) {
    if (q.size() != psi.num_qubits()) {
        throw std::invalid_argument("layer_phase: QUBO size does not match the state");
    }
    return layer_phase_with(psi, basis_energies(q), gamma, beta, order, convention);
}

PhaseMap phase_difference_map(const QuboMatrix &q, const StateVector &state_true,
                              const StateVector &state_false, double tau,
                              std::span<const double> r_grid, MixerConvention convention) {
    if (q.size() != state_true.num_qubits() || q.size() != state_false.num_qubits()) {
        throw std::invalid_argument("phase_difference_map: state size does not match the QUBO");
    }
    if (!(tau > 0.0)) {
        throw std::invalid_argument("phase_difference_map: tau must be positive");
    }
    const auto energies = basis_energies(q);
    require_phase_eigenstate(state_true, energies, "true");
    require_phase_eigenstate(state_false, energies, "false");

    PhaseMap map;
    map.tau = tau;
    for (double r : r_grid) {
        if (!(r > 0.0 && r < 1.0)) {
            throw std::invalid_argument("phase_difference_map: r must lie in (0, 1)");
        }
        const double gamma = r * tau;
        const double beta = (1.0 - r) * tau;
        const double pt =
            layer_phase_with(state_true, energies, gamma, beta, LayerOrder::prose, convention);
        const double pf =
            layer_phase_with(state_false, energies, gamma, beta, LayerOrder::prose, convention);
        map.r_grid.push_back(r);
        map.phase_true.push_back(pt);
        map.phase_false.push_back(pf);
        map.favored.push_back(pt > pf ? 1 : (pt < pf ? -1 : 0));
    }
    return map;
}

std::optional<double> phase_map_crossing(const PhaseMap &map) {
    for (std::size_t i = 1; i < map.r_grid.size(); ++i) {
        if (map.favored[i] != map.favored[i - 1]) {
            const double d0 = map.phase_true[i - 1] - map.phase_false[i - 1];
            const double d1 = map.phase_true[i] - map.phase_false[i];
            const double t = d0 == d1 ? 0.5 : d0 / (d0 - d1);
            return map.r_grid[i - 1] + t * (map.r_grid[i] - map.r_grid[i - 1]);
        }
    }
    return std::nullopt;
}

std::vector<double> uniform_r_grid(std::size_t count) {
    std::vector<double> r(count);
    for (std::size_t i = 0; i < count; ++i) {
        r[i] = static_cast<double>(i + 1) / static_cast<double>(count + 1);
    }
    return r;
}

double success_probability(const StateVector &psi, const GroundTruth &truth) {
    return manifold_probability(psi, truth.optimal_states);
}

double success_probability(const RunRecord &record) { return record.success_prob; }

double false_min_probability(const StateVector &psi, const GroundTruth &truth) {
    return manifold_probability(psi, truth.false_min_states);
}

double false_min_probability(const RunRecord &record) { return record.false_min_prob; }

ThreeQubitQuantities three_qubit_quantities(const StateVector &psi) {
    if (psi.num_qubits() != 3) {
        throw std::invalid_argument("three_qubit_quantities: expected 3 qubits, got " +
                                    std::to_string(psi.num_qubits()));
    }
    // Qubit 2 is bit 2: 00x -> indices 0 / 4, 11x -> 3 / 7.
    auto resolved = [&](std::size_t lo, std::size_t hi, double sign) {
        return 0.5 * std::norm(psi[lo] + sign * psi[hi]);
    };
    ThreeQubitQuantities t;
    t.p00_plus = resolved(0, 4, 1.0);
    t.p00_minus = resolved(0, 4, -1.0);
    t.p11_plus = resolved(3, 7, 1.0);
    t.p11_minus = resolved(3, 7, -1.0);
    const double s = std::sqrt(t.p11_plus) + std::sqrt(t.p11_minus);
    t.p110_upper = std::min(1.0, 0.5 * s * s);
    t.mean = (t.p00_plus + t.p00_minus + t.p110_upper) / 3.0;
    return t;
}

std::vector<std::pair<double, double>> cdf(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<std::pair<double, double>> out(sorted.size());
    for (std::size_t i = sorted.size(); i-- > 0;) {
        const bool last_of_tie = i + 1 == sorted.size() || sorted[i + 1] != sorted[i];
        const double frac = last_of_tie ? static_cast<double>(i + 1) / n : out[i + 1].second;
        out[i] = {sorted[i], frac};
    }
    return out;
}

double cdf_at(std::span<const double> sorted_values, double x) {
    if (sorted_values.empty()) {
        return 0.0;
    }
    const auto it = std::upper_bound(sorted_values.begin(), sorted_values.end(), x);
    return static_cast<double>(it - sorted_values.begin()) /
           static_cast<double>(sorted_values.size());
}

double standard_error(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) {
        return 0.0;
    }
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : samples) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

std::vector<HammingPhasePoint> hamming_phase_export(const QuboMatrix &q,
                                                    std::span<const StateVector> states,
                                                    double gamma, double beta,
                                                    MixerConvention convention) {
    const auto energies = basis_energies(q);
    std::vector<std::vector<std::uint64_t>> supports;
    std::vector<HammingPhasePoint> out;
    for (const auto &psi : states) {
        if (psi.num_qubits() != q.size()) {
            throw std::invalid_argument("hamming_phase_export: state size does not match");
        }
        HammingPhasePoint pt;
        std::vector<std::uint64_t> support;
        for (std::size_t z = 0; z < psi.dim(); ++z) {
            const double pz = std::norm(psi[z]);
            pt.mean_hamming_weight += pz * std::popcount(static_cast<std::uint64_t>(z));
            if (pz > kSupportTol) {
                support.push_back(z);
            }
        }
        pt.phase = layer_phase_with(psi, energies, gamma, beta, LayerOrder::prose, convention);
        supports.push_back(std::move(support));
        out.push_back(pt);
    }
    for (std::size_t a = 0; a < supports.size(); ++a) {
        for (std::size_t b = 0; b < supports.size(); ++b) {
            if (a == b) {
                continue;
            }
            const bool adjacent = std::any_of(supports[a].begin(), supports[a].end(), [&](auto za) {
                return std::any_of(supports[b].begin(), supports[b].end(),
                                   [&](auto zb) { return std::popcount(za ^ zb) == 1; });
            });
            out[a].flip_neighbors += adjacent ? 1 : 0;
        }
    }
    return out;
}

} // namespace fsmix
