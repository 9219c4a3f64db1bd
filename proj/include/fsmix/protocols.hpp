#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsmix/metric.hpp"
#include "fsmix/qubo.hpp"
#include "fsmix/statevector.hpp"

namespace fsmix {

inline constexpr std::string_view kEngineVersion = "fsmix-engine/1.0.0";

/// Per-layer angles; layer l applies gammas[l] then betas[l].
struct Schedule {
    std::vector<double> gammas;
    std::vector<double> betas;
    /// Total angle per layer for annealing-style schedules, 0 when not applicable.
    double tau = 0.0;

    [[nodiscard]] std::size_t p() const { return gammas.size(); }
    /// Checks equal lengths and finite angles.
    void validate() const;
};

/// gamma_l = r_l tau, beta_l = (1 - r_l) tau with r_l = (l + 1) / (p + 1).
Schedule linear_aqa_schedule(std::size_t p, double tau);

/// pi / (2 p^(1/4)).
double tau_of_p(std::size_t p);

struct MixerStrategy {
    enum class Kind { unmodified, suppressed, thresholded };

    Kind kind = Kind::unmodified;
    double theta = 0.2;

    static MixerStrategy unmodified() { return {Kind::unmodified, 0.2}; }
    static MixerStrategy suppressed() { return {Kind::suppressed, 0.2}; }
    static MixerStrategy thresholded(double theta = 0.2);

    [[nodiscard]] std::string name() const;
    static MixerStrategy parse(std::string_view text);
};

/// Where F is measured from: exact expectations, or `shots` X-basis samples.
struct MetricMode {
    enum class Kind { exact, sampled };

    Kind kind = Kind::exact;
    std::size_t shots = 0;

    static MetricMode exact() { return {}; }
    static MetricMode sampled(std::size_t shots);
    /// "exact" or "sampled:<shots>".
    static MetricMode parse(std::string_view text);
    [[nodiscard]] std::string name() const;
};

/**
 * prose:   phase separator first, then the mixer (the default).
 * literal: mixer first, then the phase separator.
 */
enum class LayerOrder { prose, literal };

std::string to_string(LayerOrder order);
LayerOrder parse_layer_order(std::string_view text);
std::string to_string(MixerConvention convention);
MixerConvention parse_mixer_convention(std::string_view text);

struct ProtocolOptions {
    MetricMode metric;
    LayerOrder order = LayerOrder::prose;
    MixerConvention convention = MixerConvention::power;
    /// Seeds the X-basis sampling stream in sampled metric mode.
    std::uint64_t seed = 0;
    /// Free-form provenance copied into the record.
    std::string fixture_hash;
};

/// Full distributions are kept up to this size; larger runs keep top states.
inline constexpr std::size_t kFullDistributionMaxQubits = 20;
inline constexpr std::size_t kTopStates = 32;

struct RunRecord {
    Schedule schedule;
    MixerStrategy strategy;
    std::size_t n = 0;

    /// zetas[l][j]: mixer scale applied to qubit j in layer l.
    std::vector<std::vector<double>> zetas;
    /// f_diagonals[l][j]: F_jj measured at the end of layer l.
    std::vector<std::vector<double>> f_diagonals;
    /// Standard errors matching f_diagonals (sampled mode only).
    std::vector<std::vector<double>> f_standard_errors;
    /// Layers whose zeta row was carried over because max F was ~0.
    std::vector<std::size_t> degenerate_layers;

    /// Thresholded runs: qubits that were suppressed, and the unmodified pass
    /// that selected them.
    std::vector<std::uint8_t> threshold_mask;
    std::shared_ptr<const RunRecord> baseline;

    /// Full distribution when n <= kFullDistributionMaxQubits, else empty.
    std::vector<double> final_probs;
    /// Most probable states, always filled.
    std::vector<std::pair<Bitstring, double>> top_states;

    double success_prob = 0.0;
    double false_min_prob = 0.0;

    // metadata
    std::uint64_t seed = 0;
    std::string metric_mode;
    std::string layer_order;
    std::string mixer_convention;
    std::string fixture_hash;
    std::string engine_version;
    std::string rng_algorithm;
};

/// One layer: phase separator and mixer in the given order.
void apply_layer(StateVector &psi, std::span<const double> energies, double gamma, double beta,
                 std::span<const double> zeta, LayerOrder order = LayerOrder::prose,
                 MixerConvention convention = MixerConvention::power);
void apply_layer(StateVector &psi, const QuboMatrix &q, double gamma, double beta,
                 std::span<const double> zeta, LayerOrder order = LayerOrder::prose,
                 MixerConvention convention = MixerConvention::power);

struct ProtocolRun {
    RunRecord record;
    StateVector final_state;
};

/**
 * Runs an AQA/QAOA circuit from |+>^n with the strategy's per-layer zeta
 * rule. F is measured after each layer's mixer and drives the next layer.
 */
ProtocolRun run_protocol_with_state(const QuboMatrix &q, const GroundTruth &truth,
                                    const Schedule &schedule, const MixerStrategy &strategy,
                                    const ProtocolOptions &options = {});
RunRecord run_protocol(const QuboMatrix &q, const GroundTruth &truth, const Schedule &schedule,
                       const MixerStrategy &strategy, const ProtocolOptions &options = {});

/// Same circuit with one zeta vector used in every layer.
ProtocolRun run_fixed_zeta_with_state(const QuboMatrix &q, const GroundTruth &truth,
                                      const Schedule &schedule, std::span<const double> zeta,
                                      const ProtocolOptions &options = {});
RunRecord run_fixed_zeta(const QuboMatrix &q, const GroundTruth &truth,
                         const Schedule &schedule, std::span<const double> zeta,
                         const ProtocolOptions &options = {});

/// Compares every trace, probability and flag bit-for-bit; metadata ignored.
bool same_trajectory(const RunRecord &a, const RunRecord &b);

} // namespace fsmix
