#include "fsmix/protocols.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace fsmix {

void Schedule::validate() const {
    if (gammas.size() != betas.size()) {
        throw std::invalid_argument("Schedule: gammas and betas differ in length");
    }
    for (std::size_t l = 0; l < gammas.size(); ++l) {
        if (!std::isfinite(gammas[l]) || !std::isfinite(betas[l])) {
            throw std::invalid_argument("Schedule: non-finite angle in layer " +
                                        std::to_string(l));
        }
    }
}

Schedule linear_aqa_schedule(std::size_t p, double tau) {
    if (p < 1) {
        throw std::invalid_argument("linear_aqa_schedule: p must be >= 1");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("linear_aqa_schedule: tau must be positive");
    }
    Schedule s;
    s.tau = tau;
    s.gammas.resize(p);
    s.betas.resize(p);
    for (std::size_t l = 0; l < p; ++l) {
        const double r = static_cast<double>(l + 1) / static_cast<double>(p + 1);
        s.gammas[l] = r * tau;
        s.betas[l] = (1.0 - r) * tau;
    }
    return s;
}

double tau_of_p(std::size_t p) {
    if (p < 1) {
        throw std::invalid_argument("tau_of_p: p must be >= 1");
    }
    return std::numbers::pi / (2.0 * std::pow(static_cast<double>(p), 0.25));
}

MixerStrategy MixerStrategy::thresholded(double theta) {
    if (!(theta > 0.0 && theta < 1.0)) {
        throw std::invalid_argument("thresholded strategy: theta must lie in (0, 1)");
    }
    return {Kind::thresholded, theta};
}

std::string MixerStrategy::name() const {
    switch (kind) {
    case Kind::unmodified: return "unmodified";
    case Kind::suppressed: return "suppressed";
    case Kind::thresholded: return "thresholded";
    }
    return "unknown";
}

MixerStrategy MixerStrategy::parse(std::string_view text) {
    if (text == "unmodified") {
        return unmodified();
    }
    if (text == "suppressed") {
        return suppressed();
    }
    if (text == "thresholded") {
        return thresholded();
    }
    constexpr std::string_view prefix = "thresholded:";
    if (text.starts_with(prefix)) {
        const auto rest = text.substr(prefix.size());
        double theta = 0.0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), theta);
        if (ec != std::errc() || ptr != rest.data() + rest.size()) {
            throw std::invalid_argument("bad threshold in strategy '" + std::string(text) + "'");
        }
        return thresholded(theta);
    }
    throw std::invalid_argument("unknown mixer strategy '" + std::string(text) +
                                "' (expected unmodified, suppressed, thresholded[:theta])");
}

MetricMode MetricMode::sampled(std::size_t shots) {
    if (shots < 1) {
        throw std::invalid_argument("sampled metric mode needs at least one shot");
    }
    return {Kind::sampled, shots};
}

MetricMode MetricMode::parse(std::string_view text) {
    if (text == "exact") {
        return exact();
    }
    constexpr std::string_view prefix = "sampled:";
    if (text.starts_with(prefix)) {
        const auto rest = text.substr(prefix.size());
        std::size_t shots = 0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), shots);
        if (ec == std::errc() && ptr == rest.data() + rest.size()) {
            return sampled(shots);
        }
    }
    throw std::invalid_argument("bad metric mode '" + std::string(text) +
                                "' (expected exact or sampled:<shots>)");
}

std::string MetricMode::name() const {
    return kind == Kind::exact ? "exact" : "sampled:" + std::to_string(shots);
}

std::string to_string(LayerOrder order) {
    return order == LayerOrder::prose ? "prose" : "literal";
}

LayerOrder parse_layer_order(std::string_view text) {
    if (text == "prose") {
        return LayerOrder::prose;
    }
    if (text == "literal") {
        return LayerOrder::literal;
    }
    throw std::invalid_argument("bad layer order '" + std::string(text) +
                                "' (expected prose or literal)");
}

std::string to_string(MixerConvention convention) {
    return convention == MixerConvention::power ? "power" : "exponential";
}

MixerConvention parse_mixer_convention(std::string_view text) {
    if (text == "power") {
        return MixerConvention::power;
    }
    if (text == "exponential") {
        return MixerConvention::exponential;
    }
    throw std::invalid_argument("bad mixer convention '" + std::string(text) +
                                "' (expected power or exponential)");
}

void apply_layer(StateVector &psi, std::span<const double> energies, double gamma, double beta,
                 std::span<const double> zeta, LayerOrder order, MixerConvention convention) {
    if (order == LayerOrder::prose) {
        apply_phase_separator(psi, energies, gamma);
        apply_mixer(psi, beta, zeta, convention);
    } else {
        apply_mixer(psi, beta, zeta, convention);
        apply_phase_separator(psi, energies, gamma);
    }
}

void apply_layer(StateVector &psi, const QuboMatrix &q, double gamma, double beta,
                 std::span<const double> zeta, LayerOrder order, MixerConvention convention) {
    if (q.size() != psi.num_qubits()) {
        throw std::invalid_argument("apply_layer: QUBO size does not match the state");
    }
    apply_layer(psi, basis_energies(q), gamma, beta, zeta, order, convention);
}

namespace {

enum class ZetaRule { ones, fixed, normalized };

struct PassSpec {
    ZetaRule rule = ZetaRule::ones;
    std::vector<double> fixed;        // ZetaRule::fixed
    std::vector<std::uint8_t> mask;   // ZetaRule::normalized: 1 = follow F, 0 = stay at 1
};

struct Pass {
    RunRecord record;
    StateVector state;
};

Pass forward_pass(std::span<const double> energies, std::size_t n, const Schedule &schedule,
                  const PassSpec &spec, const ProtocolOptions &options) {
    schedule.validate();
    RunRecord rec;
    rec.schedule = schedule;
    rec.n = n;
    const std::size_t p = schedule.p();

    std::optional<Rng> rng;
    if (options.metric.kind == MetricMode::Kind::sampled) {
        rng.emplace(options.seed);
    }

    StateVector psi = StateVector::plus_state(n);
    std::vector<double> zeta =
        spec.rule == ZetaRule::fixed ? spec.fixed : std::vector<double>(n, 1.0);

    for (std::size_t l = 0; l < p; ++l) {
        rec.zetas.push_back(zeta);
        apply_layer(psi, energies, schedule.gammas[l], schedule.betas[l], zeta, options.order,
                    options.convention);

        std::vector<double> f;
        if (rng) {
            const auto samples = sample_x_basis(psi, options.metric.shots, *rng);
            auto est = fs_diagonal_sampled(samples);
            f = std::move(est.f);
            rec.f_standard_errors.push_back(std::move(est.standard_error));
        } else {
            f = fs_diagonal(psi).f;
        }

        if (spec.rule == ZetaRule::normalized && l + 1 < p) {
            const double fmax = *std::max_element(f.begin(), f.end());
            if (fmax < 1e-12) {
                // No information in F: keep the previous row.
                rec.degenerate_layers.push_back(l + 1);
            } else {
                for (std::size_t j = 0; j < n; ++j) {
                    zeta[j] = spec.mask[j] != 0U ? f[j] / fmax : 1.0;
                }
            }
        }
        rec.f_diagonals.push_back(std::move(f));
    }
    return Pass{std::move(rec), std::move(psi)};
}

void finish_record(RunRecord &rec, const StateVector &psi, const GroundTruth &truth,
                   const ProtocolOptions &options) {
    const std::size_t n = psi.num_qubits();
    auto probs = probabilities(psi);

    rec.success_prob = 0.0;
    for (const auto &s : truth.optimal_states) {
        rec.success_prob += probs.at(s.to_index());
    }
    rec.false_min_prob = 0.0;
    for (const auto &s : truth.false_min_states) {
        rec.false_min_prob += probs.at(s.to_index());
    }

    std::vector<std::uint64_t> order(probs.size());
    std::iota(order.begin(), order.end(), std::uint64_t{0});
    const std::size_t k = std::min(kTopStates, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end(),
                      [&](std::uint64_t a, std::uint64_t b) {
                          return probs[a] > probs[b] || (probs[a] == probs[b] && a < b);
                      });
    rec.top_states.clear();
    for (std::size_t i = 0; i < k; ++i) {
        rec.top_states.emplace_back(Bitstring::from_index(order[i], n), probs[order[i]]);
    }
    if (n <= kFullDistributionMaxQubits) {
        rec.final_probs = std::move(probs);
    }

    rec.seed = options.seed;
    rec.metric_mode = options.metric.name();
    rec.layer_order = to_string(options.order);
    rec.mixer_convention = to_string(options.convention);
    rec.fixture_hash = options.fixture_hash;
    rec.engine_version = std::string(kEngineVersion);
    rec.rng_algorithm = std::string(Rng::kAlgorithm);
}

void check_problem(const QuboMatrix &q, const GroundTruth &truth) {
    if (q.size() > kMaxQubits) {
        throw std::invalid_argument("problem size exceeds the qubit cap");
    }
    for (const auto &s : truth.optimal_states) {
        if (s.size() != q.size()) {
            throw std::invalid_argument("ground truth does not match the QUBO size");
        }
    }
}

} // namespace

ProtocolRun run_protocol_with_state(const QuboMatrix &q, const GroundTruth &truth,
                                    const Schedule &schedule, const MixerStrategy &strategy,
                                    const ProtocolOptions &options) {
    check_problem(q, truth);
    const std::size_t n = q.size();
    const auto energies = basis_energies(q);

    PassSpec spec;
    std::shared_ptr<const RunRecord> baseline;
    std::vector<std::uint8_t> mask;

    switch (strategy.kind) {
    case MixerStrategy::Kind::unmodified:
        spec.rule = ZetaRule::ones;
        break;
    case MixerStrategy::Kind::suppressed:
        spec.rule = ZetaRule::normalized;
        spec.mask.assign(n, 1U);
        break;
    case MixerStrategy::Kind::thresholded: {
        if (!(strategy.theta > 0.0 && strategy.theta < 1.0)) {
            throw std::invalid_argument("thresholded strategy: theta must lie in (0, 1)");
        }
        auto base = forward_pass(energies, n, schedule, PassSpec{}, options);
        finish_record(base.record, base.state, truth, options);
        base.record.strategy = MixerStrategy::unmodified();
        mask.assign(n, 0U);
        if (schedule.p() > 0) {
            const auto &last = base.record.f_diagonals.back();
            for (std::size_t j = 0; j < n; ++j) {
                mask[j] = last[j] < strategy.theta ? 1U : 0U;
            }
        }
        baseline = std::make_shared<const RunRecord>(std::move(base.record));
        spec.rule = ZetaRule::normalized;
        spec.mask = mask;
        break;
    }
    }

    auto pass = forward_pass(energies, n, schedule, spec, options);
    finish_record(pass.record, pass.state, truth, options);
    pass.record.strategy = strategy;
    pass.record.threshold_mask = std::move(mask);
    pass.record.baseline = std::move(baseline);
    return ProtocolRun{std::move(pass.record), std::move(pass.state)};
}

RunRecord run_protocol(const QuboMatrix &q, const GroundTruth &truth, const Schedule &schedule,
                       const MixerStrategy &strategy, const ProtocolOptions &options) {
    return run_protocol_with_state(q, truth, schedule, strategy, options).record;
}

ProtocolRun run_fixed_zeta_with_state(const QuboMatrix &q, const GroundTruth &truth,
                                      const Schedule &schedule, std::span<const double> zeta,
                                      const ProtocolOptions &options) {
    check_problem(q, truth);
    if (zeta.size() != q.size()) {
        throw std::invalid_argument("run_fixed_zeta: zeta length does not match the QUBO");
    }
    PassSpec spec;
    spec.rule = ZetaRule::fixed;
    spec.fixed.assign(zeta.begin(), zeta.end());
    auto pass = forward_pass(basis_energies(q), q.size(), schedule, spec, options);
    finish_record(pass.record, pass.state, truth, options);
    pass.record.strategy = MixerStrategy::unmodified();
    return ProtocolRun{std::move(pass.record), std::move(pass.state)};
}

RunRecord run_fixed_zeta(const QuboMatrix &q, const GroundTruth &truth,
                         const Schedule &schedule, std::span<const double> zeta,
                         const ProtocolOptions &options) {
    return run_fixed_zeta_with_state(q, truth, schedule, zeta, options).record;
}

bool same_trajectory(const RunRecord &a, const RunRecord &b) {
    return a.n == b.n && a.schedule.gammas == b.schedule.gammas &&
           a.schedule.betas == b.schedule.betas && a.zetas == b.zetas &&
           a.f_diagonals == b.f_diagonals && a.f_standard_errors == b.f_standard_errors &&
           a.final_probs == b.final_probs && a.top_states == b.top_states &&
           a.success_prob == b.success_prob && a.false_min_prob == b.false_min_prob &&
           a.degenerate_layers == b.degenerate_layers;
}

} // namespace fsmix
