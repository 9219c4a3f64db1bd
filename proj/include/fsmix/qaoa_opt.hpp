#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsmix/protocols.hpp"
#include "fsmix/qubo.hpp"
#include "fsmix/rng.hpp"

namespace fsmix {

enum class InitPolicy { random_uniform, aqa_warm_start };
enum class ObjectiveMode { sampled, exact };
enum class OptimizerKind { linear_trust_region, nelder_mead };

std::string to_string(InitPolicy policy);
InitPolicy parse_init_policy(std::string_view text);
std::string to_string(ObjectiveMode mode);
ObjectiveMode parse_objective_mode(std::string_view text);
std::string to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view text);

struct OptConfig {
    std::size_t p = 1;
    std::size_t max_iters = 300;
    std::size_t shots = 1000;
    std::size_t n_runs = 100;
    InitPolicy init = InitPolicy::random_uniform;
    ObjectiveMode objective = ObjectiveMode::sampled;
    OptimizerKind optimizer = OptimizerKind::linear_trust_region;
    std::uint64_t seed = 0;
    LayerOrder order = LayerOrder::prose;
    MixerConvention convention = MixerConvention::power;

    void validate() const;
};

struct OptRun {
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    std::vector<double> initial_gammas;
    std::vector<double> initial_betas;
    std::vector<double> best_gammas;
    std::vector<double> best_betas;
    /// Lowest objective value seen; best_* are the angles that produced it.
    double best_objective = 0.0;
    /// One entry per iteration (= objective evaluation).
    std::vector<double> objective_trace;
    /// Exact success probability at each iterate, and its running maximum.
    std::vector<double> success_trace;
    std::vector<double> best_success_trace;
    /// The optimizer's own stopping test fired at some point (trust radius
    /// at its floor, or simplex spread below 1e-6). Informational: the run
    /// always continues to max_iters.
    bool converged = false;
};

/**
 * Mean energy of `shots` computational-basis samples after the unmodified
 * circuit with these angles. Empty angle vectors give the uniform state.
 */
double energy_objective(const QuboMatrix &q, std::span<const double> gammas,
                        std::span<const double> betas, std::size_t shots, Rng &rng,
                        LayerOrder order = LayerOrder::prose,
                        MixerConvention convention = MixerConvention::power);

/// Sum_z |amp[z]|^2 E(z) for the same circuit.
double exact_energy_objective(const QuboMatrix &q, std::span<const double> gammas,
                              std::span<const double> betas,
                              LayerOrder order = LayerOrder::prose,
                              MixerConvention convention = MixerConvention::power);

struct LocalSearchResult {
    std::vector<double> best_x;
    double best_f = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/**
 * Adaptive Nelder-Mead (dimension-dependent coefficients). Calls `f` exactly
 * `max_evals` times unless the dimension is zero; there is no early stop.
 */
LocalSearchResult nelder_mead(const std::function<double(std::span<const double>)> &f,
                              std::vector<double> x0, std::span<const double> step,
                              std::size_t max_evals, double spread_tol = 1e-6);

/**
 * Unconstrained COBYLA-style search: a linear model interpolated on a simplex
 * of d + 1 points, steps to the trust-region boundary, geometry repair, and
 * radius halving from rho_begin down to rho_end. One evaluation per
 * iteration after the initial simplex; calls `f` exactly `max_evals` times
 * unless the dimension is zero.
 */
LocalSearchResult linear_trust_region(const std::function<double(std::span<const double>)> &f,
                                      std::vector<double> x0, double rho_begin,
                                      std::size_t max_evals, double rho_end = 1e-8);

/// One optimization; its RNG stream is Rng::stream(config.seed, run_index).
OptRun optimize(const QuboMatrix &q, const GroundTruth &truth, const OptConfig &config,
                std::size_t run_index = 0);

/// config.n_runs independent optimizations on up to `jobs` threads.
std::vector<OptRun> optimize_runs(const QuboMatrix &q, const GroundTruth &truth,
                                  const OptConfig &config, std::size_t jobs = 1);

struct ConvergenceCurve {
    std::vector<double> mean;
    /// Population standard deviation / sqrt(n_runs).
    std::vector<double> standard_error;
    /// Final best-so-far value of each run.
    std::vector<double> final_values;
};

/// Throws if the runs have traces of different lengths.
ConvergenceCurve aggregate_convergence(std::span<const OptRun> runs);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

/// Equal-width bins over [lo, hi]; the last bin is closed on the right.
std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins,
                                    double lo = 0.0, double hi = 1.0);

/// Least-squares slope of the last `window` points of `curve`.
double tail_slope(std::span<const double> curve, std::size_t window);

} // namespace fsmix
