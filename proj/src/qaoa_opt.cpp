#include "fsmix/qaoa_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "fsmix/parallel.hpp"
#include "fsmix/statevector.hpp"

namespace fsmix {

std::string to_string(InitPolicy policy) {
    return policy == InitPolicy::random_uniform ? "random_uniform" : "aqa_warm_start";
}

InitPolicy parse_init_policy(std::string_view text) {
    if (text == "random_uniform") {
        return InitPolicy::random_uniform;
    }
    if (text == "aqa_warm_start") {
        return InitPolicy::aqa_warm_start;
    }
    throw std::invalid_argument("bad init policy '" + std::string(text) +
                                "' (expected random_uniform or aqa_warm_start)");
}

std::string to_string(ObjectiveMode mode) {
    return mode == ObjectiveMode::sampled ? "sampled" : "exact";
}

ObjectiveMode parse_objective_mode(std::string_view text) {
    if (text == "sampled") {
        return ObjectiveMode::sampled;
    }
    if (text == "exact") {
        return ObjectiveMode::exact;
    }
    throw std::invalid_argument("bad objective mode '" + std::string(text) +
                                "' (expected sampled or exact)");
}

std::string to_string(OptimizerKind kind) {
    return kind == OptimizerKind::linear_trust_region ? "linear_trust_region" : "nelder_mead";
}

OptimizerKind parse_optimizer_kind(std::string_view text) {
    if (text == "linear_trust_region") {
        return OptimizerKind::linear_trust_region;
    }
    if (text == "nelder_mead") {
        return OptimizerKind::nelder_mead;
    }
    throw std::invalid_argument("bad optimizer '" + std::string(text) +
                                "' (expected linear_trust_region or nelder_mead)");
}

void OptConfig::validate() const {
    if (p < 1 || max_iters < 1 || shots < 1 || n_runs < 1) {
        throw std::invalid_argument("OptConfig: p, max_iters, shots and n_runs must be >= 1");
    }
}

namespace {

StateVector evolve(std::span<const double> energies, std::size_t n,
                   std::span<const double> gammas, std::span<const double> betas,
                   LayerOrder order, MixerConvention convention) {
    if (gammas.size() != betas.size()) {
        throw std::invalid_argument("gammas and betas differ in length");
    }
    StateVector psi = StateVector::plus_state(n);
    const std::vector<double> ones(n, 1.0);
    for (std::size_t l = 0; l < gammas.size(); ++l) {
        apply_layer(psi, energies, gammas[l], betas[l], ones, order, convention);
    }
    return psi;
}

double sampled_mean(const StateVector &psi, std::span<const double> energies, std::size_t shots,
                    Rng &rng) {
    if (shots < 1) {
        throw std::invalid_argument("energy_objective: shots must be >= 1");
    }
    double sum = 0.0;
    for (auto idx : sample_indices(psi, shots, rng)) {
        sum += energies[idx];
    }
    return sum / static_cast<double>(shots);
}

double exact_mean(const StateVector &psi, std::span<const double> energies) {
    double sum = 0.0;
    const auto amps = psi.amplitudes();
    for (std::size_t z = 0; z < amps.size(); ++z) {
        sum += std::norm(amps[z]) * energies[z];
    }
    return sum;
}

struct BudgetExhausted {};

} // namespace

double energy_objective(const QuboMatrix &q, std::span<const double> gammas,
                        std::span<const double> betas, std::size_t shots, Rng &rng,
                        LayerOrder order, MixerConvention convention) {
    const auto energies = basis_energies(q);
    return sampled_mean(evolve(energies, q.size(), gammas, betas, order, convention), energies,
                        shots, rng);
}

double exact_energy_objective(const QuboMatrix &q, std::span<const double> gammas,
                              std::span<const double> betas, LayerOrder order,
                              MixerConvention convention) {
    const auto energies = basis_energies(q);
    return exact_mean(evolve(energies, q.size(), gammas, betas, order, convention), energies);
}

LocalSearchResult nelder_mead(const std::function<double(std::span<const double>)> &f,
                              std::vector<double> x0, std::span<const double> step,
                              std::size_t max_evals, double spread_tol) {
    const std::size_t d = x0.size();
    if (step.size() != d) {
        throw std::invalid_argument("nelder_mead: step size does not match the dimension");
    }
    LocalSearchResult res;
    res.best_x = x0;
    res.best_f = std::numeric_limits<double>::infinity();
    if (d == 0 || max_evals == 0) {
        return res;
    }

    // Gao & Han's dimension-adapted coefficients; the classic ones for d = 1,
    // where the adaptive shrink factor would be zero.
    const double dd = static_cast<double>(d);
    const double alpha = 1.0;
    const double chi = d >= 2 ? 1.0 + 2.0 / dd : 2.0;
    const double rho = d >= 2 ? 0.75 - 1.0 / (2.0 * dd) : 0.5;
    const double sigma = d >= 2 ? 1.0 - 1.0 / dd : 0.5;

    auto eval = [&](const std::vector<double> &x) {
        if (res.evaluations >= max_evals) {
            throw BudgetExhausted{};
        }
        ++res.evaluations;
        const double v = f(x);
        if (v < res.best_f) {
            res.best_f = v;
            res.best_x = x;
        }
        return v;
    };

    std::vector<std::vector<double>> pts(d + 1, x0);
    std::vector<double> vals(d + 1);
    try {
        vals[0] = eval(pts[0]);
        for (std::size_t i = 0; i < d; ++i) {
            pts[i + 1][i] += step[i];
            vals[i + 1] = eval(pts[i + 1]);
        }

        std::vector<std::size_t> idx(d + 1);
        std::vector<double> centroid(d);
        auto along = [&](double t, const std::vector<double> &x) {
            std::vector<double> out(d);
            for (std::size_t k = 0; k < d; ++k) {
                out[k] = centroid[k] + t * (x[k] - centroid[k]);
            }
            return out;
        };

        for (;;) {
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
            const std::size_t best = idx.front();
            const std::size_t worst = idx.back();
            const std::size_t second = idx[d - 1];
            if (vals[worst] - vals[best] < spread_tol) {
                res.converged = true;
            }

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t k = 0; k < d; ++k) {
                    centroid[k] += pts[idx[i]][k] / dd;
                }
            }

            const auto xr = along(-alpha, pts[worst]);
            const double fr = eval(xr);
            if (fr < vals[best]) {
                const auto xe = along(-alpha * chi, pts[worst]);
                const double fe = eval(xe);
                if (fe < fr) {
                    pts[worst] = xe;
                    vals[worst] = fe;
                } else {
                    pts[worst] = xr;
                    vals[worst] = fr;
                }
                continue;
            }
            if (fr < vals[second]) {
                pts[worst] = xr;
                vals[worst] = fr;
                continue;
            }
            const bool outside = fr < vals[worst];
            const auto xc = outside ? along(-alpha * rho, pts[worst]) : along(rho, pts[worst]);
            const double fc = eval(xc);
            if (outside ? fc <= fr : fc < vals[worst]) {
                pts[worst] = xc;
                vals[worst] = fc;
                continue;
            }
            for (std::size_t i = 1; i <= d; ++i) {
                auto &x = pts[idx[i]];
                for (std::size_t k = 0; k < d; ++k) {
                    x[k] = pts[best][k] + sigma * (x[k] - pts[best][k]);
                }
                vals[idx[i]] = eval(x);
            }
        }
    } catch (const BudgetExhausted &) {
    }
    return res;
}

LocalSearchResult linear_trust_region(const std::function<double(std::span<const double>)> &f,
                                      std::vector<double> x0, double rho_begin,
                                      std::size_t max_evals, double rho_end) {
    if (!(rho_begin > 0.0) || !(rho_end >= 0.0) || rho_end > rho_begin) {
        throw std::invalid_argument("linear_trust_region: need 0 <= rho_end <= rho_begin, rho_begin > 0");
    }
    const auto d = static_cast<Eigen::Index>(x0.size());
    LocalSearchResult res;
    res.best_x = x0;
    res.best_f = std::numeric_limits<double>::infinity();
    if (d == 0 || max_evals == 0) {
        return res;
    }

    // Simplex acceptability (alpha, beta), geometry step length (gamma) and
    // the far-vertex weighting (delta), as in Powell's COBYLA.
    constexpr double alpha = 0.25;
    constexpr double beta = 2.1;
    constexpr double gamma = 0.5;
    constexpr double delta = 1.1;

    auto eval = [&](const Eigen::VectorXd &x) {
        if (res.evaluations >= max_evals) {
            throw BudgetExhausted{};
        }
        ++res.evaluations;
        const std::vector<double> pt(x.data(), x.data() + d);
        const double v = f(pt);
        if (v < res.best_f) {
            res.best_f = v;
            res.best_x = pt;
        }
        return v;
    };

    Eigen::VectorXd base = Eigen::Map<const Eigen::VectorXd>(x0.data(), d);
    // Row j: offset of vertex j from the base point.
    Eigen::MatrixXd sim = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd fvals(d);
    double fbase = 0.0;
    double rho = rho_begin;

    auto make_base = [&](Eigen::Index j) {
        const Eigen::RowVectorXd dj = sim.row(j);
        base += dj.transpose();
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i != j) {
                sim.row(i) -= dj;
            }
        }
        sim.row(j) = -dj;
        std::swap(fbase, fvals(j));
    };

    try {
        fbase = eval(base);
        for (Eigen::Index j = 0; j < d; ++j) {
            sim.row(j).setZero();
            sim(j, j) = rho;
            fvals(j) = eval(base + sim.row(j).transpose());
            if (fvals(j) < fbase) {
                make_base(j);
            }
        }

        bool check_geometry = false;
        for (;;) {
            Eigen::Index jmin = 0;
            if (fvals.minCoeff(&jmin) < fbase) {
                make_base(jmin);
            }
            const Eigen::MatrixXd simi = sim.inverse();
            const Eigen::VectorXd g = simi * (fvals.array() - fbase).matrix();

            if (check_geometry) {
                check_geometry = false;
                Eigen::Index far = 0;
                const double max_dist = sim.rowwise().norm().maxCoeff(&far);
                Eigen::Index thin = 0;
                const double min_sigma = simi.colwise().norm().cwiseInverse().minCoeff(&thin);
                if (max_dist > beta * rho || min_sigma < alpha * rho) {
                    const Eigen::Index l = max_dist > beta * rho ? far : thin;
                    Eigen::VectorXd dx = gamma * rho * simi.col(l).normalized();
                    if (g.dot(dx) > 0.0) {
                        dx = -dx;
                    }
                    sim.row(l) = dx.transpose();
                    fvals(l) = eval(base + dx);
                    continue;
                }
                if (rho > rho_end) {
                    rho *= 0.5;
                    if (rho <= 1.5 * rho_end) {
                        rho = rho_end;
                    }
                } else {
                    res.converged = true;
                }
            }

            const double gn = g.norm();
            const Eigen::VectorXd step = gn > 0.0 ? Eigen::VectorXd(-rho / gn * g)
                                                  : Eigen::VectorXd(rho * simi.col(0).normalized());
            const double fnew = eval(base + step);
            const bool improved = fnew < fbase;
            const Eigen::VectorXd c = simi.transpose() * step;
            Eigen::Index jdrop = -1;
            double best_weight = improved ? 1.0 : 0.0;
            for (Eigen::Index j = 0; j < d; ++j) {
                double w = std::abs(c(j));
                if (improved) {
                    const double r = sim.row(j).norm() / (delta * rho);
                    w *= std::max(1.0, r * r);
                }
                if (w > best_weight) {
                    best_weight = w;
                    jdrop = j;
                }
            }
            if (jdrop >= 0) {
                sim.row(jdrop) = step.transpose();
                fvals(jdrop) = fnew;
            }
            const double ratio = gn > 0.0 ? (fbase - fnew) / (rho * gn) : 0.0;
            if (jdrop < 0 || ratio < 0.1) {
                check_geometry = true;
            }
        }
    } catch (const BudgetExhausted &) {
    }
    return res;
}

OptRun optimize(const QuboMatrix &q, const GroundTruth &truth, const OptConfig &config,
                std::size_t run_index) {
    config.validate();
    const std::size_t n = q.size();
    const std::size_t p = config.p;
    const auto energies = basis_energies(q);
    std::vector<std::uint64_t> optimal;
    for (const auto &s : truth.optimal_states) {
        if (s.size() != n) {
            throw std::invalid_argument("optimize: ground truth does not match the QUBO");
        }
        optimal.push_back(s.to_index());
    }

    OptRun run;
    run.run_index = run_index;
    run.seed = config.seed;
    Rng rng = Rng::stream(config.seed, run_index);

    const double tau = tau_of_p(p);
    if (config.init == InitPolicy::aqa_warm_start) {
        const auto s = linear_aqa_schedule(p, tau);
        run.initial_gammas = s.gammas;
        run.initial_betas = s.betas;
    } else {
        auto draw = [&] {
            double v = 0.0;
            while (v == 0.0) {
                v = rng.uniform(0.0, tau);
            }
            return v;
        };
        run.initial_gammas.resize(p);
        run.initial_betas.resize(p);
        for (std::size_t l = 0; l < p; ++l) {
            run.initial_gammas[l] = draw();
            run.initial_betas[l] = draw();
        }
    }

    // x = (gamma_0..gamma_{p-1}, beta_0..beta_{p-1})
    std::vector<double> x0 = run.initial_gammas;
    x0.insert(x0.end(), run.initial_betas.begin(), run.initial_betas.end());
    const std::vector<double> step(2 * p, 0.5 * tau);

    double best_success = 0.0;
    auto objective = [&](std::span<const double> x) {
        const auto psi = evolve(energies, n, x.first(p), x.subspan(p), config.order,
                                config.convention);
        const double value = config.objective == ObjectiveMode::sampled
                                 ? sampled_mean(psi, energies, config.shots, rng)
                                 : exact_mean(psi, energies);
        double success = 0.0;
        for (auto idx : optimal) {
            success += std::norm(psi[idx]);
        }
        best_success = std::max(best_success, success);
        run.objective_trace.push_back(value);
        run.success_trace.push_back(success);
        run.best_success_trace.push_back(best_success);
        return value;
    };

    const auto res = config.optimizer == OptimizerKind::linear_trust_region
                         ? linear_trust_region(objective, x0, 0.5 * tau, config.max_iters)
                         : nelder_mead(objective, x0, step, config.max_iters);
    run.best_gammas.assign(res.best_x.begin(), res.best_x.begin() + static_cast<long>(p));
    run.best_betas.assign(res.best_x.begin() + static_cast<long>(p), res.best_x.end());
    run.best_objective = res.best_f;
    run.converged = res.converged;
    return run;
}

std::vector<OptRun> optimize_runs(const QuboMatrix &q, const GroundTruth &truth,
                                  const OptConfig &config, std::size_t jobs) {
    config.validate();
    std::vector<OptRun> runs(config.n_runs);
    parallel_for(config.n_runs, jobs, [&](std::size_t i) { runs[i] = optimize(q, truth, config, i); });
    return runs;
}

ConvergenceCurve aggregate_convergence(std::span<const OptRun> runs) {
    if (runs.empty()) {
        throw std::invalid_argument("aggregate_convergence: no runs");
    }
    const std::size_t len = runs.front().best_success_trace.size();
    for (const auto &r : runs) {
        if (r.best_success_trace.size() != len) {
            throw std::invalid_argument("aggregate_convergence: traces differ in length");
        }
    }
    const double m = static_cast<double>(runs.size());
    ConvergenceCurve out;
    out.mean.resize(len);
    out.standard_error.resize(len);
    for (std::size_t t = 0; t < len; ++t) {
        double sum = 0.0;
        for (const auto &r : runs) {
            sum += r.best_success_trace[t];
        }
        const double mean = sum / m;
        double ss = 0.0;
        for (const auto &r : runs) {
            const double dv = r.best_success_trace[t] - mean;
            ss += dv * dv;
        }
        out.mean[t] = mean;
        out.standard_error[t] = std::sqrt(ss / m) / std::sqrt(m);
    }
    for (const auto &r : runs) {
        out.final_values.push_back(len > 0 ? r.best_success_trace.back() : 0.0);
    }
    return out;
}

std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins, double lo,
                                    double hi) {
    if (bins < 1 || !(hi > lo)) {
        throw std::invalid_argument("histogram: need bins >= 1 and hi > lo");
    }
    std::vector<HistogramBin> out(bins);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].lo = lo + width * static_cast<double>(b);
        out[b].hi = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    }
    for (double v : values) {
        if (v < lo || v > hi) {
            continue;
        }
        auto b = static_cast<std::size_t>((v - lo) / width);
        ++out[std::min(b, bins - 1)].count;
    }
    return out;
}

double tail_slope(std::span<const double> curve, std::size_t window) {
    window = std::min(window, curve.size());
    if (window < 2) {
        return 0.0;
    }
    const auto tail = curve.last(window);
    const double w = static_cast<double>(window);
    const double xbar = (w - 1.0) / 2.0;
    const double ybar = std::accumulate(tail.begin(), tail.end(), 0.0) / w;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
        const double dx = static_cast<double>(i) - xbar;
        sxy += dx * (tail[i] - ybar);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

} // namespace fsmix
