#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fsmix/analysis.hpp"
#include "fsmix/io.hpp"
#include "fsmix/parallel.hpp"
#include "fsmix/qaoa_opt.hpp"

namespace fsmix::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path &path) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    return out;
}

void write_json(const fs::path &path, const nlohmann::json &j) {
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

/// Creates the output directory and echoes the effective config into it.
void prepare(const Context &ctx) {
    fs::create_directories(ctx.out);
    auto out = open_output(ctx.out / "config.ini");
    out << "# config_hash=" << ctx.config.hash() << '\n' << ctx.config.effective_text();
}

CsvMeta meta(const Config &config) { return {config.get_u64("run.seed"), config.hash()}; }

std::vector<MixerStrategy> strategies(const Config &config) {
    std::vector<MixerStrategy> out;
    const double theta = config.get_double("protocol.theta");
    for (const auto &name : config.get_list("protocol.strategies")) {
        auto s = MixerStrategy::parse(name);
        if (s.kind == MixerStrategy::Kind::thresholded && name.find(':') == std::string::npos) {
            s = MixerStrategy::thresholded(theta);
        }
        out.push_back(s);
    }
    if (out.empty()) {
        throw ConfigError("protocol.strategies is empty");
    }
    return out;
}

GadgetParams gadget_params(const Config &config, std::uint64_t seed) {
    GadgetParams p;
    p.n_cut = config.get_size("problem.n_cut");
    p.n_gadget = config.get_size("problem.n_gadget");
    p.j_gadget = config.get_double("problem.j_gadget");
    p.j_couple = config.get_double("problem.j_couple");
    p.bias = config.get_double("problem.bias");
    p.seed = seed;
    const auto &variant = config.get("problem.variant");
    if (variant == "table") {
        p.variant = GadgetVariant::table;
    } else if (variant == "as_printed") {
        p.variant = GadgetVariant::as_printed;
    } else {
        throw ConfigError("problem.variant: expected table or as_printed, got '" + variant + "'");
    }
    p.validate();
    return p;
}

GroundTruth attach_false_min(GroundTruth truth, const QuboMatrix &q, const Config &config) {
    const auto list = config.get_list("problem.false_min");
    if (list.empty()) {
        return truth;
    }
    std::vector<Bitstring> manifold;
    for (const auto &s : list) {
        manifold.push_back(Bitstring::parse(s));
    }
    return with_false_minimum(std::move(truth), q, std::move(manifold));
}

std::pair<std::size_t, std::size_t> p_range(const Config &config, const std::string &section) {
    const auto lo = config.get_size(section + ".p_min");
    const auto hi = config.get_size(section + ".p_max");
    if (lo < 1 || hi < lo) {
        throw ConfigError(section + ": need 1 <= p_min <= p_max");
    }
    return {lo, hi};
}

std::string strategy_tag(const MixerStrategy &s) {
    auto name = s.name();
    std::replace(name.begin(), name.end(), ':', '_');
    return name;
}

} // namespace

Fixture load_problem(const Config &config, std::size_t instance) {
    const auto &source = config.get("problem.source");
    const auto seed = config.get_u64("run.seed");
    if (source.starts_with("builtin:")) {
        return builtin_fixture(std::string_view(source).substr(8));
    }
    if (source.starts_with("load:")) {
        const fs::path path = source.substr(5);
        if (!fs::exists(path)) {
            throw std::runtime_error("problem file '" + path.string() + "' not found");
        }
        auto q = load_qubo(path);
        if (!config.get("problem.diagonal_from").empty()) {
            q = substitute_diagonal(std::move(q), config.get_double("problem.diagonal_from"),
                                    config.get_double("problem.diagonal_to"));
        }
        auto truth = attach_false_min(exhaustive_solve(q), q, config);
        return {path.filename().string(), std::move(q), std::move(truth)};
    }
    if (source == "generate") {
        const auto params = gadget_params(config, seed);
        Rng rng = Rng::stream(seed, instance);
        auto inst = generate_gadget_problem(params, rng);
        auto truth = gadget_ground_truth(inst, params);
        return {"generated", std::move(inst.q), std::move(truth)};
    }
    if (source == "random") {
        Rng rng = Rng::stream(seed, instance);
        auto q = random_qubo(config.get_size("problem.n"), rng);
        auto truth = attach_false_min(exhaustive_solve(q), q, config);
        return {"random", std::move(q), std::move(truth)};
    }
    throw ConfigError("problem.source: expected builtin:<name>, load:<path>, generate or random, got '" +
                      source + "'");
}

double tau_for(const Config &config, std::size_t p) {
    if (config.get("schedule.tau") == "formula") {
        return tau_of_p(p);
    }
    const double tau = config.get_double("schedule.tau");
    if (!(tau > 0.0)) {
        throw ConfigError("schedule.tau must be 'formula' or a positive number");
    }
    return tau;
}

ProtocolOptions protocol_options(const Config &config, const QuboMatrix &q) {
    ProtocolOptions o;
    o.metric = MetricMode::parse(config.get("protocol.metric"));
    o.order = parse_layer_order(config.get("protocol.layer_order"));
    o.convention = parse_mixer_convention(config.get("protocol.mixer"));
    o.seed = config.get_u64("run.seed");
    o.fixture_hash = hex64(fixture_hash(q));
    return o;
}

int cmd_generate(const Context &ctx, std::ostream &log) {
    prepare(ctx);
    const auto fx = load_problem(ctx.config);
    const auto path = ctx.out / "problem.qubo";
    auto out = open_output(path);
    save_qubo(fx.q, out,
              "source=" + ctx.config.get("problem.source") +
                  " seed=" + ctx.config.get("run.seed"));
    log << "wrote " << path.string() << " (n=" << fx.q.size() << ")\n";
    return 0;
}

int cmd_solve(const Context &ctx, std::ostream &log) {
    prepare(ctx);
    const auto fx = load_problem(ctx.config);
    nlohmann::json j;
    j["n"] = fx.q.size();
    j["fixture_hash"] = hex64(fixture_hash(fx.q));
    j["min_energy"] = fx.truth.min_energy;
    j["optimal_states"] = nlohmann::json::array();
    for (const auto &b : fx.truth.optimal_states) {
        j["optimal_states"].push_back(b.to_string());
    }
    if (fx.truth.false_min_energy) {
        j["false_min_energy"] = *fx.truth.false_min_energy;
        j["false_min_count"] = fx.truth.false_min_states.size();
    }
    write_json(ctx.out / "solution.json", j);
    log << "min energy " << format_double(fx.truth.min_energy) << " at";
    for (const auto &b : fx.truth.optimal_states) {
        log << ' ' << b.to_string();
    }
    log << '\n';
    return 0;
}

int cmd_aqa_run(const Context &ctx, std::ostream &log) {
    prepare(ctx);
    const auto fx = load_problem(ctx.config);
    const auto p = ctx.config.get_size("schedule.p");
    const auto schedule = linear_aqa_schedule(p, tau_for(ctx.config, p));
    const auto strats = strategies(ctx.config);
    const auto opts = protocol_options(ctx.config, fx.q);

    std::vector<RunRecord> records(strats.size());
    parallel_for(strats.size(), ctx.jobs, [&](std::size_t i) {
        records[i] = run_protocol(fx.q, fx.truth, schedule, strats[i], opts);
    });

    auto summary = open_output(ctx.out / "summary.csv");
    write_csv_metadata(summary, meta(ctx.config));
    summary << "p,strategy,success_prob,false_min_prob\n";
    auto layers = open_output(ctx.out / "layers.csv");
    write_csv_metadata(layers, meta(ctx.config));
    layers << "strategy,layer,qubit,zeta,f,f_stderr\n";
    for (const auto &r : records) {
        const auto name = r.strategy.name();
        write_json(ctx.out / ("record_" + strategy_tag(r.strategy) + ".json"), to_json(r));
        summary << p << ',' << name << ',' << format_double(r.success_prob) << ','
                << format_double(r.false_min_prob) << '\n';
        for (std::size_t l = 0; l < r.zetas.size(); ++l) {
            for (std::size_t j = 0; j < r.n; ++j) {
                const double se = r.f_standard_errors.empty() ? 0.0 : r.f_standard_errors[l][j];
                layers << name << ',' << l + 1 << ',' << j << ',' << format_double(r.zetas[l][j])
                       << ',' << format_double(r.f_diagonals[l][j]) << ',' << format_double(se)
                       << '\n';
            }
        }
        log << name << ": success " << format_double(r.success_prob) << ", false minimum "
            << format_double(r.false_min_prob) << '\n';
    }
    return 0;
}

int cmd_aqa_sweep(const Context &ctx, std::ostream &log) {
    prepare(ctx);
    const auto fx = load_problem(ctx.config);
    const auto [lo, hi] = p_range(ctx.config, "schedule");
    const auto strats = strategies(ctx.config);
    const auto opts = protocol_options(ctx.config, fx.q);
    const std::size_t np = hi - lo + 1;

    std::vector<RunRecord> records(np * strats.size());
    parallel_for(records.size(), ctx.jobs, [&](std::size_t t) {
        const std::size_t p = lo + t / strats.size();
        const auto schedule = linear_aqa_schedule(p, tau_for(ctx.config, p));
        records[t] = run_protocol(fx.q, fx.truth, schedule, strats[t % strats.size()], opts);
    });

    auto csv = open_output(ctx.out / "sweep.csv");
    write_csv_metadata(csv, meta(ctx.config));
    csv << "p,strategy,success_prob,false_min_prob\n";
    for (const auto &r : records) {
        const auto p = r.schedule.p();
        write_json(ctx.out / "records" /
                       ("p" + std::to_string(p) + "_" + strategy_tag(r.strategy) + ".json"),
                   to_json(r));
        csv << p << ',' << r.strategy.name() << ',' << format_double(r.success_prob) << ','
            << format_double(r.false_min_prob) << '\n';
    }
    log << "swept p=" << lo << ".." << hi << " over " << strats.size() << " strategies ("
        << records.size() << " runs)\n";
    return 0;
}

int cmd_qaoa_run(const Context &ctx, std::ostream &log) {
    prepare(ctx);
    const auto fx = load_problem(ctx.config);
    OptConfig cfg;
    cfg.p = ctx.config.get_size("qaoa.p");
    cfg.max_iters = ctx.config.get_size("qaoa.max_iters");
    cfg.shots = ctx.config.get_size("qaoa.shots");
    cfg.n_runs = ctx.config.get_size("qaoa.n_runs");
    cfg.init = parse_init_policy(ctx.config.get("qaoa.init"));
    cfg.objective = parse_objective_mode(ctx.config.get("qaoa.objective"));
    cfg.optimizer = parse_optimizer_kind(ctx.config.get("qaoa.optimizer"));
    cfg.seed = ctx.config.get_u64("run.seed");
    cfg.order = parse_layer_order(ctx.config.get("protocol.layer_order"));
    cfg.convention = parse_mixer_convention(ctx.config.get("protocol.mixer"));
    cfg.validate();

    const auto runs = optimize_runs(fx.q, fx.truth, cfg, ctx.jobs);
    nlohmann::json all = nlohmann::json::array();
    for (const auto &r : runs) {
        all.push_back(to_json(r));
    }
    write_json(ctx.out / "runs.json", all);

    const auto curve = aggregate_convergence(runs);
    auto conv = open_output(ctx.out / "convergence.csv");
    write_convergence_csv(conv, curve, meta(ctx.config));
    auto hist = open_output(ctx.out / "histogram.csv");
    write_histogram_csv(hist, histogram(curve.final_values, ctx.config.get_size("qaoa.bins")),
                        meta(ctx.config));
    log << cfg.n_runs << " runs at p=" << cfg.p << ": final mean best success "
        << format_double(curve.mean.back()) << " +/- "
        << format_double(curve.standard_error.back()) << '\n';
    return 0;
}

int cmd_cdf(const Context &ctx, std::ostream &log) {
    prepare(ctx);
    const auto &source = ctx.config.get("problem.source");
    if (source != "generate" && source != "random") {
        throw ConfigError("cdf draws fresh instances: problem.source must be generate or random");
    }
    const auto n_inst = ctx.config.get_size("run.instances");
    const auto p = ctx.config.get_size("schedule.p");
    const auto strats = strategies(ctx.config);
    const auto schedule = linear_aqa_schedule(p, tau_for(ctx.config, p));

    std::vector<RunRecord> records(n_inst * strats.size());
    parallel_for(n_inst, ctx.jobs, [&](std::size_t i) {
        const auto fx = load_problem(ctx.config, i);
        const auto opts = protocol_options(ctx.config, fx.q);
        for (std::size_t s = 0; s < strats.size(); ++s) {
            records[i * strats.size() + s] = run_protocol(fx.q, fx.truth, schedule, strats[s], opts);
        }
    });

    auto inst = open_output(ctx.out / "instances.csv");
    write_csv_metadata(inst, meta(ctx.config));
    inst << "instance,strategy,success_prob,false_min_prob\n";
    std::vector<std::pair<std::string, std::vector<double>>> series;
    for (const auto &s : strats) {
        series.emplace_back(s.name(), std::vector<double>{});
    }
    for (std::size_t t = 0; t < records.size(); ++t) {
        const auto &r = records[t];
        series[t % strats.size()].second.push_back(r.success_prob);
        inst << t / strats.size() << ',' << r.strategy.name() << ','
             << format_double(r.success_prob) << ',' << format_double(r.false_min_prob) << '\n';
    }
    auto out = open_output(ctx.out / "cdf.csv");
    write_cdf_csv(out, series, meta(ctx.config));
    for (auto &[name, values] : series) {
        std::sort(values.begin(), values.end());
        log << name << ": median success " << format_double(values[values.size() / 2]) << '\n';
    }
    return 0;
}

int cmd_phase_map(const Context &ctx, std::ostream &log) {
    prepare(ctx);
    const auto fx = load_problem(ctx.config);
    auto st = ctx.config.get("phase_map.true_state");
    auto sf = ctx.config.get("phase_map.false_state");
    if (st.empty() != sf.empty()) {
        throw ConfigError("phase_map: set both true_state and false_state, or neither");
    }
    if (st.empty()) {
        if (fx.q.size() != 14) {
            throw ConfigError("phase_map: default states need the 14-variable spec_qubo problem; "
                              "set phase_map.true_state and phase_map.false_state");
        }
        const auto sol = spec_qubo_sol();
        st = sol.to_string() + "00000000";
        sf = sol.inverted().to_string() + "1111++++";
    }
    if (st.size() != fx.q.size() || sf.size() != fx.q.size()) {
        throw ConfigError("phase_map: state strings must have one symbol per variable");
    }
    const auto grid = uniform_r_grid(ctx.config.get_size("phase_map.points"));
    const auto map = phase_difference_map(fx.q, StateVector::product_state(st),
                                          StateVector::product_state(sf),
                                          ctx.config.get_double("phase_map.tau"), grid,
                                          parse_mixer_convention(ctx.config.get("protocol.mixer")));
    auto out = open_output(ctx.out / "phase_map.csv");
    write_phase_map_csv(out, map, meta(ctx.config));
    if (const auto r = phase_map_crossing(map)) {
        log << "favored state changes at r = " << format_double(*r) << '\n';
    } else {
        log << "no crossing: " << (map.favored.front() > 0 ? "true" : "false")
            << " state favored throughout\n";
    }
    return 0;
}

int cmd_three_qubit(const Context &ctx, std::ostream &log) {
    prepare(ctx);
    const auto q = three_qubit_qubo();
    const auto truth = three_qubit_truth();
    const auto [lo, hi] = p_range(ctx.config, "three_qubit");
    const double tau = ctx.config.get_double("three_qubit.tau");
    const auto shots = ctx.config.get_size("three_qubit.shots");
    ProtocolOptions opts = protocol_options(ctx.config, q);
    const std::vector<std::vector<double>> zetas{{1.0, 1.0, 1.0}, {1.0, 1.0, 0.5}};
    const std::size_t np = hi - lo + 1;

    struct Row {
        ThreeQubitQuantities exact;
        ThreeQubitQuantities estimate;
        ThreeQubitQuantities stderr_;
    };
    std::vector<Row> rows(np * zetas.size());
    parallel_for(rows.size(), ctx.jobs, [&](std::size_t t) {
        const std::size_t p = lo + t / zetas.size();
        const auto run = run_fixed_zeta_with_state(q, truth, linear_aqa_schedule(p, tau),
                                                   zetas[t % zetas.size()], opts);
        Row row;
        row.exact = three_qubit_quantities(run.final_state);
        row.estimate = row.exact;
        if (shots > 0) {
            // Qubits 0 and 1 in Z, qubit 2 in X: rotate qubit 2 and sample.
            auto psi = run.final_state;
            apply_hadamard(psi, 2);
            Rng rng = Rng::stream(ctx.config.get_u64("run.seed"), t);
            std::array<double, 8> freq{};
            for (auto z : sample_indices(psi, shots, rng)) {
                freq[z] += 1.0 / static_cast<double>(shots);
            }
            auto se = [&](double f) { return std::sqrt(f * (1.0 - f) / static_cast<double>(shots)); };
            auto &e = row.estimate;
            e.p00_plus = freq[0];
            e.p00_minus = freq[4];
            e.p11_plus = freq[3];
            e.p11_minus = freq[7];
            const double root = std::sqrt(e.p11_plus) + std::sqrt(e.p11_minus);
            e.p110_upper = root * root / 2.0;
            e.mean = (e.p00_plus + e.p00_minus + e.p110_upper) / 3.0;
            auto &s = row.stderr_;
            s.p00_plus = se(e.p00_plus);
            s.p00_minus = se(e.p00_minus);
            s.p11_plus = se(e.p11_plus);
            s.p11_minus = se(e.p11_minus);
            // First-order propagation through the square roots.
            const double d_plus = e.p11_plus > 0.0 ? root / std::sqrt(e.p11_plus) : 0.0;
            const double d_minus = e.p11_minus > 0.0 ? root / std::sqrt(e.p11_minus) : 0.0;
            s.p110_upper = 0.5 * std::hypot(d_plus * s.p11_plus, d_minus * s.p11_minus);
            s.mean = std::hypot(s.p00_plus, s.p00_minus, s.p110_upper) / 3.0;
        }
        rows[t] = row;
    });

    auto out = open_output(ctx.out / "three_qubit.csv");
    write_csv_metadata(out, meta(ctx.config));
    out << "p,zeta2,p00_plus,p00_minus,p110_upper,mean,"
           "p00_plus_se,p00_minus_se,p110_upper_se,mean_se,p11_plus,p11_minus\n";
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const auto &e = rows[t].estimate;
        const auto &s = rows[t].stderr_;
        out << lo + t / zetas.size() << ',' << format_double(zetas[t % zetas.size()][2]) << ','
            << format_double(e.p00_plus) << ',' << format_double(e.p00_minus) << ','
            << format_double(e.p110_upper) << ',' << format_double(e.mean) << ','
            << format_double(s.p00_plus) << ',' << format_double(s.p00_minus) << ','
            << format_double(s.p110_upper) << ',' << format_double(s.mean) << ','
            << format_double(e.p11_plus) << ',' << format_double(e.p11_minus) << '\n';
    }
    const auto &last = rows[(np - 1) * zetas.size()].exact;
    log << "p=" << hi << " zeta=(1,1,1): manifold mean " << format_double(last.mean) << '\n';
    return 0;
}

} // namespace fsmix::cli
