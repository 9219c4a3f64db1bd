#include "fsmix/io.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace fsmix {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

json to_json(const RunRecord &r) {
    json top = json::array();
    for (const auto &[state, prob] : r.top_states) {
        top.push_back({{"state", state.to_string()}, {"prob", prob}});
    }
    json j = {
        {"schema", kRunRecordSchema},
        {"n", r.n},
        {"p", r.schedule.p()},
        {"schedule", {{"gammas", r.schedule.gammas}, {"betas", r.schedule.betas},
                      {"tau", r.schedule.tau}}},
        {"strategy", {{"kind", r.strategy.name()}, {"theta", r.strategy.theta}}},
        {"zetas", r.zetas},
        {"f_diagonals", r.f_diagonals},
        {"f_standard_errors", r.f_standard_errors},
        {"degenerate_layers", r.degenerate_layers},
        {"threshold_mask", r.threshold_mask},
        {"final_probs", r.final_probs},
        {"top_states", top},
        {"success_prob", r.success_prob},
        {"false_min_prob", r.false_min_prob},
        {"metadata",
         {{"seed", r.seed},
          {"metric_mode", r.metric_mode},
          {"layer_order", r.layer_order},
          {"mixer_convention", r.mixer_convention},
          {"fixture_hash", r.fixture_hash},
          {"engine_version", r.engine_version},
          {"rng_algorithm", r.rng_algorithm}}},
    };
    j["baseline"] = r.baseline ? to_json(*r.baseline) : json(nullptr);
    return j;
}

RunRecord run_record_from_json(const json &j) {
    if (j.at("schema").get<std::string>() != kRunRecordSchema) {
        throw std::invalid_argument("run record: unsupported schema '" +
                                    j.at("schema").get<std::string>() + "'");
    }
    RunRecord r;
    r.n = j.at("n").get<std::size_t>();
    const auto &s = j.at("schedule");
    r.schedule.gammas = s.at("gammas").get<std::vector<double>>();
    r.schedule.betas = s.at("betas").get<std::vector<double>>();
    r.schedule.tau = s.at("tau").get<double>();
    const auto &st = j.at("strategy");
    r.strategy = MixerStrategy::parse(st.at("kind").get<std::string>());
    r.strategy.theta = st.at("theta").get<double>();
    r.zetas = j.at("zetas").get<std::vector<std::vector<double>>>();
    r.f_diagonals = j.at("f_diagonals").get<std::vector<std::vector<double>>>();
    r.f_standard_errors = j.at("f_standard_errors").get<std::vector<std::vector<double>>>();
    r.degenerate_layers = j.at("degenerate_layers").get<std::vector<std::size_t>>();
    r.threshold_mask = j.at("threshold_mask").get<std::vector<std::uint8_t>>();
    r.final_probs = j.at("final_probs").get<std::vector<double>>();
    for (const auto &t : j.at("top_states")) {
        r.top_states.emplace_back(Bitstring::parse(t.at("state").get<std::string>()),
                                  t.at("prob").get<double>());
    }
    r.success_prob = j.at("success_prob").get<double>();
    r.false_min_prob = j.at("false_min_prob").get<double>();
    const auto &m = j.at("metadata");
    r.seed = m.at("seed").get<std::uint64_t>();
    r.metric_mode = m.at("metric_mode").get<std::string>();
    r.layer_order = m.at("layer_order").get<std::string>();
    r.mixer_convention = m.at("mixer_convention").get<std::string>();
    r.fixture_hash = m.at("fixture_hash").get<std::string>();
    r.engine_version = m.at("engine_version").get<std::string>();
    r.rng_algorithm = m.at("rng_algorithm").get<std::string>();
    if (!j.at("baseline").is_null()) {
        r.baseline = std::make_shared<const RunRecord>(run_record_from_json(j.at("baseline")));
    }
    return r;
}

json to_json(const OptRun &r) {
    return {
        {"schema", kOptRunSchema},
        {"run_index", r.run_index},
        {"seed", r.seed},
        {"initial_gammas", r.initial_gammas},
        {"initial_betas", r.initial_betas},
        {"best_gammas", r.best_gammas},
        {"best_betas", r.best_betas},
        {"best_objective", r.best_objective},
        {"objective_trace", r.objective_trace},
        {"success_trace", r.success_trace},
        {"best_success_trace", r.best_success_trace},
        {"converged", r.converged},
    };
}

OptRun opt_run_from_json(const json &j) {
    if (j.at("schema").get<std::string>() != kOptRunSchema) {
        throw std::invalid_argument("opt run: unsupported schema '" +
                                    j.at("schema").get<std::string>() + "'");
    }
    OptRun r;
    r.run_index = j.at("run_index").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.initial_gammas = j.at("initial_gammas").get<std::vector<double>>();
    r.initial_betas = j.at("initial_betas").get<std::vector<double>>();
    r.best_gammas = j.at("best_gammas").get<std::vector<double>>();
    r.best_betas = j.at("best_betas").get<std::vector<double>>();
    r.best_objective = j.at("best_objective").get<double>();
    r.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    r.success_trace = j.at("success_trace").get<std::vector<double>>();
    r.best_success_trace = j.at("best_success_trace").get<std::vector<double>>();
    r.converged = j.at("converged").get<bool>();
    return r;
}

json to_json(const ThreeQubitQuantities &t) {
    return {{"p00_plus", t.p00_plus},   {"p00_minus", t.p00_minus},
            {"p11_plus", t.p11_plus},   {"p11_minus", t.p11_minus},
            {"p110_upper", t.p110_upper}, {"mean", t.mean}};
}

void write_csv_metadata(std::ostream &out, const CsvMeta &meta) {
    out << "# tool=" << kToolVersion << " seed=" << meta.seed
        << " config_hash=" << meta.config_hash << '\n';
}

void write_phase_map_csv(std::ostream &out, const PhaseMap &map, const CsvMeta &meta) {
    write_csv_metadata(out, meta);
    out << "r,gamma,beta,phase_true,phase_false,favored\n";
    for (std::size_t i = 0; i < map.r_grid.size(); ++i) {
        const double r = map.r_grid[i];
        out << format_double(r) << ',' << format_double(r * map.tau) << ','
            << format_double((1.0 - r) * map.tau) << ',' << format_double(map.phase_true[i])
            << ',' << format_double(map.phase_false[i]) << ','
            << (map.favored[i] > 0 ? "true" : (map.favored[i] < 0 ? "false" : "tie")) << '\n';
    }
}

void write_cdf_csv(std::ostream &out,
                   std::span<const std::pair<std::string, std::vector<double>>> series,
                   const CsvMeta &meta) {
    write_csv_metadata(out, meta);
    out << "strategy,value,fraction\n";
    for (const auto &[name, values] : series) {
        for (const auto &[v, f] : cdf(values)) {
            out << name << ',' << format_double(v) << ',' << format_double(f) << '\n';
        }
    }
}

void write_convergence_csv(std::ostream &out, const ConvergenceCurve &curve,
                           const CsvMeta &meta) {
    write_csv_metadata(out, meta);
    out << "iter,mean,stderr\n";
    for (std::size_t t = 0; t < curve.mean.size(); ++t) {
        out << t + 1 << ',' << format_double(curve.mean[t]) << ','
            << format_double(curve.standard_error[t]) << '\n';
    }
}

void write_histogram_csv(std::ostream &out, std::span<const HistogramBin> bins,
                         const CsvMeta &meta) {
    write_csv_metadata(out, meta);
    out << "bin_lo,bin_hi,count\n";
    for (const auto &b : bins) {
        out << format_double(b.lo) << ',' << format_double(b.hi) << ',' << b.count << '\n';
    }
}

} // namespace fsmix
