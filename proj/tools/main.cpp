#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "fsmix/parallel.hpp"

using namespace fsmix::cli;

int main(int argc, char **argv) {
    CLI::App app{"fsmix: annealing-style QAOA with metric-aware mixers"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> overrides;
    std::string seed, metric, layer_order, mixer, problem;
    std::size_t jobs = 1;
    std::string out = "out";
    app.add_option("--config", config_path, "Config file (INI-style sections)");
    app.add_option("--set", overrides, "Override one key: section.key=value")->take_all();
    app.add_option("--seed", seed, "Same as --set run.seed=N");
    app.add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    app.add_option("--out", out, "Output directory");
    app.add_option("--metric", metric, "exact | sampled:<shots>");
    app.add_option("--layer-order", layer_order, "prose | literal");
    app.add_option("--mixer", mixer, "power | exponential");
    app.add_option("--problem", problem, "builtin:<name> | load:<path> | generate | random");

    using Command = std::function<int(const Context &, std::ostream &)>;
    const std::vector<std::tuple<std::string, std::string, Command>> commands = {
        {"generate", "Write the configured problem as a .qubo file", cmd_generate},
        {"solve", "Exhaustively solve the configured problem", cmd_solve},
        {"aqa-run", "Run every strategy at one depth", cmd_aqa_run},
        {"aqa-sweep", "Run every strategy over a depth range", cmd_aqa_sweep},
        {"qaoa-run", "Variational runs with convergence and histogram output", cmd_qaoa_run},
        {"cdf", "Success-probability CDFs over generated instances", cmd_cdf},
        {"phase-map", "Layer-phase difference of two eigenstates over r", cmd_phase_map},
        {"three-qubit", "Three-variable experiment with both zeta settings", cmd_three_qubit},
    };
    std::map<CLI::App *, Command> dispatch;
    for (const auto &[name, help, fn] : commands) {
        dispatch[app.add_subcommand(name, help)] = fn;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        Context ctx;
        if (!config_path.empty()) {
            ctx.config.load_file(config_path);
        }
        for (const auto &o : overrides) {
            ctx.config.apply_override(o);
        }
        const std::vector<std::pair<std::string, const std::string *>> flags = {
            {"run.seed", &seed},
            {"protocol.metric", &metric},
            {"protocol.layer_order", &layer_order},
            {"protocol.mixer", &mixer},
            {"problem.source", &problem},
        };
        for (const auto &[key, value] : flags) {
            if (!value->empty()) {
                ctx.config.set(key, *value);
            }
        }
        ctx.out = out;
        ctx.jobs = jobs == 0 ? fsmix::default_jobs() : jobs;
        for (auto *sub : app.get_subcommands()) {
            return dispatch.at(sub)(ctx, std::cout);
        }
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
