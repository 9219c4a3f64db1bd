#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "config.hpp"
#include "fsmix/fixtures.hpp"
#include "fsmix/protocols.hpp"

namespace fsmix::cli {

struct Context {
    Config config;
    std::filesystem::path out = "out";
    std::size_t jobs = 1;
};

/// Resolves problem.source; `instance` selects the stream for generate/random.
Fixture load_problem(const Config &config, std::size_t instance = 0);
double tau_for(const Config &config, std::size_t p);
ProtocolOptions protocol_options(const Config &config, const QuboMatrix &q);

int cmd_generate(const Context &ctx, std::ostream &log);
int cmd_solve(const Context &ctx, std::ostream &log);
int cmd_aqa_run(const Context &ctx, std::ostream &log);
int cmd_aqa_sweep(const Context &ctx, std::ostream &log);
int cmd_qaoa_run(const Context &ctx, std::ostream &log);
int cmd_cdf(const Context &ctx, std::ostream &log);
int cmd_phase_map(const Context &ctx, std::ostream &log);
int cmd_three_qubit(const Context &ctx, std::ostream &log);

} // namespace fsmix::cli
