#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fsmix/analysis.hpp"
#include "fsmix/protocols.hpp"
#include "fsmix/qaoa_opt.hpp"

namespace fsmix {

inline constexpr std::string_view kToolVersion = "fsmix/1.0.0";
inline constexpr std::string_view kRunRecordSchema = "fsmix.run_record/1";
inline constexpr std::string_view kOptRunSchema = "fsmix.opt_run/1";

/// Full-precision text for a double ("%.17g").
std::string format_double(double v);

std::uint64_t fnv1a(std::string_view bytes);

nlohmann::json to_json(const RunRecord &record);
/// Inverse of to_json; throws nlohmann::json::exception or std::invalid_argument.
RunRecord run_record_from_json(const nlohmann::json &j);

nlohmann::json to_json(const OptRun &run);
OptRun opt_run_from_json(const nlohmann::json &j);

nlohmann::json to_json(const ThreeQubitQuantities &t);

/// Provenance written as the first line of every CSV.
struct CsvMeta {
    std::uint64_t seed = 0;
    std::string config_hash;
};

void write_csv_metadata(std::ostream &out, const CsvMeta &meta);

/// r,gamma,beta,phase_true,phase_false,favored
void write_phase_map_csv(std::ostream &out, const PhaseMap &map, const CsvMeta &meta);
/// strategy,value,fraction
void write_cdf_csv(std::ostream &out,
                   std::span<const std::pair<std::string, std::vector<double>>> series,
                   const CsvMeta &meta);
/// iter,mean,stderr
void write_convergence_csv(std::ostream &out, const ConvergenceCurve &curve, const CsvMeta &meta);
/// bin_lo,bin_hi,count
void write_histogram_csv(std::ostream &out, std::span<const HistogramBin> bins,
                         const CsvMeta &meta);

} // namespace fsmix
