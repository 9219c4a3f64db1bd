#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fsmix/statevector.hpp"

namespace fsmix {

/// Diagonal Fubini-Study metric for the X-rotation controls: f[j] = 1 - <X_j>^2.
struct MetricDiagonal {
    std::vector<double> f;
};

struct SampledMetricDiagonal {
    std::vector<double> f;
    std::vector<double> standard_error;
    std::size_t shots = 0;
};

/// Negative values down to -1e-12 are rounding and clamp to 0; anything
/// lower means the state is corrupt and throws std::runtime_error.
double clamp_metric_entry(double raw);

MetricDiagonal fs_diagonal(const StateVector &psi);

/// <X_j X_k> - <X_j><X_k> for j != k, the diagonal entry for j == k.
double fs_element(const StateVector &psi, std::size_t j, std::size_t k);

/// Full n x n metric, row-major.
std::vector<double> fs_matrix(const StateVector &psi);

/**
 * Estimates the diagonal from X-basis records. The standard error is the
 * delta-method error of 1 - m^2 plus the O(1/N) bias of the squared mean.
 */
SampledMetricDiagonal fs_diagonal_sampled(std::span<const XSample> samples);

} // namespace fsmix
