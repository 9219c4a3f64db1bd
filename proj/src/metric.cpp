#include "fsmix/metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fsmix {

double clamp_metric_entry(double raw) {
    if (raw >= 0.0) {
        return std::min(raw, 1.0);
    }
    if (raw >= -1e-12) {
        return 0.0;
    }
    throw std::runtime_error("metric entry " + std::to_string(raw) +
                             " is negative beyond rounding; state is not normalized");
}

MetricDiagonal fs_diagonal(const StateVector &psi) {
    MetricDiagonal out;
    out.f.resize(psi.num_qubits());
    for (std::size_t j = 0; j < out.f.size(); ++j) {
        const double x = x_expectation(psi, j);
        out.f[j] = clamp_metric_entry(1.0 - x * x);
    }
    return out;
}

double fs_element(const StateVector &psi, std::size_t j, std::size_t k) {
    if (j == k) {
        const double x = x_expectation(psi, j);
        return clamp_metric_entry(1.0 - x * x);
    }
    return xx_expectation(psi, j, k) - x_expectation(psi, j) * x_expectation(psi, k);
}

std::vector<double> fs_matrix(const StateVector &psi) {
    const std::size_t n = psi.num_qubits();
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = x_expectation(psi, j);
    }
    std::vector<double> m(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        m[j * n + j] = clamp_metric_entry(1.0 - x[j] * x[j]);
        for (std::size_t k = j + 1; k < n; ++k) {
            const double v = xx_expectation(psi, j, k) - x[j] * x[k];
            m[j * n + k] = v;
            m[k * n + j] = v;
        }
    }
    return m;
}

SampledMetricDiagonal fs_diagonal_sampled(std::span<const XSample> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("fs_diagonal_sampled: no samples");
    }
    const std::size_t n = samples.front().size();
    const double shots = static_cast<double>(samples.size());
    std::vector<double> sum(n, 0.0);
    for (const auto &s : samples) {
        if (s.size() != n) {
            throw std::invalid_argument("fs_diagonal_sampled: ragged sample records");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (s[j] != 1 && s[j] != -1) {
                throw std::invalid_argument("fs_diagonal_sampled: outcomes must be +1 or -1");
            }
            sum[j] += s[j];
        }
    }
    SampledMetricDiagonal out;
    out.shots = samples.size();
    out.f.resize(n);
    out.standard_error.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double m = sum[j] / shots;
        out.f[j] = std::clamp(1.0 - m * m, 0.0, 1.0);
        // Variance of a +/-1 outcome with mean m is 1 - m^2.
        const double var_mean = std::max(1.0 - m * m, 0.0) / shots;
        out.standard_error[j] = 2.0 * std::abs(m) * std::sqrt(var_mean) + var_mean;
    }
    return out;
}

} // namespace fsmix
