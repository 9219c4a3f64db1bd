#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "fsmix/metric.hpp"

using namespace fsmix;

TEST(Metric, PlusAndZeroStates) {
    for (double f : fs_diagonal(StateVector::plus_state(4)).f) {
        EXPECT_NEAR(f, 0.0, 1e-12);
    }
    for (double f : fs_diagonal(StateVector::basis_state(4, 0)).f) {
        EXPECT_NEAR(f, 1.0, 1e-12);
    }
}

TEST(Metric, DiagonalIsOneMinusSquaredX) {
    std::mt19937_64 gen(31);
    for (int t = 0; t < 20; ++t) {
        const auto psi = oracle::random_state(1 + t % 5, gen);
        const auto f = fs_diagonal(psi).f;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double x = oracle::dense_x_expectation(psi, j);
            EXPECT_NEAR(f[j], 1.0 - x * x, 1e-12);
            EXPECT_GE(f[j], 0.0);
            EXPECT_LE(f[j], 1.0);
            EXPECT_DOUBLE_EQ(fs_element(psi, j, j), f[j]);
        }
    }
}

TEST(Metric, OrthogonalBranchState) {
    // sqrt(1-e^2) |0>|+>|+> + e |1>|0>|+> (qubit 0 first): <X_1> = 1 - e^2.
    const double r = std::sqrt(0.5);
    for (double eps : {0.1, 0.3, 0.7}) {
        std::vector<Complex> amps(8, 0.0);
        const double a = std::sqrt(1.0 - eps * eps);
        for (std::size_t b1 = 0; b1 < 2; ++b1) {
            for (std::size_t b2 = 0; b2 < 2; ++b2) {
                amps[(b1 << 1) | (b2 << 2)] += a * r * r;
            }
        }
        amps[1] += eps * r;
        amps[1 | 4] += eps * r;
        const auto f = fs_diagonal(StateVector::from_amplitudes(3, amps)).f;
        EXPECT_NEAR(f[1], 2.0 * eps * eps - std::pow(eps, 4), 1e-12);
    }
}

TEST(Metric, OffDiagonalElements) {
    EXPECT_NEAR(fs_element(StateVector::product_state("+0-"), 0, 2), 0.0, 1e-12);
    // (|00> + |11>) / sqrt 2
    const double r = std::sqrt(0.5);
    const auto bell = StateVector::from_amplitudes(2, {r, 0.0, 0.0, r});
    EXPECT_NEAR(fs_element(bell, 0, 1), 1.0, 1e-12);
}

TEST(Metric, FullMatrixMatchesDenseAndIsPsd) {
    std::mt19937_64 gen(32);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(t) % 3;
        const auto psi = oracle::random_state(n, gen);
        const auto m = fs_matrix(psi);
        const oracle::Vec v = oracle::to_eigen(psi);
        Eigen::MatrixXd dense(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                const auto xj = oracle::single_qubit_op(n, j, oracle::pauli_x());
                const auto xk = oracle::single_qubit_op(n, k, oracle::pauli_x());
                const double xjk = (v.adjoint() * xj * xk * v)(0, 0).real();
                const double ej = (v.adjoint() * xj * v)(0, 0).real();
                const double ek = (v.adjoint() * xk * v)(0, 0).real();
                dense(j, k) = xjk - ej * ek;
                EXPECT_NEAR(m[j * n + k], dense(j, k), 1e-12);
                EXPECT_DOUBLE_EQ(m[j * n + k], m[k * n + j]);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    }
}

TEST(Metric, InvariantUnderMixer) {
    std::mt19937_64 gen(33);
    auto psi = oracle::random_state(5, gen);
    const auto before = fs_diagonal(psi).f;
    apply_mixer(psi, 0.9, std::vector<double>{1.0, 0.2, 0.0, 0.5, 0.8});
    const auto after = fs_diagonal(psi).f;
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_NEAR(after[j], before[j], 1e-12);
    }
}

TEST(Metric, ClampOnlyAbsorbsRounding) {
    EXPECT_EQ(clamp_metric_entry(-5e-13), 0.0);
    EXPECT_EQ(clamp_metric_entry(0.25), 0.25);
    EXPECT_THROW(clamp_metric_entry(-1e-9), std::runtime_error);
}

TEST(SampledMetric, AllPlusSamplesGiveZero) {
    const std::vector<XSample> samples(10, XSample{1, 1, 1});
    const auto est = fs_diagonal_sampled(samples);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_EQ(est.f[j], 0.0);
        EXPECT_EQ(est.standard_error[j], 0.0);
    }
    EXPECT_EQ(est.shots, 10U);
}

TEST(SampledMetric, EmptyInputThrows) {
    EXPECT_THROW(fs_diagonal_sampled(std::vector<XSample>{}), std::invalid_argument);
}

TEST(SampledMetric, ConsistentWithExactAtManyShots) {
    std::mt19937_64 gen(34);
    const auto psi = oracle::random_state(4, gen);
    Rng rng(8);
    const auto est = fs_diagonal_sampled(sample_x_basis(psi, 100000, rng));
    const auto exact = fs_diagonal(psi).f;
    for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_NEAR(est.f[j], exact[j], 4.0 * est.standard_error[j] + 1e-12);
    }
}
