#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/oracles.hpp"
#include "fsmix/analysis.hpp"
#include "fsmix/fixtures.hpp"
#include "fsmix/protocols.hpp"

using namespace fsmix;

TEST(Schedule, SingleLayer) {
    const auto s = linear_aqa_schedule(1, std::numbers::pi);
    EXPECT_DOUBLE_EQ(s.gammas[0], std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(s.betas[0], std::numbers::pi / 2);
}

TEST(Schedule, ThreeLayerFractions) {
    const auto s = linear_aqa_schedule(3, 1.0);
    EXPECT_DOUBLE_EQ(s.gammas[0], 0.25);
    EXPECT_DOUBLE_EQ(s.gammas[1], 0.5);
    EXPECT_DOUBLE_EQ(s.gammas[2], 0.75);
}

TEST(Schedule, InvariantsForAllDepths) {
    for (std::size_t p = 1; p <= 100; ++p) {
        const double tau = tau_of_p(p);
        const auto s = linear_aqa_schedule(p, tau);
        ASSERT_EQ(s.p(), p);
        for (std::size_t l = 0; l < p; ++l) {
            EXPECT_NEAR(s.gammas[l] + s.betas[l], tau, 1e-15);
            EXPECT_GT(s.gammas[l], 0.0);
            EXPECT_GT(s.betas[l], 0.0);
            if (l > 0) {
                EXPECT_GT(s.gammas[l], s.gammas[l - 1]);
                EXPECT_LT(s.betas[l], s.betas[l - 1]);
            }
        }
    }
    EXPECT_THROW(linear_aqa_schedule(0, 1.0), std::invalid_argument);
    EXPECT_THROW(linear_aqa_schedule(2, 0.0), std::invalid_argument);
}

TEST(Schedule, TauOfP) {
    EXPECT_DOUBLE_EQ(tau_of_p(1), std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(tau_of_p(16), std::numbers::pi / 4);
    for (std::size_t p = 2; p <= 100; ++p) {
        EXPECT_LT(tau_of_p(p), tau_of_p(p - 1));
        EXPECT_GT(static_cast<double>(p) * tau_of_p(p), static_cast<double>(p - 1) * tau_of_p(p - 1));
    }
}

TEST(Parsing, StrategyModeOrderConvention) {
    EXPECT_EQ(MixerStrategy::parse("suppressed").kind, MixerStrategy::Kind::suppressed);
    const auto t = MixerStrategy::parse("thresholded:0.35");
    EXPECT_EQ(t.kind, MixerStrategy::Kind::thresholded);
    EXPECT_DOUBLE_EQ(t.theta, 0.35);
    EXPECT_THROW(MixerStrategy::parse("thresholded:1.5"), std::invalid_argument);
    EXPECT_THROW(MixerStrategy::parse("bogus"), std::invalid_argument);
    EXPECT_EQ(MetricMode::parse("sampled:250").shots, 250U);
    EXPECT_EQ(MetricMode::parse("exact").name(), "exact");
    EXPECT_THROW(MetricMode::parse("sampled:x"), std::invalid_argument);
    EXPECT_THROW(MetricMode::parse("sampled:0"), std::invalid_argument);
    EXPECT_EQ(parse_layer_order("literal"), LayerOrder::literal);
    EXPECT_EQ(parse_mixer_convention("exponential"), MixerConvention::exponential);
    EXPECT_THROW(parse_layer_order("reverse"), std::invalid_argument);
}

TEST(Layer, TrivialCases) {
    std::mt19937_64 gen(41);
    const auto q = oracle::random_qubo(3, gen);
    const auto psi = oracle::random_state(3, gen);
    auto a = psi;
    apply_layer(a, q, 0.0, 0.0, std::vector<double>(3, 1.0));
    EXPECT_LT(oracle::phase_aligned_distance(oracle::to_eigen(psi), oracle::to_eigen(a)), 1e-14);

    auto b = StateVector::plus_state(3);
    apply_layer(b, QuboMatrix(3), 0.8, 0.6, std::vector<double>(3, 1.0));
    for (double p : probabilities(b)) {
        EXPECT_NEAR(p, 0.125, 1e-12);
    }
}

TEST(Layer, MatchesDenseProductInBothOrders) {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(t) % 3;
        const auto q = oracle::random_qubo(n, gen);
        std::vector<double> zeta(n);
        for (auto &z : zeta) {
            z = u(gen);
        }
        const double g = 3.0 * u(gen);
        const double b = 3.0 * u(gen);
        const auto conv = t % 2 == 0 ? MixerConvention::power : MixerConvention::exponential;
        const auto psi = oracle::random_state(n, gen);
        const oracle::Mat mix = oracle::dense_mixer(n, b, zeta, conv);
        const oracle::Mat phase = oracle::dense_phase(q, g);

        auto prose = psi;
        apply_layer(prose, q, g, b, zeta, LayerOrder::prose, conv);
        EXPECT_LT(oracle::phase_aligned_distance(mix * phase * oracle::to_eigen(psi),
                                                 oracle::to_eigen(prose)),
                  1e-10);
        auto literal = psi;
        apply_layer(literal, q, g, b, zeta, LayerOrder::literal, conv);
        EXPECT_LT(oracle::phase_aligned_distance(phase * mix * oracle::to_eigen(psi),
                                                 oracle::to_eigen(literal)),
                  1e-10);
    }
}

TEST(Protocol, UnmodifiedKeepsZetaOnesAndZeroGammaKeepsFZero) {
    const auto q = three_qubit_qubo();
    Schedule s;
    s.gammas = {0.0, 0.0};
    s.betas = {0.4, 0.3};
    const auto rec = run_protocol(q, three_qubit_truth(), s, MixerStrategy::unmodified());
    for (const auto &row : rec.zetas) {
        for (double z : row) {
            EXPECT_EQ(z, 1.0);
        }
    }
    for (const auto &row : rec.f_diagonals) {
        for (double f : row) {
            EXPECT_NEAR(f, 0.0, 1e-12);
        }
    }
}

TEST(Protocol, SuppressedRowsAreNormalizedF) {
    const auto fx = builtin_fixture("spec_qubo");
    const auto s = linear_aqa_schedule(6, tau_of_p(6));
    const auto rec = run_protocol(fx.q, fx.truth, s, MixerStrategy::suppressed());
    ASSERT_EQ(rec.zetas.size(), 6U);
    for (double z : rec.zetas[0]) {
        EXPECT_EQ(z, 1.0);
    }
    for (std::size_t l = 1; l < 6; ++l) {
        const auto &f = rec.f_diagonals[l - 1];
        const double fmax = *std::max_element(f.begin(), f.end());
        for (std::size_t j = 0; j < f.size(); ++j) {
            EXPECT_DOUBLE_EQ(rec.zetas[l][j], f[j] / fmax);
            EXPECT_GE(rec.zetas[l][j], 0.0);
            EXPECT_LE(rec.zetas[l][j], 1.0);
        }
        EXPECT_DOUBLE_EQ(*std::max_element(rec.zetas[l].begin(), rec.zetas[l].end()), 1.0);
    }
    EXPECT_TRUE(rec.degenerate_layers.empty());
}

TEST(Protocol, DegenerateFCarriesPreviousRow) {
    // gamma = 0: the state stays |+>^n, every F is zero.
    Schedule s;
    s.gammas = {0.0, 0.0, 0.0};
    s.betas = {0.5, 0.5, 0.5};
    const auto q = three_qubit_qubo();
    const auto rec = run_protocol(q, three_qubit_truth(), s, MixerStrategy::suppressed());
    EXPECT_EQ(rec.degenerate_layers, (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(rec.zetas[2], rec.zetas[0]);
}

TEST(Protocol, ThresholdLimits) {
    const auto fx = builtin_fixture("spec_qubo");
    const auto s = linear_aqa_schedule(8, tau_of_p(8));
    const auto unmod = run_protocol(fx.q, fx.truth, s, MixerStrategy::unmodified());
    const auto supp = run_protocol(fx.q, fx.truth, s, MixerStrategy::suppressed());
    const auto low = run_protocol(fx.q, fx.truth, s, MixerStrategy::thresholded(1e-9));
    const auto high = run_protocol(fx.q, fx.truth, s, MixerStrategy::thresholded(1.0 - 1e-9));
    EXPECT_TRUE(same_trajectory(low, unmod));
    EXPECT_TRUE(same_trajectory(high, supp));
    ASSERT_TRUE(low.baseline);
    EXPECT_TRUE(same_trajectory(*low.baseline, unmod));
}

TEST(Protocol, ThresholdMaskFollowsBaselineF) {
    const auto fx = builtin_fixture("spec_qubo");
    const auto s = linear_aqa_schedule(20, tau_of_p(20));
    const auto rec = run_protocol(fx.q, fx.truth, s, MixerStrategy::thresholded(0.2));
    ASSERT_TRUE(rec.baseline);
    const auto &last = rec.baseline->f_diagonals.back();
    std::size_t masked = 0;
    for (std::size_t j = 0; j < last.size(); ++j) {
        EXPECT_EQ(rec.threshold_mask[j] != 0U, last[j] < 0.2);
        masked += rec.threshold_mask[j];
        if (rec.threshold_mask[j] == 0U) {
            for (const auto &row : rec.zetas) {
                EXPECT_EQ(row[j], 1.0);
            }
        }
    }
    EXPECT_GT(masked, 0U);
}

TEST(Protocol, ScaleInvarianceOfSuppressedRule) {
    // Scaling every F entry by c > 0 leaves the normalized row unchanged.
    const auto q = three_qubit_qubo();
    const auto s = linear_aqa_schedule(4, 1.0);
    const auto rec = run_protocol(q, three_qubit_truth(), s, MixerStrategy::suppressed());
    for (std::size_t l = 1; l < 4; ++l) {
        std::vector<double> scaled = rec.f_diagonals[l - 1];
        for (auto &v : scaled) {
            v *= 3.7;
        }
        const double m = *std::max_element(scaled.begin(), scaled.end());
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_NEAR(scaled[j] / m, rec.zetas[l][j], 1e-15);
        }
    }
}

TEST(Protocol, RecordRangesAndDeterminism) {
    const auto fx = builtin_fixture("rand_qubo");
    const auto s = linear_aqa_schedule(5, tau_of_p(5));
    const auto a = run_protocol(fx.q, fx.truth, s, MixerStrategy::suppressed());
    const auto b = run_protocol(fx.q, fx.truth, s, MixerStrategy::suppressed());
    EXPECT_TRUE(same_trajectory(a, b));
    for (std::size_t l = 0; l < a.zetas.size(); ++l) {
        for (std::size_t j = 0; j < a.n; ++j) {
            EXPECT_GE(a.f_diagonals[l][j], 0.0);
            EXPECT_LE(a.f_diagonals[l][j], 1.0);
            EXPECT_GE(a.zetas[l][j], 0.0);
            EXPECT_LE(a.zetas[l][j], 1.0);
        }
    }
    EXPECT_EQ(a.final_probs.size(), 1U << 16);
    EXPECT_EQ(a.top_states.size(), kTopStates);
    EXPECT_GE(a.top_states[0].second, a.top_states[1].second);
    EXPECT_EQ(a.engine_version, kEngineVersion);
}

TEST(Protocol, SampledMetricModeIsSeeded) {
    const auto q = three_qubit_qubo();
    const auto s = linear_aqa_schedule(3, 1.2);
    ProtocolOptions opt;
    opt.metric = MetricMode::sampled(500);
    opt.seed = 17;
    const auto a = run_protocol(q, three_qubit_truth(), s, MixerStrategy::suppressed(), opt);
    const auto b = run_protocol(q, three_qubit_truth(), s, MixerStrategy::suppressed(), opt);
    EXPECT_TRUE(same_trajectory(a, b));
    ASSERT_EQ(a.f_standard_errors.size(), 3U);
    EXPECT_EQ(a.metric_mode, "sampled:500");
    opt.seed = 18;
    const auto c = run_protocol(q, three_qubit_truth(), s, MixerStrategy::suppressed(), opt);
    EXPECT_NE(a.f_diagonals, c.f_diagonals);
}

TEST(FixedZeta, OnesReproduceUnmodified) {
    const auto fx = builtin_fixture("spec_qubo");
    const auto s = linear_aqa_schedule(5, tau_of_p(5));
    const auto a = run_fixed_zeta(fx.q, fx.truth, s, std::vector<double>(14, 1.0));
    const auto b = run_protocol(fx.q, fx.truth, s, MixerStrategy::unmodified());
    EXPECT_TRUE(same_trajectory(a, b));
}

TEST(FixedZeta, HalfRotationRaisesMinusComponent) {
    const auto q = three_qubit_qubo();
    const auto truth = three_qubit_truth();
    const auto s = linear_aqa_schedule(2, 3.0 * std::numbers::pi / 4.0);
    const auto full = run_fixed_zeta_with_state(q, truth, s, std::vector<double>{1, 1, 1});
    const auto half = run_fixed_zeta_with_state(q, truth, s, std::vector<double>{1, 1, 0.5});
    EXPECT_GT(three_qubit_quantities(half.final_state).p00_minus,
              three_qubit_quantities(full.final_state).p00_minus);
}

TEST(FixedZeta, FrozenQubitKeepsItsMarginal) {
    std::mt19937_64 gen(43);
    const auto q = oracle::random_qubo(4, gen);
    const auto truth = exhaustive_solve(q);
    const auto s = linear_aqa_schedule(6, 1.0);
    const auto run = run_fixed_zeta_with_state(q, truth, s, std::vector<double>{1, 0, 1, 1});
    double p1 = 0.0;
    for (std::size_t z = 0; z < 16; ++z) {
        if ((z >> 1) & 1U) {
            p1 += std::norm(run.final_state[z]);
        }
    }
    EXPECT_NEAR(p1, 0.5, 1e-12);
    EXPECT_THROW(run_fixed_zeta(q, truth, s, std::vector<double>{1, 1}), std::invalid_argument);
}
