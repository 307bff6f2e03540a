#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "coldplate/errors.hpp"
#include "coldplate/geometry.hpp"
#include "coldplate/thermal.hpp"
#include "support/oracles.hpp"

using namespace coldplate;
using namespace coldplate::thermal;

TEST(Solver, AllChannelPlateIsUniform) {
    const GridSpec s = grid_spec_default();
    const PhysicalConfig cfg;
    const auto [T, report] = solve_steady_state(ChannelMask(s, 1), cfg);
    const double expected = cfg.T_coolant + cfg.Q_batt / (cfg.Lx * cfg.Ly) / cfg.h_coeff;
    EXPECT_NEAR(expected, 25.1706, 1e-4);
    for (double v : T.values()) EXPECT_NEAR(v, expected, 1e-8);
    EXPECT_LE(T.max() - T.min(), 1e-9);
    EXPECT_LE(report.energy_balance_error, 1e-9);
}

TEST(Solver, TwoCellClosedForm) {
    const GridSpec s{2, 1, 1e-3, 1e-3};
    PhysicalConfig cfg;
    const ChannelMask m(s, std::vector<std::uint8_t>{1, 0});
    const auto [T, report] = solve_steady_state(m, cfg);
    const double q = q_gen(cfg);
    const double c = cfg.k * cfg.t * s.dy / s.dx;
    const double a = s.cell_area();
    const double ta = cfg.T_coolant + 2.0 * q / cfg.h_coeff;
    EXPECT_NEAR(T[0], ta, 1e-10);
    EXPECT_NEAR(T[1], ta + q * a / c, 1e-10);
}

TEST(Solver, NoSinkIsSingular) {
    const GridSpec s{6, 4, 1e-3, 1e-3};
    try {
        solve_steady_state(ChannelMask(s, 0), PhysicalConfig{});
        FAIL() << "expected a solver error";
    } catch (const SolverError& e) {
        EXPECT_EQ(e.kind(), SolverError::Kind::Singular);
    }
    PhysicalConfig bg;
    bg.h_bg = 10.0;
    EXPECT_NO_THROW(solve_steady_state(ChannelMask(s, 0), bg));
}

TEST(Solver, IterationCapIsReported) {
    const GridSpec s = grid_spec_default();
    SolverOptions opts;
    opts.max_iter = 3;
    const ChannelMask m = geometry::gen_mask(s, {geometry::Family::StraightParallel, 2, 10, 10});
    try {
        solve_steady_state(m, PhysicalConfig{}, opts);
        FAIL() << "expected non-convergence";
    } catch (const SolverError& e) {
        EXPECT_EQ(e.kind(), SolverError::Kind::NonConvergence);
        EXPECT_GT(e.last_residual(), 1e-10);
    }
}

TEST(Solver, ZeroHeatGivesCoolantTemperature) {
    const GridSpec s{5, 4, 1e-3, 1e-3};
    PhysicalConfig cfg;
    cfg.Q_batt = 0.0;
    std::mt19937_64 rng(3);
    const auto [T, report] = solve_steady_state(oracle::random_mask(s, rng), cfg);
    for (double v : T.values()) EXPECT_EQ(v, cfg.T_coolant);
}

class DenseOracle : public ::testing::TestWithParam<std::pair<std::size_t, std::size_t>> {};

TEST_P(DenseOracle, MatchesDirectSolve) {
    const auto [nx, ny] = GetParam();
    const GridSpec s{nx, ny, 1e-3, 1.5e-3};
    std::mt19937_64 rng(nx * 100 + ny);
    PhysicalConfig cfg;
    cfg.h_bg = 5.0;
    for (int rep = 0; rep < 5; ++rep) {
        const ChannelMask m = oracle::random_mask(s, rng, 0.4);
        const auto [T, report] = solve_steady_state(m, cfg);
        const auto ref = oracle::dense_plate_solution(m, cfg);
        for (std::size_t c = 0; c < s.size(); ++c) EXPECT_NEAR(T[c], ref[c], 1e-8) << "cell " << c;
    }
}

INSTANTIATE_TEST_SUITE_P(SmallGrids, DenseOracle,
                         ::testing::Values(std::pair<std::size_t, std::size_t>{2, 2},
                                           std::pair<std::size_t, std::size_t>{3, 5},
                                           std::pair<std::size_t, std::size_t>{8, 10}));

TEST(Operator, IsSymmetricAndMatchesCoefficients) {
    const GridSpec s{5, 4, 1e-3, 2e-3};
    std::mt19937_64 rng(11);
    const ThermalOperator K(oracle::random_mask(s, rng), PhysicalConfig{});
    const std::size_t n = s.size();
    std::vector<double> e(n, 0.0), col(n);
    for (std::size_t c = 0; c < n; ++c) {
        e[c] = 1.0;
        K.apply(e, col);
        e[c] = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            EXPECT_DOUBLE_EQ(col[r], K.coefficient(r, c));
            EXPECT_DOUBLE_EQ(K.coefficient(r, c), K.coefficient(c, r));
        }
        EXPECT_DOUBLE_EQ(K.diagonal()[c], K.coefficient(c, c));
    }
}

TEST(Operator, PositiveDefiniteOnRandomVectors) {
    const GridSpec s{9, 7, 1e-3, 1e-3};
    std::mt19937_64 rng(5);
    const ThermalOperator K(oracle::random_mask(s, rng), PhysicalConfig{});
    std::vector<double> y(s.size());
    for (int rep = 0; rep < 20; ++rep) {
        const auto x = oracle::random_vector(s.size(), rng);
        K.apply(x, y);
        double xy = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) xy += x[c] * y[c];
        EXPECT_GT(xy, 0.0);
    }
}

TEST(Properties, LinearInHeatLoad) {
    const GridSpec s{40, 30, 1e-3, 1e-3};
    std::mt19937_64 rng(21);
    PhysicalConfig one, two;
    two.Q_batt = 2.0 * one.Q_batt;
    for (int rep = 0; rep < 5; ++rep) {
        const ChannelMask m = oracle::random_mask(s, rng, 0.1);
        const auto [t1, r1] = solve_steady_state(m, one);
        const auto [t2, r2] = solve_steady_state(m, two);
        for (std::size_t c = 0; c < s.size(); ++c) {
            const double a = t1[c] - one.T_coolant;
            const double b = t2[c] - two.T_coolant;
            EXPECT_LE(std::abs(b - 2.0 * a), 1e-9 * std::abs(b));
        }
    }
}

TEST(Properties, MirrorSymmetricMaskGivesMirrorSymmetricField) {
    const GridSpec s = grid_spec_default();
    const ChannelMask m = geometry::gen_mask(s, {geometry::Family::StraightParallel, 2, 10, 10});
    const auto [T, report] = solve_steady_state(m, PhysicalConfig{});
    double worst = 0.0;
    for (std::size_t j = 0; j < s.ny; ++j)
        for (std::size_t i = 0; i < s.nx; ++i) worst = std::max(worst, std::abs(T(i, j) - T(s.nx - 1 - i, j)));
    EXPECT_LE(worst, 1e-8);
}

TEST(Properties, MinimumPrincipleAndConservation) {
    const GridSpec s = grid_spec_default();
    const PhysicalConfig cfg;
    const auto configs = geometry::sample_configs(6, {9});
    for (const auto& p : configs) {
        const ChannelMask m = geometry::gen_mask(s, p);
        const auto [T, report] = solve_steady_state(m, cfg);
        EXPECT_GE(T.min(), cfg.T_coolant - 1e-9) << geometry::describe(p);
        EXPECT_LE(energy_balance(T, m, cfg), 1e-6) << geometry::describe(p);
        EXPECT_LE(report.final_rel_residual, 1e-10);
    }
}

TEST(Properties, HotterWithFewerChannels) {
    const GridSpec s = grid_spec_default();
    const PhysicalConfig cfg;
    const auto [few, r1] = solve_steady_state(geometry::gen_mask(s, {geometry::Family::StraightParallel, 1, 10, 10}), cfg);
    const auto [many, r2] = solve_steady_state(geometry::gen_mask(s, {geometry::Family::StraightParallel, 4, 10, 10}), cfg);
    EXPECT_GT(few.max(), many.max());
}

TEST(Residual, VanishesOnSolvedFieldOnly) {
    const GridSpec s{12, 9, 1e-3, 1e-3};
    std::mt19937_64 rng(8);
    const PhysicalConfig cfg;
    const ChannelMask m = oracle::random_mask(s, rng);
    const auto [T, report] = solve_steady_state(m, cfg);
    const ScalarField R = pde_residual_field(T, m, cfg);
    const double q = q_gen(cfg);
    for (double r : R.values()) EXPECT_LE(std::abs(r) / q, 1e-8);

    const ScalarField cold(s, cfg.T_coolant);
    const ScalarField Rc = pde_residual_field(cold, m, cfg);
    for (double r : Rc.values()) EXPECT_DOUBLE_EQ(r, q);
}

TEST(EnergyBalance, RequiresHeatLoad) {
    const GridSpec s{3, 3, 1e-3, 1e-3};
    PhysicalConfig cfg;
    cfg.Q_batt = 0.0;
    EXPECT_THROW(energy_balance(ScalarField(s, 25.0), ChannelMask(s, 1), cfg), ConfigError);
}

TEST(HMap, ChannelAndBackground) {
    const GridSpec s{2, 1, 1e-3, 1e-3};
    PhysicalConfig cfg;
    cfg.h_bg = 7.0;
    const ScalarField h = build_h_map(ChannelMask(s, std::vector<std::uint8_t>{1, 0}), cfg);
    EXPECT_EQ(h[0], cfg.h_coeff);
    EXPECT_EQ(h[1], 7.0);
}
