#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coldplate/errors.hpp"
#include "coldplate/pipeline.hpp"

using namespace coldplate;
using namespace coldplate::pipeline;

namespace {

const GeneratedDataset& small_dataset() {
    static const GeneratedDataset g = [] {
        const PhysicalConfig cfg;
        return generate_dataset(12, {5}, grid_for_plate(cfg, 22, 29), cfg);
    }();
    return g;
}

TrainConfig quick_config(Mode mode) {
    TrainConfig c;
    c.mode = mode;
    c.epochs = 3;
    c.batch_size = 4;
    c.seed = 11;
    c.fcn = {4, 5, 3};
    c.weights = {1.0, 1e-3, 1e-3};
    return c;
}

}  // namespace

TEST(Generate, MeetsPhysicalChecksAndIsDeterministic) {
    const auto& g = small_dataset();
    ASSERT_EQ(g.dataset.size(), 12u);
    for (std::size_t k = 0; k < g.dataset.size(); ++k) {
        EXPECT_GE(g.dataset.samples[k].temperature.min(), g.dataset.config.T_coolant - 1e-9);
        EXPECT_LE(g.reports[k].energy_balance_error, 1e-6);
        EXPECT_EQ(g.dataset.samples[k].mask, geometry::gen_mask(g.dataset.spec, g.params[k]));
    }
    GenerateOptions serial;
    serial.parallel = false;
    const PhysicalConfig cfg;
    const auto again = generate_dataset(12, {5}, grid_for_plate(cfg, 22, 29), cfg, serial);
    EXPECT_EQ(again.dataset, g.dataset);
}

TEST(Generate, SingleSample) {
    const PhysicalConfig cfg;
    EXPECT_EQ(generate_dataset(1, {3}, grid_for_plate(cfg, 22, 29), cfg).dataset.size(), 1u);
}

TEST(Generate, FailureNamesTheConfig) {
    PhysicalConfig cfg;
    cfg.h_coeff = 0.0;
    try {
        generate_dataset(2, {3}, grid_for_plate(cfg, 22, 29), cfg);
        FAIL();
    } catch (const SolverError& e) {
        EXPECT_NE(std::string(e.what()).find("config #0"), std::string::npos) << e.what();
    }
}

TEST(Split, CountsAndCoverage) {
    const Split s = split_dataset(100, 0.8, 42);
    EXPECT_EQ(s.train.size(), 80u);
    EXPECT_EQ(s.test.size(), 20u);
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(100);
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(all, expected);
    EXPECT_EQ(split_dataset(100, 0.8, 42), s);
    EXPECT_NE(split_dataset(100, 0.8, 43), s);

    const Split five = split_dataset(5, 0.8, 1);
    EXPECT_EQ(five.train.size(), 4u);
    EXPECT_EQ(five.test.size(), 1u);
}

TEST(Split, EmptySideIsAnError) {
    EXPECT_THROW(split_dataset(1, 0.8, 1), SplitError);
    EXPECT_THROW(split_dataset(0, 0.8, 1), SplitError);
    EXPECT_THROW(split_dataset(10, 1.0, 1), SplitError);
}

TEST(Modes, ParseAndPrint) {
    for (Mode m : {Mode::DataDriven, Mode::PIML, Mode::PinnSingle}) EXPECT_EQ(parse_mode(to_string(m)), m);
    EXPECT_THROW(parse_mode("magic"), ConfigError);
}

TEST(TrainConfig, Validation) {
    TrainConfig c;
    c.epochs = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.batch_size = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.split_fraction = 1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_NO_THROW(TrainConfig{}.validate());
}

TEST(Train, RecordsAreConsistentAndDeterministic) {
    const Dataset& ds = small_dataset().dataset;
    const TrainConfig cfg = quick_config(Mode::PIML);
    const TrainResult a = train(ds, cfg);
    const TrainResult b = train(ds, cfg);
    ASSERT_EQ(a.history.size(), 3u);
    EXPECT_EQ(a.history, b.history);
    EXPECT_EQ(a.model, b.model);
    for (std::size_t e = 0; e < a.history.size(); ++e) {
        const EpochRecord& r = a.history[e];
        EXPECT_EQ(r.epoch, static_cast<int>(e + 1));
        const double sum = cfg.weights.w1 * r.train_mse + cfg.weights.w2 * r.l_pde + cfg.weights.w3 * r.l_bc;
        EXPECT_NEAR(r.l_total, sum, 1e-12 * sum);
        EXPECT_NEAR(r.val_rmse_celsius, a.model.stats.sigma * std::sqrt(r.val_mse), 1e-12);
    }
}

TEST(Train, DataOnlyWeightsReproduceDataDrivenBitForBit) {
    const Dataset& ds = small_dataset().dataset;
    TrainConfig piml = quick_config(Mode::PIML);
    piml.weights = {1.0, 0.0, 0.0};
    const TrainConfig data = quick_config(Mode::DataDriven);
    const TrainResult a = train(ds, piml);
    const TrainResult b = train(ds, data);
    ASSERT_EQ(a.history.size(), b.history.size());
    for (std::size_t e = 0; e < a.history.size(); ++e) {
        EXPECT_EQ(a.history[e].train_mse, b.history[e].train_mse);
        EXPECT_EQ(a.history[e].val_mse, b.history[e].val_mse);
    }
    EXPECT_EQ(a.model, b.model);
}

TEST(Train, StatsIgnoreTheTestSplit) {
    Dataset ds = small_dataset().dataset;
    TrainConfig cfg = quick_config(Mode::DataDriven);
    cfg.epochs = 1;
    const TrainResult a = train(ds, cfg);
    for (std::size_t i : a.split.test)
        for (double& v : ds.samples[i].temperature.values()) v += 100.0;
    const TrainResult b = train(ds, cfg);
    EXPECT_EQ(a.model.stats, b.model.stats);
    EXPECT_EQ(a.model, b.model);
    EXPECT_EQ(a.history[0].train_mse, b.history[0].train_mse);
    EXPECT_NE(a.history[0].val_mse, b.history[0].val_mse);
}

TEST(Train, SingleSampleOverfit) {
    const PhysicalConfig pc;
    const Dataset ds = generate_dataset(2, {8}, grid_for_plate(pc, 22, 29), pc).dataset;
    TrainConfig cfg;
    cfg.mode = Mode::DataDriven;
    cfg.epochs = 500;
    cfg.split_fraction = 0.5;
    cfg.seed = 3;
    const TrainResult r = train(ds, cfg);
    EXPECT_EQ(r.split.train.size(), 1u);
    EXPECT_LT(r.history.back().train_mse, 1e-3);
}

TEST(Train, PinnSingleRuns) {
    const Dataset& ds = small_dataset().dataset;
    TrainConfig cfg;
    cfg.mode = Mode::PinnSingle;
    cfg.epochs = 5;
    cfg.coord = {8, 2};
    cfg.pinn_sample = 3;
    const TrainResult r = train(ds, cfg);
    ASSERT_EQ(r.history.size(), 5u);
    EXPECT_EQ(r.model.kind, ModelKind::Coordinate);
    EXPECT_EQ(r.history.back().val_mse, r.history.back().train_mse);
    const ScalarField T = predict(r.model, ds.samples[3].mask);
    EXPECT_TRUE(T.all_finite());
    cfg.pinn_sample = 99;
    EXPECT_THROW(train(ds, cfg), ConfigError);
}

TEST(Train, DivergenceIsReported) {
    const Dataset& ds = small_dataset().dataset;
    TrainConfig cfg = quick_config(Mode::PIML);
    cfg.lr = 1e300;
    EXPECT_THROW(train(ds, cfg), DivergenceError);
}

TEST(Evaluate, Identities) {
    const Dataset& ds = small_dataset().dataset;
    const std::vector<std::size_t> idx{0, 2, 5};
    std::vector<const ScalarField*> pool;
    for (std::size_t i : idx) pool.push_back(&ds.samples[i].temperature);
    const loss::NormStats st = loss::fit_norm(pool);

    std::vector<ScalarField> truth, mean;
    for (std::size_t i : idx) {
        truth.push_back(ds.samples[i].temperature);
        mean.emplace_back(ds.spec, st.mu);
    }
    const EvalReport perfect = evaluate_predictions(st, ds, idx, truth);
    EXPECT_EQ(perfect.mse_norm, 0.0);
    EXPECT_EQ(perfect.max_abs_err_celsius, 0.0);

    const EvalReport flat = evaluate_predictions(st, ds, idx, mean);
    EXPECT_NEAR(flat.mse_norm, 1.0, 1e-12);
    EXPECT_NEAR(flat.rmse_celsius, st.sigma * std::sqrt(flat.mse_norm), 1e-12);
    EXPECT_NEAR(flat.mse_celsius2, st.sigma * st.sigma * flat.mse_norm, 1e-9);
    ASSERT_EQ(flat.samples.size(), 3u);
    EXPECT_EQ(flat.samples[1].index, 2u);
}

TEST(Evaluate, ShapeMismatch) {
    const Dataset& ds = small_dataset().dataset;
    Surrogate m{nn::make_coordinate_net({4, 1}, 1), ModelKind::Fcn, {25.0, 1.0}};
    const std::vector<std::size_t> idx{0};
    EXPECT_THROW(evaluate(m, ds, idx), ShapeError);
}

TEST(Compare, StructureAndDeterminism) {
    const Dataset& ds = small_dataset().dataset;
    TrainConfig cfg = quick_config(Mode::PIML);
    cfg.epochs = 2;
    const ComparisonReport a = compare_experiment(ds, cfg);
    const ComparisonReport b = compare_experiment(ds, cfg);
    EXPECT_EQ(a.compare_epoch, 2);
    EXPECT_EQ(a.data_curve.size(), 2u);
    EXPECT_EQ(a.piml_curve.size(), 2u);
    EXPECT_EQ(a.data_curve, b.data_curve);
    EXPECT_EQ(a.piml_curve, b.piml_curve);
    EXPECT_EQ(comparison_summary(a), comparison_summary(b));
    EXPECT_EQ(a.data_error_maps.size(), a.split.test.size());
    EXPECT_DOUBLE_EQ(a.improvement_pct, 100.0 * (a.data_val_mse - a.piml_val_mse) / a.data_val_mse);
    EXPECT_NE(comparison_summary(a).find("epoch10_improvement_pct="), std::string::npos);

    Dataset tiny = ds;
    tiny.samples.resize(9);
    EXPECT_THROW(compare_experiment(tiny, cfg), ConfigError);
}
