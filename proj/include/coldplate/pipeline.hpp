#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "coldplate/dataset.hpp"
#include "coldplate/geometry.hpp"
#include "coldplate/loss.hpp"
#include "coldplate/nn.hpp"
#include "coldplate/thermal.hpp"

namespace coldplate::pipeline {

struct GenerateOptions {
    thermal::SolverOptions solver;
    /// Solve samples concurrently (OpenMP). Output is identical either way.
    bool parallel = true;
};

struct GeneratedDataset {
    Dataset dataset;
    std::vector<geometry::ChannelParams> params;
    std::vector<thermal::SolveReport> reports;
};

/// Samples n channel layouts and solves each one. Every field is checked for
/// energy balance <= 1e-6. Failures name the offending config index.
GeneratedDataset generate_dataset(int n, geometry::GeometrySeed seed, const GridSpec& spec,
                                  const PhysicalConfig& config, const GenerateOptions& opts = {});

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;

    friend bool operator==(const Split&, const Split&) = default;
};

/// Seeded shuffle, round(fraction * n) training indices; both sides sorted.
/// Throws SplitError if either side would be empty.
Split split_dataset(std::size_t n, double fraction, std::uint64_t seed);

enum class Mode { DataDriven, PIML, PinnSingle };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct TrainConfig {
    Mode mode = Mode::DataDriven;
    int epochs = 100;
    double lr = 1.0e-3;
    std::size_t batch_size = 8;
    double split_fraction = 0.8;
    /// Used by PIML and PinnSingle; DataDriven always trains on (1, 0, 0).
    loss::LossWeights weights;
    std::uint64_t seed = 0;
    nn::FcnArchitecture fcn;
    nn::CoordNetArchitecture coord;
    /// Dataset sample that PinnSingle fits.
    std::size_t pinn_sample = 0;

    void validate() const;
    loss::LossWeights effective_weights() const;
    std::uint64_t split_seed() const noexcept { return seed; }
    std::uint64_t init_seed() const noexcept { return seed + 1; }
    std::uint64_t shuffle_seed() const noexcept { return seed + 2; }
};

struct TrainResult {
    Surrogate model;
    std::vector<EpochRecord> history;
    Split split;
};

/// Called after every epoch; used for progress output.
using EpochCallback = std::function<void(const EpochRecord&)>;

/// Trains a surrogate. When `initial` is given it replaces the seeded
/// initialisation. Throws DivergenceError on a non-finite loss.
TrainResult train(const Dataset& dataset, const TrainConfig& config, const nn::Network* initial = nullptr,
                  const EpochCallback& on_epoch = {});

/// Network input for a mask: [1, 1, ny, nx] for FCN models, [nx*ny, 2]
/// normalised cell-centre coordinates for coordinate models.
nn::Tensor model_input(ModelKind kind, const ChannelMask& mask);

/// Prediction in degC.
ScalarField predict(const Surrogate& model, const ChannelMask& mask);

struct SampleMetrics {
    std::size_t index = 0;
    double mse_norm = 0.0;
    double rmse_celsius = 0.0;
    double max_abs_err_celsius = 0.0;
};

struct EvalReport {
    double mse_norm = 0.0;
    double mse_celsius2 = 0.0;
    double rmse_celsius = 0.0;
    double max_abs_err_celsius = 0.0;
    std::vector<SampleMetrics> samples;
};

/// Metrics for predictions given in normalised units, one per index.
EvalReport evaluate_normalized(const loss::NormStats& stats, const Dataset& dataset,
                               std::span<const std::size_t> indices,
                               const std::vector<std::vector<double>>& predictions_norm);

/// Metrics for predictions given in degC, one per index.
EvalReport evaluate_predictions(const loss::NormStats& stats, const Dataset& dataset,
                                std::span<const std::size_t> indices, const std::vector<ScalarField>& predictions);

EvalReport evaluate(const Surrogate& model, const Dataset& dataset, std::span<const std::size_t> indices);

struct ComparisonReport {
    TrainConfig config;
    Split split;
    std::vector<EpochRecord> data_curve;
    std::vector<EpochRecord> piml_curve;
    /// min(10, epochs)
    int compare_epoch = 0;
    double data_val_mse = 0.0;
    double piml_val_mse = 0.0;
    double data_train_mse = 0.0;
    double piml_train_mse = 0.0;
    /// 100 * (data - piml) / data on validation MSE at compare_epoch.
    double improvement_pct = 0.0;
    double train_improvement_pct = 0.0;
    double piml_epoch1_val_mse = 0.0;
    EvalReport data_eval;
    EvalReport piml_eval;
    /// prediction - truth in degC for each test sample, in split.test order.
    std::vector<ScalarField> data_error_maps;
    std::vector<ScalarField> piml_error_maps;
};

/// Trains DataDriven and PIML from the same split and initial weights and
/// compares them at epoch min(10, epochs). Requires >= 10 samples.
ComparisonReport compare_experiment(const Dataset& dataset, const TrainConfig& base,
                                    const EpochCallback& on_epoch = {});

/// Writes data_curves.csv, piml_curves.csv, summary.txt and
/// error_maps/{data,piml}_<index>.ppm under `dir`.
void write_comparison_artifacts(const ComparisonReport& report, const std::filesystem::path& dir);

std::string comparison_summary(const ComparisonReport& report);

}  // namespace coldplate::pipeline
