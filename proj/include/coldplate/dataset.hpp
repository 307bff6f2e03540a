#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "coldplate/grid.hpp"
#include "coldplate/loss.hpp"
#include "coldplate/nn.hpp"

namespace coldplate {

struct Sample {
    ChannelMask mask;
    ScalarField temperature;  // degC

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// Mask/temperature pairs sharing one grid and one physical configuration.
struct Dataset {
    GridSpec spec;
    PhysicalConfig config;
    std::vector<Sample> samples;

    std::size_t size() const noexcept { return samples.size(); }
    /// Throws ShapeError if any sample lives on a different grid.
    void validate() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Per-epoch training metrics in normalised units, except the last column.
struct EpochRecord {
    int epoch = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;
    double l_pde = 0.0;
    double l_bc = 0.0;
    double l_total = 0.0;
    double val_rmse_celsius = 0.0;

    friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

/// What the network consumes: the channel mask image (Fcn) or the list of
/// normalised cell-centre coordinates of one fixed geometry (Coordinate).
enum class ModelKind : std::uint8_t { Fcn = 0, Coordinate = 1 };

/// A trained network together with the statistics needed to map its output
/// back to degC.
struct Surrogate {
    nn::Network network;
    ModelKind kind = ModelKind::Fcn;
    loss::NormStats stats;

    friend bool operator==(const Surrogate&, const Surrogate&) = default;
};

}  // namespace coldplate
