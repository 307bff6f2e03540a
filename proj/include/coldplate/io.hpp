#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "coldplate/dataset.hpp"

namespace coldplate::io {

// Binary layouts (all multi-byte numbers little-endian):
//
// Dataset "PCTD":
//   magic[4] version:u32=1 nx:u32 ny:u32 n_samples:u32
//   Lx Ly k t h_coeff h_bg T_coolant Q_batt : f64 x 8
//   per sample: nx*ny mask bytes (0/1), then nx*ny f64 temperatures,
//   both in grid index order (j * nx + i).
//   The cell size is not stored; it is Lx/nx by Ly/ny.
//
// Model "PCTM":
//   magic[4] version:u32=1 mode:u8 (0 = FCN, 1 = coordinate network)
//   mu:f64 sigma:f64 layer_count:u32
//   per layer: type:u8 (0 = conv, 1 = dense)
//     conv:  in out kh kw : u32, weights [out,in,kh,kw] f64, bias [out] f64
//     dense: in out       : u32, weights [out,in] f64,       bias [out] f64
//   Activations are not stored: every layer but the last is ReLU, the last is
//   Linear. The mode byte does not restrict which layer types may appear.

inline constexpr std::uint32_t kFormatVersion = 1;

std::vector<std::uint8_t> encode_dataset(const Dataset& dataset);
Dataset decode_dataset(std::span<const std::uint8_t> bytes);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_dataset(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_model(const Surrogate& model);
Surrogate decode_model(std::span<const std::uint8_t> bytes);
void write_model(const std::filesystem::path& path, const Surrogate& model);
Surrogate read_model(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// ny rows of nx values, top row (j = ny - 1) first, 17 significant digits.
void export_field_csv(const std::filesystem::path& path, const ScalarField& field);

struct CsvGrid {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> values;  // grid index order
};
/// Parses the layout written by export_field_csv.
CsvGrid read_grid_csv(const std::filesystem::path& path);

enum class RangeMode { Auto, Fixed };

struct ColorRange {
    RangeMode mode = RangeMode::Auto;
    double lo = 0.0;
    double hi = 1.0;
};

using Rgb = std::array<std::uint8_t, 3>;

/// blue (0,0,255) -> white at the midpoint -> red (255,0,0) over [lo, hi],
/// values clamped, channels rounded half-up.
Rgb color_map(double value, double lo, double hi);

/// Binary P6 image, one pixel per cell, top row first. Auto range uses the
/// field's min and max; a constant field renders all white. A fixed range
/// with hi <= lo throws RangeError.
std::vector<std::uint8_t> encode_heatmap_ppm(const ScalarField& field, const ColorRange& range = {});
void export_heatmap_ppm(const std::filesystem::path& path, const ScalarField& field, const ColorRange& range = {});

/// Header `epoch,train_mse,val_mse,l_pde,l_bc,l_total,val_rmse_celsius` plus
/// one row per record. Throws std::invalid_argument on an empty list.
void write_curves_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& records);

}  // namespace coldplate::io
