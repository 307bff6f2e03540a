#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coldplate/grid.hpp"

namespace coldplate::geometry {

enum class Family : std::uint8_t { StraightParallel, Serpentine, BorderLoop };

std::string to_string(Family family);

/// Channel layout parameters.
///
/// StraightParallel: `channel_count` full-height vertical strips of width
/// `width_cells`, spread evenly between the left and right margins.
/// Serpentine: `channel_count` vertical passes inset vertically by the margin,
/// joined alternately at the top and bottom by bends of the same width.
/// BorderLoop: a rectangular ring of thickness `width_cells` inset by
/// `margin_cells` on every side; `channel_count` must be 1.
struct ChannelParams {
    Family family = Family::StraightParallel;
    int channel_count = 1;
    int width_cells = 10;
    int margin_cells = 0;

    friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

std::string describe(const ChannelParams& params);

struct GeometrySeed {
    std::uint64_t seed = 0;
};

/// Throws GeometryError naming the violated constraint when `params` cannot be
/// laid out on `spec`.
void check_feasible(const GridSpec& spec, const ChannelParams& params);

ChannelMask gen_mask(const GridSpec& spec, const ChannelParams& params);

/// n pairwise-distinct feasible configurations, families cycled round-robin.
/// Widths come from [4, 20] cells, counts from [1, 6] (straight) or [2, 6]
/// (serpentine), margins from [0, 15]. Throws SamplingError when a record
/// cannot be drawn within 1000 attempts.
std::vector<ChannelParams> sample_configs(int n, GeometrySeed seed, const GridSpec& spec = grid_spec_default());

double mask_coverage(const ChannelMask& mask);

}  // namespace coldplate::geometry
