#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace coldplate {

/// Cell-centred uniform grid. Cell (i, j) covers [i*dx, (i+1)*dx] x [j*dy, (j+1)*dy]
/// with the origin at the lower-left plate corner; storage is row-major with
/// y as the outer index.
struct GridSpec {
    std::size_t nx = 154;
    std::size_t ny = 203;
    double dx = 1.0e-3;
    double dy = 1.0e-3;

    std::size_t size() const noexcept { return nx * ny; }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * nx + i; }
    std::pair<std::size_t, std::size_t> unindex(std::size_t idx) const noexcept { return {idx % nx, idx / nx}; }
    double cell_area() const noexcept { return dx * dy; }
    double width() const noexcept { return static_cast<double>(nx) * dx; }
    double height() const noexcept { return static_cast<double>(ny) * dy; }

    void validate() const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

GridSpec grid_spec_default();

/// Centre of cell (i, j) in metres. Throws std::out_of_range for i >= nx or j >= ny.
std::pair<double, double> cell_center(const GridSpec& spec, std::size_t i, std::size_t j);

/// Physical constants of the plate model. Temperatures in degC, everything else SI.
struct PhysicalConfig {
    double k = 202.4;          // W/(m K)
    double t = 2.0e-3;         // m
    double h_coeff = 1500.0;   // W/(m^2 K)
    double h_bg = 0.0;         // W/(m^2 K)
    double T_coolant = 25.0;   // degC
    double Q_batt = 8.0;       // W
    double Lx = 0.154;         // m
    double Ly = 0.203;         // m

    double q_gen() const noexcept { return Q_batt / (Lx * Ly); }
    void validate() const;

    friend bool operator==(const PhysicalConfig&, const PhysicalConfig&) = default;
};

/// Uniform areal heat generation Q_batt / (Lx * Ly), W/m^2.
double q_gen(const PhysicalConfig& config);

/// Throws GridError unless nx*dx == Lx and ny*dy == Ly to within 1e-9 relative.
void check_tiles_plate(const GridSpec& spec, const PhysicalConfig& config);

/// Grid of nx x ny cells spanning the plate of `config`.
GridSpec grid_for_plate(const PhysicalConfig& config, std::size_t nx, std::size_t ny);

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& spec, double fill = 0.0);
    /// Throws ShapeError if values.size() != nx*ny and GridError on non-finite entries.
    ScalarField(const GridSpec& spec, std::vector<double> values);

    const GridSpec& spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return data_.size(); }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[spec_.index(i, j)]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[spec_.index(i, j)]; }
    double operator[](std::size_t idx) const noexcept { return data_[idx]; }
    double& operator[](std::size_t idx) noexcept { return data_[idx]; }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }

    double min() const;
    double max() const;
    double mean() const;
    bool all_finite() const;

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    GridSpec spec_{};
    std::vector<double> data_;
};

class ChannelMask {
public:
    ChannelMask() = default;
    explicit ChannelMask(const GridSpec& spec, std::uint8_t fill = 0);
    /// Throws ShapeError on size mismatch and GeometryError on entries outside {0, 1}.
    ChannelMask(const GridSpec& spec, std::vector<std::uint8_t> values);

    const GridSpec& spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::uint8_t operator()(std::size_t i, std::size_t j) const noexcept { return data_[spec_.index(i, j)]; }
    std::uint8_t operator[](std::size_t idx) const noexcept { return data_[idx]; }
    void set(std::size_t i, std::size_t j, bool on) noexcept { data_[spec_.index(i, j)] = on ? 1 : 0; }

    std::span<const std::uint8_t> values() const noexcept { return data_; }
    std::size_t count_ones() const noexcept;

    friend bool operator==(const ChannelMask&, const ChannelMask&) = default;

private:
    GridSpec spec_{};
    std::vector<std::uint8_t> data_;
};

}  // namespace coldplate
