#include "coldplate/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "coldplate/errors.hpp"

namespace coldplate {

void GridSpec::validate() const {
    if (nx < 1 || ny < 1) throw GridError("grid needs at least one cell in each direction");
    if (!(dx > 0.0) || !(dy > 0.0)) throw GridError("grid spacing must be positive");
}

GridSpec grid_spec_default() { return GridSpec{154, 203, 1.0e-3, 1.0e-3}; }

std::pair<double, double> cell_center(const GridSpec& spec, std::size_t i, std::size_t j) {
    if (i >= spec.nx || j >= spec.ny) {
        throw std::out_of_range("cell (" + std::to_string(i) + ", " + std::to_string(j) + ") outside " +
                                std::to_string(spec.nx) + "x" + std::to_string(spec.ny) + " grid");
    }
    return {(static_cast<double>(i) + 0.5) * spec.dx, (static_cast<double>(j) + 0.5) * spec.dy};
}

void PhysicalConfig::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(k) || k <= 0.0) throw ConfigError("k must be > 0");
    if (!finite(t) || t <= 0.0) throw ConfigError("plate thickness must be > 0");
    if (!finite(h_coeff) || h_coeff < 0.0) throw ConfigError("h_coeff must be >= 0");
    if (!finite(h_bg) || h_bg < 0.0) throw ConfigError("h_bg must be >= 0");
    if (!finite(Q_batt) || Q_batt < 0.0) throw ConfigError("Q_batt must be >= 0");
    if (!finite(Lx) || Lx <= 0.0 || !finite(Ly) || Ly <= 0.0) throw ConfigError("plate dimensions must be > 0");
    if (!finite(T_coolant)) throw ConfigError("T_coolant must be finite");
}

double q_gen(const PhysicalConfig& config) { return config.q_gen(); }

void check_tiles_plate(const GridSpec& spec, const PhysicalConfig& config) {
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
    if (!close(spec.width(), config.Lx) || !close(spec.height(), config.Ly)) {
        throw GridError("grid " + std::to_string(spec.nx) + "x" + std::to_string(spec.ny) +
                        " does not tile the plate (nx*dx = " + std::to_string(spec.width()) +
                        " m, Lx = " + std::to_string(config.Lx) + " m; ny*dy = " + std::to_string(spec.height()) +
                        " m, Ly = " + std::to_string(config.Ly) + " m)");
    }
}

GridSpec grid_for_plate(const PhysicalConfig& config, std::size_t nx, std::size_t ny) {
    if (nx < 1 || ny < 1) throw GridError("grid needs at least one cell in each direction");
    return GridSpec{nx, ny, config.Lx / static_cast<double>(nx), config.Ly / static_cast<double>(ny)};
}

ScalarField::ScalarField(const GridSpec& spec, double fill) : spec_(spec), data_(spec.size(), fill) {
    spec.validate();
    if (!std::isfinite(fill)) throw GridError("scalar field fill value must be finite");
}

ScalarField::ScalarField(const GridSpec& spec, std::vector<double> values) : spec_(spec), data_(std::move(values)) {
    spec.validate();
    if (data_.size() != spec.size()) {
        throw ShapeError("scalar field has " + std::to_string(data_.size()) + " values, grid needs " +
                         std::to_string(spec.size()));
    }
    if (!all_finite()) throw GridError("scalar field contains non-finite values");
}

double ScalarField::min() const { return *std::min_element(data_.begin(), data_.end()); }
double ScalarField::max() const { return *std::max_element(data_.begin(), data_.end()); }
double ScalarField::mean() const {
    // offsets from the first entry keep the sum small for nearly uniform fields
    const double ref = data_.front();
    double sum = 0.0;
    for (double v : data_) sum += v - ref;
    return ref + sum / static_cast<double>(data_.size());
}
bool ScalarField::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

ChannelMask::ChannelMask(const GridSpec& spec, std::uint8_t fill) : spec_(spec), data_(spec.size(), fill ? 1 : 0) {
    spec.validate();
}

ChannelMask::ChannelMask(const GridSpec& spec, std::vector<std::uint8_t> values)
    : spec_(spec), data_(std::move(values)) {
    spec.validate();
    if (data_.size() != spec.size()) {
        throw ShapeError("mask has " + std::to_string(data_.size()) + " values, grid needs " +
                         std::to_string(spec.size()));
    }
    if (std::any_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v > 1; })) {
        throw GeometryError("mask entries must be 0 or 1");
    }
}

std::size_t ChannelMask::count_ones() const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

}  // namespace coldplate
