#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "coldplate/grid.hpp"

namespace coldplate::thermal {

enum class Preconditioner { None, Jacobi };

struct SolverOptions {
    double rel_tol = 1.0e-10;
    /// 0 selects the default cap of 50 * (nx + ny).
    std::size_t max_iter = 0;
    Preconditioner preconditioner = Preconditioner::Jacobi;

    std::size_t iteration_cap(const GridSpec& spec) const noexcept {
        return max_iter > 0 ? max_iter : 50 * (spec.nx + spec.ny);
    }
    void validate() const;
};

struct SolveReport {
    std::size_t iterations = 0;
    double final_rel_residual = 0.0;
    double energy_balance_error = 0.0;
};

/// Per-cell convection coefficient h_coeff * M + h_bg * (1 - M), W/(m^2 K).
ScalarField build_h_map(const ChannelMask& mask, const PhysicalConfig& config);

/// Flux-form (finite-volume) steady conduction operator on the plate.
///
/// Row (i, j) of K acting on theta = T - T_coolant is
///     sum_faces c_f * (theta_ij - theta_nb) + h_ij * A * theta_ij
/// with c_x = k t dy / dx on x-faces, c_y = k t dx / dy on y-faces and
/// A = dx dy. Faces on the plate edge are dropped (zero normal flux), so K is
/// symmetric, and positive definite as soon as any h_ij > 0. Units are W/K.
class ThermalOperator {
public:
    ThermalOperator(const ChannelMask& mask, const PhysicalConfig& config);

    const GridSpec& spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return spec_.size(); }

    /// y = K x
    void apply(std::span<const double> x, std::span<double> y) const;

    std::span<const double> diagonal() const noexcept { return diag_; }
    /// h_ij * A per cell, W/K.
    std::span<const double> sink() const noexcept { return sink_; }
    double x_conductance() const noexcept { return cx_; }
    double y_conductance() const noexcept { return cy_; }

    /// Entry K(row, col); zero for cells that are not face neighbours.
    double coefficient(std::size_t row, std::size_t col) const;

    bool has_sink() const noexcept;

private:
    GridSpec spec_;
    double cx_;
    double cy_;
    std::vector<double> sink_;
    std::vector<double> diag_;
};

/// Solves k t lap(T) + q_gen - h (T - T_coolant) = 0 with adiabatic edges by
/// preconditioned conjugate gradients on the flux-form system.
///
/// Throws SolverError(Singular) when every h_ij is zero and
/// SolverError(NonConvergence) when the iteration cap is reached.
std::pair<ScalarField, SolveReport> solve_steady_state(const ChannelMask& mask, const PhysicalConfig& config,
                                                       const SolverOptions& opts = {});

/// R = k t L(T) + q_gen - h (T - T_coolant) in W/m^2, where L is the solver's
/// five-point zero-flux stencil divided by the cell area.
ScalarField pde_residual_field(const ScalarField& T, const ChannelMask& mask, const PhysicalConfig& config);

/// |sum h (T - T_coolant) dx dy - Q| / Q with Q = q_gen * (nx dx) * (ny dy),
/// which is Q_batt whenever the grid tiles the plate. Requires Q_batt > 0.
double energy_balance(const ScalarField& T, const ChannelMask& mask, const PhysicalConfig& config);

}  // namespace coldplate::thermal
