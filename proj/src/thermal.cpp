#include "coldplate/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coldplate/errors.hpp"

namespace coldplate::thermal {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) {
        throw ShapeError("grid mismatch: " + std::to_string(a.nx) + "x" + std::to_string(a.ny) + " vs " +
                         std::to_string(b.nx) + "x" + std::to_string(b.ny));
    }
}

}  // namespace

void SolverOptions::validate() const {
    if (!(rel_tol > 0.0)) throw ConfigError("solver rel_tol must be > 0");
}

ScalarField build_h_map(const ChannelMask& mask, const PhysicalConfig& config) {
    ScalarField h(mask.spec());
    for (std::size_t idx = 0; idx < mask.size(); ++idx) h[idx] = mask[idx] ? config.h_coeff : config.h_bg;
    return h;
}

ThermalOperator::ThermalOperator(const ChannelMask& mask, const PhysicalConfig& config)
    : spec_(mask.spec()),
      cx_(config.k * config.t * mask.spec().dy / mask.spec().dx),
      cy_(config.k * config.t * mask.spec().dx / mask.spec().dy),
      sink_(mask.size()),
      diag_(mask.size()) {
    config.validate();
    const double area = spec_.cell_area();
    const std::size_t nx = spec_.nx, ny = spec_.ny;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t idx = spec_.index(i, j);
            sink_[idx] = (mask[idx] ? config.h_coeff : config.h_bg) * area;
            double d = sink_[idx];
            if (i > 0) d += cx_;
            if (i + 1 < nx) d += cx_;
            if (j > 0) d += cy_;
            if (j + 1 < ny) d += cy_;
            diag_[idx] = d;
        }
    }
}

bool ThermalOperator::has_sink() const noexcept {
    return std::any_of(sink_.begin(), sink_.end(), [](double s) { return s > 0.0; });
}

void ThermalOperator::apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t nx = spec_.nx, ny = spec_.ny;
    for (std::size_t j = 0; j < ny; ++j) {
        const double* row = x.data() + j * nx;
        const double* below = j > 0 ? row - nx : nullptr;
        const double* above = j + 1 < ny ? row + nx : nullptr;
        double* out = y.data() + j * nx;
        const double* d = diag_.data() + j * nx;
        for (std::size_t i = 0; i < nx; ++i) {
            double v = d[i] * row[i];
            if (i > 0) v -= cx_ * row[i - 1];
            if (i + 1 < nx) v -= cx_ * row[i + 1];
            if (below) v -= cy_ * below[i];
            if (above) v -= cy_ * above[i];
            out[i] = v;
        }
    }
}

double ThermalOperator::coefficient(std::size_t row, std::size_t col) const {
    if (row >= size() || col >= size()) throw std::out_of_range("operator index out of range");
    if (row == col) return diag_[row];
    const auto [ri, rj] = spec_.unindex(row);
    const auto [ci, cj] = spec_.unindex(col);
    if (rj == cj && (ri + 1 == ci || ci + 1 == ri)) return -cx_;
    if (ri == ci && (rj + 1 == cj || cj + 1 == rj)) return -cy_;
    return 0.0;
}

std::pair<ScalarField, SolveReport> solve_steady_state(const ChannelMask& mask, const PhysicalConfig& config,
                                                       const SolverOptions& opts) {
    opts.validate();
    const GridSpec& spec = mask.spec();
    const ThermalOperator op(mask, config);
    if (!op.has_sink()) {
        throw SolverError(SolverError::Kind::Singular,
                          "singular system: convection map is zero everywhere, no steady state exists "
                          "(mask has no channel cells and h_bg = 0)");
    }

    const std::size_t n = spec.size();
    const double source = config.q_gen() * spec.cell_area();
    std::vector<double> b(n, source);
    std::vector<double> theta(n, 0.0);
    SolveReport report;

    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) {
        ScalarField T(spec, config.T_coolant);
        return {T, report};
    }

    std::vector<double> inv_diag(n, 1.0);
    if (opts.preconditioner == Preconditioner::Jacobi) {
        const auto d = op.diagonal();
        for (std::size_t i = 0; i < n; ++i) inv_diag[i] = 1.0 / d[i];
    }

    std::vector<double> r(b), z(n), p(n), q(n);
    const std::size_t cap = opts.iteration_cap(spec);
    const double target = opts.rel_tol * b_norm;
    double rel = 1.0;
    std::size_t it = 0;
    bool converged = false;

    // Outer loop restarts from the true residual if the recurrence drifted.
    while (!converged && it < cap) {
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        p = z;
        double rz = dot(r, z);
        while (it < cap) {
            op.apply(p, q);
            const double alpha = rz / dot(p, q);
            for (std::size_t i = 0; i < n; ++i) {
                theta[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            ++it;
            if (std::sqrt(dot(r, r)) <= target) break;
            for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
            const double rz_next = dot(r, z);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        op.apply(theta, q);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
        rel = std::sqrt(dot(r, r)) / b_norm;
        converged = rel <= opts.rel_tol;
    }

    if (!converged) {
        throw SolverError(SolverError::Kind::NonConvergence,
                          "conjugate gradient hit the iteration cap (" + std::to_string(cap) +
                              ") with relative residual " + std::to_string(rel),
                          rel);
    }

    ScalarField T(spec);
    for (std::size_t i = 0; i < n; ++i) T[i] = config.T_coolant + theta[i];
    report.iterations = it;
    report.final_rel_residual = rel;
    report.energy_balance_error = config.Q_batt > 0.0 ? energy_balance(T, mask, config) : 0.0;
    return {std::move(T), report};
}

ScalarField pde_residual_field(const ScalarField& T, const ChannelMask& mask, const PhysicalConfig& config) {
    require_same_grid(T.spec(), mask.spec());
    const ThermalOperator op(mask, config);
    const std::size_t n = T.size();
    std::vector<double> theta(n), k_theta(n);
    for (std::size_t i = 0; i < n; ++i) theta[i] = T[i] - config.T_coolant;
    op.apply(theta, k_theta);
    const double inv_area = 1.0 / T.spec().cell_area();
    const double q = config.q_gen();
    ScalarField R(T.spec());
    for (std::size_t i = 0; i < n; ++i) R[i] = q - k_theta[i] * inv_area;
    return R;
}

double energy_balance(const ScalarField& T, const ChannelMask& mask, const PhysicalConfig& config) {
    require_same_grid(T.spec(), mask.spec());
    if (!(config.Q_batt > 0.0)) throw ConfigError("energy balance needs Q_batt > 0");
    const GridSpec& spec = T.spec();
    const double area = spec.cell_area();
    double removed = 0.0;
    for (std::size_t idx = 0; idx < T.size(); ++idx) {
        const double h = mask[idx] ? config.h_coeff : config.h_bg;
        removed += h * (T[idx] - config.T_coolant) * area;
    }
    const double generated = config.q_gen() * spec.width() * spec.height();
    return std::abs(removed - generated) / generated;
}

}  // namespace coldplate::thermal
