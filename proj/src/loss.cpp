#include "coldplate/loss.hpp"

#include <cmath>
#include <string>

#include "coldplate/errors.hpp"
#include "coldplate/thermal.hpp"

namespace coldplate::loss {

namespace {

void require_grid_size(std::span<const double> values, const GridSpec& spec, const char* what) {
    if (values.size() != spec.size()) {
        throw ShapeError(std::string(what) + ": " + std::to_string(values.size()) + " values for a " +
                         std::to_string(spec.nx) + "x" + std::to_string(spec.ny) + " grid");
    }
}

}  // namespace

NormStats fit_norm(const std::vector<const ScalarField*>& fields) {
    if (fields.empty()) throw StatsError("cannot fit normalisation on an empty training set");
    double sum = 0.0;
    std::size_t count = 0;
    for (const ScalarField* f : fields) {
        for (double v : f->values()) sum += v;
        count += f->size();
    }
    if (count == 0) throw StatsError("training fields are empty");
    const double mu = sum / static_cast<double>(count);
    double ss = 0.0;
    for (const ScalarField* f : fields)
        for (double v : f->values()) ss += (v - mu) * (v - mu);
    const double sigma = std::sqrt(ss / static_cast<double>(count));
    if (!(sigma >= 1e-12)) {
        throw StatsError("degenerate training temperatures: sigma = " + std::to_string(sigma) + " < 1e-12");
    }
    return {mu, sigma};
}

NormStats fit_norm(const std::vector<ScalarField>& fields) {
    std::vector<const ScalarField*> ptrs;
    ptrs.reserve(fields.size());
    for (const auto& f : fields) ptrs.push_back(&f);
    return fit_norm(ptrs);
}

double normalize(double T, const NormStats& s) { return (T - s.mu) / s.sigma; }
double denormalize(double Tn, const NormStats& s) { return Tn * s.sigma + s.mu; }

ScalarField normalize(const ScalarField& T, const NormStats& s) {
    ScalarField out(T.spec());
    for (std::size_t i = 0; i < T.size(); ++i) out[i] = normalize(T[i], s);
    return out;
}

ScalarField denormalize(const ScalarField& Tn, const NormStats& s) {
    ScalarField out(Tn.spec());
    for (std::size_t i = 0; i < Tn.size(); ++i) out[i] = denormalize(Tn[i], s);
    return out;
}

void LossWeights::validate() const {
    if (!(w1 >= 0.0) || !(w2 >= 0.0) || !(w3 >= 0.0)) throw ConfigError("loss weights must be >= 0");
    if (w1 == 0.0 && w2 == 0.0 && w3 == 0.0) throw ConfigError("loss weights must not all be zero");
}

LossValue mse_loss(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size() || pred.empty()) {
        throw ShapeError("mse: prediction has " + std::to_string(pred.size()) + " values, target " +
                         std::to_string(target.size()));
    }
    const double n = static_cast<double>(pred.size());
    LossValue out{0.0, std::vector<double>(pred.size())};
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        out.value += d * d;
        out.grad[i] = 2.0 * d / n;
    }
    out.value /= n;
    return out;
}

LossValue pde_loss(std::span<const double> pred_norm, const NormStats& stats, const ChannelMask& mask,
                   const PhysicalConfig& config) {
    const GridSpec& spec = mask.spec();
    require_grid_size(pred_norm, spec, "pde loss");
    const double q = config.q_gen();
    if (!(q > 0.0)) throw LossError("pde loss is normalised by q_gen, which is zero");

    const thermal::ThermalOperator op(mask, config);
    const std::size_t n = spec.size();
    const double area = spec.cell_area();

    // R = q - K theta / A, theta = T - T_coolant
    std::vector<double> theta(n), k_theta(n);
    for (std::size_t i = 0; i < n; ++i) theta[i] = denormalize(pred_norm[i], stats) - config.T_coolant;
    op.apply(theta, k_theta);

    std::vector<double> scaled(n);  // R / q
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = (q - k_theta[i] / area) / q;
        value += scaled[i] * scaled[i];
    }
    value /= static_cast<double>(n);

    // dL/dT = -(2 / (N q A)) K (R / q) by symmetry of K; dT/dTn = sigma
    std::vector<double> k_scaled(n);
    op.apply(scaled, k_scaled);
    const double factor = -2.0 * stats.sigma / (static_cast<double>(n) * q * area);
    LossValue out{value, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) out.grad[i] = factor * k_scaled[i];
    return out;
}

LossValue bc_loss(std::span<const double> pred_norm, const NormStats& stats, const GridSpec& spec) {
    if (spec.nx < 2 || spec.ny < 2) throw GridError("boundary loss needs at least a 2x2 grid");
    require_grid_size(pred_norm, spec, "boundary loss");
    const std::size_t nx = spec.nx, ny = spec.ny;
    const double boundary_cells = static_cast<double>(2 * nx + 2 * ny - 4);

    LossValue out{0.0, std::vector<double>(spec.size(), 0.0)};
    // (T_b - T_in) / step, accumulated with its gradient; T = sigma * Tn + mu
    // so differences of T equal sigma times differences of Tn.
    auto term = [&](std::size_t boundary, std::size_t inward, double step) {
        const double g = stats.sigma * (pred_norm[boundary] - pred_norm[inward]) / step;
        out.value += g * g;
        const double dg = 2.0 * g * stats.sigma / step / boundary_cells;
        out.grad[boundary] += dg;
        out.grad[inward] -= dg;
    };
    for (std::size_t j = 0; j < ny; ++j) {
        term(spec.index(0, j), spec.index(1, j), spec.dx);
        term(spec.index(nx - 1, j), spec.index(nx - 2, j), spec.dx);
    }
    for (std::size_t i = 0; i < nx; ++i) {
        term(spec.index(i, 0), spec.index(i, 1), spec.dy);
        term(spec.index(i, ny - 1), spec.index(i, ny - 2), spec.dy);
    }
    out.value /= boundary_cells;
    return out;
}

TotalLoss total_loss(std::span<const double> pred_norm, std::span<const double> target_norm, const NormStats& stats,
                     const ChannelMask& mask, const PhysicalConfig& config, const LossWeights& weights) {
    weights.validate();
    const LossValue mse = mse_loss(pred_norm, target_norm);
    const LossValue pde = pde_loss(pred_norm, stats, mask, config);
    const LossValue bc = bc_loss(pred_norm, stats, mask.spec());

    TotalLoss out;
    out.breakdown.l_mse = mse.value;
    out.breakdown.l_pde = pde.value;
    out.breakdown.l_bc = bc.value;
    out.grad.assign(pred_norm.size(), 0.0);

    double total = 0.0;
    auto add = [&](double w, const LossValue& term) {
        if (w == 0.0) return;
        total += w * term.value;
        for (std::size_t i = 0; i < out.grad.size(); ++i) out.grad[i] += w * term.grad[i];
    };
    add(weights.w1, mse);
    add(weights.w2, pde);
    add(weights.w3, bc);
    out.breakdown.l_total = total;
    return out;
}

}  // namespace coldplate::loss
