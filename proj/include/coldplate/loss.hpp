#pragma once

#include <span>
#include <vector>

#include "coldplate/grid.hpp"

namespace coldplate::loss {

/// Standardisation statistics of the training temperatures, degC.
struct NormStats {
    double mu = 0.0;
    double sigma = 1.0;

    friend bool operator==(const NormStats&, const NormStats&) = default;
};

/// Population mean and standard deviation pooled over every cell of every
/// field. Throws StatsError on an empty list or sigma < 1e-12.
NormStats fit_norm(const std::vector<const ScalarField*>& training_fields);
NormStats fit_norm(const std::vector<ScalarField>& training_fields);

double normalize(double T, const NormStats& stats);
double denormalize(double Tn, const NormStats& stats);
ScalarField normalize(const ScalarField& T, const NormStats& stats);
ScalarField denormalize(const ScalarField& Tn, const NormStats& stats);

struct LossWeights {
    double w1 = 1.0;
    double w2 = 1.0;
    double w3 = 1.0;

    void validate() const;
    friend bool operator==(const LossWeights&, const LossWeights&) = default;
};

struct LossBreakdown {
    double l_mse = 0.0;
    double l_pde = 0.0;
    double l_bc = 0.0;
    double l_total = 0.0;
};

/// A scalar loss and its gradient with respect to the (normalised) prediction.
struct LossValue {
    double value = 0.0;
    std::vector<double> grad;
};

/// Mean of squared differences over all entries.
LossValue mse_loss(std::span<const double> pred_norm, std::span<const double> target_norm);

/// mean((R / q_gen)^2) where R is the solver's residual operator applied to
/// the denormalised prediction. Throws LossError when q_gen == 0.
LossValue pde_loss(std::span<const double> pred_norm, const NormStats& stats, const ChannelMask& mask,
                   const PhysicalConfig& config);

/// Mean over boundary cells of the squared one-sided normal derivative of the
/// denormalised prediction, degC^2/m^2. Corner cells contribute both normals.
/// Throws GridError for nx < 2 or ny < 2.
LossValue bc_loss(std::span<const double> pred_norm, const NormStats& stats, const GridSpec& spec);

struct TotalLoss {
    LossBreakdown breakdown;
    std::vector<double> grad;
};

/// w1 * mse + w2 * pde + w3 * bc for one field. Terms with zero weight are
/// still evaluated for reporting but contribute neither value nor gradient.
TotalLoss total_loss(std::span<const double> pred_norm, std::span<const double> target_norm,
                     const NormStats& stats, const ChannelMask& mask, const PhysicalConfig& config,
                     const LossWeights& weights);

}  // namespace coldplate::loss
