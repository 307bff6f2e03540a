#pragma once

// Raw compute kernels behind the nn layers. Each kernel exists twice: a
// straightforward serial reference used as a test oracle, and an OpenMP
// version used in training. Every output element of the parallel versions is
// produced by a single thread in a fixed summation order, so results do not
// depend on the thread count.

#include <cstddef>
#include <span>

namespace coldplate::nn::kernels {

/// Same-padded 2D cross-correlation geometry, channels-first [batch, channels, ny, nx].
struct ConvShape {
    std::size_t batch = 1;
    std::size_t in_channels = 1;
    std::size_t out_channels = 1;
    std::size_t ny = 1;
    std::size_t nx = 1;
    std::size_t kh = 1;
    std::size_t kw = 1;

    std::size_t input_size() const noexcept { return batch * in_channels * ny * nx; }
    std::size_t output_size() const noexcept { return batch * out_channels * ny * nx; }
    std::size_t weight_size() const noexcept { return out_channels * in_channels * kh * kw; }
};

struct DenseShape {
    std::size_t batch = 1;
    std::size_t in_dim = 1;
    std::size_t out_dim = 1;
};

void conv2d_forward_reference(const ConvShape& s, std::span<const double> input, std::span<const double> weights,
                              std::span<const double> bias, std::span<double> output);
void conv2d_forward_parallel(const ConvShape& s, std::span<const double> input, std::span<const double> weights,
                             std::span<const double> bias, std::span<double> output);

/// Overwrites grad_input, grad_weights and grad_bias.
void conv2d_backward_reference(const ConvShape& s, std::span<const double> input, std::span<const double> weights,
                               std::span<const double> upstream, std::span<double> grad_input,
                               std::span<double> grad_weights, std::span<double> grad_bias);
void conv2d_backward_parallel(const ConvShape& s, std::span<const double> input, std::span<const double> weights,
                              std::span<const double> upstream, std::span<double> grad_input,
                              std::span<double> grad_weights, std::span<double> grad_bias);

void dense_forward_reference(const DenseShape& s, std::span<const double> input, std::span<const double> weights,
                             std::span<const double> bias, std::span<double> output);
void dense_forward_parallel(const DenseShape& s, std::span<const double> input, std::span<const double> weights,
                            std::span<const double> bias, std::span<double> output);

void dense_backward_reference(const DenseShape& s, std::span<const double> input, std::span<const double> weights,
                              std::span<const double> upstream, std::span<double> grad_input,
                              std::span<double> grad_weights, std::span<double> grad_bias);
void dense_backward_parallel(const DenseShape& s, std::span<const double> input, std::span<const double> weights,
                             std::span<const double> upstream, std::span<double> grad_input,
                             std::span<double> grad_weights, std::span<double> grad_bias);

}  // namespace coldplate::nn::kernels
