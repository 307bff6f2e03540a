#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace coldplate::nn {

/// Dense row-major tensor of up to four extents. Image tensors are
/// channels-first: [batch, channels, ny, nx].
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<const double> values() const noexcept { return data_; }
    std::span<double> values() noexcept { return data_; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }
    double& operator[](std::size_t i) noexcept { return data_[i]; }

    bool all_finite() const;
    std::string shape_string() const;

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

enum class Activation : std::uint8_t { ReLU, Linear };

/// Same-padded 2D convolution, weights [out, in, kh, kw], odd kernel extents.
struct ConvLayer {
    std::size_t in_channels = 1;
    std::size_t out_channels = 1;
    std::size_t kernel_h = 1;
    std::size_t kernel_w = 1;
    std::vector<double> weights;
    std::vector<double> bias;

    ConvLayer() : weights(1, 0.0), bias(1, 0.0) {}
    ConvLayer(std::size_t in, std::size_t out, std::size_t kh, std::size_t kw);

    std::size_t fan_in() const noexcept { return in_channels * kernel_h * kernel_w; }
    void validate() const;

    friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

/// Fully connected layer acting on [batch, in_dim], weights [out, in].
struct DenseLayer {
    std::size_t in_dim = 1;
    std::size_t out_dim = 1;
    std::vector<double> weights;
    std::vector<double> bias;

    DenseLayer() : weights(1, 0.0), bias(1, 0.0) {}
    DenseLayer(std::size_t in, std::size_t out);

    std::size_t fan_in() const noexcept { return in_dim; }
    void validate() const;

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct ConvGrads {
    Tensor grad_input;
    std::vector<double> grad_weights;
    std::vector<double> grad_bias;
};

struct DenseGrads {
    Tensor grad_input;
    std::vector<double> grad_weights;
    std::vector<double> grad_bias;
};

Tensor conv2d_forward(const Tensor& input, const ConvLayer& layer);
ConvGrads conv2d_backward(const Tensor& input, const ConvLayer& layer, const Tensor& upstream);

Tensor dense_forward(const Tensor& input, const DenseLayer& layer);
DenseGrads dense_backward(const Tensor& input, const DenseLayer& layer, const Tensor& upstream);

Tensor relu_forward(const Tensor& input);
/// Passes upstream where pre_activation > 0; a pre-activation of exactly 0 gets gradient 0.
Tensor relu_backward(const Tensor& pre_activation, const Tensor& upstream);

/// Weights ~ N(0, sqrt(2 / fan_in)) from a seeded generator, biases zero.
void he_init(ConvLayer& layer, std::uint64_t seed);
void he_init(DenseLayer& layer, std::uint64_t seed);

struct Layer {
    std::variant<ConvLayer, DenseLayer> op;
    Activation activation = Activation::Linear;

    bool is_conv() const noexcept { return std::holds_alternative<ConvLayer>(op); }
    std::size_t in_features() const;
    std::size_t out_features() const;

    friend bool operator==(const Layer&, const Layer&) = default;
};

/// Parameter gradients, one block per parameter array in Network::parameters() order.
using Gradients = std::vector<std::vector<double>>;

class Network {
public:
    Network() = default;
    /// Throws ShapeError when neighbouring layers disagree on feature counts or
    /// the last layer is not Linear.
    explicit Network(std::vector<Layer> layers);

    const std::vector<Layer>& layers() const noexcept { return layers_; }
    bool empty() const noexcept { return layers_.empty(); }
    std::size_t input_features() const;
    std::size_t output_features() const;

    /// Forward pass that keeps the activations needed by backward().
    Tensor forward(const Tensor& input);
    /// Forward pass without caching.
    Tensor predict(const Tensor& input) const;
    /// Consumes the activations of the immediately preceding forward(); throws
    /// StateError if there are none.
    Gradients backward(const Tensor& loss_grad);

    std::vector<std::span<double>> parameters();
    std::vector<std::span<const double>> parameters() const;
    std::size_t parameter_count() const;

    friend bool operator==(const Network& a, const Network& b) { return a.layers_ == b.layers_; }

private:
    struct Cache {
        std::vector<Tensor> inputs;
        std::vector<Tensor> pre_activations;
    };

    std::vector<Layer> layers_;
    std::optional<Cache> cache_;
};

/// Fully convolutional surrogate: `depth` same-padded conv layers, ReLU after
/// all but the last, 1 input and 1 output channel.
struct FcnArchitecture {
    std::size_t channels = 16;
    std::size_t kernel = 9;
    std::size_t depth = 3;
};

/// Coordinate network (x, y) -> T: dense layers with ReLU hidden units.
struct CoordNetArchitecture {
    std::size_t hidden = 64;
    std::size_t hidden_layers = 2;
};

Network make_fcn(const FcnArchitecture& arch, std::uint64_t seed);
Network make_coordinate_net(const CoordNetArchitecture& arch, std::uint64_t seed);

struct AdamState {
    double lr = 1.0e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1.0e-8;
    std::size_t step_count = 0;
    std::vector<std::vector<double>> first_moment;
    std::vector<std::vector<double>> second_moment;
};

/// One bias-corrected Adam update. Moment buffers are created zeroed on the
/// first call; throws ShapeError if grads do not match params block for block.
void adam_step(AdamState& state, const std::vector<std::span<double>>& params, const Gradients& grads);

}  // namespace coldplate::nn
