#include "coldplate/nn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <type_traits>

#include "coldplate/errors.hpp"
#include "coldplate/kernels.hpp"

namespace coldplate::nn {

namespace {

std::size_t product(const std::vector<std::size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

void require_shape(const Tensor& t, const std::vector<std::size_t>& expected, const char* what) {
    if (t.shape() != expected) {
        Tensor probe(expected);
        throw ShapeError(std::string(what) + ": expected " + probe.shape_string() + ", got " + t.shape_string());
    }
}

kernels::ConvShape conv_shape(const Tensor& input, const ConvLayer& layer) {
    if (input.rank() != 4) throw ShapeError("conv2d expects a rank-4 tensor, got " + input.shape_string());
    if (input.dim(1) != layer.in_channels) {
        throw ShapeError("conv2d channel mismatch: input has " + std::to_string(input.dim(1)) +
                         " channels, layer expects " + std::to_string(layer.in_channels));
    }
    return kernels::ConvShape{input.dim(0), layer.in_channels, layer.out_channels, input.dim(2),
                              input.dim(3), layer.kernel_h,    layer.kernel_w};
}

kernels::DenseShape dense_shape(const Tensor& input, const DenseLayer& layer) {
    if (input.rank() != 2) throw ShapeError("dense expects a rank-2 tensor, got " + input.shape_string());
    if (input.dim(1) != layer.in_dim) {
        throw ShapeError("dense feature mismatch: input has " + std::to_string(input.dim(1)) +
                         " features, layer expects " + std::to_string(layer.in_dim));
    }
    return kernels::DenseShape{input.dim(0), layer.in_dim, layer.out_dim};
}

template <typename L>
void fill_normal(L& layer, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / static_cast<double>(layer.fan_in())));
    for (double& w : layer.weights) w = dist(rng);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
}

}  // namespace

// ------------------------------------------------------------------- Tensor

Tensor::Tensor(std::vector<std::size_t> shape, double fill) : shape_(std::move(shape)) {
    if (shape_.empty() || shape_.size() > 4) throw ShapeError("tensor rank must be 1..4");
    data_.assign(product(shape_), fill);
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty() || shape_.size() > 4) throw ShapeError("tensor rank must be 1..4");
    if (data_.size() != product(shape_)) {
        throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                         shape_string());
    }
}

bool Tensor::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string Tensor::shape_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape_.size(); ++i) os << (i ? "," : "") << shape_[i];
    os << ']';
    return os.str();
}

// ------------------------------------------------------------------- layers

ConvLayer::ConvLayer(std::size_t in, std::size_t out, std::size_t kh, std::size_t kw)
    : in_channels(in), out_channels(out), kernel_h(kh), kernel_w(kw), weights(out * in * kh * kw, 0.0), bias(out, 0.0) {
    validate();
}

void ConvLayer::validate() const {
    if (in_channels == 0 || out_channels == 0) throw ShapeError("conv layer needs at least one channel");
    if (kernel_h % 2 == 0 || kernel_w % 2 == 0) throw ShapeError("conv kernels must have odd extents");
    if (weights.size() != out_channels * in_channels * kernel_h * kernel_w)
        throw ShapeError("conv weight count does not match [out, in, kh, kw]");
    if (bias.size() != out_channels) throw ShapeError("conv bias count does not match out_channels");
}

DenseLayer::DenseLayer(std::size_t in, std::size_t out)
    : in_dim(in), out_dim(out), weights(out * in, 0.0), bias(out, 0.0) {
    validate();
}

void DenseLayer::validate() const {
    if (in_dim == 0 || out_dim == 0) throw ShapeError("dense layer needs nonzero dimensions");
    if (weights.size() != out_dim * in_dim) throw ShapeError("dense weight count does not match [out, in]");
    if (bias.size() != out_dim) throw ShapeError("dense bias count does not match out_dim");
}

Tensor conv2d_forward(const Tensor& input, const ConvLayer& layer) {
    const auto s = conv_shape(input, layer);
    Tensor out({s.batch, s.out_channels, s.ny, s.nx});
    kernels::conv2d_forward_parallel(s, input.values(), layer.weights, layer.bias, out.values());
    return out;
}

ConvGrads conv2d_backward(const Tensor& input, const ConvLayer& layer, const Tensor& upstream) {
    const auto s = conv_shape(input, layer);
    require_shape(upstream, {s.batch, s.out_channels, s.ny, s.nx}, "conv2d upstream gradient");
    ConvGrads g{Tensor(input.shape()), std::vector<double>(layer.weights.size()),
                std::vector<double>(layer.bias.size())};
    kernels::conv2d_backward_parallel(s, input.values(), layer.weights, upstream.values(), g.grad_input.values(),
                                      g.grad_weights, g.grad_bias);
    return g;
}

Tensor dense_forward(const Tensor& input, const DenseLayer& layer) {
    const auto s = dense_shape(input, layer);
    Tensor out({s.batch, s.out_dim});
    kernels::dense_forward_parallel(s, input.values(), layer.weights, layer.bias, out.values());
    return out;
}

DenseGrads dense_backward(const Tensor& input, const DenseLayer& layer, const Tensor& upstream) {
    const auto s = dense_shape(input, layer);
    require_shape(upstream, {s.batch, s.out_dim}, "dense upstream gradient");
    DenseGrads g{Tensor(input.shape()), std::vector<double>(layer.weights.size()),
                 std::vector<double>(layer.bias.size())};
    kernels::dense_backward_parallel(s, input.values(), layer.weights, upstream.values(), g.grad_input.values(),
                                     g.grad_weights, g.grad_bias);
    return g;
}

Tensor relu_forward(const Tensor& input) {
    Tensor out = input;
    for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
    return out;
}

Tensor relu_backward(const Tensor& pre_activation, const Tensor& upstream) {
    require_shape(upstream, pre_activation.shape(), "relu upstream gradient");
    Tensor out = upstream;
    auto pre = pre_activation.values();
    auto o = out.values();
    for (std::size_t i = 0; i < o.size(); ++i)
        if (!(pre[i] > 0.0)) o[i] = 0.0;
    return out;
}

void he_init(ConvLayer& layer, std::uint64_t seed) { fill_normal(layer, seed); }
void he_init(DenseLayer& layer, std::uint64_t seed) { fill_normal(layer, seed); }

// ------------------------------------------------------------------ network

std::size_t Layer::in_features() const {
    return std::visit([](const auto& l) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(l)>, ConvLayer>) return l.in_channels;
        else return l.in_dim;
    }, op);
}

std::size_t Layer::out_features() const {
    return std::visit([](const auto& l) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(l)>, ConvLayer>) return l.out_channels;
        else return l.out_dim;
    }, op);
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw ShapeError("network needs at least one layer");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        std::visit([](const auto& l) { l.validate(); }, layers_[i].op);
        if (i > 0 && layers_[i - 1].out_features() != layers_[i].in_features()) {
            throw ShapeError("layer " + std::to_string(i) + " expects " + std::to_string(layers_[i].in_features()) +
                             " input features, previous layer produces " +
                             std::to_string(layers_[i - 1].out_features()));
        }
    }
    if (layers_.back().activation != Activation::Linear) throw ShapeError("final layer must be Linear");
}

std::size_t Network::input_features() const { return layers_.empty() ? 0 : layers_.front().in_features(); }
std::size_t Network::output_features() const { return layers_.empty() ? 0 : layers_.back().out_features(); }

Tensor Network::forward(const Tensor& input) {
    if (layers_.empty()) throw StateError("forward on an empty network");
    Cache cache;
    cache.inputs.reserve(layers_.size());
    cache.pre_activations.reserve(layers_.size());
    Tensor x = input;
    for (const Layer& layer : layers_) {
        Tensor pre = std::visit([&](const auto& l) {
            if constexpr (std::is_same_v<std::decay_t<decltype(l)>, ConvLayer>) return conv2d_forward(x, l);
            else return dense_forward(x, l);
        }, layer.op);
        cache.inputs.push_back(std::move(x));
        x = layer.activation == Activation::ReLU ? relu_forward(pre) : pre;
        cache.pre_activations.push_back(std::move(pre));
    }
    cache_ = std::move(cache);
    return x;
}

Tensor Network::predict(const Tensor& input) const {
    if (layers_.empty()) throw StateError("predict on an empty network");
    Tensor x = input;
    for (const Layer& layer : layers_) {
        Tensor pre = std::visit([&](const auto& l) {
            if constexpr (std::is_same_v<std::decay_t<decltype(l)>, ConvLayer>) return conv2d_forward(x, l);
            else return dense_forward(x, l);
        }, layer.op);
        x = layer.activation == Activation::ReLU ? relu_forward(pre) : std::move(pre);
    }
    return x;
}

Gradients Network::backward(const Tensor& loss_grad) {
    if (!cache_) throw StateError("backward called without a preceding forward");
    Cache cache = std::move(*cache_);
    cache_.reset();
    require_shape(loss_grad, cache.pre_activations.back().shape(), "network loss gradient");

    Gradients grads(2 * layers_.size());
    Tensor upstream = loss_grad;
    for (std::size_t li = layers_.size(); li-- > 0;) {
        const Layer& layer = layers_[li];
        if (layer.activation == Activation::ReLU) upstream = relu_backward(cache.pre_activations[li], upstream);
        std::visit([&](const auto& l) {
            auto g = [&] {
                if constexpr (std::is_same_v<std::decay_t<decltype(l)>, ConvLayer>)
                    return conv2d_backward(cache.inputs[li], l, upstream);
                else
                    return dense_backward(cache.inputs[li], l, upstream);
            }();
            grads[2 * li] = std::move(g.grad_weights);
            grads[2 * li + 1] = std::move(g.grad_bias);
            upstream = std::move(g.grad_input);
        }, layer.op);
    }
    return grads;
}

std::vector<std::span<double>> Network::parameters() {
    std::vector<std::span<double>> out;
    for (Layer& layer : layers_) {
        std::visit([&](auto& l) {
            out.emplace_back(l.weights);
            out.emplace_back(l.bias);
        }, layer.op);
    }
    return out;
}

std::vector<std::span<const double>> Network::parameters() const {
    std::vector<std::span<const double>> out;
    for (const Layer& layer : layers_) {
        std::visit([&](const auto& l) {
            out.emplace_back(l.weights);
            out.emplace_back(l.bias);
        }, layer.op);
    }
    return out;
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const auto& p : parameters()) n += p.size();
    return n;
}

Network make_fcn(const FcnArchitecture& arch, std::uint64_t seed) {
    if (arch.depth < 1 || arch.channels < 1) throw ShapeError("FCN needs depth >= 1 and channels >= 1");
    std::mt19937_64 seeder(seed);
    std::vector<Layer> layers;
    for (std::size_t d = 0; d < arch.depth; ++d) {
        const std::size_t in = d == 0 ? 1 : arch.channels;
        const std::size_t out = d + 1 == arch.depth ? 1 : arch.channels;
        ConvLayer conv(in, out, arch.kernel, arch.kernel);
        he_init(conv, seeder());
        layers.push_back({std::move(conv), d + 1 == arch.depth ? Activation::Linear : Activation::ReLU});
    }
    return Network(std::move(layers));
}

Network make_coordinate_net(const CoordNetArchitecture& arch, std::uint64_t seed) {
    if (arch.hidden < 1) throw ShapeError("coordinate network needs hidden width >= 1");
    std::mt19937_64 seeder(seed);
    std::vector<Layer> layers;
    std::size_t in = 2;
    for (std::size_t d = 0; d < arch.hidden_layers; ++d) {
        DenseLayer dense(in, arch.hidden);
        he_init(dense, seeder());
        layers.push_back({std::move(dense), Activation::ReLU});
        in = arch.hidden;
    }
    DenseLayer head(in, 1);
    he_init(head, seeder());
    layers.push_back({std::move(head), Activation::Linear});
    return Network(std::move(layers));
}

// --------------------------------------------------------------------- adam

void adam_step(AdamState& state, const std::vector<std::span<double>>& params, const Gradients& grads) {
    if (params.size() != grads.size()) {
        throw ShapeError("adam: " + std::to_string(grads.size()) + " gradient blocks for " +
                         std::to_string(params.size()) + " parameter blocks");
    }
    for (std::size_t b = 0; b < params.size(); ++b) {
        if (params[b].size() != grads[b].size())
            throw ShapeError("adam: gradient block " + std::to_string(b) + " size mismatch");
    }
    if (state.first_moment.empty()) {
        for (const auto& p : params) {
            state.first_moment.emplace_back(p.size(), 0.0);
            state.second_moment.emplace_back(p.size(), 0.0);
        }
    } else if (state.first_moment.size() != params.size()) {
        throw ShapeError("adam: optimizer state does not match parameter layout");
    }

    state.step_count += 1;
    const double t = static_cast<double>(state.step_count);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t b = 0; b < params.size(); ++b) {
        auto& m = state.first_moment[b];
        auto& v = state.second_moment[b];
        if (m.size() != params[b].size()) throw ShapeError("adam: optimizer state does not match parameter layout");
        for (std::size_t i = 0; i < params[b].size(); ++i) {
            const double g = grads[b][i];
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
            const double m_hat = m[i] / c1;
            const double v_hat = v[i] / c2;
            params[b][i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
        }
    }
}

}  // namespace coldplate::nn
