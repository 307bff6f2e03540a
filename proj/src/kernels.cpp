#include "coldplate/kernels.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace coldplate::nn::kernels {

namespace {

using idx_t = std::int64_t;

// Copies [planes, ny, nx] into zero-padded [planes, ny + 2 py, nx + 2 px].
std::vector<double> pad_planes(std::span<const double> src, std::size_t planes, std::size_t ny, std::size_t nx,
                               std::size_t py, std::size_t px) {
    const std::size_t pny = ny + 2 * py, pnx = nx + 2 * px;
    std::vector<double> out(planes * pny * pnx, 0.0);
    for (std::size_t p = 0; p < planes; ++p)
        for (std::size_t y = 0; y < ny; ++y)
            std::copy_n(src.data() + (p * ny + y) * nx, nx, out.data() + (p * pny + y + py) * pnx + px);
    return out;
}

}  // namespace

// ---------------------------------------------------------------- reference

void conv2d_forward_reference(const ConvShape& s, std::span<const double> input, std::span<const double> weights,
                              std::span<const double> bias, std::span<double> output) {
    const idx_t ny = static_cast<idx_t>(s.ny), nx = static_cast<idx_t>(s.nx);
    const idx_t kh = static_cast<idx_t>(s.kh), kw = static_cast<idx_t>(s.kw);
    const idx_t py = kh / 2, px = kw / 2;
    for (std::size_t b = 0; b < s.batch; ++b)
        for (std::size_t co = 0; co < s.out_channels; ++co)
            for (idx_t y = 0; y < ny; ++y)
                for (idx_t x = 0; x < nx; ++x) {
                    double acc = bias[co];
                    for (std::size_t ci = 0; ci < s.in_channels; ++ci)
                        for (idx_t ky = 0; ky < kh; ++ky)
                            for (idx_t kx = 0; kx < kw; ++kx) {
                                const idx_t iy = y + ky - py, ix = x + kx - px;
                                if (iy < 0 || iy >= ny || ix < 0 || ix >= nx) continue;
                                acc += weights[((co * s.in_channels + ci) * s.kh + ky) * s.kw + kx] *
                                       input[((b * s.in_channels + ci) * s.ny + iy) * s.nx + ix];
                            }
                    output[((b * s.out_channels + co) * s.ny + y) * s.nx + x] = acc;
                }
}

void conv2d_backward_reference(const ConvShape& s, std::span<const double> input, std::span<const double> weights,
                               std::span<const double> upstream, std::span<double> grad_input,
                               std::span<double> grad_weights, std::span<double> grad_bias) {
    const idx_t ny = static_cast<idx_t>(s.ny), nx = static_cast<idx_t>(s.nx);
    const idx_t kh = static_cast<idx_t>(s.kh), kw = static_cast<idx_t>(s.kw);
    const idx_t py = kh / 2, px = kw / 2;
    std::fill(grad_input.begin(), grad_input.end(), 0.0);
    std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
    std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
    for (std::size_t b = 0; b < s.batch; ++b)
        for (std::size_t co = 0; co < s.out_channels; ++co)
            for (idx_t y = 0; y < ny; ++y)
                for (idx_t x = 0; x < nx; ++x) {
                    const double g = upstream[((b * s.out_channels + co) * s.ny + y) * s.nx + x];
                    grad_bias[co] += g;
                    for (std::size_t ci = 0; ci < s.in_channels; ++ci)
                        for (idx_t ky = 0; ky < kh; ++ky)
                            for (idx_t kx = 0; kx < kw; ++kx) {
                                const idx_t iy = y + ky - py, ix = x + kx - px;
                                if (iy < 0 || iy >= ny || ix < 0 || ix >= nx) continue;
                                const std::size_t wi = ((co * s.in_channels + ci) * s.kh + ky) * s.kw + kx;
                                const std::size_t ii = ((b * s.in_channels + ci) * s.ny + iy) * s.nx + ix;
                                grad_weights[wi] += g * input[ii];
                                grad_input[ii] += g * weights[wi];
                            }
                }
}

void dense_forward_reference(const DenseShape& s, std::span<const double> input, std::span<const double> weights,
                             std::span<const double> bias, std::span<double> output) {
    for (std::size_t b = 0; b < s.batch; ++b)
        for (std::size_t o = 0; o < s.out_dim; ++o) {
            double acc = bias[o];
            for (std::size_t i = 0; i < s.in_dim; ++i) acc += weights[o * s.in_dim + i] * input[b * s.in_dim + i];
            output[b * s.out_dim + o] = acc;
        }
}

void dense_backward_reference(const DenseShape& s, std::span<const double> input, std::span<const double> weights,
                              std::span<const double> upstream, std::span<double> grad_input,
                              std::span<double> grad_weights, std::span<double> grad_bias) {
    std::fill(grad_input.begin(), grad_input.end(), 0.0);
    std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
    std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
    for (std::size_t b = 0; b < s.batch; ++b)
        for (std::size_t o = 0; o < s.out_dim; ++o) {
            const double g = upstream[b * s.out_dim + o];
            grad_bias[o] += g;
            for (std::size_t i = 0; i < s.in_dim; ++i) {
                grad_weights[o * s.in_dim + i] += g * input[b * s.in_dim + i];
                grad_input[b * s.in_dim + i] += g * weights[o * s.in_dim + i];
            }
        }
}

// ----------------------------------------------------------------- parallel

void conv2d_forward_parallel(const ConvShape& s, std::span<const double> input, std::span<const double> weights,
                             std::span<const double> bias, std::span<double> output) {
    const std::size_t py = s.kh / 2, px = s.kw / 2;
    const std::size_t pny = s.ny + 2 * py, pnx = s.nx + 2 * px;
    const std::size_t plane = s.ny * s.nx;
    const auto padded = pad_planes(input, s.batch * s.in_channels, s.ny, s.nx, py, px);
    const idx_t jobs = static_cast<idx_t>(s.batch * s.out_channels);

#pragma omp parallel for schedule(static)
    for (idx_t job = 0; job < jobs; ++job) {
        const std::size_t b = static_cast<std::size_t>(job) / s.out_channels;
        const std::size_t co = static_cast<std::size_t>(job) % s.out_channels;
        double* out = output.data() + (b * s.out_channels + co) * plane;
        std::fill_n(out, plane, bias[co]);
        for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
            const double* src = padded.data() + (b * s.in_channels + ci) * pny * pnx;
            const double* w = weights.data() + (co * s.in_channels + ci) * s.kh * s.kw;
            for (std::size_t y = 0; y < s.ny; ++y) {
                double* out_row = out + y * s.nx;
                for (std::size_t ky = 0; ky < s.kh; ++ky) {
                    const double* in_row = src + (y + ky) * pnx;
                    for (std::size_t kx = 0; kx < s.kw; ++kx) {
                        const double wv = w[ky * s.kw + kx];
                        const double* in_ptr = in_row + kx;
#pragma omp simd
                        for (std::size_t x = 0; x < s.nx; ++x) out_row[x] += wv * in_ptr[x];
                    }
                }
            }
        }
    }
}

void conv2d_backward_parallel(const ConvShape& s, std::span<const double> input, std::span<const double> weights,
                              std::span<const double> upstream, std::span<double> grad_input,
                              std::span<double> grad_weights, std::span<double> grad_bias) {
    const std::size_t py = s.kh / 2, px = s.kw / 2;
    const std::size_t pny = s.ny + 2 * py, pnx = s.nx + 2 * px;
    const std::size_t plane = s.ny * s.nx;
    const std::size_t ksize = s.kh * s.kw;
    const auto padded_in = pad_planes(input, s.batch * s.in_channels, s.ny, s.nx, py, px);
    const auto padded_up = pad_planes(upstream, s.batch * s.out_channels, s.ny, s.nx, py, px);

    // bias and weight gradients: one (co, ci) block per job, batch summed in order
    const idx_t wjobs = static_cast<idx_t>(s.out_channels * s.in_channels);
#pragma omp parallel for schedule(static)
    for (idx_t job = 0; job < wjobs; ++job) {
        const std::size_t co = static_cast<std::size_t>(job) / s.in_channels;
        const std::size_t ci = static_cast<std::size_t>(job) % s.in_channels;
        double* gw = grad_weights.data() + (co * s.in_channels + ci) * ksize;
        std::fill_n(gw, ksize, 0.0);
        for (std::size_t b = 0; b < s.batch; ++b) {
            const double* up = upstream.data() + (b * s.out_channels + co) * plane;
            const double* src = padded_in.data() + (b * s.in_channels + ci) * pny * pnx;
            for (std::size_t ky = 0; ky < s.kh; ++ky)
                for (std::size_t kx = 0; kx < s.kw; ++kx) {
                    double acc = 0.0;
                    for (std::size_t y = 0; y < s.ny; ++y) {
                        const double* up_row = up + y * s.nx;
                        const double* in_ptr = src + (y + ky) * pnx + kx;
#pragma omp simd reduction(+ : acc)
                        for (std::size_t x = 0; x < s.nx; ++x) acc += up_row[x] * in_ptr[x];
                    }
                    gw[ky * s.kw + kx] += acc;
                }
        }
    }

    for (std::size_t co = 0; co < s.out_channels; ++co) {
        double acc = 0.0;
        for (std::size_t b = 0; b < s.batch; ++b) {
            const double* up = upstream.data() + (b * s.out_channels + co) * plane;
            for (std::size_t i = 0; i < plane; ++i) acc += up[i];
        }
        grad_bias[co] = acc;
    }

    // input gradient: correlate padded upstream with the flipped kernel
    const idx_t ijobs = static_cast<idx_t>(s.batch * s.in_channels);
#pragma omp parallel for schedule(static)
    for (idx_t job = 0; job < ijobs; ++job) {
        const std::size_t b = static_cast<std::size_t>(job) / s.in_channels;
        const std::size_t ci = static_cast<std::size_t>(job) % s.in_channels;
        double* gi = grad_input.data() + (b * s.in_channels + ci) * plane;
        std::fill_n(gi, plane, 0.0);
        for (std::size_t co = 0; co < s.out_channels; ++co) {
            const double* src = padded_up.data() + (b * s.out_channels + co) * pny * pnx;
            const double* w = weights.data() + (co * s.in_channels + ci) * ksize;
            for (std::size_t y = 0; y < s.ny; ++y) {
                double* gi_row = gi + y * s.nx;
                for (std::size_t ky = 0; ky < s.kh; ++ky) {
                    const double* up_row = src + (y + ky) * pnx;
                    for (std::size_t kx = 0; kx < s.kw; ++kx) {
                        const double wv = w[(s.kh - 1 - ky) * s.kw + (s.kw - 1 - kx)];
                        const double* up_ptr = up_row + kx;
#pragma omp simd
                        for (std::size_t x = 0; x < s.nx; ++x) gi_row[x] += wv * up_ptr[x];
                    }
                }
            }
        }
    }
}

void dense_forward_parallel(const DenseShape& s, std::span<const double> input, std::span<const double> weights,
                            std::span<const double> bias, std::span<double> output) {
    const idx_t rows = static_cast<idx_t>(s.batch);
#pragma omp parallel for schedule(static)
    for (idx_t bi = 0; bi < rows; ++bi) {
        const std::size_t b = static_cast<std::size_t>(bi);
        const double* x = input.data() + b * s.in_dim;
        double* y = output.data() + b * s.out_dim;
        for (std::size_t o = 0; o < s.out_dim; ++o) {
            const double* w = weights.data() + o * s.in_dim;
            double acc = 0.0;
#pragma omp simd reduction(+ : acc)
            for (std::size_t i = 0; i < s.in_dim; ++i) acc += w[i] * x[i];
            y[o] = bias[o] + acc;
        }
    }
}

void dense_backward_parallel(const DenseShape& s, std::span<const double> input, std::span<const double> weights,
                             std::span<const double> upstream, std::span<double> grad_input,
                             std::span<double> grad_weights, std::span<double> grad_bias) {
    const idx_t outs = static_cast<idx_t>(s.out_dim);
#pragma omp parallel for schedule(static)
    for (idx_t oi = 0; oi < outs; ++oi) {
        const std::size_t o = static_cast<std::size_t>(oi);
        double* gw = grad_weights.data() + o * s.in_dim;
        std::fill_n(gw, s.in_dim, 0.0);
        double gb = 0.0;
        for (std::size_t b = 0; b < s.batch; ++b) {
            const double g = upstream[b * s.out_dim + o];
            const double* x = input.data() + b * s.in_dim;
            gb += g;
#pragma omp simd
            for (std::size_t i = 0; i < s.in_dim; ++i) gw[i] += g * x[i];
        }
        grad_bias[o] = gb;
    }

    const idx_t rows = static_cast<idx_t>(s.batch);
#pragma omp parallel for schedule(static)
    for (idx_t bi = 0; bi < rows; ++bi) {
        const std::size_t b = static_cast<std::size_t>(bi);
        double* gx = grad_input.data() + b * s.in_dim;
        std::fill_n(gx, s.in_dim, 0.0);
        for (std::size_t o = 0; o < s.out_dim; ++o) {
            const double g = upstream[b * s.out_dim + o];
            const double* w = weights.data() + o * s.in_dim;
#pragma omp simd
            for (std::size_t i = 0; i < s.in_dim; ++i) gx[i] += g * w[i];
        }
    }
}

}  // namespace coldplate::nn::kernels
