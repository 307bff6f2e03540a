#include <gtest/gtest.h>

#include <random>

#include "coldplate/kernels.hpp"
#include "support/oracles.hpp"

using namespace coldplate::nn::kernels;

namespace {


void expect_identical(const std::vector<double>& a, const std::vector<double>& b) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i], b[i]) << "index " << i;
}

}  // namespace

class ConvKernels : public ::testing::TestWithParam<ConvShape> {};

TEST_P(ConvKernels, ParallelMatchesReferenceBitForBit) {
    const ConvShape s = GetParam();
    std::mt19937_64 rng(s.kh * 31 + s.nx);
    const auto in = oracle::random_vector(s.input_size(), rng);
    const auto w = oracle::random_vector(s.weight_size(), rng);
    const auto b = oracle::random_vector(s.out_channels, rng);
    const auto up = oracle::random_vector(s.output_size(), rng);

    std::vector<double> o1(s.output_size()), o2(s.output_size());
    conv2d_forward_reference(s, in, w, b, o1);
    conv2d_forward_parallel(s, in, w, b, o2);
    for (std::size_t i = 0; i < o1.size(); ++i) EXPECT_NEAR(o1[i], o2[i], 1e-12);

    std::vector<double> gi1(s.input_size(), 9.0), gw1(s.weight_size(), 9.0), gb1(s.out_channels, 9.0);
    std::vector<double> gi2(s.input_size(), -9.0), gw2(s.weight_size(), -9.0), gb2(s.out_channels, -9.0);
    conv2d_backward_reference(s, in, w, up, gi1, gw1, gb1);
    conv2d_backward_parallel(s, in, w, up, gi2, gw2, gb2);
    for (std::size_t i = 0; i < gi1.size(); ++i) EXPECT_NEAR(gi1[i], gi2[i], 1e-12);
    for (std::size_t i = 0; i < gw1.size(); ++i) EXPECT_NEAR(gw1[i], gw2[i], 1e-10);
    for (std::size_t i = 0; i < gb1.size(); ++i) EXPECT_NEAR(gb1[i], gb2[i], 1e-10);
}

TEST_P(ConvKernels, ParallelIsRepeatable) {
    const ConvShape s = GetParam();
    std::mt19937_64 rng(77);
    const auto in = oracle::random_vector(s.input_size(), rng);
    const auto w = oracle::random_vector(s.weight_size(), rng);
    const auto b = oracle::random_vector(s.out_channels, rng);
    const auto up = oracle::random_vector(s.output_size(), rng);
    std::vector<double> o1(s.output_size()), o2(s.output_size());
    conv2d_forward_parallel(s, in, w, b, o1);
    conv2d_forward_parallel(s, in, w, b, o2);
    expect_identical(o1, o2);
    std::vector<double> gi1(s.input_size()), gw1(s.weight_size()), gb1(s.out_channels);
    std::vector<double> gi2(s.input_size()), gw2(s.weight_size()), gb2(s.out_channels);
    conv2d_backward_parallel(s, in, w, up, gi1, gw1, gb1);
    conv2d_backward_parallel(s, in, w, up, gi2, gw2, gb2);
    expect_identical(gi1, gi2);
    expect_identical(gw1, gw2);
    expect_identical(gb1, gb2);
}

INSTANTIATE_TEST_SUITE_P(Shapes, ConvKernels,
                         ::testing::Values(ConvShape{1, 1, 1, 1, 1, 1, 1}, ConvShape{1, 1, 1, 3, 3, 3, 3},
                                           ConvShape{2, 3, 4, 6, 5, 3, 3}, ConvShape{3, 2, 2, 7, 11, 5, 3},
                                           ConvShape{1, 4, 3, 4, 4, 9, 9}, ConvShape{2, 1, 16, 13, 10, 9, 9}));

TEST(DenseKernels, ParallelMatchesReference) {
    for (const DenseShape s : {DenseShape{1, 1, 1}, DenseShape{5, 2, 7}, DenseShape{33, 64, 64}}) {
        std::mt19937_64 rng(s.batch);
        const auto in = oracle::random_vector(s.batch * s.in_dim, rng);
        const auto w = oracle::random_vector(s.in_dim * s.out_dim, rng);
        const auto b = oracle::random_vector(s.out_dim, rng);
        const auto up = oracle::random_vector(s.batch * s.out_dim, rng);
        std::vector<double> o1(s.batch * s.out_dim), o2(o1.size());
        dense_forward_reference(s, in, w, b, o1);
        dense_forward_parallel(s, in, w, b, o2);
        for (std::size_t i = 0; i < o1.size(); ++i) EXPECT_NEAR(o1[i], o2[i], 1e-12);
        std::vector<double> gi1(in.size()), gw1(w.size()), gb1(b.size());
        std::vector<double> gi2(in.size()), gw2(w.size()), gb2(b.size());
        dense_backward_reference(s, in, w, up, gi1, gw1, gb1);
        dense_backward_parallel(s, in, w, up, gi2, gw2, gb2);
        for (std::size_t i = 0; i < gi1.size(); ++i) EXPECT_NEAR(gi1[i], gi2[i], 1e-12);
        for (std::size_t i = 0; i < gw1.size(); ++i) EXPECT_NEAR(gw1[i], gw2[i], 1e-11);
        for (std::size_t i = 0; i < gb1.size(); ++i) EXPECT_NEAR(gb1[i], gb2[i], 1e-11);
    }
}

TEST(ConvKernels, ReferenceHandCount) {
    const ConvShape s{1, 1, 1, 3, 3, 3, 3};
    std::vector<double> in(9, 1.0), w(9, 1.0), b{0.0}, out(9);
    conv2d_forward_reference(s, in, w, b, out);
    EXPECT_EQ(out[4], 9.0);
    EXPECT_EQ(out[0], 4.0);
    EXPECT_EQ(out[1], 6.0);
}
