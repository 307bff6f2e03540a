#include <gtest/gtest.h>

#include "coldplate/errors.hpp"
#include "coldplate/geometry.hpp"

using namespace coldplate;
using namespace coldplate::geometry;

namespace {

bool mirror_symmetric(const ChannelMask& m) {
    const auto& s = m.spec();
    for (std::size_t j = 0; j < s.ny; ++j)
        for (std::size_t i = 0; i < s.nx; ++i)
            if (m(i, j) != m(s.nx - 1 - i, j)) return false;
    return true;
}

}  // namespace

TEST(GenMask, StraightParallelCountsCells) {
    const ChannelMask m = gen_mask(grid_spec_default(), {Family::StraightParallel, 2, 10, 10});
    EXPECT_EQ(m.count_ones(), 4060u);
    EXPECT_NEAR(mask_coverage(m), 4060.0 / 31262.0, 1e-15);
    EXPECT_NEAR(mask_coverage(m), 0.12987, 1e-5);
    // full-height strips
    for (std::size_t i = 0; i < m.spec().nx; ++i) EXPECT_EQ(m(i, 0), m(i, 202));
}

TEST(GenMask, FullWidthChannelCoversPlate) {
    const ChannelMask m = gen_mask(grid_spec_default(), {Family::StraightParallel, 1, 154, 0});
    EXPECT_EQ(m.count_ones(), m.size());
    EXPECT_EQ(mask_coverage(m), 1.0);
}

TEST(GenMask, InfeasibleLayoutsAreRejected) {
    const GridSpec s = grid_spec_default();
    EXPECT_THROW(gen_mask(s, {Family::StraightParallel, 20, 10, 0}), GeometryError);
    EXPECT_THROW(gen_mask(s, {Family::StraightParallel, 1, 0, 0}), GeometryError);
    EXPECT_THROW(gen_mask(s, {Family::Serpentine, 1, 10, 0}), GeometryError);
    EXPECT_THROW(gen_mask(s, {Family::BorderLoop, 1, 80, 0}), GeometryError);
    EXPECT_THROW(gen_mask(s, {Family::BorderLoop, 2, 10, 0}), GeometryError);
    try {
        gen_mask(s, {Family::StraightParallel, 20, 10, 0});
    } catch (const GeometryError& e) {
        EXPECT_NE(std::string(e.what()).find("200"), std::string::npos);
    }
}

TEST(GenMask, EvenlySpacedStraightChannelsAreMirrorSymmetric) {
    // free cells divisible by count + 1 in every case below
    const GridSpec s = grid_spec_default();
    EXPECT_TRUE(mirror_symmetric(gen_mask(s, {Family::StraightParallel, 2, 10, 10})));  // 114 / 3
    EXPECT_TRUE(mirror_symmetric(gen_mask(s, {Family::StraightParallel, 1, 14, 0})));   // 140 / 2
}

TEST(GenMask, SerpentineIsOneConnectedPath) {
    const GridSpec s{60, 50, 1e-3, 1e-3};
    const ChannelMask m = gen_mask(s, {Family::Serpentine, 3, 4, 2});
    // flood fill from the first channel cell reaches every channel cell
    std::vector<std::uint8_t> seen(m.size(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t c = 0; c < m.size(); ++c)
        if (m[c]) {
            stack.push_back(c);
            seen[c] = 1;
            break;
        }
    std::size_t reached = 0;
    while (!stack.empty()) {
        const std::size_t c = stack.back();
        stack.pop_back();
        ++reached;
        const auto [i, j] = s.unindex(c);
        auto visit = [&](std::size_t ni, std::size_t nj) {
            const std::size_t n = s.index(ni, nj);
            if (m[n] && !seen[n]) {
                seen[n] = 1;
                stack.push_back(n);
            }
        };
        if (i > 0) visit(i - 1, j);
        if (i + 1 < s.nx) visit(i + 1, j);
        if (j > 0) visit(i, j - 1);
        if (j + 1 < s.ny) visit(i, j + 1);
    }
    EXPECT_EQ(reached, m.count_ones());
    // vertical passes stop at the margin
    EXPECT_EQ(m(s.nx / 2, 0), 0);
}

TEST(GenMask, BorderLoopRing) {
    const GridSpec s{20, 30, 1e-3, 1e-3};
    const ChannelMask m = gen_mask(s, {Family::BorderLoop, 1, 2, 3});
    // outer 14x24 minus inner 10x20
    EXPECT_EQ(m.count_ones(), 14u * 24u - 10u * 20u);
    EXPECT_EQ(m(3, 3), 1);
    EXPECT_EQ(m(2, 3), 0);
    EXPECT_EQ(m(10, 15), 0);
}

TEST(GenMask, Deterministic) {
    const GridSpec s = grid_spec_default();
    const ChannelParams p{Family::Serpentine, 4, 7, 9};
    EXPECT_EQ(gen_mask(s, p), gen_mask(s, p));
}

TEST(SampleConfigs, DeterministicDistinctAndFeasible) {
    const auto a = sample_configs(100, {42});
    const auto b = sample_configs(100, {42});
    ASSERT_EQ(a.size(), 100u);
    EXPECT_EQ(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(static_cast<int>(a[i].family), static_cast<int>(i % 3));
        EXPECT_GE(a[i].width_cells, 4);
        EXPECT_LE(a[i].width_cells, 20);
        if (a[i].family == Family::StraightParallel) {
            EXPECT_GE(a[i].channel_count, 1);
            EXPECT_LE(a[i].channel_count, 6);
        } else if (a[i].family == Family::Serpentine) {
            EXPECT_GE(a[i].channel_count, 2);
            EXPECT_LE(a[i].channel_count, 6);
        }
        for (std::size_t j = i + 1; j < a.size(); ++j) EXPECT_FALSE(a[i] == a[j]) << i << " vs " << j;
        const ChannelMask m = gen_mask(grid_spec_default(), a[i]);
        EXPECT_GE(m.count_ones(), 1u);
    }
    EXPECT_NE(sample_configs(100, {43}), a);
}

TEST(SampleConfigs, SingleRecord) {
    const auto one = sample_configs(1, {7});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_NO_THROW(gen_mask(grid_spec_default(), one.front()));
}

TEST(SampleConfigs, ExhaustedBudgetIsASamplingError) {
    // a 12x12 grid admits only a handful of straight layouts
    EXPECT_THROW(sample_configs(200, {1}, GridSpec{12, 12, 1e-3, 1e-3}), SamplingError);
    EXPECT_THROW(sample_configs(0, {1}), SamplingError);
}

TEST(MaskCoverage, Extremes) {
    const GridSpec s{4, 3, 1e-3, 1e-3};
    EXPECT_EQ(mask_coverage(ChannelMask(s, 1)), 1.0);
    EXPECT_EQ(mask_coverage(ChannelMask(s, 0)), 0.0);
}
