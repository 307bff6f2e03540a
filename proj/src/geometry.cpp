#include "coldplate/geometry.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "coldplate/errors.hpp"

namespace coldplate::geometry {

namespace {

constexpr int kWidthMin = 4;
constexpr int kWidthMax = 20;
constexpr int kMarginMax = 15;
constexpr int kMaxAttempts = 1000;

// Left column of each of `count` strips of width `width` spread evenly over
// [margin, nx - margin). Gaps differ by at most one cell.
std::vector<int> strip_starts(int nx, int count, int width, int margin) {
    const int free_cells = nx - 2 * margin - count * width;
    std::vector<int> starts(static_cast<std::size_t>(count));
    for (int c = 0; c < count; ++c) {
        starts[static_cast<std::size_t>(c)] = margin + ((c + 1) * free_cells) / (count + 1) + c * width;
    }
    return starts;
}

void fill_rect(ChannelMask& mask, int i0, int i1, int j0, int j1) {
    for (int j = j0; j < j1; ++j)
        for (int i = i0; i < i1; ++i) mask.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), true);
}

}  // namespace

std::string to_string(Family family) {
    switch (family) {
        case Family::StraightParallel: return "straight";
        case Family::Serpentine: return "serpentine";
        case Family::BorderLoop: return "border";
    }
    return "unknown";
}

std::string describe(const ChannelParams& p) {
    std::ostringstream os;
    os << to_string(p.family) << ":count=" << p.channel_count << ",width=" << p.width_cells
       << ",margin=" << p.margin_cells;
    return os.str();
}

void check_feasible(const GridSpec& spec, const ChannelParams& p) {
    const int nx = static_cast<int>(spec.nx);
    const int ny = static_cast<int>(spec.ny);
    if (p.width_cells < 1) throw GeometryError("width_cells must be >= 1");
    if (p.channel_count < 1) throw GeometryError("channel_count must be >= 1");
    if (p.margin_cells < 0) throw GeometryError("margin_cells must be >= 0");

    const int usable_x = nx - 2 * p.margin_cells;
    const int usable_y = ny - 2 * p.margin_cells;
    switch (p.family) {
        case Family::StraightParallel:
            if (p.channel_count * p.width_cells > usable_x) {
                throw GeometryError("channels exceed grid: count*width = " +
                                    std::to_string(p.channel_count * p.width_cells) + " > " +
                                    std::to_string(usable_x) + " cells available between margins");
            }
            break;
        case Family::Serpentine:
            if (p.channel_count < 2) throw GeometryError("serpentine needs at least 2 passes");
            // one clear cell between neighbouring passes, otherwise they merge
            if (p.channel_count * p.width_cells + (p.channel_count + 1) > usable_x) {
                throw GeometryError("serpentine passes overlap: count*width + count+1 gaps = " +
                                    std::to_string(p.channel_count * p.width_cells + p.channel_count + 1) +
                                    " > " + std::to_string(usable_x) + " cells available between margins");
            }
            if (3 * p.width_cells > usable_y) {
                throw GeometryError("serpentine bends overlap: 3*width = " + std::to_string(3 * p.width_cells) +
                                    " > " + std::to_string(usable_y) + " rows available between margins");
            }
            break;
        case Family::BorderLoop:
            if (p.channel_count != 1) throw GeometryError("border loop takes channel_count = 1");
            if (2 * p.width_cells + 1 > usable_x || 2 * p.width_cells + 1 > usable_y) {
                throw GeometryError("border loop leaves no interior: 2*width+1 = " +
                                    std::to_string(2 * p.width_cells + 1) + " exceeds inset plate " +
                                    std::to_string(usable_x) + "x" + std::to_string(usable_y));
            }
            break;
    }
}

ChannelMask gen_mask(const GridSpec& spec, const ChannelParams& p) {
    spec.validate();
    check_feasible(spec, p);
    ChannelMask mask(spec, 0);
    const int nx = static_cast<int>(spec.nx);
    const int ny = static_cast<int>(spec.ny);
    const int w = p.width_cells;
    const int m = p.margin_cells;

    switch (p.family) {
        case Family::StraightParallel:
            for (int start : strip_starts(nx, p.channel_count, w, m)) fill_rect(mask, start, start + w, 0, ny);
            break;
        case Family::Serpentine: {
            const auto starts = strip_starts(nx, p.channel_count, w, m);
            for (int start : starts) fill_rect(mask, start, start + w, m, ny - m);
            for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
                const bool top = (c % 2 == 0);
                const int j0 = top ? ny - m - w : m;
                fill_rect(mask, starts[c], starts[c + 1] + w, j0, j0 + w);
            }
            break;
        }
        case Family::BorderLoop:
            fill_rect(mask, m, nx - m, m, m + w);
            fill_rect(mask, m, nx - m, ny - m - w, ny - m);
            fill_rect(mask, m, m + w, m, ny - m);
            fill_rect(mask, nx - m - w, nx - m, m, ny - m);
            break;
    }
    return mask;
}

std::vector<ChannelParams> sample_configs(int n, GeometrySeed seed, const GridSpec& spec) {
    if (n < 1) throw SamplingError("sample count must be >= 1");
    std::mt19937_64 rng(seed.seed);
    std::uniform_int_distribution<int> width_dist(kWidthMin, kWidthMax);
    std::uniform_int_distribution<int> margin_dist(0, kMarginMax);
    std::uniform_int_distribution<int> straight_count(1, 6);
    std::uniform_int_distribution<int> serpentine_count(2, 6);

    std::vector<ChannelParams> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const auto family = static_cast<Family>(k % 3);
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            ChannelParams p;
            p.family = family;
            p.width_cells = width_dist(rng);
            p.margin_cells = margin_dist(rng);
            p.channel_count = family == Family::StraightParallel ? straight_count(rng)
                              : family == Family::Serpentine     ? serpentine_count(rng)
                                                                 : 1;
            try {
                check_feasible(spec, p);
            } catch (const GeometryError&) {
                continue;
            }
            if (std::find(out.begin(), out.end(), p) != out.end()) continue;
            out.push_back(p);
            placed = true;
        }
        if (!placed) {
            throw SamplingError("could not draw distinct feasible config #" + std::to_string(k) + " (" +
                                to_string(family) + ") within " + std::to_string(kMaxAttempts) + " attempts");
        }
    }
    return out;
}

double mask_coverage(const ChannelMask& mask) {
    if (mask.size() == 0) return 0.0;
    return static_cast<double>(mask.count_ones()) / static_cast<double>(mask.size());
}

}  // namespace coldplate::geometry
