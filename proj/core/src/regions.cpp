#include "darac/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <tuple>

#include "darac/errors.hpp"

namespace darac {

namespace {

// Continuous start offsets for `positions` windows of length `side` spread
// over an axis of length `length`, first and last flush with the borders.
std::vector<double> axis_starts(int positions, double length, double side) {
    std::vector<double> starts;
    starts.reserve(static_cast<std::size_t>(positions));
    if (positions == 1) {
        starts.push_back((length - side) / 2.0);
        return starts;
    }
    for (int k = 0; k < positions; ++k) {
        starts.push_back(static_cast<double>(k) * (length - side) /
                         static_cast<double>(positions - 1));
    }
    return starts;
}

// Extra windows along the longer axis, picked so that neighbouring windows
// at the first scale overlap as close as possible to the target fraction.
int pick_long_axis_surplus(double long_dim, double short_dim, double target_overlap) {
    const double side = short_dim;
    int best_d = 1;
    double best_gap = -1.0;
    for (int d = 1; d <= 5; ++d) {
        const double stride = (long_dim - side) / static_cast<double>(d);
        const double overlap = (side - stride) / side;
        const double gap = std::abs(overlap - target_overlap);
        if (best_gap < 0.0 || gap < best_gap) {
            best_gap = gap;
            best_d = d;
        }
    }
    return best_d;
}

int clamp_int(int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); }

} // namespace

std::vector<Region> rmac_regions(int width, int height, int num_scales,
                                 double target_overlap) {
    if (width < 1 || height < 1) {
        throw DimensionError("rmac_regions: map dimensions must be positive");
    }
    if (num_scales < 1) {
        throw DimensionError("rmac_regions: num_scales must be positive");
    }
    if (!(target_overlap > 0.0) || !(target_overlap < 1.0)) {
        throw DomainError("rmac_regions: target_overlap must lie in (0, 1)");
    }

    const double short_dim = static_cast<double>(std::min(width, height));
    const double long_dim = static_cast<double>(std::max(width, height));
    const bool wide = width >= height;

    int surplus = 0;
    if (width != height) {
        surplus = pick_long_axis_surplus(long_dim, short_dim, target_overlap);
    }

    std::vector<Region> regions;
    for (int l = 1; l <= num_scales; ++l) {
        const double side = 2.0 * short_dim / static_cast<double>(l + 1);
        const int p_short = l;
        const int p_long = l + surplus;
        const std::vector<double> short_starts = axis_starts(p_short, short_dim, side);
        const std::vector<double> long_starts = axis_starts(p_long, long_dim, side);
        const std::vector<double>& x_starts = wide ? long_starts : short_starts;
        const std::vector<double>& y_starts = wide ? short_starts : long_starts;

        std::vector<Region> scale_regions;
        for (double sy : y_starts) {
            for (double sx : x_starts) {
                Region r;
                r.x0 = clamp_int(static_cast<int>(std::floor(sx)), 0, width - 1);
                r.y0 = clamp_int(static_cast<int>(std::floor(sy)), 0, height - 1);
                r.x1 = clamp_int(static_cast<int>(std::ceil(sx + side)), r.x0 + 1, width);
                r.y1 = clamp_int(static_cast<int>(std::ceil(sy + side)), r.y0 + 1, height);
                r.scale_index = l;
                if (std::find(scale_regions.begin(), scale_regions.end(), r) ==
                    scale_regions.end()) {
                    scale_regions.push_back(r);
                }
            }
        }
        std::sort(scale_regions.begin(), scale_regions.end(),
                  [](const Region& a, const Region& b) {
                      return std::tie(a.y0, a.x0, a.y1, a.x1) <
                             std::tie(b.y0, b.x0, b.y1, b.x1);
                  });
        regions.insert(regions.end(), scale_regions.begin(), scale_regions.end());
    }
    return regions;
}

RegionGrid with_global(const std::vector<Region>& regions, int width, int height) {
    if (width < 1 || height < 1) {
        throw DimensionError("with_global: map dimensions must be positive");
    }
    for (const Region& r : regions) {
        if (r.x0 < 0 || r.y0 < 0 || r.x1 > width || r.y1 > height ||
            r.x0 >= r.x1 || r.y0 >= r.y1) {
            throw DimensionError("with_global: region out of bounds");
        }
    }
    RegionGrid grid;
    grid.map_width = width;
    grid.map_height = height;
    grid.regions.reserve(regions.size() + 1);
    grid.regions.push_back(Region{0, 0, width, height, 0});
    grid.regions.insert(grid.regions.end(), regions.begin(), regions.end());
    return grid;
}

} // namespace darac
