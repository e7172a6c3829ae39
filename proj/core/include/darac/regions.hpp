#ifndef DARAC_REGIONS_HPP
#define DARAC_REGIONS_HPP

#include <vector>

#include "darac/tensor.hpp"

namespace darac {

/// Rectangular area in feature-map cell coordinates; [x0, x1) x [y0, y1).
/// scale_index 0 marks the global region, 1..num_scales the grid scales.
struct Region {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;
    int scale_index = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    int cells() const { return width() * height(); }

    bool operator==(const Region&) const = default;
};

/// Multi-scale region layout over a W x H map: the global region first,
/// then the sliding-window grid sorted by (scale_index, y0, x0).
struct RegionGrid {
    std::vector<Region> regions;
    int map_width = 0;
    int map_height = 0;

    std::size_t size() const { return regions.size(); }
};

/// Compute the multi-scale sliding-window regions over a W x H map.
///
/// For scale l the square region side is 2*min(W,H)/(l+1). Each scale places
/// l positions along the shorter axis and l+d along the longer one, where d
/// is chosen once (from scale 1) so that consecutive regions along the longer
/// axis overlap as close as possible to `target_overlap` of the side; square
/// maps get d = 0. Positions are evenly spaced with the first and last flush
/// to the borders. Continuous coordinates round outward (floor starts, ceil
/// ends) and never collapse below one cell; rectangles that round to the same
/// cells within a scale are kept once.
std::vector<Region> rmac_regions(int width, int height, int num_scales = 3,
                                 double target_overlap = 0.4);

/// Prepend the global region covering the whole map. `regions` must all lie
/// within the W x H bounds.
RegionGrid with_global(const std::vector<Region>& regions, int width, int height);

} // namespace darac

#endif // DARAC_REGIONS_HPP
