#include "darac/pooling.hpp"

#include <algorithm>

#include "darac/errors.hpp"
#include "darac/postprocess.hpp"

namespace darac {

const char* pooling_variant_name(PoolingVariant variant) {
    switch (variant) {
        case PoolingVariant::AvgGlobal: return "avg-global";
        case PoolingVariant::MaxGlobal: return "max-global";
        case PoolingVariant::AvgMaxGlobal: return "avgmax-global";
        case PoolingVariant::AvgRegional: return "avg-regional";
        case PoolingVariant::MaxRegional: return "max-regional";
        case PoolingVariant::AvgMaxRegional: return "avgmax-regional";
    }
    throw ContractError("pooling_variant_name: unknown variant");
}

const std::vector<PoolingVariant>& all_pooling_variants() {
    static const std::vector<PoolingVariant> variants = {
        PoolingVariant::AvgGlobal,      PoolingVariant::MaxGlobal,
        PoolingVariant::AvgMaxGlobal,   PoolingVariant::AvgRegional,
        PoolingVariant::MaxRegional,    PoolingVariant::AvgMaxRegional,
    };
    return variants;
}

Vector pool_region(const FeatureMapSet& fm, const Region& region, PoolMode mode) {
    if (region.x0 < 0 || region.y0 < 0 || region.x1 > fm.width() ||
        region.y1 > fm.height() || region.x0 >= region.x1 || region.y0 >= region.y1) {
        throw DimensionError("pool_region: region out of bounds");
    }
    const int channels = fm.channels();
    Vector out(static_cast<std::size_t>(channels), 0.0);
    const double cells = static_cast<double>(region.cells());
    for (int c = 0; c < channels; ++c) {
        if (mode == PoolMode::Max) {
            double best = fm.at(c, region.y0, region.x0);
            for (int y = region.y0; y < region.y1; ++y) {
                for (int x = region.x0; x < region.x1; ++x) {
                    best = std::max(best, fm.at(c, y, x));
                }
            }
            out[static_cast<std::size_t>(c)] = best;
        } else {
            double sum = 0.0;
            for (int y = region.y0; y < region.y1; ++y) {
                for (int x = region.x0; x < region.x1; ++x) {
                    sum += fm.at(c, y, x);
                }
            }
            out[static_cast<std::size_t>(c)] = sum / cells;
        }
    }
    return out;
}

PooledMatrix pooled_matrix(const FeatureMapSet& fm, const RegionGrid& grid) {
    if (grid.map_width != fm.width() || grid.map_height != fm.height()) {
        throw DimensionError("pooled_matrix: grid does not match feature-map size");
    }
    const int region_count = static_cast<int>(grid.size());
    if (region_count < 1) {
        throw DimensionError("pooled_matrix: empty grid");
    }
    const int channels = fm.channels();
    PooledMatrix out(2 * region_count, channels);
    for (int r = 0; r < region_count; ++r) {
        const Vector maxed = pool_region(fm, grid.regions[static_cast<std::size_t>(r)],
                                         PoolMode::Max);
        const Vector averaged = pool_region(fm, grid.regions[static_cast<std::size_t>(r)],
                                            PoolMode::Avg);
        for (int c = 0; c < channels; ++c) {
            out.at(r, c) = maxed[static_cast<std::size_t>(c)];
            out.at(region_count + r, c) = averaged[static_cast<std::size_t>(c)];
        }
    }
    return out;
}

namespace {

void add_in_place(Vector& acc, const Vector& v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
}

} // namespace

Vector baseline_descriptor(const FeatureMapSet& fm, PoolingVariant variant) {
    const Region full{0, 0, fm.width(), fm.height(), 0};
    switch (variant) {
        case PoolingVariant::AvgGlobal:
            return pool_region(fm, full, PoolMode::Avg);
        case PoolingVariant::MaxGlobal:
            return pool_region(fm, full, PoolMode::Max);
        case PoolingVariant::AvgMaxGlobal: {
            Vector sum = pool_region(fm, full, PoolMode::Max);
            add_in_place(sum, pool_region(fm, full, PoolMode::Avg));
            return sum;
        }
        default:
            break;
    }

    const std::vector<Region> regions = rmac_regions(fm.width(), fm.height());
    Vector sum(static_cast<std::size_t>(fm.channels()), 0.0);
    for (const Region& region : regions) {
        if (variant == PoolingVariant::MaxRegional ||
            variant == PoolingVariant::AvgMaxRegional) {
            add_in_place(sum, l2_normalize(pool_region(fm, region, PoolMode::Max)));
        }
        if (variant == PoolingVariant::AvgRegional ||
            variant == PoolingVariant::AvgMaxRegional) {
            add_in_place(sum, l2_normalize(pool_region(fm, region, PoolMode::Avg)));
        }
    }
    return l2_normalize(sum);
}

} // namespace darac
