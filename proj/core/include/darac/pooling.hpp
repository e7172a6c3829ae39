#ifndef DARAC_POOLING_HPP
#define DARAC_POOLING_HPP

#include <vector>

#include "darac/regions.hpp"
#include "darac/tensor.hpp"

namespace darac {

enum class PoolMode { Max, Avg };

/// Aggregation variants compared by the pooling study.
enum class PoolingVariant {
    AvgGlobal,
    MaxGlobal,
    AvgMaxGlobal,
    AvgRegional,
    MaxRegional,
    AvgMaxRegional,
};

const char* pooling_variant_name(PoolingVariant variant);
const std::vector<PoolingVariant>& all_pooling_variants();

/// Pool one region of every channel down to a C-dim vector.
Vector pool_region(const FeatureMapSet& fm, const Region& region, PoolMode mode);

/// Stack per-region pooled vectors into a 2R x C matrix: rows 0..R-1 hold the
/// max-pooled vectors in grid order, rows R..2R-1 the average-pooled ones.
PooledMatrix pooled_matrix(const FeatureMapSet& fm, const RegionGrid& grid);

/// One C-dim descriptor per study variant. Global variants pool the whole
/// map (AvgMaxGlobal sums the two vectors). Regional variants compute the
/// sliding-window grid for the map, L2-normalize every per-region vector,
/// sum over regions, and L2-normalize the result.
Vector baseline_descriptor(const FeatureMapSet& fm, PoolingVariant variant);

} // namespace darac

#endif // DARAC_POOLING_HPP
