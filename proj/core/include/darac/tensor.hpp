#ifndef DARAC_TENSOR_HPP
#define DARAC_TENSOR_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "darac/errors.hpp"

namespace darac {

/// Dense real vector. Dimension is the element count.
using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0);

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    Vector row(int r) const;
    bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }
};

/// Pooled activations: rows 0..R-1 hold the per-region max vectors, rows
/// R..2R-1 the per-region averages, both in grid order; one column per
/// feature-map channel.
using PooledMatrix = Matrix;

/// Symmetric pairwise L2 distances with an exactly-zero diagonal.
using DistanceMatrix = Matrix;

/// A stack of C non-negative activation grids of size H x W, as produced by
/// a convolutional layer after ReLU. Storage is channel-major, row-major
/// within each channel. Immutable after construction.
class FeatureMapSet {
public:
    /// Validates shape and non-negativity; `values` must hold C*H*W entries.
    FeatureMapSet(int channels, int height, int width, std::vector<double> values);

    /// Convenience: every cell of every channel set to `value` (>= 0).
    static FeatureMapSet constant(int channels, int height, int width, double value);

    int channels() const { return channels_; }
    int height() const { return height_; }
    int width() const { return width_; }

    double at(int channel, int y, int x) const {
        return values_[(static_cast<std::size_t>(channel) * height_ + y) * width_ + x];
    }
    const std::vector<double>& values() const { return values_; }

private:
    int channels_;
    int height_;
    int width_;
    std::vector<double> values_;
};

/// Deterministic random source. Wraps the standard-specified mt19937_64
/// engine and derives all variates itself (the standard distributions are
/// implementation-defined), so identical seeds produce identical streams on
/// every platform and standard library.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53 mantissa bits.
    double uniform();
    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal via Box-Muller (two uniforms per draw, no caching).
    double normal();
    /// Uniform integer in [0, n) by rejection sampling; n >= 1.
    std::uint64_t uniform_int(std::uint64_t n);

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

/// Derive an independent stream seed from a base seed and a stream tag
/// (splitmix64 of base ^ tag). Used to decorrelate components that share
/// one user-facing seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

} // namespace darac

#endif // DARAC_TENSOR_HPP
