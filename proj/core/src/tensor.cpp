#include "darac/tensor.hpp"

#include <cmath>
#include <string>

namespace darac {

Matrix::Matrix(int r, int c, double fill)
    : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {
    if (r < 0 || c < 0) {
        throw DimensionError("matrix dimensions must be non-negative");
    }
}

Vector Matrix::row(int r) const {
    Vector out(static_cast<std::size_t>(cols));
    for (int c = 0; c < cols; ++c) {
        out[static_cast<std::size_t>(c)] = at(r, c);
    }
    return out;
}

FeatureMapSet::FeatureMapSet(int channels, int height, int width, std::vector<double> values)
    : channels_(channels), height_(height), width_(width), values_(std::move(values)) {
    if (channels < 1 || height < 1 || width < 1) {
        throw DimensionError("feature map set needs C >= 1, H >= 1, W >= 1");
    }
    const std::size_t expected = static_cast<std::size_t>(channels) * height * width;
    if (values_.size() != expected) {
        throw DimensionError("feature map set expects " + std::to_string(expected) +
                             " values, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] >= 0.0)) {
            throw DomainError("feature map activations must be non-negative (index " +
                              std::to_string(i) + ")");
        }
    }
}

FeatureMapSet FeatureMapSet::constant(int channels, int height, int width, double value) {
    return FeatureMapSet(channels, height, width,
                         std::vector<double>(static_cast<std::size_t>(channels) * height * width,
                                             value));
}

double SeededRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double SeededRng::normal() {
    // u1 in (0,1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::uint64_t SeededRng::uniform_int(std::uint64_t n) {
    if (n == 0) {
        throw ContractError("uniform_int needs n >= 1");
    }
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t x = next_u64();
    while (x > limit) {
        x = next_u64();
    }
    return x % n;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 finalizer.
    std::uint64_t z = base ^ stream;
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace darac
