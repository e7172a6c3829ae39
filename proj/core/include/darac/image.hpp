#ifndef DARAC_IMAGE_HPP
#define DARAC_IMAGE_HPP

#include <vector>

#include "darac/tensor.hpp"

namespace darac {

/// Single-channel image, row-major, non-negative intensities.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> pixels;

    Image() = default;
    Image(int h, int w);

    double& at(int y, int x) {
        return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
    double at(int y, int x) const {
        return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
};

/// Bilinear resize (pixel-center sampling) so the smaller side equals
/// `target_small_side`; the other side scales proportionally (rounded).
Image resize_min_side(const Image& img, int target_small_side);

/// Square cut [y0, y0+side) x [x0, x0+side); must lie inside the image.
Image crop(const Image& img, int y0, int x0, int side);

/// Mirror left-right.
Image hflip(const Image& img);

/// Reinterpret a 1-channel feature-map set as an image and back.
Image image_from_features(const FeatureMapSet& fm);
FeatureMapSet features_from_image(const Image& img);

} // namespace darac

#endif // DARAC_IMAGE_HPP
