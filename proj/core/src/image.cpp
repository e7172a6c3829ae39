#include "darac/image.hpp"

#include <algorithm>
#include <cmath>

#include "darac/errors.hpp"

namespace darac {

Image::Image(int h, int w) : height(h), width(w) {
    if (h < 1 || w < 1) {
        throw DimensionError("Image: dimensions must be positive");
    }
    pixels.assign(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), 0.0);
}

Image resize_min_side(const Image& img, int target_small_side) {
    if (img.height < 1 || img.width < 1) {
        throw DimensionError("resize_min_side: empty image");
    }
    if (target_small_side < 1) {
        throw DimensionError("resize_min_side: target must be positive");
    }
    int dst_h;
    int dst_w;
    if (img.height <= img.width) {
        dst_h = target_small_side;
        dst_w = std::max<int>(target_small_side,
                              static_cast<int>(std::llround(
                                  static_cast<double>(img.width) * target_small_side /
                                  static_cast<double>(img.height))));
    } else {
        dst_w = target_small_side;
        dst_h = std::max<int>(target_small_side,
                              static_cast<int>(std::llround(
                                  static_cast<double>(img.height) * target_small_side /
                                  static_cast<double>(img.width))));
    }

    Image out(dst_h, dst_w);
    const double sy = static_cast<double>(img.height) / static_cast<double>(dst_h);
    const double sx = static_cast<double>(img.width) / static_cast<double>(dst_w);
    for (int y = 0; y < dst_h; ++y) {
        double src_y = (static_cast<double>(y) + 0.5) * sy - 0.5;
        src_y = std::clamp(src_y, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(std::floor(src_y));
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double fy = src_y - static_cast<double>(y0);
        for (int x = 0; x < dst_w; ++x) {
            double src_x = (static_cast<double>(x) + 0.5) * sx - 0.5;
            src_x = std::clamp(src_x, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(std::floor(src_x));
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double fx = src_x - static_cast<double>(x0);
            out.at(y, x) = (1.0 - fy) * ((1.0 - fx) * img.at(y0, x0) + fx * img.at(y0, x1)) +
                           fy * ((1.0 - fx) * img.at(y1, x0) + fx * img.at(y1, x1));
        }
    }
    return out;
}

Image crop(const Image& img, int y0, int x0, int side) {
    if (side < 1) {
        throw ContractError("crop: side must be positive");
    }
    if (y0 < 0 || x0 < 0 || y0 + side > img.height || x0 + side > img.width) {
        throw ContractError("crop: window outside image");
    }
    Image out(side, side);
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            out.at(y, x) = img.at(y0 + y, x0 + x);
        }
    }
    return out;
}

Image hflip(const Image& img) {
    Image out(img.height, img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            out.at(y, x) = img.at(y, img.width - 1 - x);
        }
    }
    return out;
}

Image image_from_features(const FeatureMapSet& fm) {
    if (fm.channels() != 1) {
        throw DimensionError("image_from_features: need exactly one channel");
    }
    Image out(fm.height(), fm.width());
    for (int y = 0; y < fm.height(); ++y) {
        for (int x = 0; x < fm.width(); ++x) {
            out.at(y, x) = fm.at(0, y, x);
        }
    }
    return out;
}

FeatureMapSet features_from_image(const Image& img) {
    return FeatureMapSet(1, img.height, img.width, img.pixels);
}

} // namespace darac
