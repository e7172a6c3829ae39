#include "darac/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>

#include "darac/errors.hpp"
#include "darac/losses.hpp"
#include "darac/pooling.hpp"
#include "darac/regions.hpp"

namespace darac {

OptimizerState OptimizerState::for_params(const HeadParams& params, double learning_rate,
                                          double momentum) {
    if (!(learning_rate > 0.0)) {
        throw DomainError("optimizer: learning rate must be positive");
    }
    if (!(momentum >= 0.0) || !(momentum < 1.0)) {
        throw DomainError("optimizer: momentum must lie in [0, 1)");
    }
    OptimizerState st;
    st.learning_rate = learning_rate;
    st.momentum = momentum;
    st.vel_layer1_weights = Matrix(params.layer1_weights.rows, params.layer1_weights.cols);
    st.vel_layer1_bias.assign(params.layer1_bias.size(), 0.0);
    st.vel_layer2_weights.assign(params.layer2_weights.size(), 0.0);
    st.vel_layer2_bias = 0.0;
    return st;
}

ToyExtractor::ToyExtractor(int out_channels, std::uint64_t seed)
    : out_channels_(out_channels), seed_(seed) {
    if (out_channels < 1) {
        throw DomainError("ToyExtractor: channel count must be positive");
    }
    SeededRng rng(derive_seed(seed, 0x746f79));
    layer1_.resize(static_cast<std::size_t>(kMidChannels) * 4);
    for (double& w : layer1_) w = rng.uniform(-0.5, 0.5);
    layer2_.resize(static_cast<std::size_t>(out_channels) * kMidChannels * 4);
    for (double& w : layer2_) w = rng.uniform(-0.2, 0.2);
}

FeatureMapSet ToyExtractor::extract(const Image& img) const {
    if (img.height < min_input_side() || img.width < min_input_side()) {
        throw DimensionError("ToyExtractor: input smaller than minimum side");
    }
    const int h1 = img.height / 2;
    const int w1 = img.width / 2;
    std::vector<double> mid(static_cast<std::size_t>(kMidChannels) * h1 * w1);
    for (int m = 0; m < kMidChannels; ++m) {
        const double* k = &layer1_[static_cast<std::size_t>(m) * 4];
        for (int y = 0; y < h1; ++y) {
            for (int x = 0; x < w1; ++x) {
                const double sum = k[0] * img.at(2 * y, 2 * x) +
                                   k[1] * img.at(2 * y, 2 * x + 1) +
                                   k[2] * img.at(2 * y + 1, 2 * x) +
                                   k[3] * img.at(2 * y + 1, 2 * x + 1);
                mid[(static_cast<std::size_t>(m) * h1 + y) * w1 + x] = std::max(sum, 0.0);
            }
        }
    }

    const int h2 = h1 / 2;
    const int w2 = w1 / 2;
    std::vector<double> out(static_cast<std::size_t>(out_channels_) * h2 * w2);
    for (int c = 0; c < out_channels_; ++c) {
        for (int y = 0; y < h2; ++y) {
            for (int x = 0; x < w2; ++x) {
                double sum = 0.0;
                for (int m = 0; m < kMidChannels; ++m) {
                    const double* k =
                        &layer2_[(static_cast<std::size_t>(c) * kMidChannels + m) * 4];
                    const std::size_t base = (static_cast<std::size_t>(m) * h1 + 2 * y) * w1;
                    sum += k[0] * mid[base + 2 * x] + k[1] * mid[base + 2 * x + 1] +
                           k[2] * mid[base + w1 + 2 * x] + k[3] * mid[base + w1 + 2 * x + 1];
                }
                out[(static_cast<std::size_t>(c) * h2 + y) * w2 + x] = std::max(sum, 0.0);
            }
        }
    }
    return FeatureMapSet(out_channels_, h2, w2, std::move(out));
}

FeatureMapSet toy_extract(const Image& img, const ToyExtractor& extractor) {
    return extractor.extract(img);
}

std::vector<int> build_batch(const LabeledDataset& ds, const BatchSpec& spec,
                             SeededRng& rng) {
    if (spec.k < 2 || spec.n < 2) {
        throw ContractError("build_batch: need k >= 2 and n >= 2");
    }
    std::map<int, std::vector<int>> by_class;
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        by_class[ds.items[i].label].push_back(static_cast<int>(i));
    }
    std::vector<int> eligible;
    for (const auto& [label, indices] : by_class) {
        if (static_cast<int>(indices.size()) >= spec.n) {
            eligible.push_back(label);
        }
    }
    if (static_cast<int>(eligible.size()) < spec.k) {
        throw ContractError("build_batch: only " + std::to_string(eligible.size()) +
                            " classes have " + std::to_string(spec.n) +
                            "+ samples, need " + std::to_string(spec.k));
    }
    rng.shuffle(eligible);
    std::vector<int> batch;
    batch.reserve(static_cast<std::size_t>(spec.k) * static_cast<std::size_t>(spec.n));
    for (int c = 0; c < spec.k; ++c) {
        std::vector<int> indices = by_class.at(eligible[static_cast<std::size_t>(c)]);
        rng.shuffle(indices);
        batch.insert(batch.end(), indices.begin(), indices.begin() + spec.n);
    }
    return batch;
}

Image augment(const Image& img, int target_small_side, int crop_side, SeededRng& rng) {
    if (crop_side < 1 || crop_side > target_small_side) {
        throw ContractError("augment: crop side must lie in [1, resize target]");
    }
    const Image resized = resize_min_side(img, target_small_side);
    const int y_room = resized.height - crop_side + 1;
    const int x_room = resized.width - crop_side + 1;
    const int y0 = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(y_room)));
    const int x0 = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(x_room)));
    Image cropped = crop(resized, y0, x0, crop_side);
    if (rng.uniform() < 0.5) {
        return hflip(cropped);
    }
    return cropped;
}

void sgd_step(HeadParams& params, const HeadGradients& grads, OptimizerState& state) {
    if (!grads.layer1_weights.same_shape(params.layer1_weights) ||
        grads.layer1_bias.size() != params.layer1_bias.size() ||
        grads.layer2_weights.size() != params.layer2_weights.size() ||
        !state.vel_layer1_weights.same_shape(params.layer1_weights)) {
        throw ContractError("sgd_step: gradient/velocity shapes do not match params");
    }
    const double m = state.momentum;
    const double lr = state.learning_rate;
    for (std::size_t i = 0; i < params.layer1_weights.data.size(); ++i) {
        double& v = state.vel_layer1_weights.data[i];
        v = m * v + grads.layer1_weights.data[i];
        params.layer1_weights.data[i] -= lr * v;
    }
    for (std::size_t i = 0; i < params.layer1_bias.size(); ++i) {
        double& v = state.vel_layer1_bias[i];
        v = m * v + grads.layer1_bias[i];
        params.layer1_bias[i] -= lr * v;
    }
    for (std::size_t i = 0; i < params.layer2_weights.size(); ++i) {
        double& v = state.vel_layer2_weights[i];
        v = m * v + grads.layer2_weights[i];
        params.layer2_weights[i] -= lr * v;
    }
    state.vel_layer2_bias = m * state.vel_layer2_bias + grads.layer2_bias;
    params.layer2_bias -= lr * state.vel_layer2_bias;
}

namespace {

RegionGrid grid_for(int width, int height) {
    return with_global(rmac_regions(width, height), width, height);
}

} // namespace

TrainResult train(const TrainingConfig& cfg, const LabeledDataset& ds) {
    if (ds.items.empty()) {
        throw ContractError("train: dataset is empty");
    }
    if (ds.channels != 1 && ds.channels != cfg.channels) {
        throw DimensionError("train: dataset channel count does not match config C");
    }
    if ((cfg.augment_resize == 0) != (cfg.augment_crop == 0)) {
        throw ContractError("train: augment_resize and augment_crop must be set together");
    }
    if (cfg.augment_resize != 0 && ds.channels != 1) {
        throw ContractError("train: augmentation applies to image datasets only");
    }

    SeededRng init_rng(derive_seed(cfg.seed, 1));
    SeededRng batch_rng(derive_seed(cfg.seed, 2));
    SeededRng augment_rng(derive_seed(cfg.seed, 3));

    TrainResult result{head_init(cfg.l_head, cfg.channels, init_rng), {}};
    OptimizerState opt =
        OptimizerState::for_params(result.params, cfg.learning_rate, cfg.momentum);
    const ToyExtractor extractor(cfg.channels);
    const NraConfig loss_cfg{cfg.alpha, cfg.epsilon};
    const BatchSpec spec{cfg.k, cfg.n};

    // All samples share one shape, so the grid only depends on what the
    // pipeline in front of the head produces.
    std::map<std::pair<int, int>, RegionGrid> grids;

    result.loss_log.reserve(static_cast<std::size_t>(cfg.steps));
    for (int step = 0; step < cfg.steps; ++step) {
        const std::vector<int> batch = build_batch(ds, spec, batch_rng);
        std::vector<PooledMatrix> pooled;
        std::vector<int> labels;
        pooled.reserve(batch.size());
        labels.reserve(batch.size());
        for (int idx : batch) {
            const DatasetItem& item = ds.items[static_cast<std::size_t>(idx)];
            labels.push_back(item.label);
            if (ds.channels == 1) {
                Image img = image_from_features(item.maps);
                if (cfg.augment_resize != 0) {
                    img = augment(img, cfg.augment_resize, cfg.augment_crop, augment_rng);
                }
                const FeatureMapSet maps = extractor.extract(img);
                const auto key = std::make_pair(maps.width(), maps.height());
                auto it = grids.find(key);
                if (it == grids.end()) {
                    it = grids.emplace(key, grid_for(maps.width(), maps.height())).first;
                }
                pooled.push_back(pooled_matrix(maps, it->second));
            } else {
                const auto key = std::make_pair(item.maps.width(), item.maps.height());
                auto it = grids.find(key);
                if (it == grids.end()) {
                    it = grids.emplace(key, grid_for(item.maps.width(), item.maps.height())).first;
                }
                pooled.push_back(pooled_matrix(item.maps, it->second));
            }
        }

        HeadForwardCache cache;
        const std::vector<Vector> embeddings =
            head_forward(pooled, result.params, HeadMode::Train, &cache);
        const NraResult loss = nra_loss(embeddings, labels, loss_cfg);
        if (!std::isfinite(loss.loss)) {
            throw ContractError("train: non-finite loss at step " + std::to_string(step));
        }
        const std::vector<Vector> grad_embeddings =
            nra_loss_grad(embeddings, labels, loss_cfg);
        const HeadGradients grads = head_backward(cache, grad_embeddings);
        sgd_step(result.params, grads, opt);
        result.loss_log.push_back(loss.loss);
    }
    return result;
}

LabeledDataset make_synthetic_image_dataset(int num_classes, int per_class, int height,
                                            int width, std::uint64_t seed,
                                            double noise_sigma, int spike_count,
                                            double spike_min, double spike_max) {
    if (num_classes < 1 || per_class < 1) {
        throw DomainError("make_synthetic_image_dataset: counts must be positive");
    }
    if (height < 1 || width < 1) {
        throw DimensionError("make_synthetic_image_dataset: dimensions must be positive");
    }
    SeededRng rng(derive_seed(seed, 0xda7a));
    const std::size_t pixel_count =
        static_cast<std::size_t>(height) * static_cast<std::size_t>(width);

    LabeledDataset ds;
    ds.channels = 1;
    ds.height = height;
    ds.width = width;
    for (int cls = 0; cls < num_classes; ++cls) {
        std::vector<double> anchor(pixel_count);
        for (double& p : anchor) p = 2.0 * std::abs(rng.normal());
        for (int s = 0; s < per_class; ++s) {
            std::vector<double> pixels(pixel_count);
            for (std::size_t i = 0; i < pixel_count; ++i) {
                pixels[i] = std::max(0.0, anchor[i] + noise_sigma * rng.normal());
            }
            for (int sp = 0; sp < spike_count; ++sp) {
                const std::size_t y = rng.uniform_int(static_cast<std::uint64_t>(height));
                const std::size_t x = rng.uniform_int(static_cast<std::uint64_t>(width));
                pixels[y * static_cast<std::size_t>(width) + x] +=
                    rng.uniform(spike_min, spike_max);
            }
            char name[32];
            std::snprintf(name, sizeof(name), "c%02d_s%03d", cls, s);
            ds.items.push_back(DatasetItem{name, cls,
                                           FeatureMapSet(1, height, width, std::move(pixels))});
        }
    }
    return ds;
}

} // namespace darac
