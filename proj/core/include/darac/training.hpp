#ifndef DARAC_TRAINING_HPP
#define DARAC_TRAINING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "darac/head.hpp"
#include "darac/image.hpp"
#include "darac/tensor.hpp"

namespace darac {

/// One labeled sample. Single-channel items are images for the toy
/// extractor; multi-channel items are precomputed feature maps.
struct DatasetItem {
    std::string name;
    int label = 0;
    FeatureMapSet maps;
};

struct LabeledDataset {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<DatasetItem> items;
};

struct BatchSpec {
    int k = 16;
    int n = 4;
};

struct OptimizerState {
    double learning_rate = 1e-4;
    double momentum = 0.9;
    Matrix vel_layer1_weights;
    Vector vel_layer1_bias;
    Vector vel_layer2_weights;
    double vel_layer2_bias = 0.0;

    static OptimizerState for_params(const HeadParams& params, double learning_rate,
                                     double momentum);
};

/// Fixed random two-layer strided convolution stack standing in for a deep
/// backbone: 2x2 kernels, stride 2, ReLU after each layer, no biases.
/// Output spatial size is floor(input / 4) per axis; minimum input side 4.
class ToyExtractor {
public:
    explicit ToyExtractor(int out_channels, std::uint64_t seed = 0);

    int out_channels() const { return out_channels_; }
    std::uint64_t seed() const { return seed_; }
    int min_input_side() const { return 4; }

    FeatureMapSet extract(const Image& img) const;

private:
    static constexpr int kMidChannels = 6;
    int out_channels_;
    std::uint64_t seed_;
    std::vector<double> layer1_;  // kMidChannels x 2 x 2
    std::vector<double> layer2_;  // out_channels x kMidChannels x 2 x 2
};

FeatureMapSet toy_extract(const Image& img, const ToyExtractor& extractor);

/// Training-loop configuration; file form is `key=value` lines.
struct TrainingConfig {
    std::uint64_t seed = 0;
    int k = 16;
    int n = 4;
    int steps = 0;
    double learning_rate = 1e-4;
    double momentum = 0.9;
    double alpha = 4.0;
    double epsilon = 1e-4;
    int l_head = 16;
    int channels = 0;
    std::string dataset_path;
    std::string checkpoint_path;
    int augment_resize = 0;  // 0 disables augmentation
    int augment_crop = 0;
};

struct TrainResult {
    HeadParams params;
    std::vector<double> loss_log;
};

/// Sample k distinct classes (those with >= n items), then n distinct items
/// per class; returns item indices as shuffled class blocks.
std::vector<int> build_batch(const LabeledDataset& ds, const BatchSpec& spec,
                             SeededRng& rng);

/// Resize so the smaller side hits `target_small_side`, take a uniform
/// random square crop of `crop_side`, flip horizontally with probability 1/2.
Image augment(const Image& img, int target_small_side, int crop_side, SeededRng& rng);

/// v <- momentum * v + g; p <- p - learning_rate * v. Running stats untouched.
void sgd_step(HeadParams& params, const HeadGradients& grads, OptimizerState& state);

/// Full loop: batch -> (augment ->) extract -> pooled matrix -> head ->
/// rank-approximation loss -> backward -> SGD. Deterministic given cfg.seed.
TrainResult train(const TrainingConfig& cfg, const LabeledDataset& ds);

/// Deterministic 10-ish-class image dataset: every class has a random
/// anchor pattern; samples add clipped Gaussian pixel noise plus a few large
/// bright spikes at random positions. The spikes dominate max pooling while
/// averages stay close to the class anchor, so learned row weighting has
/// something to gain.
LabeledDataset make_synthetic_image_dataset(int num_classes, int per_class, int height,
                                            int width, std::uint64_t seed,
                                            double noise_sigma = 0.25, int spike_count = 2,
                                            double spike_min = 8.0, double spike_max = 20.0);

} // namespace darac

#endif // DARAC_TRAINING_HPP
