#ifndef DARAC_HEAD_HPP
#define DARAC_HEAD_HPP

#include <vector>

#include "darac/tensor.hpp"

namespace darac {

/// Number of pooled rows the head consumes (21 areas, max + avg each).
inline constexpr int kPooledRows = 42;

/// Learned aggregation head: layer1 (L_head kernels over the 42 pooled
/// rows), ReLU, per-(row, channel) batch normalization without affine
/// parameters, layer2 (single L_head kernel) producing one value per channel.
struct HeadParams {
    int l_head = 0;
    int channels = 0;
    Matrix layer1_weights;        // l_head x 42
    Vector layer1_bias;           // l_head
    Vector layer2_weights;        // l_head
    double layer2_bias = 0.0;
    Matrix bn_running_mean;       // l_head x channels
    Matrix bn_running_var;        // l_head x channels
    double bn_epsilon = 1e-5;
    double bn_momentum = 0.99;
};

struct HeadGradients {
    Matrix layer1_weights;
    Vector layer1_bias;
    Vector layer2_weights;
    double layer2_bias = 0.0;
};

enum class HeadMode { Train, Infer };

/// Everything the backward pass needs from one train-mode forward.
struct HeadForwardCache {
    int l_head = 0;
    int channels = 0;
    std::vector<PooledMatrix> inputs;
    std::vector<Matrix> pre_activations;   // per sample, l_head x channels
    std::vector<Matrix> activations;       // ReLU output
    std::vector<Matrix> normalized;
    Matrix batch_mean;                     // l_head x channels
    Matrix batch_var;                      // biased
    Matrix inv_std;                        // 1 / sqrt(batch_var + bn_epsilon)
    Vector layer2_weights;
};

/// Learnable parameter count: 43*L_head + L_head + 1.
int head_param_count(int l_head);

/// Fresh parameters: layer1 ~ U(-1/sqrt(42), 1/sqrt(42)), layer2
/// ~ U(-1/sqrt(L_head), 1/sqrt(L_head)), biases zero, running stats (0, 1).
HeadParams head_init(int l_head, int channels, SeededRng& rng);

/// Forward pass over a batch of 42 x C pooled matrices. Train mode
/// normalizes with batch statistics (batch size >= 2), updates the running
/// stats in `params`, and fills `cache` when given; infer mode uses the
/// running stats and leaves `params` untouched.
std::vector<Vector> head_forward(const std::vector<PooledMatrix>& batch,
                                 HeadParams& params, HeadMode mode,
                                 HeadForwardCache* cache = nullptr);

/// Parameter gradients for the batch of the cache, given the loss gradient
/// with respect to each embedding. ReLU subgradient at 0 is 0.
HeadGradients head_backward(const HeadForwardCache& cache,
                            const std::vector<Vector>& grad_embeddings);

} // namespace darac

#endif // DARAC_HEAD_HPP
