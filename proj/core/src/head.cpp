#include "darac/head.hpp"

#include <algorithm>
#include <cmath>

#include "darac/errors.hpp"

namespace darac {

int head_param_count(int l_head) {
    if (l_head < 1) {
        throw DomainError("head_param_count: L_head must be positive");
    }
    return 43 * l_head + l_head + 1;
}

HeadParams head_init(int l_head, int channels, SeededRng& rng) {
    if (l_head < 1) {
        throw DomainError("head_init: L_head must be positive");
    }
    if (channels < 1) {
        throw DomainError("head_init: channel count must be positive");
    }
    HeadParams p;
    p.l_head = l_head;
    p.channels = channels;
    p.layer1_weights = Matrix(l_head, kPooledRows);
    const double bound1 = 1.0 / std::sqrt(static_cast<double>(kPooledRows));
    for (int j = 0; j < l_head; ++j) {
        for (int r = 0; r < kPooledRows; ++r) {
            p.layer1_weights.at(j, r) = rng.uniform(-bound1, bound1);
        }
    }
    p.layer1_bias.assign(static_cast<std::size_t>(l_head), 0.0);
    p.layer2_weights.resize(static_cast<std::size_t>(l_head));
    const double bound2 = 1.0 / std::sqrt(static_cast<double>(l_head));
    for (int j = 0; j < l_head; ++j) {
        p.layer2_weights[static_cast<std::size_t>(j)] = rng.uniform(-bound2, bound2);
    }
    p.layer2_bias = 0.0;
    p.bn_running_mean = Matrix(l_head, channels);
    p.bn_running_var = Matrix(l_head, channels);
    for (int j = 0; j < l_head; ++j) {
        for (int c = 0; c < channels; ++c) {
            p.bn_running_var.at(j, c) = 1.0;
        }
    }
    return p;
}

std::vector<Vector> head_forward(const std::vector<PooledMatrix>& batch,
                                 HeadParams& params, HeadMode mode,
                                 HeadForwardCache* cache) {
    if (batch.empty()) {
        throw ContractError("head_forward: empty batch");
    }
    if (mode == HeadMode::Train && batch.size() < 2) {
        throw ContractError("head_forward: train mode needs batch size >= 2");
    }
    if (cache != nullptr && mode != HeadMode::Train) {
        throw ContractError("head_forward: cache capture requires train mode");
    }
    const int l = params.l_head;
    const int channels = params.channels;
    for (const PooledMatrix& p : batch) {
        if (p.rows != kPooledRows || p.cols != channels) {
            throw DimensionError("head_forward: pooled matrix shape mismatch");
        }
    }
    const int b_count = static_cast<int>(batch.size());

    std::vector<Matrix> pre(batch.size(), Matrix(l, channels));
    std::vector<Matrix> act(batch.size(), Matrix(l, channels));
    for (int b = 0; b < b_count; ++b) {
        const PooledMatrix& p = batch[static_cast<std::size_t>(b)];
        Matrix& a = pre[static_cast<std::size_t>(b)];
        for (int j = 0; j < l; ++j) {
            const double bias = params.layer1_bias[static_cast<std::size_t>(j)];
            for (int c = 0; c < channels; ++c) {
                double sum = 0.0;
                for (int r = 0; r < kPooledRows; ++r) {
                    sum += params.layer1_weights.at(j, r) * p.at(r, c);
                }
                a.at(j, c) = sum + bias;
            }
        }
        Matrix& z = act[static_cast<std::size_t>(b)];
        for (int j = 0; j < l; ++j) {
            for (int c = 0; c < channels; ++c) {
                z.at(j, c) = std::max(a.at(j, c), 0.0);
            }
        }
    }

    Matrix mean(l, channels);
    Matrix var(l, channels);
    Matrix inv_std(l, channels);
    if (mode == HeadMode::Train) {
        const double inv_b = 1.0 / static_cast<double>(b_count);
        for (int j = 0; j < l; ++j) {
            for (int c = 0; c < channels; ++c) {
                double sum = 0.0;
                for (int b = 0; b < b_count; ++b) {
                    sum += act[static_cast<std::size_t>(b)].at(j, c);
                }
                const double mu = sum * inv_b;
                double sq = 0.0;
                for (int b = 0; b < b_count; ++b) {
                    const double diff = act[static_cast<std::size_t>(b)].at(j, c) - mu;
                    sq += diff * diff;
                }
                mean.at(j, c) = mu;
                var.at(j, c) = sq * inv_b;
                inv_std.at(j, c) = 1.0 / std::sqrt(var.at(j, c) + params.bn_epsilon);
            }
        }
        const double keep = params.bn_momentum;
        for (int j = 0; j < l; ++j) {
            for (int c = 0; c < channels; ++c) {
                params.bn_running_mean.at(j, c) =
                    keep * params.bn_running_mean.at(j, c) + (1.0 - keep) * mean.at(j, c);
                params.bn_running_var.at(j, c) =
                    keep * params.bn_running_var.at(j, c) + (1.0 - keep) * var.at(j, c);
            }
        }
    } else {
        for (int j = 0; j < l; ++j) {
            for (int c = 0; c < channels; ++c) {
                mean.at(j, c) = params.bn_running_mean.at(j, c);
                var.at(j, c) = params.bn_running_var.at(j, c);
                inv_std.at(j, c) = 1.0 / std::sqrt(var.at(j, c) + params.bn_epsilon);
            }
        }
    }

    std::vector<Matrix> normalized(batch.size(), Matrix(l, channels));
    std::vector<Vector> out(batch.size(), Vector(static_cast<std::size_t>(channels), 0.0));
    for (int b = 0; b < b_count; ++b) {
        Matrix& n = normalized[static_cast<std::size_t>(b)];
        const Matrix& z = act[static_cast<std::size_t>(b)];
        for (int j = 0; j < l; ++j) {
            for (int c = 0; c < channels; ++c) {
                n.at(j, c) = (z.at(j, c) - mean.at(j, c)) * inv_std.at(j, c);
            }
        }
        Vector& o = out[static_cast<std::size_t>(b)];
        for (int c = 0; c < channels; ++c) {
            double sum = 0.0;
            for (int j = 0; j < l; ++j) {
                sum += params.layer2_weights[static_cast<std::size_t>(j)] * n.at(j, c);
            }
            o[static_cast<std::size_t>(c)] = sum + params.layer2_bias;
        }
    }

    if (cache != nullptr) {
        cache->l_head = l;
        cache->channels = channels;
        cache->inputs = batch;
        cache->pre_activations = std::move(pre);
        cache->activations = std::move(act);
        cache->normalized = std::move(normalized);
        cache->batch_mean = std::move(mean);
        cache->batch_var = std::move(var);
        cache->inv_std = std::move(inv_std);
        cache->layer2_weights = params.layer2_weights;
    }
    return out;
}

HeadGradients head_backward(const HeadForwardCache& cache,
                            const std::vector<Vector>& grad_embeddings) {
    const int b_count = static_cast<int>(cache.inputs.size());
    if (b_count == 0) {
        throw ContractError("head_backward: cache is empty");
    }
    if (grad_embeddings.size() != cache.inputs.size()) {
        throw ContractError("head_backward: gradient batch size mismatch");
    }
    const int l = cache.l_head;
    const int channels = cache.channels;
    for (const Vector& g : grad_embeddings) {
        if (static_cast<int>(g.size()) != channels) {
            throw ContractError("head_backward: gradient dimension mismatch");
        }
    }

    HeadGradients grads;
    grads.layer1_weights = Matrix(l, kPooledRows);
    grads.layer1_bias.assign(static_cast<std::size_t>(l), 0.0);
    grads.layer2_weights.assign(static_cast<std::size_t>(l), 0.0);
    grads.layer2_bias = 0.0;

    for (int b = 0; b < b_count; ++b) {
        const Vector& g = grad_embeddings[static_cast<std::size_t>(b)];
        const Matrix& n = cache.normalized[static_cast<std::size_t>(b)];
        for (int c = 0; c < channels; ++c) {
            grads.layer2_bias += g[static_cast<std::size_t>(c)];
            for (int j = 0; j < l; ++j) {
                grads.layer2_weights[static_cast<std::size_t>(j)] +=
                    g[static_cast<std::size_t>(c)] * n.at(j, c);
            }
        }
    }

    // dJ/dN, then the normalization backward per (j, c) across the batch,
    // then ReLU and the layer1 affine map.
    std::vector<Matrix> grad_act(cache.inputs.size(), Matrix(l, channels));
    const double inv_b = 1.0 / static_cast<double>(b_count);
    for (int j = 0; j < l; ++j) {
        const double w2 = cache.layer2_weights[static_cast<std::size_t>(j)];
        for (int c = 0; c < channels; ++c) {
            double sum_gn = 0.0;
            double sum_gn_n = 0.0;
            for (int b = 0; b < b_count; ++b) {
                const double gn =
                    w2 * grad_embeddings[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
                sum_gn += gn;
                sum_gn_n += gn * cache.normalized[static_cast<std::size_t>(b)].at(j, c);
            }
            const double mean_gn = sum_gn * inv_b;
            const double mean_gn_n = sum_gn_n * inv_b;
            const double istd = cache.inv_std.at(j, c);
            for (int b = 0; b < b_count; ++b) {
                const double gn =
                    w2 * grad_embeddings[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
                const double nval = cache.normalized[static_cast<std::size_t>(b)].at(j, c);
                double gz = istd * (gn - mean_gn - nval * mean_gn_n);
                if (cache.pre_activations[static_cast<std::size_t>(b)].at(j, c) <= 0.0) {
                    gz = 0.0;
                }
                grad_act[static_cast<std::size_t>(b)].at(j, c) = gz;
            }
        }
    }

    for (int b = 0; b < b_count; ++b) {
        const PooledMatrix& p = cache.inputs[static_cast<std::size_t>(b)];
        const Matrix& ga = grad_act[static_cast<std::size_t>(b)];
        for (int j = 0; j < l; ++j) {
            double bias_sum = 0.0;
            for (int c = 0; c < channels; ++c) {
                const double gz = ga.at(j, c);
                bias_sum += gz;
                for (int r = 0; r < kPooledRows; ++r) {
                    grads.layer1_weights.at(j, r) += gz * p.at(r, c);
                }
            }
            grads.layer1_bias[static_cast<std::size_t>(j)] += bias_sum;
        }
    }
    return grads;
}

} // namespace darac
