#include "darac/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "darac/errors.hpp"

namespace darac {

namespace {

constexpr double kRangeGuard = 1e-12;

void check_config(const NraConfig& cfg) {
    if (!(cfg.alpha > 0.0)) {
        throw DomainError("nra config: alpha must be positive");
    }
    if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < 1.0)) {
        throw DomainError("nra config: epsilon must lie in (0, 1)");
    }
}

double transfer_derivative(double r, double alpha) {
    if (r < 0.5) return alpha * std::pow(2.0 * r, alpha - 1.0);
    return alpha * std::pow(2.0 * (1.0 - r), alpha - 1.0);
}

struct RowStats {
    int j_min = -1, j_max = -1, j_pos = -1, j_neg = -1;
    double d_min = 0.0, d_max = 0.0, d_pos = 0.0, d_neg = 0.0;
    double range = 0.0;
    bool guarded = false;
    double r_pos = 0.0, r_neg = 0.0;
    double w_pos = 0.0, w_neg = 0.0;
};

RowStats row_stats(const DistanceMatrix& d, const std::vector<int>& labels, int i,
                   const NraConfig& cfg) {
    const int m = d.rows;
    RowStats st;
    for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        const double dist = d.at(i, j);
        if (st.j_min < 0 || dist < st.d_min) {
            st.j_min = j;
            st.d_min = dist;
        }
        if (st.j_max < 0 || dist > st.d_max) {
            st.j_max = j;
            st.d_max = dist;
        }
        if (labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(i)]) {
            if (st.j_pos < 0 || dist > st.d_pos) {
                st.j_pos = j;
                st.d_pos = dist;
            }
        } else {
            if (st.j_neg < 0 || dist < st.d_neg) {
                st.j_neg = j;
                st.d_neg = dist;
            }
        }
    }
    if (st.j_pos < 0) {
        throw BatchCompositionError("sample " + std::to_string(i) +
                                    " has no positive example in the batch");
    }
    if (st.j_neg < 0) {
        throw BatchCompositionError("sample " + std::to_string(i) +
                                    " has no negative example in the batch");
    }
    st.guarded = st.d_max - st.d_min < kRangeGuard;
    st.range = std::max(st.d_max - st.d_min, kRangeGuard);
    st.r_pos = (st.d_pos - st.d_min) / st.range;
    st.r_neg = (st.d_neg - st.d_min) / st.range;
    st.w_pos = nra_transfer(st.r_pos, cfg.alpha);
    st.w_neg = nra_transfer(st.r_neg, cfg.alpha);
    return st;
}

} // namespace

DistanceMatrix pairwise_l2(const std::vector<Vector>& embeddings) {
    const int m = static_cast<int>(embeddings.size());
    if (m < 2) {
        throw DimensionError("pairwise_l2: need at least 2 embeddings");
    }
    const std::size_t dim = embeddings.front().size();
    for (const Vector& e : embeddings) {
        if (e.size() != dim) {
            throw DimensionError("pairwise_l2: embeddings differ in dimension");
        }
    }
    DistanceMatrix d(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            double sq = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = embeddings[static_cast<std::size_t>(i)][k] -
                                    embeddings[static_cast<std::size_t>(j)][k];
                sq += diff * diff;
            }
            const double dist = std::sqrt(sq);
            d.at(i, j) = dist;
            d.at(j, i) = dist;
        }
    }
    return d;
}

double nra_transfer(double r, double alpha) {
    if (!(alpha > 0.0)) {
        throw DomainError("nra_transfer: alpha must be positive");
    }
    if (!(r >= 0.0) || !(r <= 1.0)) {
        throw DomainError("nra_transfer: r must lie in [0, 1]");
    }
    if (r < 0.5) return 0.5 * std::pow(2.0 * r, alpha);
    return 1.0 - 0.5 * std::pow(2.0 * (1.0 - r), alpha);
}

NraResult nra_loss(const std::vector<Vector>& embeddings,
                   const std::vector<int>& labels, const NraConfig& cfg) {
    check_config(cfg);
    if (labels.size() != embeddings.size()) {
        throw DimensionError("nra_loss: labels and embeddings differ in length");
    }
    const DistanceMatrix d = pairwise_l2(embeddings);
    const int m = d.rows;

    NraResult result;
    NraAux& aux = result.aux;
    const std::size_t count = static_cast<std::size_t>(m);
    aux.d_min.resize(count);
    aux.d_max.resize(count);
    aux.d_pos_max.resize(count);
    aux.d_neg_min.resize(count);
    aux.r_pos_max.resize(count);
    aux.r_neg_min.resize(count);
    aux.s_pos_max.resize(count);
    aux.s_neg_min.resize(count);
    aux.j_min.resize(count);
    aux.j_max.resize(count);
    aux.j_pos.resize(count);
    aux.j_neg.resize(count);

    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        const RowStats st = row_stats(d, labels, i, cfg);
        const std::size_t idx = static_cast<std::size_t>(i);
        aux.d_min[idx] = st.d_min;
        aux.d_max[idx] = st.d_max;
        aux.d_pos_max[idx] = st.d_pos;
        aux.d_neg_min[idx] = st.d_neg;
        aux.r_pos_max[idx] = st.r_pos;
        aux.r_neg_min[idx] = st.r_neg;
        aux.s_pos_max[idx] = 1.0 - st.w_pos;
        aux.s_neg_min[idx] = 1.0 - st.w_neg;
        aux.j_min[idx] = st.j_min;
        aux.j_max[idx] = st.j_max;
        aux.j_pos[idx] = st.j_pos;
        aux.j_neg[idx] = st.j_neg;
        sum += std::log(1.0 - st.w_pos + cfg.epsilon) + std::log(st.w_neg + cfg.epsilon);
    }
    result.loss = -sum / static_cast<double>(m);
    return result;
}

std::vector<Vector> nra_loss_grad(const std::vector<Vector>& embeddings,
                                  const std::vector<int>& labels,
                                  const NraConfig& cfg) {
    check_config(cfg);
    if (labels.size() != embeddings.size()) {
        throw DimensionError("nra_loss_grad: labels and embeddings differ in length");
    }
    const DistanceMatrix d = pairwise_l2(embeddings);
    const int m = d.rows;
    const std::size_t dim = embeddings.front().size();
    const double inv_m = 1.0 / static_cast<double>(m);

    Matrix coef(m, m);
    for (int i = 0; i < m; ++i) {
        const RowStats st = row_stats(d, labels, i, cfg);
        const double g_pos =
            inv_m * transfer_derivative(st.r_pos, cfg.alpha) / (1.0 - st.w_pos + cfg.epsilon);
        const double g_neg =
            -inv_m * transfer_derivative(st.r_neg, cfg.alpha) / (st.w_neg + cfg.epsilon);
        const double inv_range = 1.0 / st.range;

        coef.at(i, st.j_pos) += g_pos * inv_range;
        coef.at(i, st.j_neg) += g_neg * inv_range;
        if (st.guarded) {
            coef.at(i, st.j_min) += -(g_pos + g_neg) * inv_range;
        } else {
            const double inv_sq = inv_range * inv_range;
            coef.at(i, st.j_min) += g_pos * (st.d_pos - st.d_min - st.range) * inv_sq +
                                    g_neg * (st.d_neg - st.d_min - st.range) * inv_sq;
            coef.at(i, st.j_max) += -(g_pos * (st.d_pos - st.d_min) +
                                      g_neg * (st.d_neg - st.d_min)) * inv_sq;
        }
    }

    std::vector<Vector> grads(static_cast<std::size_t>(m), Vector(dim, 0.0));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double c = coef.at(i, j);
            if (c == 0.0 || i == j) continue;
            const double dist = d.at(i, j);
            if (dist <= 0.0) continue;
            for (std::size_t k = 0; k < dim; ++k) {
                const double unit = (embeddings[static_cast<std::size_t>(i)][k] -
                                     embeddings[static_cast<std::size_t>(j)][k]) / dist;
                grads[static_cast<std::size_t>(i)][k] += c * unit;
                grads[static_cast<std::size_t>(j)][k] -= c * unit;
            }
        }
    }
    return grads;
}

double triplet_loss(double d_ap, double d_an, const TripletConfig& cfg) {
    if (!(d_ap >= 0.0) || !(d_an >= 0.0)) {
        throw DomainError("triplet_loss: distances must be non-negative");
    }
    if (!(cfg.margin >= 0.0)) {
        throw DomainError("triplet_loss: margin must be non-negative");
    }
    return std::max(0.0, d_ap * d_ap - d_an * d_an + cfg.margin);
}

} // namespace darac
