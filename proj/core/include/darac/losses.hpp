#ifndef DARAC_LOSSES_HPP
#define DARAC_LOSSES_HPP

#include <vector>

#include "darac/tensor.hpp"

namespace darac {

struct NraConfig {
    double alpha = 4.0;
    double epsilon = 1e-4;
};

/// Per-row extrema of the rank computation. Index vectors hold the column j
/// attaining each extremum (first index in row order on ties).
struct NraAux {
    Vector d_min, d_max;
    Vector d_pos_max, d_neg_min;
    Vector r_pos_max, r_neg_min;
    Vector s_pos_max, s_neg_min;
    std::vector<int> j_min, j_max, j_pos, j_neg;
};

struct NraResult {
    double loss = 0.0;
    NraAux aux;
};

struct TripletConfig {
    double margin = 0.0;
};

/// Full m x m Euclidean distance matrix; exact zeros on the diagonal.
DistanceMatrix pairwise_l2(const std::vector<Vector>& embeddings);

/// Piecewise transfer w(r; alpha): 0.5*(2r)^alpha below r = 0.5, mirrored
/// above, so w(0) = 0, w(0.5) = 0.5, w(1) = 1.
double nra_transfer(double r, double alpha);

/// Rank-approximation loss over a batch. Every sample needs at least one
/// positive (same label, other index) and one negative in the batch.
/// Row extrema ignore j = i; rows are min-max scaled with the denominator
/// guarded at 1e-12.
NraResult nra_loss(const std::vector<Vector>& embeddings,
                   const std::vector<int>& labels, const NraConfig& cfg);

/// Analytic gradient of nra_loss with respect to every embedding, treating
/// the per-row extremum selections as locally constant.
std::vector<Vector> nra_loss_grad(const std::vector<Vector>& embeddings,
                                  const std::vector<int>& labels,
                                  const NraConfig& cfg);

/// max(0, d_ap^2 - d_an^2 + margin).
double triplet_loss(double d_ap, double d_an, const TripletConfig& cfg);

} // namespace darac

#endif // DARAC_LOSSES_HPP
