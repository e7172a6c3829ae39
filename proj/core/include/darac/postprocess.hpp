#ifndef DARAC_POSTPROCESS_HPP
#define DARAC_POSTPROCESS_HPP

#include <cstdint>
#include <vector>

#include "darac/tensor.hpp"

namespace darac {

/// PCA whitening transform fitted on a descriptor sample.
/// Row k of `projection` is the k-th principal direction divided by the
/// square root of its (floored) eigenvalue; eigenvalues sorted descending.
struct WhiteningModel {
    Vector mean;
    Matrix projection;
    std::int64_t fit_count = 0;
};

/// Input sizes (smaller image side) for multi-resolution extraction.
struct FuseConfig {
    std::vector<int> resolutions{299, 540, 1020};
};

/// Throws unless the resolution list is nonempty and strictly increasing.
void validate_fuse_config(const FuseConfig& cfg);

/// v / ||v|| when ||v|| > 1e-12, otherwise v unchanged.
Vector l2_normalize(const Vector& v);

/// Eigendecomposition of a symmetric matrix via cyclic Jacobi rotations.
/// Eigenvalues come back sorted descending; eigenvector k is column k of
/// `eigenvectors`, with its first component larger than 1e-12 in magnitude
/// made positive.
void symmetric_eigen(const Matrix& a, Vector& eigenvalues, Matrix& eigenvectors);

/// Fit mean and whitening projection on >= 2 same-dimension samples.
/// Covariance uses divisor (n - 1); eigenvalues are floored at 1e-10 before
/// the inverse square root.
WhiteningModel fit_whitening(const std::vector<Vector>& samples);

/// l2_normalize(projection * (v - mean)).
Vector apply_whitening(const WhiteningModel& model, const Vector& v);

/// Sum the descriptors elementwise and L2-normalize the result.
Vector fuse_multiresolution(const std::vector<Vector>& descriptors);

} // namespace darac

#endif // DARAC_POSTPROCESS_HPP
