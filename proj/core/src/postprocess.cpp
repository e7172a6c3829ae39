#include "darac/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "darac/errors.hpp"

namespace darac {

void validate_fuse_config(const FuseConfig& cfg) {
    if (cfg.resolutions.empty()) {
        throw DomainError("fuse config: resolution list is empty");
    }
    for (std::size_t i = 0; i < cfg.resolutions.size(); ++i) {
        if (cfg.resolutions[i] < 1) {
            throw DomainError("fuse config: resolutions must be positive");
        }
        if (i > 0 && cfg.resolutions[i] <= cfg.resolutions[i - 1]) {
            throw DomainError("fuse config: resolutions must be strictly increasing");
        }
    }
}

Vector l2_normalize(const Vector& v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    const double norm = std::sqrt(sq);
    if (norm <= 1e-12) return v;
    Vector out(v);
    for (double& x : out) x /= norm;
    return out;
}

namespace {

double off_diagonal_norm(const Matrix& m) {
    double sq = 0.0;
    for (int p = 0; p < m.rows; ++p) {
        for (int q = p + 1; q < m.cols; ++q) {
            sq += m.at(p, q) * m.at(p, q);
        }
    }
    return std::sqrt(sq);
}

} // namespace

void symmetric_eigen(const Matrix& a, Vector& eigenvalues, Matrix& eigenvectors) {
    if (a.rows != a.cols) {
        throw DimensionError("symmetric_eigen: matrix must be square");
    }
    const int n = a.rows;
    Matrix m = a;
    Matrix v(n, n);
    for (int i = 0; i < n; ++i) v.at(i, i) = 1.0;

    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(m.at(i, i)));
    scale = std::max(scale, 1.0);

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(m) < 1e-13 * scale) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = m.at(p, q);
                if (apq == 0.0) continue;
                const double app = m.at(p, p);
                const double aqq = m.at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (theta >= 0.0) {
                    t = 1.0 / (theta + std::sqrt(theta * theta + 1.0));
                } else {
                    t = -1.0 / (-theta + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double mkp = m.at(k, p);
                    const double mkq = m.at(k, q);
                    m.at(k, p) = c * mkp - s * mkq;
                    m.at(p, k) = m.at(k, p);
                    m.at(k, q) = s * mkp + c * mkq;
                    m.at(q, k) = m.at(k, q);
                }
                m.at(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                m.at(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                m.at(p, q) = 0.0;
                m.at(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double vkp = v.at(k, p);
                    const double vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&m](int lhs, int rhs) {
        return m.at(lhs, lhs) > m.at(rhs, rhs);
    });

    eigenvalues.assign(static_cast<std::size_t>(n), 0.0);
    eigenvectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        eigenvalues[static_cast<std::size_t>(k)] = m.at(src, src);
        double sign = 1.0;
        for (int i = 0; i < n; ++i) {
            const double x = v.at(i, src);
            if (std::abs(x) > 1e-12) {
                sign = x > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (int i = 0; i < n; ++i) {
            eigenvectors.at(i, k) = sign * v.at(i, src);
        }
    }
}

WhiteningModel fit_whitening(const std::vector<Vector>& samples) {
    if (samples.size() < 2) {
        throw ContractError("fit_whitening: need at least 2 samples");
    }
    const std::size_t dim = samples.front().size();
    if (dim == 0) {
        throw DimensionError("fit_whitening: samples must be non-empty vectors");
    }
    for (const Vector& s : samples) {
        if (s.size() != dim) {
            throw DimensionError("fit_whitening: samples differ in dimension");
        }
    }
    const int n = static_cast<int>(dim);
    const double count = static_cast<double>(samples.size());

    WhiteningModel model;
    model.fit_count = static_cast<std::int64_t>(samples.size());
    model.mean.assign(dim, 0.0);
    for (const Vector& s : samples) {
        for (std::size_t i = 0; i < dim; ++i) model.mean[i] += s[i];
    }
    for (double& x : model.mean) x /= count;

    Matrix cov(n, n);
    for (const Vector& s : samples) {
        for (int a = 0; a < n; ++a) {
            const double da = s[static_cast<std::size_t>(a)] -
                              model.mean[static_cast<std::size_t>(a)];
            for (int b = a; b < n; ++b) {
                const double db = s[static_cast<std::size_t>(b)] -
                                  model.mean[static_cast<std::size_t>(b)];
                cov.at(a, b) += da * db;
            }
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            cov.at(a, b) /= count - 1.0;
            cov.at(b, a) = cov.at(a, b);
        }
    }

    Vector eigenvalues;
    Matrix eigenvectors(0, 0);
    symmetric_eigen(cov, eigenvalues, eigenvectors);

    model.projection = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        const double floored = std::max(eigenvalues[static_cast<std::size_t>(k)], 1e-10);
        const double inv_root = 1.0 / std::sqrt(floored);
        for (int i = 0; i < n; ++i) {
            model.projection.at(k, i) = eigenvectors.at(i, k) * inv_root;
        }
    }
    return model;
}

Vector apply_whitening(const WhiteningModel& model, const Vector& v) {
    const std::size_t dim = model.mean.size();
    if (v.size() != dim || model.projection.cols != static_cast<int>(dim)) {
        throw DimensionError("apply_whitening: dimension mismatch");
    }
    Vector centered(dim);
    for (std::size_t i = 0; i < dim; ++i) centered[i] = v[i] - model.mean[i];
    Vector projected(static_cast<std::size_t>(model.projection.rows), 0.0);
    for (int r = 0; r < model.projection.rows; ++r) {
        double sum = 0.0;
        for (int c = 0; c < model.projection.cols; ++c) {
            sum += model.projection.at(r, c) * centered[static_cast<std::size_t>(c)];
        }
        projected[static_cast<std::size_t>(r)] = sum;
    }
    return l2_normalize(projected);
}

Vector fuse_multiresolution(const std::vector<Vector>& descriptors) {
    if (descriptors.empty()) {
        throw ContractError("fuse_multiresolution: empty descriptor list");
    }
    const std::size_t dim = descriptors.front().size();
    Vector sum(dim, 0.0);
    for (const Vector& d : descriptors) {
        if (d.size() != dim) {
            throw DimensionError("fuse_multiresolution: dimension mismatch");
        }
        for (std::size_t i = 0; i < dim; ++i) sum[i] += d[i];
    }
    return l2_normalize(sum);
}

} // namespace darac
