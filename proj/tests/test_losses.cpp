#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"

#include "darac/errors.hpp"
#include "darac/losses.hpp"
#include "darac/tensor.hpp"

using namespace darac;

namespace {

std::vector<Vector> random_batch(int m, int dim, SeededRng& rng) {
    std::vector<Vector> batch(static_cast<std::size_t>(m), Vector(static_cast<std::size_t>(dim)));
    for (auto& v : batch)
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return batch;
}

std::vector<int> block_labels(int m, int per_class) {
    std::vector<int> labels(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) labels[static_cast<std::size_t>(i)] = i / per_class;
    return labels;
}

/// True when all off-diagonal distances are separated enough that the
/// per-row extremum selections are stable under tiny perturbations.
bool well_separated(const DistanceMatrix& d) {
    std::vector<double> values;
    for (int i = 0; i < d.rows; ++i)
        for (int j = i + 1; j < d.cols; ++j) values.push_back(d.at(i, j));
    std::sort(values.begin(), values.end());
    if (values.front() < 1e-3) return false;
    for (std::size_t k = 1; k < values.size(); ++k)
        if (values[k] - values[k - 1] < 1e-4) return false;
    return true;
}

std::vector<Vector> separated_batch(int m, int dim, const std::vector<int>& labels,
                                    std::uint64_t seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        SeededRng rng(seed + attempt);
        auto batch = random_batch(m, dim, rng);
        if (well_separated(pairwise_l2(batch))) return batch;
    }
}

}  // namespace

TEST_CASE("pairwise_l2 computes exact distances on small inputs") {
    const DistanceMatrix d = pairwise_l2({{0.0}, {3.0}});
    REQUIRE(d.rows == 2);
    CHECK(d.at(0, 0) == 0.0);
    CHECK(d.at(1, 1) == 0.0);
    CHECK(d.at(0, 1) == 3.0);
    CHECK(d.at(1, 0) == 3.0);

    const DistanceMatrix e = pairwise_l2({{0.0, 0.0}, {3.0, 4.0}, {0.0, 1.0}});
    CHECK(e.at(0, 1) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(e.at(0, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.at(1, 2) == doctest::Approx(std::sqrt(18.0)).epsilon(1e-12));
}

TEST_CASE("pairwise_l2 is symmetric with an exactly-zero diagonal") {
    SeededRng rng(11);
    const auto batch = random_batch(7, 5, rng);
    const DistanceMatrix d = pairwise_l2(batch);
    for (int i = 0; i < d.rows; ++i) {
        CHECK(d.at(i, i) == 0.0);
        for (int j = 0; j < d.cols; ++j) {
            CHECK(d.at(i, j) == d.at(j, i));
            CHECK(d.at(i, j) >= 0.0);
        }
    }
    // Triangle inequality on every triple.
    for (int i = 0; i < d.rows; ++i)
        for (int j = 0; j < d.rows; ++j)
            for (int k = 0; k < d.rows; ++k)
                CHECK(d.at(i, j) <= d.at(i, k) + d.at(k, j) + 1e-12);
}

TEST_CASE("pairwise_l2 rejects bad batches") {
    CHECK_THROWS_AS(pairwise_l2({}), DimensionError);
    CHECK_THROWS_AS(pairwise_l2({{1.0}}), DimensionError);
    CHECK_THROWS_AS(pairwise_l2({{1.0}, {1.0, 2.0}}), DimensionError);
}

TEST_CASE("nra_transfer hits its anchor values") {
    CHECK(nra_transfer(0.0, 4.0) == 0.0);
    CHECK(nra_transfer(1.0, 4.0) == 1.0);
    CHECK(nra_transfer(0.5, 4.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(nra_transfer(0.25, 4.0) == doctest::Approx(0.03125).epsilon(1e-15));
    CHECK(nra_transfer(0.75, 4.0) == doctest::Approx(0.96875).epsilon(1e-15));
}

TEST_CASE("nra_transfer with alpha 1 is the identity and is always symmetric") {
    SeededRng rng(21);
    for (int i = 0; i < 200; ++i) {
        const double r = rng.uniform();
        CHECK(nra_transfer(r, 1.0) == doctest::Approx(r).epsilon(1e-12));
        for (double alpha : {1.0, 2.0, 4.0, 7.5}) {
            const double w = nra_transfer(r, alpha);
            CHECK(w >= 0.0);
            CHECK(w <= 1.0);
            CHECK(w + nra_transfer(1.0 - r, alpha) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    // Monotone in r.
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double w = nra_transfer(i / 100.0, 4.0);
        CHECK(w >= prev);
        prev = w;
    }
}

TEST_CASE("nra_transfer rejects out-of-domain arguments") {
    CHECK_THROWS_AS(nra_transfer(-0.1, 4.0), DomainError);
    CHECK_THROWS_AS(nra_transfer(1.1, 4.0), DomainError);
    CHECK_THROWS_AS(nra_transfer(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(nra_transfer(0.5, -1.0), DomainError);
}

TEST_CASE("nra_loss matches the hand-computed value on a 1-D batch") {
    const std::vector<Vector> batch{{0.0}, {0.1}, {1.0}, {1.1}};
    const std::vector<int> labels{0, 0, 1, 1};
    const NraResult result = nra_loss(batch, labels, NraConfig{});

    const double eps = 1e-4;
    const double w_neg_outer = 1.0 - 0.5 * std::pow(0.2, 4.0);     // rows 0 and 3, r = 0.9
    const double w_neg_inner = 1.0 - 8.0 / 6561.0;                 // rows 1 and 2, r = 8/9
    const double expected = -(4.0 * std::log(1.0 + eps) + 2.0 * std::log(w_neg_outer + eps) +
                              2.0 * std::log(w_neg_inner + eps)) /
                            4.0;
    CHECK(result.loss == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("nra_loss aux reports the per-row extrema of the 1-D batch") {
    const std::vector<Vector> batch{{0.0}, {0.1}, {1.0}, {1.1}};
    const std::vector<int> labels{0, 0, 1, 1};
    const NraAux& aux = nra_loss(batch, labels, NraConfig{}).aux;

    REQUIRE(aux.j_pos.size() == 4);
    CHECK(aux.j_pos[0] == 1);
    CHECK(aux.j_neg[0] == 2);
    CHECK(aux.j_min[0] == 1);
    CHECK(aux.j_max[0] == 3);
    CHECK(aux.d_pos_max[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(aux.d_neg_min[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(aux.d_min[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(aux.d_max[0] == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(aux.r_pos_max[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(aux.r_neg_min[0] == doctest::Approx(0.9).epsilon(1e-12));

    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(aux.r_pos_max[i] >= 0.0);
        CHECK(aux.r_pos_max[i] <= 1.0);
        CHECK(aux.r_neg_min[i] >= 0.0);
        CHECK(aux.r_neg_min[i] <= 1.0);
        CHECK(aux.s_pos_max[i] ==
              doctest::Approx(1.0 - nra_transfer(aux.r_pos_max[i], 4.0)).epsilon(1e-12));
        CHECK(aux.s_neg_min[i] ==
              doctest::Approx(1.0 - nra_transfer(aux.r_neg_min[i], 4.0)).epsilon(1e-12));
    }
}

TEST_CASE("nra_loss breaks extremum ties by the first index") {
    const std::vector<Vector> batch{{0.0}, {1.0}, {-1.0}, {5.0}, {-5.0}};
    const std::vector<int> labels{0, 0, 0, 1, 1};
    const NraAux& aux = nra_loss(batch, labels, NraConfig{}).aux;
    CHECK(aux.j_pos[0] == 1);
    CHECK(aux.j_neg[0] == 3);
    CHECK(aux.j_min[0] == 1);
    CHECK(aux.j_max[0] == 3);
}

TEST_CASE("nra_loss of perfectly separated duplicate pairs hits the floor") {
    const std::vector<Vector> batch{{0.0, 0.0}, {0.0, 0.0}, {10.0, 0.0}, {10.0, 0.0}};
    const std::vector<int> labels{0, 0, 1, 1};
    const double loss = nra_loss(batch, labels, NraConfig{}).loss;
    CHECK(std::abs(loss + 2.0 * std::log1p(1e-4)) < 1e-12);
    CHECK(std::abs(loss + 2e-4) < 1e-6);
}

TEST_CASE("nra_loss is invariant to scaling and translation") {
    const std::vector<int> labels = block_labels(8, 2);
    for (std::uint64_t seed = 40; seed < 45; ++seed) {
        SeededRng rng(seed);
        const auto batch = random_batch(8, 4, rng);
        const double base = nra_loss(batch, labels, NraConfig{}).loss;

        for (double scale : {0.1, 10.0, 3.7}) {
            auto scaled = batch;
            for (auto& v : scaled)
                for (double& x : v) x *= scale;
            CHECK(std::abs(nra_loss(scaled, labels, NraConfig{}).loss - base) < 1e-9);
        }

        auto shifted = batch;
        for (auto& v : shifted) {
            v[0] += 12.25;
            v[2] -= 3.5;
        }
        CHECK(std::abs(nra_loss(shifted, labels, NraConfig{}).loss - base) < 1e-9);
    }
}

TEST_CASE("nra_loss validates labels, config and batch composition") {
    const std::vector<Vector> batch{{0.0}, {1.0}, {2.0}, {3.0}};
    CHECK_THROWS_AS(nra_loss(batch, {0, 0, 1}, NraConfig{}), DimensionError);
    CHECK_THROWS_AS(nra_loss(batch, {0, 0, 1, 1}, NraConfig{-1.0, 1e-4}), DomainError);
    CHECK_THROWS_AS(nra_loss(batch, {0, 0, 1, 1}, NraConfig{4.0, 0.0}), DomainError);
    CHECK_THROWS_AS(nra_loss(batch, {0, 0, 1, 1}, NraConfig{4.0, 1.0}), DomainError);

    CHECK_THROWS_AS(nra_loss(batch, {0, 0, 0, 0}, NraConfig{}), BatchCompositionError);
    try {
        nra_loss(batch, {0, 1, 1, 1}, NraConfig{});
        FAIL("expected BatchCompositionError");
    } catch (const BatchCompositionError& e) {
        CHECK(std::string(e.what()).find("no positive") != std::string::npos);
    }
}

TEST_CASE("nra_loss_grad agrees with central finite differences") {
    const int m = 6, dim = 4;
    const std::vector<int> labels = block_labels(m, 2);
    const NraConfig cfg{};
    const double step = 1e-6;

    for (std::uint64_t seed = 100; seed < 105; ++seed) {
        auto batch = separated_batch(m, dim, labels, seed * 977);
        const auto grads = nra_loss_grad(batch, labels, cfg);
        REQUIRE(grads.size() == static_cast<std::size_t>(m));

        double worst = 0.0;
        for (int i = 0; i < m; ++i) {
            for (int d = 0; d < dim; ++d) {
                const double saved = batch[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
                batch[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] = saved + step;
                const double plus = nra_loss(batch, labels, cfg).loss;
                batch[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] = saved - step;
                const double minus = nra_loss(batch, labels, cfg).loss;
                batch[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] = saved;

                const double fd = (plus - minus) / (2.0 * step);
                const double an = grads[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
                const double rel =
                    std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-3});
                worst = std::max(worst, rel);
            }
        }
        CHECK(worst < 1e-4);
    }
}

TEST_CASE("nra_loss_grad columns sum to zero (translation invariance)") {
    const std::vector<int> labels = block_labels(8, 2);
    const auto batch = separated_batch(8, 3, labels, 2024);
    const auto grads = nra_loss_grad(batch, labels, NraConfig{});
    for (int d = 0; d < 3; ++d) {
        double sum = 0.0;
        for (const auto& g : grads) sum += g[static_cast<std::size_t>(d)];
        CHECK(std::abs(sum) < 1e-9);
    }
}

TEST_CASE("nra_loss_grad scales inversely with a global embedding scale") {
    const std::vector<int> labels = block_labels(6, 2);
    const auto batch = separated_batch(6, 3, labels, 555);
    const auto base = nra_loss_grad(batch, labels, NraConfig{});

    auto doubled = batch;
    for (auto& v : doubled)
        for (double& x : v) x *= 2.0;
    const auto scaled = nra_loss_grad(doubled, labels, NraConfig{});

    for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t d = 0; d < base[i].size(); ++d)
            CHECK(scaled[i][d] == doctest::Approx(base[i][d] / 2.0).epsilon(1e-9));
}

TEST_CASE("nra_loss_grad rotates with the embeddings in 2-D") {
    const std::vector<int> labels = block_labels(6, 3);
    const auto batch = separated_batch(6, 2, labels, 777);
    const auto base = nra_loss_grad(batch, labels, NraConfig{});

    const double theta = 0.7;
    const double c = std::cos(theta), s = std::sin(theta);
    auto rotated = batch;
    for (auto& v : rotated) {
        const double x = v[0], y = v[1];
        v[0] = c * x - s * y;
        v[1] = s * x + c * y;
    }
    const auto rotated_grads = nra_loss_grad(rotated, labels, NraConfig{});

    for (std::size_t i = 0; i < base.size(); ++i) {
        const double gx = c * base[i][0] - s * base[i][1];
        const double gy = s * base[i][0] + c * base[i][1];
        CHECK(rotated_grads[i][0] == doctest::Approx(gx).epsilon(1e-9));
        CHECK(rotated_grads[i][1] == doctest::Approx(gy).epsilon(1e-9));
    }
}

TEST_CASE("triplet_loss uses squared distances with a hinge") {
    CHECK(triplet_loss(1.0, 2.0, TripletConfig{0.5}) == 0.0);
    CHECK(triplet_loss(1.0, 1.0, TripletConfig{0.5}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(triplet_loss(0.0, 0.0, TripletConfig{0.0}) == 0.0);
    CHECK(triplet_loss(2.0, 1.0, TripletConfig{0.0}) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(triplet_loss(3.0, 1.0, TripletConfig{1.0}) == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("triplet_loss rejects negative distances and margins") {
    CHECK_THROWS_AS(triplet_loss(-1.0, 2.0, TripletConfig{0.0}), DomainError);
    CHECK_THROWS_AS(triplet_loss(1.0, -2.0, TripletConfig{0.0}), DomainError);
    CHECK_THROWS_AS(triplet_loss(1.0, 2.0, TripletConfig{-0.5}), DomainError);
}
