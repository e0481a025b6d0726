#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "knn/entropy.hpp"
#include "knn/point_set.hpp"
#include "support/generators.hpp"

using knn::DuplicatePolicy;
using knn::EntropyConfig;
using knn::EntropyVariant;
using knn::PointSet;

namespace {

constexpr double kEulerGamma = 0.5772156649015328606;
constexpr double kGaussianEntropy1d = 1.4189385332046727; // 0.5 * ln(2*pi*e)

EntropyConfig config_with(std::size_t k, EntropyVariant variant = EntropyVariant::corrected) {
    EntropyConfig config;
    config.k = k;
    config.variant = variant;
    return config;
}

} // namespace

TEST_CASE("digamma reference values") {
    CHECK(std::abs(knn::digamma(1.0) + kEulerGamma) < 1e-10);
    CHECK(std::abs(knn::digamma(2.0) - (1.0 - kEulerGamma)) < 1e-10);
    const double psi_half = -kEulerGamma - 2.0 * std::numbers::ln2;
    CHECK(std::abs(knn::digamma(0.5) - psi_half) < 1e-10);
    CHECK_THROWS_AS((void)knn::digamma(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)knn::digamma(-3.0), std::invalid_argument);
}

TEST_CASE("digamma recurrence Psi(x+1) - Psi(x) = 1/x") {
    for (double x = 0.5; x <= 100.0; x += 0.37)
        CHECK(std::abs(knn::digamma(x + 1.0) - knn::digamma(x) - 1.0 / x) < 1e-10);
}

TEST_CASE("unit ball volume closed forms and recurrence") {
    CHECK(knn::unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(knn::unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-12));
    CHECK(knn::unit_ball_volume(3) ==
          doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)knn::unit_ball_volume(0), std::invalid_argument);

    for (std::size_t d = 1; d <= 198; ++d) {
        const double expected =
            knn::unit_ball_volume(d) * 2.0 * std::numbers::pi / static_cast<double>(d + 2);
        CHECK(knn::unit_ball_volume(d + 2) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("rho_k on the line and with duplicates") {
    const PointSet line(3, 1, {0, 1, 3});
    CHECK(knn::rho_k(line, 0, 1) == 1.0);
    CHECK(knn::rho_k(line, 0, 2) == 3.0);
    CHECK(knn::rho_k(line, 2, 1) == 2.0);
    CHECK_THROWS_AS((void)knn::rho_k(line, 0, 3), std::invalid_argument);

    // A coordinate-identical point with a different index is a neighbor at
    // distance zero.
    const PointSet dup(3, 1, {5, 5, 9});
    CHECK(knn::rho_k(dup, 0, 1) == 0.0);
    CHECK(knn::rho_k(dup, 2, 1) == 4.0);
}

TEST_CASE("rho_k matches a sort-all-distances oracle") {
    const PointSet points = testgen::uniform_points(100, 3, 19);
    const std::size_t k = 4;
    const std::vector<double> all = knn::rho_k_all(points, k);
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<double> dists;
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j == i) continue;
            double acc = 0.0;
            for (std::size_t c = 0; c < 3; ++c) {
                const double diff = points.coord(i, c) - points.coord(j, c);
                acc += diff * diff;
            }
            dists.push_back(std::sqrt(acc));
        }
        std::sort(dists.begin(), dists.end());
        CHECK(all[i] == dists[k - 1]);
        CHECK(knn::rho_k(points, i, k) == dists[k - 1]);
    }
}

TEST_CASE("literal and corrected variants coincide at d = 1") {
    const PointSet sample = testgen::gaussian_points(400, 1, 31);
    const auto corrected = knn::kl_entropy(sample, config_with(3, EntropyVariant::corrected));
    const auto literal = knn::kl_entropy(sample, config_with(3, EntropyVariant::literal));
    CHECK(corrected.value_nats == doctest::Approx(literal.value_nats).epsilon(1e-12));
}

TEST_CASE("estimate equals the mean of the per-point terms") {
    const PointSet sample = testgen::gaussian_points(300, 2, 37);
    EntropyConfig config = config_with(5);
    config.keep_terms = true;
    const auto estimate = knn::kl_entropy(sample, config);
    REQUIRE(estimate.per_point_terms.has_value());
    REQUIRE(estimate.per_point_terms->size() == 300);
    double sum = 0.0;
    for (double t : *estimate.per_point_terms) sum += t;
    CHECK(estimate.value_nats == doctest::Approx(sum / 300.0).epsilon(1e-12));
}

TEST_CASE("translation invariance and scaling covariance") {
    const PointSet sample = testgen::gaussian_points(500, 2, 43);
    const double base = knn::kl_entropy(sample, config_with(4)).value_nats;

    std::vector<double> shifted = sample.data();
    for (std::size_t i = 0; i < shifted.size(); i += 2) {
        shifted[i] += 12.25;
        shifted[i + 1] -= 3.5;
    }
    const PointSet translated(500, 2, std::move(shifted));
    CHECK(std::abs(knn::kl_entropy(translated, config_with(4)).value_nats - base) < 1e-9);

    for (double a : {0.5, 3.0}) {
        std::vector<double> scaled = sample.data();
        for (double& v : scaled) v *= a;
        const PointSet stretched(500, 2, std::move(scaled));
        const double estimate = knn::kl_entropy(stretched, config_with(4)).value_nats;
        CHECK(std::abs(estimate - base - 2.0 * std::log(a)) < 1e-9);
    }
}

TEST_CASE("duplicate points: error policy names indices, jitter recovers") {
    // Points 1 and 3 coincide.
    const PointSet sample(5, 2, {0, 0, 4, 4, 1, 1, 4, 4, 2, 2});
    CHECK_THROWS_WITH_AS((void)knn::kl_entropy(sample, config_with(1)), doctest::Contains("1"),
                         std::invalid_argument);

    EntropyConfig jitter = config_with(1);
    jitter.policy = DuplicatePolicy::jitter;
    jitter.jitter_seed = 7;
    const auto estimate = knn::kl_entropy(sample, jitter);
    CHECK(std::isfinite(estimate.value_nats));

    EntropyConfig too_big = config_with(5);
    CHECK_THROWS_AS((void)knn::kl_entropy(sample, too_big), std::invalid_argument);
}

TEST_CASE("Gaussian and uniform estimates land near the closed forms") {
    const PointSet gauss = testgen::gaussian_points(4000, 1, 2024);
    const double g = knn::kl_entropy(gauss, config_with(5)).value_nats;
    CHECK(std::abs(g - kGaussianEntropy1d) < 0.08);

    const PointSet uniform = testgen::uniform_points(4000, 2, 2025);
    const double u = knn::kl_entropy(uniform, config_with(5)).value_nats;
    CHECK(std::abs(u) < 0.08);
}

TEST_CASE("absolute error shrinks from n=100 to n=10000 for most seeds") {
    int improved = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const double coarse =
            knn::kl_entropy(testgen::gaussian_points(100, 1, 1000 + seed), config_with(5))
                .value_nats;
        const double fine =
            knn::kl_entropy(testgen::gaussian_points(10000, 1, 1000 + seed), config_with(5))
                .value_nats;
        if (std::abs(fine - kGaussianEntropy1d) < std::abs(coarse - kGaussianEntropy1d))
            ++improved;
    }
    CHECK(improved >= 11);
}
