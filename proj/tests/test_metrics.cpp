#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vesd/error.hpp"
#include "vesd/metrics.hpp"
#include "vesd/semicircle.hpp"

using namespace vesd;

namespace {

WeightedStepCDF from(std::vector<double> p, std::vector<double> w) { return WeightedStepCDF::from_weights(p, w); }

/// max |H - F| over a uniform grid of `points` on [-3, 3], brute force.
double grid_sup(const oracle::RandomAtoms& a, std::size_t points) {
    double worst = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double x = -3.0 + 6.0 * static_cast<double>(i) / (points - 1);
        worst = std::max(worst, std::abs(oracle::step_cdf(a.points, a.weights, x) - semicircle::cdf(x)));
    }
    return worst;
}

}  // namespace

TEST(Kolmogorov, PointMassAtZero) {
    const auto r = kolmogorov_to_semicircle(from({0.0}, {1.0}));
    EXPECT_NEAR(r.distance, 0.5, 1e-15);
    EXPECT_EQ(r.argmax_location, 0.0);
    EXPECT_EQ(r.side, SupSide::LeftLimit);
}

TEST(Kolmogorov, TwoAtoms) {
    // Atoms at +-1: the sup is 1/2 - F(-1) = sqrt(3)/(4 pi) + 1/6, reached
    // at -1 and again at the left limit of 1.
    const auto h = from({-1.0, 1.0}, {0.5, 0.5});
    const auto r = kolmogorov_to_semicircle(h);
    EXPECT_NEAR(r.distance, std::sqrt(3.0) / (4.0 * std::numbers::pi) + 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(r.distance, 0.3044989, 1e-7);
    oracle::RandomAtoms a{{-1.0, 1.0}, {0.5, 0.5}};
    EXPECT_NEAR(r.distance, grid_sup(a, 600001), 1e-5);
}

TEST(Kolmogorov, FarAwayMass) {
    const auto r = kolmogorov_to_semicircle(from({10.0}, {1.0}));
    // |H - F| = 1 on [2, 10); the first maximizer met is the left limit at 10.
    EXPECT_EQ(r.distance, 1.0);
    EXPECT_EQ(r.side, SupSide::LeftLimit);
    EXPECT_EQ(r.argmax_location, 10.0);
}

TEST(Kolmogorov, DominatesFineGrid) {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_atoms(gen, 1 + trial % 30);
        const double exact = kolmogorov_to_semicircle(WeightedStepCDF::from_weights(a.points, a.weights)).distance;
        const double grid = grid_sup(a, 1'000'000);
        EXPECT_GE(exact, grid - 1e-15);
        EXPECT_LE(exact - grid, 1e-5);
    }
}

TEST(Kolmogorov, InvariantToInputOrder) {
    std::mt19937_64 gen(2);
    auto a = oracle::random_atoms(gen, 20);
    const double d1 = kolmogorov_to_semicircle(WeightedStepCDF::from_weights(a.points, a.weights)).distance;
    std::reverse(a.points.begin(), a.points.end());
    std::reverse(a.weights.begin(), a.weights.end());
    const double d2 = kolmogorov_to_semicircle(WeightedStepCDF::from_weights(a.points, a.weights)).distance;
    EXPECT_EQ(d1, d2);
}

TEST(KolmogorovBetween, Examples) {
    const auto a = from({0.0}, {1.0});
    const auto b = from({1.0}, {1.0});
    const auto c = from({0.0, 1.0}, {0.5, 0.5});
    EXPECT_EQ(kolmogorov_between(a, a), 0.0);
    EXPECT_EQ(kolmogorov_between(a, b), 1.0);
    EXPECT_EQ(kolmogorov_between(a, c), 0.5);
    EXPECT_EQ(kolmogorov_between(c, a), 0.5);
}

TEST(KolmogorovBetween, TriangleInequality) {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = oracle::random_atoms(gen, 5);
        const auto q = oracle::random_atoms(gen, 7);
        const auto hp = WeightedStepCDF::from_weights(p.points, p.weights);
        const auto hq = WeightedStepCDF::from_weights(q.points, q.weights);
        const double dp = kolmogorov_to_semicircle(hp).distance;
        const double dq = kolmogorov_to_semicircle(hq).distance;
        EXPECT_LE(kolmogorov_between(hp, hq), dp + dq + 1e-15);
        EXPECT_LE(std::abs(dp - dq), kolmogorov_between(hp, hq) + 1e-15);
    }
}

TEST(RateFit, ExactPowerLaw) {
    const std::vector<double> ns{50, 100, 200, 400, 800};
    std::vector<double> d;
    for (double n : ns) d.push_back(1.15 / std::sqrt(n));
    const auto fit = fit_rate(ns, d);
    EXPECT_NEAR(fit.slope, -0.5, 1e-12);
    EXPECT_NEAR(std::exp(fit.log_coefficient), 1.15, 1e-12);
    EXPECT_NEAR(fit.fixed_exponent_coefficient, 1.15, 1e-12);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(RateFit, OtherExponent) {
    const std::vector<double> ns{10, 20, 40};
    const std::vector<double> d{2.0 / 10, 2.0 / 20, 2.0 / 40};
    EXPECT_NEAR(fit_rate(ns, d).slope, -1.0, 1e-12);
}

TEST(RateFit, RejectsBadInput) {
    EXPECT_THROW(fit_rate(std::vector<double>{1, 2}, std::vector<double>{1, 1}), DomainError);
    EXPECT_THROW(fit_rate(std::vector<double>{1, 2, 3}, std::vector<double>{1, 0, 1}), DomainError);
    EXPECT_THROW(fit_rate(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1}), DomainError);
}
