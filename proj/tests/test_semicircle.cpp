#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "vesd/error.hpp"
#include "vesd/semicircle.hpp"

using namespace vesd;
using boost::math::quadrature::tanh_sinh;

namespace {

double density_oracle(double x) { return std::sqrt(std::max(0.0, 4.0 - x * x)) / (2.0 * std::numbers::pi); }

double cdf_quadrature(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    tanh_sinh<double> integrator;
    return integrator.integrate(density_oracle, -2.0, x);
}

std::complex<double> stieltjes_quadrature(std::complex<double> z) {
    tanh_sinh<double> integrator;
    const auto re = [z](double x) { return density_oracle(x) * (x - z.real()) / std::norm(x - z); };
    const auto im = [z](double x) { return density_oracle(x) * z.imag() / std::norm(x - z); };
    // Split at u so the peak of width v sits on a panel boundary.
    const double u = std::clamp(z.real(), -2.0, 2.0);
    double r = 0.0, i = 0.0;
    if (u > -2.0) {
        r += integrator.integrate(re, -2.0, u);
        i += integrator.integrate(im, -2.0, u);
    }
    if (u < 2.0) {
        r += integrator.integrate(re, u, 2.0);
        i += integrator.integrate(im, u, 2.0);
    }
    return {r, i};
}

}  // namespace

TEST(Semicircle, CdfMatchesQuadrature) {
    for (double x = -2.5; x <= 2.5; x += 0.01) EXPECT_NEAR(semicircle::cdf(x), cdf_quadrature(x), 1e-12) << x;
}

TEST(Semicircle, CdfKnownValues) {
    EXPECT_NEAR(semicircle::cdf(0.0), 0.5, 1e-15);
    EXPECT_NEAR(semicircle::cdf(1.0), 0.8044989, 1e-7);
    EXPECT_NEAR(semicircle::cdf(1.0), oracle::semicircle_cdf_midpoint(1.0), 1e-8);
    EXPECT_EQ(semicircle::cdf(-3.0), 0.0);
    EXPECT_EQ(semicircle::cdf(3.0), 1.0);
}

TEST(Semicircle, CdfSymmetricAndMonotone) {
    double prev = 0.0;
    for (double x = -2.2; x <= 2.2; x += 0.001) {
        EXPECT_NEAR(semicircle::cdf(x) + semicircle::cdf(-x), 1.0, 1e-14);
        EXPECT_GE(semicircle::cdf(x), prev);
        prev = semicircle::cdf(x);
    }
}

TEST(Semicircle, DensityIntegratesToOne) {
    tanh_sinh<double> integrator;
    EXPECT_NEAR(integrator.integrate([](double x) { return semicircle::density(x); }, -2.0, 2.0), 1.0, 1e-12);
    EXPECT_EQ(semicircle::density(2.5), 0.0);
    EXPECT_NEAR(semicircle::density(0.0), 1.0 / std::numbers::pi, 1e-15);
}

TEST(Semicircle, StieltjesOnImaginaryAxis) {
    // z = iy gives s = it with t^2 + y t - 1 = 0.
    for (double y : {0.01, 1.0, 10.0}) {
        const double t = (-y + std::sqrt(y * y + 4.0)) / 2.0;
        const auto s = semicircle::stieltjes({0.0, y});
        EXPECT_NEAR(s.real(), 0.0, 1e-15);
        EXPECT_NEAR(s.imag(), t, 1e-14);
    }
    EXPECT_NEAR(semicircle::stieltjes({0.0, 1.0}).imag(), 0.6180340, 1e-7);
}

TEST(Semicircle, StieltjesRejectsRealAxis) {
    EXPECT_THROW(semicircle::stieltjes({0.5, 0.0}), DomainError);
    EXPECT_THROW(semicircle::stieltjes({0.5, -1.0}), DomainError);
}

TEST(Semicircle, StieltjesFixedPointAndBound) {
    const EvaluationDomain d;
    for (int i = 0; i < 1000; ++i) {
        const double u = d.u_min + (d.u_max - d.u_min) * i / 999.0;
        for (double v : {1e-4, 0.05, 1.0}) {
            const std::complex<double> z(u, v);
            const auto s = semicircle::stieltjes(z);
            EXPECT_LE(std::abs(s * s + z * s + 1.0), 1e-12) << z;
            EXPECT_GT(s.imag(), 0.0);
            EXPECT_LE(std::abs(s), 1.0 + 1e-12);
        }
    }
}

TEST(Semicircle, StieltjesMatchesIntegral) {
    for (double u : {-3.0, -1.5, 0.0, 0.7, 2.0, 4.0})
        for (double v : {0.1, 0.5, 2.0}) {
            const std::complex<double> z(u, v);
            EXPECT_LE(std::abs(semicircle::stieltjes(z) - stieltjes_quadrature(z)), 1e-8) << z;
        }
}

TEST(Semicircle, LipschitzModulusBoundsIncrements) {
    const double h = 0.01;
    EXPECT_NEAR(semicircle::lipschitz_modulus(h), 0.0031831, 1e-7);
    double worst = 0.0;
    for (double x = -2.5; x <= 2.5; x += 1e-4) worst = std::max(worst, semicircle::cdf(x + h) - semicircle::cdf(x));
    EXPECT_LE(worst, semicircle::lipschitz_modulus(h));
    EXPECT_GT(worst, 0.999 * semicircle::lipschitz_modulus(h));
}

TEST(Semicircle, WindowModulusMatchesGridOracle) {
    tanh_sinh<double> integrator;
    for (double a : {0.01, 0.1, 0.5, 1.5, 2.0, 3.0}) {
        // Split at the kinks: h = 0 and the support edges seen from x.
        const auto at = [&](double x) {
            std::vector<double> cuts{-a, 0.0, a};
            for (double e : {-2.0 - x, 2.0 - x})
                if (std::abs(e) < a) cuts.push_back(e);
            std::sort(cuts.begin(), cuts.end());
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
                if (cuts[i + 1] > cuts[i])
                    acc += integrator.integrate(
                        [&](double h) { return std::abs(semicircle::cdf(x + h) - semicircle::cdf(x)); }, cuts[i],
                        cuts[i + 1]);
            return acc;
        };
        const double w = semicircle::window_modulus(a);
        EXPECT_NEAR(w, at(0.0), 1e-10) << a;
        for (double x = -3.0; x <= 3.0; x += 0.05) EXPECT_LE(at(x), w + 1e-10) << a << " " << x;
        // |F(h) - F(0)| <= |h| / pi integrates to a^2 / pi.
        EXPECT_LE(w, a * a / std::numbers::pi + 1e-15);
    }
}

TEST(EvaluationDomain, GridAndScale) {
    EvaluationDomain d;
    const auto grid = d.u_grid();
    EXPECT_EQ(grid.size(), 65u);
    EXPECT_EQ(grid.front(), -16.0);
    EXPECT_EQ(grid.back(), 16.0);
    EXPECT_NEAR(d.v(400), 0.1, 1e-15);
    d.u_step = 0.0;
    EXPECT_THROW(d.validate(), DomainError);
}
