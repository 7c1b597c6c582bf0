#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace vesd {

/// The semicircle law on [-2, 2].
namespace semicircle {

inline constexpr double kEdge = 2.0;

double density(double x);

/// F(x) = 1/2 + x sqrt(4 - x^2) / (4 pi) + asin(x / 2) / pi on [-2, 2].
double cdf(double x);

/// Root of s^2 + z s + 1 = 0 with Im s > 0. Throws DomainError for Im z <= 0.
std::complex<double> stieltjes(std::complex<double> z);

/// |h| / pi, a uniform bound on |F(x + h) - F(x)|.
double lipschitz_modulus(double h);

/// sup_x of the integral of |F(x + h) - F(x)| over |h| <= half_width.
/// The density is symmetric and unimodal, so the sup is attained at x = 0.
double window_modulus(double half_width);

}  // namespace semicircle

/// Spectral-parameter domain for Stieltjes-transform comparisons:
/// z = u + i v(n) with v(n) = c0 / sqrt(n) and u on a grid in [u_min, u_max].
struct EvaluationDomain {
    double u_min = -16.0;
    double u_max = 16.0;
    double c0 = 2.0;
    double u_step = 0.5;

    void validate() const;
    double v(std::size_t n) const;
    std::vector<double> u_grid() const;
};

}  // namespace vesd
