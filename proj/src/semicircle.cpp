#include "vesd/semicircle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vesd/error.hpp"

namespace vesd {

namespace semicircle {

double density(double x) {
    if (x <= -kEdge || x >= kEdge) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

double cdf(double x) {
    if (x <= -kEdge) return 0.0;
    if (x >= kEdge) return 1.0;
    const double value =
        0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) + std::asin(0.5 * x) / std::numbers::pi;
    return std::clamp(value, 0.0, 1.0);
}

std::complex<double> stieltjes(std::complex<double> z) {
    if (!(z.imag() > 0.0)) throw DomainError("Stieltjes transform needs Im z > 0");
    // The roots are s and 1/s. Form the larger one without cancellation and
    // take whichever of the pair lies in the upper half plane.
    const std::complex<double> root = std::sqrt(z * z - 4.0);
    const std::complex<double> plus = -0.5 * (z + root);
    const std::complex<double> minus = -0.5 * (z - root);
    const std::complex<double> big = std::abs(plus) >= std::abs(minus) ? plus : minus;
    const std::complex<double> small = 1.0 / big;
    return small.imag() >= big.imag() ? small : big;
}

double lipschitz_modulus(double h) { return std::fabs(h) / std::numbers::pi; }

double window_modulus(double half_width) {
    // Integral over h in [0, a] of F(h) - F(-h) = 2F(h) - 1, whose antiderivative
    // on [0, 2] is -(4 - h^2)^{3/2} / (6 pi) + (2 / pi)(h asin(h/2) + sqrt(4 - h^2)).
    const double a = std::fabs(half_width);
    const double inside = std::min(a, kEdge);
    const auto antiderivative = [](double h) {
        const double r = std::sqrt(std::max(4.0 - h * h, 0.0));
        return -r * r * r / (6.0 * std::numbers::pi)
               + 2.0 / std::numbers::pi * (h * std::asin(0.5 * h) + r);
    };
    return antiderivative(inside) - antiderivative(0.0) + std::max(a - kEdge, 0.0);
}

}  // namespace semicircle

void EvaluationDomain::validate() const {
    if (!(u_min < u_max)) throw DomainError("evaluation domain needs u_min < u_max");
    if (!(c0 > 0.0)) throw DomainError("evaluation domain needs c0 > 0");
    if (!(u_step > 0.0)) throw DomainError("evaluation domain needs u_step > 0");
}

double EvaluationDomain::v(std::size_t n) const {
    return c0 / std::sqrt(static_cast<double>(n));
}

std::vector<double> EvaluationDomain::u_grid() const {
    validate();
    const auto steps = static_cast<std::size_t>(std::floor((u_max - u_min) / u_step + 1e-9));
    std::vector<double> grid(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) grid[k] = u_min + static_cast<double>(k) * u_step;
    return grid;
}

}  // namespace vesd
