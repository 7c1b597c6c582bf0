#include "vesd/berry_esseen.hpp"

#include <cmath>
#include <numbers>

#include "vesd/metrics.hpp"
#include "vesd/semicircle.hpp"

namespace vesd {

SmoothingInequalityParams SmoothingInequalityParams::at_dimension(std::size_t n, double c0) const {
    SmoothingInequalityParams p = *this;
    p.v = c0 / std::sqrt(static_cast<double>(n));
    return p;
}

SmoothingInequalityParams derive_constants(double a, double b, double tau) {
    if (!(b > 0.0) || !(a > b)) throw DomainError("smoothing inequality needs A > B > 0");
    if (!(tau > 1.0)) throw DomainError("smoothing inequality needs tau > 1 so that gamma > 1/2");
    SmoothingInequalityParams p;
    p.a = a;
    p.b = b;
    p.tau = tau;
    p.gamma = 2.0 / std::numbers::pi * std::atan(tau);
    if (!(p.gamma > 0.5)) throw DomainError("gamma must exceed 1/2");
    p.kappa = 4.0 * b / (std::numbers::pi * (a - b) * (2.0 * p.gamma - 1.0));
    if (!(p.kappa < 1.0)) throw DomainError("kappa = " + std::to_string(p.kappa) + " must be below 1");
    return p;
}

SmoothingTerms smoothing_terms(const WeightedStepCDF& h, const SmoothingInequalityParams& params, int refine) {
    const double v = params.v;
    if (!(v > 0.0)) throw DomainError("smoothing inequality needs v > 0");
    if (params.b < semicircle::kEdge) throw DomainError("tail term is exact only for B >= 2");
    if (refine < 1) throw DomainError("refine must be positive");

    const auto derived = derive_constants(params.a, params.b, params.tau);
    SmoothingTerms terms;
    terms.prefactor = 1.0 / (std::numbers::pi * (1.0 - derived.kappa) * (2.0 * derived.gamma - 1.0));

    // Composite trapezoid over [-A, A].
    const double span = 2.0 * params.a;
    const auto steps = static_cast<std::size_t>(std::ceil(span / (v / 10.0))) * static_cast<std::size_t>(refine);
    const double du = span / static_cast<double>(steps);
    double sum = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const std::complex<double> z(-params.a + static_cast<double>(k) * du, v);
        const double g = std::abs(empirical_stieltjes(h, z) - semicircle::stieltjes(z));
        sum += (k == 0 || k == steps) ? 0.5 * g : g;
    }
    terms.transform = sum * du;

    // Beyond B the semicircle CDF is 0 or 1, so each jump outside [-B, B]
    // contributes its mass times its distance to the boundary.
    double tail = 0.0;
    const auto points = h.jump_points();
    const auto mass = h.jump_masses();
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (points[j] < -params.b) tail += mass[j] * (-params.b - points[j]);
        if (points[j] > params.b) tail += mass[j] * (points[j] - params.b);
    }
    terms.tail = 2.0 * std::numbers::pi / v * tail;

    terms.modulus = semicircle::window_modulus(2.0 * v * params.tau) / v;
    return terms;
}

double smoothing_rhs(const WeightedStepCDF& h, const SmoothingInequalityParams& params) {
    return smoothing_terms(h, params).total();
}

InequalityCheck verify_inequality(const WeightedStepCDF& h, const SmoothingInequalityParams& params) {
    InequalityCheck check;
    check.rhs = smoothing_rhs(h, params);
    check.lhs = kolmogorov_to_semicircle(h).distance;
    check.holds = check.lhs <= check.rhs * (1.0 + 1e-6);
    return check;
}

}  // namespace vesd
