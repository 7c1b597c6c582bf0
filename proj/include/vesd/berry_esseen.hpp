#pragma once

#include <cstddef>

#include "vesd/empirical.hpp"

namespace vesd {

/// Constants of the Stieltjes-transform smoothing inequality
///
///   sup|H - F| <= 1 / (pi (1 - kappa)(2 gamma - 1)) * ( int_{-A}^{A} |s_H - s_F| du
///                 + (2 pi / v) int_{|x| > B} |H - F| dx
///                 + (1 / v) sup_x int_{|h| <= 2 v tau} |F(x + h) - F(x)| dh ),
///
/// with gamma = (2/pi) atan(tau) > 1/2 and kappa = 4B / (pi (A - B)(2 gamma - 1)) < 1.
struct SmoothingInequalityParams {
    double a = 16.0;
    double b = 3.0;
    double tau = 2.0;
    double gamma = 0.0;  ///< filled by derive_constants
    double kappa = 0.0;  ///< filled by derive_constants
    double v = 0.0;  ///< Im z of the integration line

    /// Copy with v = c0 / sqrt(n).
    SmoothingInequalityParams at_dimension(std::size_t n, double c0 = 2.0) const;
};

/// Fills gamma and kappa. Throws DomainError unless A > B > 0, tau > 1,
/// gamma > 1/2 and kappa < 1.
SmoothingInequalityParams derive_constants(double a = 16.0, double b = 3.0, double tau = 2.0);

/// The three bracketed terms and the prefactor, kept apart for reporting.
struct SmoothingTerms {
    double transform = 0.0;  ///< int_{-A}^{A} |s_H(u + iv) - s(u + iv)| du
    double tail = 0.0;       ///< (2 pi / v) int_{|x| > B} |H - F| dx
    double modulus = 0.0;    ///< (1 / v) sup_x int_{|h| <= 2 v tau} |F(x + h) - F(x)| dh
    double prefactor = 0.0;

    double total() const { return prefactor * (transform + tail + modulus); }
};

/// Evaluates the right-hand side with F the semicircle law. gamma and kappa
/// are re-derived from (A, B, tau), so a default-constructed params works. The transform
/// integral uses the composite trapezoid rule with step at most `v / 10`
/// (divided further by `refine`); the tail integral is exact for B >= 2.
/// Throws DomainError for v <= 0 or B < 2.
SmoothingTerms smoothing_terms(const WeightedStepCDF& h, const SmoothingInequalityParams& params,
                               int refine = 1);

double smoothing_rhs(const WeightedStepCDF& h, const SmoothingInequalityParams& params);

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// lhs is the exact Kolmogorov distance; holds when lhs <= rhs (1 + 1e-6).
InequalityCheck verify_inequality(const WeightedStepCDF& h, const SmoothingInequalityParams& params);

}  // namespace vesd
