#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "vesd/empirical.hpp"

namespace vesd {

enum class SupSide { AtJump, LeftLimit, SupportEdge };

std::string_view to_string(SupSide side);

struct DistanceReport {
    double distance = 0.0;
    double argmax_location = 0.0;
    SupSide side = SupSide::AtJump;
};

/// Exact sup_x |H(x) - F(x)| against the semicircle CDF.
///
/// F is continuous and H is constant between jumps, so on every open
/// inter-jump interval |H - F| is monotone and its sup is reached at an
/// endpoint. Evaluating H(p) and H(p-) at each jump p, plus the support
/// edges, is therefore exhaustive.
DistanceReport kolmogorov_to_semicircle(const WeightedStepCDF& h);

/// Exact sup_x |H1(x) - H2(x)| over the union of jump points, both sides.
double kolmogorov_between(const WeightedStepCDF& h1, const WeightedStepCDF& h2);

struct RateFit {
    double slope = 0.0;            ///< log-log least squares
    double log_coefficient = 0.0;  ///< intercept of the log-log fit
    double fixed_exponent_coefficient = 0.0;  ///< least-squares C in C n^{-1/2}
    double r_squared = 0.0;        ///< of the log-log fit
};

/// Fits distance ~ C n^slope. Needs at least three points and strictly
/// positive distances; throws DomainError otherwise.
RateFit fit_rate(std::span<const double> ns, std::span<const double> mean_distances);

}  // namespace vesd
