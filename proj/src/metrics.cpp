#include "vesd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "vesd/semicircle.hpp"
#include "vesd/simd/kernels.hpp"

namespace vesd {

std::string_view to_string(SupSide side) {
    switch (side) {
        case SupSide::AtJump: return "at_jump";
        case SupSide::LeftLimit: return "left_limit";
        case SupSide::SupportEdge: return "support_edge";
    }
    return "?";
}

DistanceReport kolmogorov_to_semicircle(const WeightedStepCDF& h) {
    const auto points = h.jump_points();
    const auto cum = h.cum_weights();
    const std::size_t count = points.size();

    std::vector<double> f(count), left(count);
    for (std::size_t j = 0; j < count; ++j) {
        f[j] = semicircle::cdf(points[j]);
        left[j] = j == 0 ? 0.0 : cum[j - 1];
    }
    const double best = std::max(simd::max_abs_diff(f, left), simd::max_abs_diff(f, cum));

    // The max is exact, so locate its first occurrence in x order; at a tie the
    // left limit comes before the value at the jump.
    DistanceReport report{0.0, -semicircle::kEdge, SupSide::SupportEdge};
    for (std::size_t j = 0; j < count; ++j) {
        if (std::fabs(f[j] - left[j]) == best) {
            report = {best, points[j], SupSide::LeftLimit};
            break;
        }
        if (std::fabs(f[j] - cum[j]) == best) {
            report = {best, points[j], SupSide::AtJump};
            break;
        }
    }
    for (double edge : {-semicircle::kEdge, semicircle::kEdge}) {
        const double gap = std::fabs(h(edge) - semicircle::cdf(edge));
        if (gap > report.distance) report = {gap, edge, SupSide::SupportEdge};
    }
    return report;
}

double kolmogorov_between(const WeightedStepCDF& h1, const WeightedStepCDF& h2) {
    std::vector<double> grid;
    grid.reserve(h1.jumps() + h2.jumps());
    std::merge(h1.jump_points().begin(), h1.jump_points().end(), h2.jump_points().begin(),
               h2.jump_points().end(), std::back_inserter(grid));
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<double> a(2 * grid.size()), b(2 * grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        a[2 * k] = h1.left_limit(grid[k]);
        b[2 * k] = h2.left_limit(grid[k]);
        a[2 * k + 1] = h1(grid[k]);
        b[2 * k + 1] = h2(grid[k]);
    }
    return simd::max_abs_diff(a, b);
}

RateFit fit_rate(std::span<const double> ns, std::span<const double> mean_distances) {
    if (ns.size() != mean_distances.size()) throw DomainError("fit_rate: length mismatch");
    if (ns.size() < 3) throw DomainError("fit_rate needs at least three points");
    const std::size_t m = ns.size();

    std::vector<double> lx(m), ly(m);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (!(ns[i] > 0.0)) throw DomainError("fit_rate: dimensions must be positive");
        if (!(mean_distances[i] > 0.0)) throw DomainError("fit_rate: distances must be positive");
        lx[i] = std::log(ns[i]);
        ly[i] = std::log(mean_distances[i]);
        num += mean_distances[i] / std::sqrt(ns[i]);
        den += 1.0 / ns[i];
    }

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("fit_rate needs at least two distinct dimensions");

    RateFit fit;
    fit.slope = sxy / sxx;
    fit.log_coefficient = my - fit.slope * mx;
    fit.fixed_exponent_coefficient = num / den;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ly[i] - (fit.log_coefficient + fit.slope * lx[i]);
        ss_res += r * r;
    }
    // A constant series is fitted exactly by slope 0.
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

}  // namespace vesd
