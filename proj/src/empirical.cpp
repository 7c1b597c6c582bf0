#include "vesd/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "vesd/csv.hpp"
#include "vesd/simd/kernels.hpp"

namespace vesd {

WeightedStepCDF WeightedStepCDF::from_weights(std::span<const double> points, std::span<const double> weights,
                                              std::size_t n) {
    if (points.size() != weights.size()) throw DomainError("points and weights differ in length");
    if (points.empty()) throw DomainError("step CDF needs at least one point");

    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return points[a] < points[b]; });

    double total = 0.0;
    for (double w : weights) {
        if (!(w >= -1e-12)) throw DomainError("negative weight " + std::to_string(w));
        total += std::max(w, 0.0);
    }
    if (std::fabs(total - 1.0) > 1e-10) throw DomainError("weights sum to " + std::to_string(total) + ", not 1");

    WeightedStepCDF cdf;
    cdf.n_ = n ? n : points.size();
    double running = 0.0;
    for (std::size_t idx : order) {
        const double w = std::max(weights[idx], 0.0);
        if (w == 0.0) continue;
        running += w;
        if (!cdf.points_.empty() && cdf.points_.back() == points[idx]) {
            cdf.mass_.back() += w;
            cdf.cum_.back() = running;
        } else {
            cdf.points_.push_back(points[idx]);
            cdf.mass_.push_back(w);
            cdf.cum_.push_back(running);
        }
    }
    cdf.cum_.back() = 1.0;
    return cdf;
}

double WeightedStepCDF::operator()(double x) const {
    const auto it = std::upper_bound(points_.begin(), points_.end(), x);
    return it == points_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - points_.begin()) - 1];
}

double WeightedStepCDF::left_limit(double x) const {
    const auto it = std::lower_bound(points_.begin(), points_.end(), x);
    return it == points_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - points_.begin()) - 1];
}

void WeightedStepCDF::write_csv(std::ostream& out) const {
    out << "jump_point,cum_weight\n";
    for (std::size_t j = 0; j < points_.size(); ++j)
        out << format_double(points_[j]) << ',' << format_double(cum_[j]) << '\n';
}

WeightedStepCDF build_vesd(const SpectralData& sd) {
    return WeightedStepCDF::from_weights(sd.eigenvalues, sd.weights, sd.n());
}

WeightedStepCDF build_esd(const SpectralData& sd) {
    const std::vector<double> uniform(sd.n(), 1.0 / static_cast<double>(sd.n()));
    return WeightedStepCDF::from_weights(sd.eigenvalues, uniform, sd.n());
}

std::complex<double> empirical_stieltjes(const WeightedStepCDF& cdf, std::complex<double> z) {
    if (!(z.imag() > 0.0)) throw DomainError("Stieltjes transform needs Im z > 0");
    return simd::stieltjes_sum(cdf.jump_points(), cdf.jump_masses(), z);
}

BridgePath bridge_path(const SpectralData& sd) {
    const std::size_t n = sd.n();
    const double dn = static_cast<double>(n);
    const double scale = std::sqrt(dn / 2.0);
    BridgePath path;
    path.times.resize(n + 1);
    path.values.resize(n + 1);
    // Kahan-compensated running sum of w_j - 1/n.
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        path.times[i] = static_cast<double>(i) / dn;
        path.values[i] = scale * sum;
        if (i == n) break;
        const double term = (sd.weights[i] - 1.0 / dn) - carry;
        const double next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    return path;
}

double bridge_relation_check(const SpectralData& sd) {
    const auto path = bridge_path(sd);
    const auto vesd = build_vesd(sd);
    const auto esd = build_esd(sd);
    const double scale = std::sqrt(static_cast<double>(sd.n()) / 2.0);

    std::vector<double> sorted = sd.eigenvalues;
    std::sort(sorted.begin(), sorted.end());
    double worst = 0.0;
    for (double x : sorted) {
        const auto count = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
        const double lhs = path.values[count];
        const double rhs = scale * (vesd(x) - esd(x));
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

}  // namespace vesd
