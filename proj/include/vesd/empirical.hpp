#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "vesd/spectral.hpp"

namespace vesd {

/// Right-continuous step distribution function with strictly positive jumps
/// at distinct, ascending points. Houses both the ESD and the VESD.
class WeightedStepCDF {
public:
    WeightedStepCDF() = default;

    /// Builds the step function placing `weights[i]` at `points[i]`. Points
    /// need not be sorted; ties are merged and zero weights dropped. Weights
    /// below -1e-12 or a total differing from 1 by more than 1e-10 throw
    /// DomainError. The final cumulative value is pinned to exactly 1.
    static WeightedStepCDF from_weights(std::span<const double> points, std::span<const double> weights,
                                        std::size_t n = 0);

    /// H(x): mass at or left of x.
    double operator()(double x) const;
    /// H(x-): mass strictly left of x.
    double left_limit(double x) const;

    std::span<const double> jump_points() const { return points_; }
    std::span<const double> cum_weights() const { return cum_; }
    /// Mass of each jump, aligned with jump_points().
    std::span<const double> jump_masses() const { return mass_; }
    std::size_t jumps() const { return points_.size(); }
    /// Dimension of the matrix the function came from.
    std::size_t n() const { return n_; }

    /// Two-column CSV: jump_point,cum_weight.
    void write_csv(std::ostream& out) const;

private:
    std::vector<double> points_;
    std::vector<double> cum_;
    std::vector<double> mass_;
    std::size_t n_ = 0;
};

/// Partial-sum process of eigenvector weights evaluated at t = i/n.
struct BridgePath {
    std::vector<double> times;
    std::vector<double> values;
};

/// H(x) = sum over lambda_i <= x of |y_i|^2.
WeightedStepCDF build_vesd(const SpectralData& sd);
/// F(x) = #{lambda_i <= x} / n.
WeightedStepCDF build_esd(const SpectralData& sd);

/// sum_j mass_j / (point_j - z). Throws DomainError for Im z <= 0.
std::complex<double> empirical_stieltjes(const WeightedStepCDF& cdf, std::complex<double> z);

/// Q_n(i/n) = sqrt(n/2) sum_{j <= i} (w_j - 1/n), weights in ascending
/// eigenvalue order.
BridgePath bridge_path(const SpectralData& sd);

/// Largest discrepancy between Q_n(F(x)) and sqrt(n/2)(H(x) - F(x)) over the
/// eigenvalues, with F the ESD and H the VESD.
double bridge_relation_check(const SpectralData& sd);

}  // namespace vesd
