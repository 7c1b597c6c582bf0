#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vesd/ensemble.hpp"

namespace vesd {

/// Eigenvalues in ascending order paired with the weights |u_i^* x|^2 of one
/// unit vector x.
struct SpectralData {
    std::vector<double> eigenvalues;
    std::vector<double> weights;
    std::string vector_id;

    std::size_t n() const { return eigenvalues.size(); }
};

/// Full eigendecomposition of W followed by projection of x onto the
/// eigenbasis. Eigenvectors are discarded after projection.
/// Throws SolverError when the eigensolver fails to converge.
SpectralData decompose(const MatrixSample& w, const UnitVector& x, std::string vector_id = {});

/// One decomposition shared by several unit vectors.
std::vector<SpectralData> decompose(const MatrixSample& w, std::span<const UnitVector> xs,
                                    std::span<const std::string> vector_ids = {});

/// Eigenvalues only, ascending.
std::vector<double> eigenvalues(const MatrixSample& w);

/// max_i |W u_i - lambda_i u_i| / |W| over the computed eigenpairs (|W| is the
/// spectral norm; 1 is used for the zero matrix).
double max_eigen_residual(const MatrixSample& w);

/// Evaluates x^*(W - zI)^{-1} x by Householder reduction W = Q T Q^* followed
/// by a tridiagonal solve; the reduction is done once and reused for every z.
class ResolventSolver {
public:
    ResolventSolver(const MatrixSample& w, const UnitVector& x);

    /// Throws DomainError for Im z <= 0.
    std::complex<double> operator()(std::complex<double> z) const;

private:
    Eigen::VectorXd diag_;
    Eigen::VectorXd offdiag_;
    Eigen::VectorXcd projected_;  // Q^* x
};

/// x^*(W - zI)^{-1} x by direct solve (not from eigendata).
std::complex<double> resolvent_quadratic_form(const MatrixSample& w, const UnitVector& x,
                                              std::complex<double> z);

}  // namespace vesd
