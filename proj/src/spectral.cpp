#include "vesd/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace vesd {

namespace {

template <typename Matrix>
Eigen::SelfAdjointEigenSolver<Matrix> solve_eigen(const Matrix& w, const SeedRecord& seed, int options) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(w, options);
    if (solver.info() != Eigen::Success) throw SolverError("eigensolver did not converge", seed);
    return solver;
}

template <typename Matrix>
std::vector<SpectralData> project(const Matrix& w, const SeedRecord& seed, std::span<const UnitVector> xs,
                                  std::span<const std::string> ids) {
    const auto solver = solve_eigen(w, seed, Eigen::ComputeEigenvectors);
    const auto n = w.rows();

    Matrix basis_in(n, static_cast<Eigen::Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (xs[k].size() != n) throw DomainError("unit vector length does not match the matrix");
        basis_in.col(static_cast<Eigen::Index>(k)) = xs[k].template cast<typename Matrix::Scalar>();
    }
    const Matrix projected = solver.eigenvectors().adjoint() * basis_in;

    std::vector<double> lambda(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    std::vector<SpectralData> out(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        auto& sd = out[k];
        sd.eigenvalues = lambda;
        sd.weights.resize(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            sd.weights[static_cast<std::size_t>(i)] = std::norm(std::complex<double>(projected(i, static_cast<Eigen::Index>(k))));
        if (k < ids.size()) sd.vector_id = ids[k];
    }
    return out;
}

template <typename Matrix>
double residual(const Matrix& w, const SeedRecord& seed) {
    const auto solver = solve_eigen(w, seed, Eigen::ComputeEigenvectors);
    const auto& values = solver.eigenvalues();
    const double norm = std::max(values.cwiseAbs().maxCoeff(), 0.0);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const auto u = solver.eigenvectors().col(i);
        worst = std::max(worst, (w * u - values(i) * u).norm());
    }
    return worst / (norm > 0.0 ? norm : 1.0);
}

}  // namespace

SpectralData decompose(const MatrixSample& w, const UnitVector& x, std::string vector_id) {
    const std::string ids[] = {std::move(vector_id)};
    return std::move(decompose(w, std::span<const UnitVector>(&x, 1), ids).front());
}

std::vector<SpectralData> decompose(const MatrixSample& w, std::span<const UnitVector> xs,
                                    std::span<const std::string> vector_ids) {
    for (const auto& x : xs)
        if (std::abs(x.norm() - 1.0) > 1e-10) throw DomainError("decompose expects unit vectors");
    return std::visit([&](const auto& m) { return project(m, w.seed, xs, vector_ids); }, w.entries);
}

std::vector<double> eigenvalues(const MatrixSample& w) {
    return std::visit(
        [&](const auto& m) {
            const auto solver = solve_eigen(m, w.seed, Eigen::EigenvaluesOnly);
            return std::vector<double>(solver.eigenvalues().data(),
                                       solver.eigenvalues().data() + solver.eigenvalues().size());
        },
        w.entries);
}

double max_eigen_residual(const MatrixSample& w) {
    return std::visit([&](const auto& m) { return residual(m, w.seed); }, w.entries);
}

// ---------------------------------------------------------------------------

ResolventSolver::ResolventSolver(const MatrixSample& w, const UnitVector& x) {
    if (static_cast<std::size_t>(x.size()) != w.n()) throw DomainError("unit vector length does not match the matrix");
    std::visit(
        [&](const auto& m) {
            using Matrix = std::decay_t<decltype(m)>;
            Eigen::Tridiagonalization<Matrix> tri(m);
            diag_ = tri.diagonal().real();
            offdiag_ = tri.subDiagonal().real();
            const Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1> qx =
                tri.matrixQ().adjoint() * x.cast<typename Matrix::Scalar>();
            projected_ = qx.template cast<std::complex<double>>();
        },
        w.entries);
}

std::complex<double> ResolventSolver::operator()(std::complex<double> z) const {
    if (!(z.imag() > 0.0)) throw DomainError("resolvent needs Im z > 0");
    const Eigen::Index n = diag_.size();
    // LDL^T of the complex symmetric tridiagonal T - zI. Every pivot has
    // Im <= -Im z, so no pivoting is needed.
    Eigen::VectorXcd pivot(n), g(n);
    pivot(0) = diag_(0) - z;
    g(0) = projected_(0);
    for (Eigen::Index k = 1; k < n; ++k) {
        const std::complex<double> l = offdiag_(k - 1) / pivot(k - 1);
        pivot(k) = diag_(k) - z - l * offdiag_(k - 1);
        g(k) = projected_(k) - l * g(k - 1);
    }
    std::complex<double> t = g(n - 1) / pivot(n - 1);
    std::complex<double> acc = std::conj(projected_(n - 1)) * t;
    for (Eigen::Index k = n - 2; k >= 0; --k) {
        t = (g(k) - offdiag_(k) * t) / pivot(k);
        acc += std::conj(projected_(k)) * t;
    }
    return acc;
}

std::complex<double> resolvent_quadratic_form(const MatrixSample& w, const UnitVector& x, std::complex<double> z) {
    if (!(z.imag() > 0.0)) throw DomainError("resolvent needs Im z > 0");
    return ResolventSolver(w, x)(z);
}

}  // namespace vesd
