#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "vesd/ensemble.hpp"
#include "vesd/error.hpp"
#include "vesd/spectral.hpp"

using namespace vesd;

namespace {

MatrixSample real_sample(const RealMatrix& m) {
    MatrixSample s;
    s.entries = m;
    return s;
}

UnitVector vec2(double a, double b) {
    UnitVector x(2);
    x << a, b;
    return x;
}

/// s(z) = x^*(W - z)^{-1} x by a dense LU solve, independent of the library.
std::complex<double> dense_solve(const MatrixSample& w, const UnitVector& x, std::complex<double> z) {
    Eigen::MatrixXcd a = w.is_complex() ? w.complex() : w.real().cast<std::complex<double>>().eval();
    a.diagonal().array() -= z;
    const Eigen::VectorXcd xc = x.cast<std::complex<double>>();
    const Eigen::VectorXcd y = a.partialPivLu().solve(xc);
    return xc.dot(y);
}

}  // namespace

TEST(Decompose, TwoByTwoExamples) {
    RealMatrix w(2, 2);
    w << 0, 1, 1, 0;
    const auto sd = decompose(real_sample(w), vec2(1, 0), "e1");
    ASSERT_EQ(sd.n(), 2u);
    EXPECT_NEAR(sd.eigenvalues[0], -1.0, 1e-14);
    EXPECT_NEAR(sd.eigenvalues[1], 1.0, 1e-14);
    EXPECT_NEAR(sd.weights[0], 0.5, 1e-14);
    EXPECT_NEAR(sd.weights[1], 0.5, 1e-14);
    EXPECT_EQ(sd.vector_id, "e1");

    const double r = 1.0 / std::sqrt(2.0);
    const auto aligned = decompose(real_sample(w), vec2(r, r));
    EXPECT_NEAR(aligned.weights[0], 0.0, 1e-14);
    EXPECT_NEAR(aligned.weights[1], 1.0, 1e-14);
}

TEST(Decompose, ZeroMatrix) {
    const auto sd = decompose(MatrixSample::zero(4), UnitVector::Constant(4, 0.5));
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(sd.eigenvalues[i], 0.0);
        total += sd.weights[i];
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(Decompose, RejectsNonUnitVector) {
    EXPECT_THROW(decompose(MatrixSample::zero(2), vec2(1, 1)), DomainError);
    EXPECT_THROW(decompose(MatrixSample::zero(3), vec2(1, 0)), DomainError);
}

TEST(Decompose, WeightsSumToOneAndSorted) {
    for (auto spec : {EnsembleSpec::goe(60), EnsembleSpec::gue(60)}) {
        const auto w = sample_wigner(spec, 2, 0);
        const auto sd = decompose(w, sample_unit_vector(UnitVectorSpec{VectorLaw::StdNormal}, 60, 2, 0));
        double total = 0.0;
        for (std::size_t i = 0; i < sd.n(); ++i) {
            EXPECT_GE(sd.weights[i], 0.0);
            if (i) EXPECT_LE(sd.eigenvalues[i - 1], sd.eigenvalues[i]);
            total += sd.weights[i];
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Decompose, SharedDecompositionMatchesSingle) {
    const auto w = sample_wigner(EnsembleSpec::goe(40), 1, 0);
    const UnitVector a = sample_unit_vector(UnitVectorSpec{}, 40, 1, 0);
    const UnitVector b = sample_unit_vector(UnitVectorSpec::basis(2), 40, 1, 0);
    const std::vector<UnitVector> xs{a, b};
    const std::vector<std::string> ids{"a", "b"};
    const auto both = decompose(w, xs, ids);
    ASSERT_EQ(both.size(), 2u);
    EXPECT_EQ(both[1].vector_id, "b");
    const auto single = decompose(w, b);
    for (std::size_t i = 0; i < 40; ++i) EXPECT_NEAR(both[1].weights[i], single.weights[i], 1e-14);
}

TEST(Resolvent, TwoByTwoAtI) {
    RealMatrix w(2, 2);
    w << 0, 1, 1, 0;
    const auto s = resolvent_quadratic_form(real_sample(w), vec2(1, 0), {0.0, 1.0});
    EXPECT_NEAR(s.real(), 0.0, 1e-14);
    EXPECT_NEAR(s.imag(), 0.5, 1e-14);
    EXPECT_THROW(resolvent_quadratic_form(real_sample(w), vec2(1, 0), {0.0, 0.0}), DomainError);
}

TEST(Resolvent, ZeroMatrixIsMinusInverseZ) {
    const std::complex<double> z(0.3, 0.7);
    const auto s = resolvent_quadratic_form(MatrixSample::zero(5), UnitVector::Unit(5, 1), z);
    EXPECT_NEAR(std::abs(s + 1.0 / z), 0.0, 1e-15);
}

TEST(Resolvent, EigenSumMatchesDenseSolve) {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<int> dim(2, 64);
    std::uniform_real_distribution<double> u(-3.0, 3.0), v(0.01, 2.0);
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t n = dim(gen);
        const auto spec = inst % 2 ? EnsembleSpec::gue(n) : EnsembleSpec::goe(n);
        const auto w = sample_wigner(spec, 17, inst);
        const auto x = sample_unit_vector(UnitVectorSpec{VectorLaw::StdNormal}, n, 17, inst);
        const std::complex<double> z(u(gen), v(gen));
        const auto ref = dense_solve(w, x, z);
        const auto sd = decompose(w, x);
        std::complex<double> eig{};
        for (std::size_t i = 0; i < n; ++i) eig += sd.weights[i] / (sd.eigenvalues[i] - z);
        EXPECT_LE(std::abs(eig - ref) / std::abs(ref), 1e-8) << inst;
        EXPECT_LE(std::abs(resolvent_quadratic_form(w, x, z) - ref) / std::abs(ref), 1e-8) << inst;
        const ResolventSolver solver(w, x);
        EXPECT_LE(std::abs(solver(z) - ref) / std::abs(ref), 1e-8) << inst;
    }
}

TEST(Resolvent, HerglotzProperty) {
    const auto w = sample_wigner(EnsembleSpec::gue(50), 4, 0);
    const ResolventSolver solver(w, sample_unit_vector(UnitVectorSpec{}, 50, 4, 0));
    for (double u = -5; u <= 5; u += 0.25)
        for (double v : {1e-3, 0.1, 1.0, 10.0}) EXPECT_GT(solver({u, v}).imag(), 0.0);
}

TEST(Spectral, BasisAverageIsNormalizedTrace) {
    const std::size_t n = 30;
    const auto w = sample_wigner(EnsembleSpec::goe(n), 6, 0);
    const std::complex<double> z(0.2, 0.3);
    std::complex<double> avg{};
    for (std::size_t k = 0; k < n; ++k) avg += resolvent_quadratic_form(w, UnitVector::Unit(n, k), z);
    avg /= static_cast<double>(n);
    std::complex<double> trace{};
    for (double l : eigenvalues(w)) trace += 1.0 / (l - z);
    trace /= static_cast<double>(n);
    EXPECT_LE(std::abs(avg - trace), 1e-12);
}

TEST(Spectral, EigenResidualSmall) {
    for (std::size_t n : {8u, 64u, 256u}) {
        EXPECT_LE(max_eigen_residual(sample_wigner(EnsembleSpec::goe(n), 1, 0)), 1e-8);
        EXPECT_LE(max_eigen_residual(sample_wigner(EnsembleSpec::gue(n), 1, 0)), 1e-8);
    }
    EXPECT_EQ(max_eigen_residual(MatrixSample::zero(3)), 0.0);
}
