#include <cmath>

#include "vesd/simd/kernels.hpp"

namespace vesd::simd {

namespace {

std::complex<double> stieltjes_sum_scalar(const double* points, const double* mass, std::size_t count,
                                          double u, double v) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const double d = points[j] - u;
        const double r = mass[j] / (d * d + v * v);
        re += r * d;
        im += r;
    }
    return {re, im * v};
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t count) {
    double best = 0.0;
    for (std::size_t j = 0; j < count; ++j) best = std::fmax(best, std::fabs(a[j] - b[j]));
    return best;
}

constexpr KernelTable kScalar{Isa::Scalar, &stieltjes_sum_scalar, &max_abs_diff_scalar};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace vesd::simd
