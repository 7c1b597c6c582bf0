#include "vesd/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <cmath>

namespace vesd::simd {

namespace {

std::complex<double> stieltjes_sum_neon(const double* points, const double* mass, std::size_t count,
                                        double u, double v) {
    const float64x2_t vu = vdupq_n_f64(u);
    const float64x2_t vv2 = vdupq_n_f64(v * v);
    float64x2_t re0 = vdupq_n_f64(0.0), re1 = vdupq_n_f64(0.0);
    float64x2_t im0 = vdupq_n_f64(0.0), im1 = vdupq_n_f64(0.0);

    std::size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(points + j), vu);
        const float64x2_t d1 = vsubq_f64(vld1q_f64(points + j + 2), vu);
        const float64x2_t r0 = vdivq_f64(vld1q_f64(mass + j), vfmaq_f64(vv2, d0, d0));
        const float64x2_t r1 = vdivq_f64(vld1q_f64(mass + j + 2), vfmaq_f64(vv2, d1, d1));
        re0 = vfmaq_f64(re0, r0, d0);
        re1 = vfmaq_f64(re1, r1, d1);
        im0 = vaddq_f64(im0, r0);
        im1 = vaddq_f64(im1, r1);
    }
    double re = vaddvq_f64(vaddq_f64(re0, re1));
    double im = vaddvq_f64(vaddq_f64(im0, im1));
    for (; j < count; ++j) {
        const double d = points[j] - u;
        const double r = mass[j] / (d * d + v * v);
        re += r * d;
        im += r;
    }
    return {re, im * v};
}

double max_abs_diff_neon(const double* a, const double* b, std::size_t count) {
    float64x2_t best = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= count; j += 2)
        best = vmaxq_f64(best, vabdq_f64(vld1q_f64(a + j), vld1q_f64(b + j)));
    double out = vmaxvq_f64(best);
    for (; j < count; ++j) out = std::fmax(out, std::fabs(a[j] - b[j]));
    return out;
}

constexpr KernelTable kNeon{Isa::Neon, &stieltjes_sum_neon, &max_abs_diff_neon};

}  // namespace

const KernelTable* neon_kernels() { return &kNeon; }

}  // namespace vesd::simd

#else

namespace vesd::simd {
const KernelTable* neon_kernels() { return nullptr; }
}  // namespace vesd::simd

#endif
