#include "vesd/simd/kernels.hpp"

#if defined(VESD_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace vesd::simd {

namespace {

double hsum(__m256d x) {
    const __m128d lo = _mm256_castpd256_pd128(x);
    const __m128d hi = _mm256_extractf128_pd(x, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

std::complex<double> stieltjes_sum_avx2(const double* points, const double* mass, std::size_t count,
                                        double u, double v) {
    const __m256d vu = _mm256_set1_pd(u);
    const __m256d vv2 = _mm256_set1_pd(v * v);
    __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd();
    __m256d im0 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();

    std::size_t j = 0;
    for (; j + 8 <= count; j += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(points + j), vu);
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(points + j + 4), vu);
        const __m256d r0 = _mm256_div_pd(_mm256_loadu_pd(mass + j), _mm256_fmadd_pd(d0, d0, vv2));
        const __m256d r1 = _mm256_div_pd(_mm256_loadu_pd(mass + j + 4), _mm256_fmadd_pd(d1, d1, vv2));
        re0 = _mm256_fmadd_pd(r0, d0, re0);
        re1 = _mm256_fmadd_pd(r1, d1, re1);
        im0 = _mm256_add_pd(im0, r0);
        im1 = _mm256_add_pd(im1, r1);
    }
    for (; j + 4 <= count; j += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(points + j), vu);
        const __m256d r = _mm256_div_pd(_mm256_loadu_pd(mass + j), _mm256_fmadd_pd(d, d, vv2));
        re0 = _mm256_fmadd_pd(r, d, re0);
        im0 = _mm256_add_pd(im0, r);
    }
    double re = hsum(_mm256_add_pd(re0, re1));
    double im = hsum(_mm256_add_pd(im0, im1));
    for (; j < count; ++j) {
        const double d = points[j] - u;
        const double r = mass[j] / (d * d + v * v);
        re += r * d;
        im += r;
    }
    return {re, im * v};
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t count) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d best = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j));
        best = _mm256_max_pd(best, _mm256_andnot_pd(sign, diff));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double out = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
    for (; j < count; ++j) out = std::fmax(out, std::fabs(a[j] - b[j]));
    return out;
}

constexpr KernelTable kAvx2{Isa::Avx2, &stieltjes_sum_avx2, &max_abs_diff_avx2};

}  // namespace

const KernelTable* avx2_kernels() { return &kAvx2; }

}  // namespace vesd::simd

#else

namespace vesd::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace vesd::simd

#endif
