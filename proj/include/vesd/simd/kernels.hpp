#pragma once

// Data-parallel inner loops with a portable scalar reference and SIMD
// variants. The active variant is picked once per process from the CPU's
// capabilities; VESD_ISA=scalar|avx2|neon in the environment overrides it.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace vesd::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

struct KernelTable {
    Isa isa;

    /// sum_j mass[j] / (points[j] - (u + i v)).
    std::complex<double> (*stieltjes_sum)(const double* points, const double* mass, std::size_t count,
                                          double u, double v);

    /// max_j |a[j] - b[j]|, 0 for empty input.
    double (*max_abs_diff)(const double* a, const double* b, std::size_t count);
};

const KernelTable& scalar_kernels();
/// nullptr when the variant was not compiled in.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

bool isa_supported(Isa isa);
/// Table for `isa`; throws DomainError when it is unavailable on this CPU.
const KernelTable& kernels_for(Isa isa);
/// The process-wide dispatch choice.
const KernelTable& kernels();

inline std::complex<double> stieltjes_sum(std::span<const double> points, std::span<const double> mass,
                                          std::complex<double> z) {
    return kernels().stieltjes_sum(points.data(), mass.data(), points.size(), z.real(), z.imag());
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    return kernels().max_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace vesd::simd
