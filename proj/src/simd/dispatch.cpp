#include <cstdlib>
#include <string>

#include "vesd/error.hpp"
#include "vesd/simd/kernels.hpp"

namespace vesd::simd {

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "?";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
            return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2")
                   && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::Neon:
            // Advanced SIMD is mandatory on AArch64.
            return neon_kernels() != nullptr;
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_supported(isa))
        throw DomainError("SIMD variant '" + std::string(to_string(isa)) + "' is not available on this CPU");
    switch (isa) {
        case Isa::Avx2: return *avx2_kernels();
        case Isa::Neon: return *neon_kernels();
        default: return scalar_kernels();
    }
}

namespace {

const KernelTable& select() {
    if (const char* forced = std::getenv("VESD_ISA")) {
        const std::string name(forced);
        for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
            if (name == to_string(isa) && isa_supported(isa)) return kernels_for(isa);
    }
    if (isa_supported(Isa::Avx2)) return *avx2_kernels();
    if (isa_supported(Isa::Neon)) return *neon_kernels();
    return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() {
    static const KernelTable& active = select();
    return active;
}

}  // namespace vesd::simd
