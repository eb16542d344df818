#include <atomic>
#include <cstdlib>

#include "afrac/error.hpp"
#include "kernels_internal.hpp"

namespace afrac::simd {

bool supported(Isa isa) {
    if (isa == Isa::scalar) return true;
#if AFRAC_SIMD_X86
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa best_available() { return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

const Kernels& kernels(Isa isa) {
#if AFRAC_SIMD_X86
    if (isa == Isa::avx2) {
        require(supported(Isa::avx2), "avx2 kernels requested on a CPU without avx2/fma");
        return detail::avx2_kernels();
    }
#else
    require(isa == Isa::scalar, "only scalar kernels exist on this platform");
#endif
    return detail::scalar_kernels();
}

Isa parse_isa(const std::string& name) {
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2") return Isa::avx2;
    if (name == "auto" || name.empty()) return best_available();
    throw PreconditionError("unknown instruction set '" + name + "' (scalar|avx2|auto)");
}

namespace {

const Kernels* initial() {
    const char* env = std::getenv("AFRAC_SIMD");
    return &kernels(parse_isa(env ? env : "auto"));
}

std::atomic<const Kernels*>& slot() {
    static std::atomic<const Kernels*> current{initial()};
    return current;
}

}  // namespace

const Kernels& active() { return *slot().load(std::memory_order_acquire); }

void select(Isa isa) { slot().store(&kernels(isa), std::memory_order_release); }

}  // namespace afrac::simd
