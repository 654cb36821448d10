#include "onsflow/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace onsflow::kernels {

#if defined(ONSFLOW_BUILD_AVX2)
const KernelTable& avx2_impl_table();  // defined in kernels_avx2.cpp
#endif

bool avx2_available() {
#if defined(ONSFLOW_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& avx2_table() {
#if defined(ONSFLOW_BUILD_AVX2)
    if (avx2_available()) return avx2_impl_table();
#endif
    return scalar_table();
}

namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* resolve_from_env() {
    const char* env = std::getenv("ONSAGER_FLOW_SIMD");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return &scalar_table();
        if (std::strcmp(env, "avx2") == 0) {
            if (!avx2_available())
                throw std::runtime_error("ONSAGER_FLOW_SIMD=avx2 but AVX2 is not available");
            return &avx2_table();
        }
        // anything else (including "auto") falls through to autodetect
    }
    return avx2_available() ? &avx2_table() : &scalar_table();
}

}  // namespace

const KernelTable& active() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = resolve_from_env();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void force_isa(Isa isa) {
    switch (isa) {
        case Isa::Scalar: g_active.store(&scalar_table()); break;
        case Isa::Avx2:
            if (!avx2_available()) throw std::runtime_error("AVX2 kernels unavailable on this CPU/build");
            g_active.store(&avx2_table());
            break;
        case Isa::Auto: g_active.store(nullptr); break;
    }
}

std::string active_name() { return active().name; }

}  // namespace onsflow::kernels
