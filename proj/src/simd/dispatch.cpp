#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace lumikit::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(LUMIKIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

}  // namespace

const KernelTable* avx2_kernels() noexcept {
#if defined(LUMIKIT_HAVE_AVX2)
    static const bool supported = cpu_has_avx2();
    return supported ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() noexcept {
    static const KernelTable& table = []() -> const KernelTable& {
        const char* env = std::getenv("LUMIKIT_SIMD");
        if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
        if (const KernelTable* t = avx2_kernels()) return *t;
        return scalar_kernels();
    }();
    return table;
}

}  // namespace lumikit::simd
