#include "shl/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace shl::simd {

#if SHL_HAVE_AVX2
const KernelTable& avx2_kernel_table() noexcept;
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if SHL_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* detect() noexcept {
    if (const char* env = std::getenv("SHL_SIMD"); env != nullptr && std::string(env) == "scalar")
        return &scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& selected() noexcept {
    static std::atomic<const KernelTable*> table{detect()};
    return table;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

const KernelTable* avx2_kernels() noexcept {
#if SHL_HAVE_AVX2
    static const bool supported = cpu_has_avx2();
    return supported ? &avx2_kernel_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& kernels() noexcept { return *selected().load(std::memory_order_acquire); }

bool force_isa(Isa isa) noexcept {
    const KernelTable* table = isa == Isa::avx2 ? avx2_kernels() : &scalar_kernels();
    if (table == nullptr) return false;
    selected().store(table, std::memory_order_release);
    return true;
}

}  // namespace shl::simd
