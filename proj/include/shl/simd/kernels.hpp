#pragma once

// Dense float kernels used by the convolutional autoencoder, the frame-error
// metric and the ADADELTA update. Each kernel exists as a portable scalar
// reference and, on x86-64, as an AVX2+FMA variant. The variant is picked once
// at runtime from CPUID; SHL_SIMD=scalar in the environment forces the
// reference path.

#include <cstddef>
#include <string_view>

namespace shl::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct AdadeltaParams {
    float rho = 0.95f;
    float epsilon = 1e-6f;
    float learning_rate = 1.0f;
};

// Row-major single-precision GEMM: C = A * B, or C += A * B when accumulate.
// A is m x k (leading dim lda), B is k x n (ldb), C is m x n (ldc).
using GemmFn = void (*)(int m, int n, int k, const float* a, int lda, const float* b, int ldb,
                        float* c, int ldc, bool accumulate);
using DotFn = float (*)(const float* a, const float* b, std::size_t n);
using AxpyFn = void (*)(float alpha, const float* x, float* y, std::size_t n);
// Sum of squared differences accumulated in double precision.
using SquaredDiffFn = double (*)(const float* a, const float* b, std::size_t n);
// In-place ADADELTA step over n parameters.
using AdadeltaFn = void (*)(float* weights, const float* grads, float* mean_sq_grad,
                            float* mean_sq_delta, std::size_t n, AdadeltaParams params);

struct KernelTable {
    Isa isa;
    GemmFn gemm;
    DotFn dot;
    AxpyFn axpy;
    SquaredDiffFn sum_squared_diff;
    AdadeltaFn adadelta;
};

const KernelTable& scalar_kernels() noexcept;

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;

// Kernel table selected for this process.
const KernelTable& kernels() noexcept;

// Overrides the selected table; returns false if the ISA is unavailable.
bool force_isa(Isa isa) noexcept;

}  // namespace shl::simd
