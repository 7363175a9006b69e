#include "shl/simd/kernels.hpp"

#include <cmath>
#include <cstring>

namespace shl::simd {
namespace {

void gemm_scalar(int m, int n, int k, const float* a, int lda, const float* b, int ldb, float* c,
                 int ldc, bool accumulate) {
    for (int i = 0; i < m; ++i) {
        float* crow = c + static_cast<std::ptrdiff_t>(i) * ldc;
        if (!accumulate) std::memset(crow, 0, sizeof(float) * static_cast<std::size_t>(n));
        const float* arow = a + static_cast<std::ptrdiff_t>(i) * lda;
        for (int p = 0; p < k; ++p) {
            const float av = arow[p];
            if (av == 0.0f) continue;
            const float* brow = b + static_cast<std::ptrdiff_t>(p) * ldb;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

float dot_scalar(const float* a, const float* b, std::size_t n) {
    float acc = 0.0f;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(float alpha, const float* x, float* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_squared_diff_scalar(const float* a, const float* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += d * d;
    }
    return acc;
}

void adadelta_scalar(float* w, const float* g, float* msg, float* msd, std::size_t n,
                     AdadeltaParams p) {
    const float keep = p.rho;
    const float blend = 1.0f - p.rho;
    for (std::size_t i = 0; i < n; ++i) {
        msg[i] = keep * msg[i] + blend * g[i] * g[i];
        const float delta = std::sqrt(msd[i] + p.epsilon) / std::sqrt(msg[i] + p.epsilon) * g[i];
        msd[i] = keep * msd[i] + blend * delta * delta;
        w[i] -= p.learning_rate * delta;
    }
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
    static const KernelTable table{Isa::scalar,  gemm_scalar, dot_scalar, axpy_scalar,
                                   sum_squared_diff_scalar, adadelta_scalar};
    return table;
}

}  // namespace shl::simd
