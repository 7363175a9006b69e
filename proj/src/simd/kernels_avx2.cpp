// Compiled with -mavx2 -mfma. Nothing in this file may run before the
// dispatcher has confirmed CPU support.

#include "shl/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace shl::simd {
namespace {

inline float hsum(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    __m128 shuf = _mm_movehdup_ps(lo);
    __m128 sums = _mm_add_ps(lo, shuf);
    shuf = _mm_movehl_ps(shuf, sums);
    sums = _mm_add_ss(sums, shuf);
    return _mm_cvtss_f32(sums);
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    const __m128d high64 = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, high64));
}

// 4 rows x 16 columns register block.
inline void block_4x16(int k, const float* a, int lda, const float* b, int ldb, float* c, int ldc,
                       bool accumulate) {
    __m256 c00 = _mm256_setzero_ps(), c01 = _mm256_setzero_ps();
    __m256 c10 = _mm256_setzero_ps(), c11 = _mm256_setzero_ps();
    __m256 c20 = _mm256_setzero_ps(), c21 = _mm256_setzero_ps();
    __m256 c30 = _mm256_setzero_ps(), c31 = _mm256_setzero_ps();
    const float* a0 = a;
    const float* a1 = a + lda;
    const float* a2 = a + 2 * static_cast<std::ptrdiff_t>(lda);
    const float* a3 = a + 3 * static_cast<std::ptrdiff_t>(lda);
    for (int p = 0; p < k; ++p) {
        const float* brow = b + static_cast<std::ptrdiff_t>(p) * ldb;
        const __m256 b0 = _mm256_loadu_ps(brow);
        const __m256 b1 = _mm256_loadu_ps(brow + 8);
        __m256 av = _mm256_broadcast_ss(a0 + p);
        c00 = _mm256_fmadd_ps(av, b0, c00);
        c01 = _mm256_fmadd_ps(av, b1, c01);
        av = _mm256_broadcast_ss(a1 + p);
        c10 = _mm256_fmadd_ps(av, b0, c10);
        c11 = _mm256_fmadd_ps(av, b1, c11);
        av = _mm256_broadcast_ss(a2 + p);
        c20 = _mm256_fmadd_ps(av, b0, c20);
        c21 = _mm256_fmadd_ps(av, b1, c21);
        av = _mm256_broadcast_ss(a3 + p);
        c30 = _mm256_fmadd_ps(av, b0, c30);
        c31 = _mm256_fmadd_ps(av, b1, c31);
    }
    auto store = [&](float* dst, __m256 lo, __m256 hi) {
        if (accumulate) {
            lo = _mm256_add_ps(lo, _mm256_loadu_ps(dst));
            hi = _mm256_add_ps(hi, _mm256_loadu_ps(dst + 8));
        }
        _mm256_storeu_ps(dst, lo);
        _mm256_storeu_ps(dst + 8, hi);
    };
    store(c, c00, c01);
    store(c + ldc, c10, c11);
    store(c + 2 * static_cast<std::ptrdiff_t>(ldc), c20, c21);
    store(c + 3 * static_cast<std::ptrdiff_t>(ldc), c30, c31);
}

// One row x 8 columns.
inline void block_1x8(int k, const float* a, const float* b, int ldb, float* c, bool accumulate) {
    __m256 acc = _mm256_setzero_ps();
    for (int p = 0; p < k; ++p) {
        acc = _mm256_fmadd_ps(_mm256_broadcast_ss(a + p),
                              _mm256_loadu_ps(b + static_cast<std::ptrdiff_t>(p) * ldb), acc);
    }
    if (accumulate) acc = _mm256_add_ps(acc, _mm256_loadu_ps(c));
    _mm256_storeu_ps(c, acc);
}

inline void block_1x1(int k, const float* a, const float* b, int ldb, float* c, bool accumulate) {
    float acc = 0.0f;
    for (int p = 0; p < k; ++p) acc += a[p] * b[static_cast<std::ptrdiff_t>(p) * ldb];
    *c = accumulate ? *c + acc : acc;
}

constexpr int kDepthBlock = 256;

void gemm_avx2(int m, int n, int k, const float* a, int lda, const float* b, int ldb, float* c,
               int ldc, bool accumulate) {
    if (k == 0) {
        if (!accumulate) {
            for (int i = 0; i < m; ++i)
                std::memset(c + static_cast<std::ptrdiff_t>(i) * ldc, 0,
                            sizeof(float) * static_cast<std::size_t>(n));
        }
        return;
    }
    for (int p0 = 0; p0 < k; p0 += kDepthBlock) {
        const int kb = std::min(kDepthBlock, k - p0);
        const bool acc = accumulate || p0 > 0;
        const float* bp = b + static_cast<std::ptrdiff_t>(p0) * ldb;
        int i = 0;
        for (; i + 4 <= m; i += 4) {
            const float* ap = a + static_cast<std::ptrdiff_t>(i) * lda + p0;
            float* cp = c + static_cast<std::ptrdiff_t>(i) * ldc;
            int j = 0;
            for (; j + 16 <= n; j += 16) block_4x16(kb, ap, lda, bp + j, ldb, cp + j, ldc, acc);
            for (; j + 8 <= n; j += 8) {
                for (int r = 0; r < 4; ++r)
                    block_1x8(kb, ap + static_cast<std::ptrdiff_t>(r) * lda, bp + j, ldb,
                              cp + static_cast<std::ptrdiff_t>(r) * ldc + j, acc);
            }
            for (; j < n; ++j) {
                for (int r = 0; r < 4; ++r)
                    block_1x1(kb, ap + static_cast<std::ptrdiff_t>(r) * lda, bp + j, ldb,
                              cp + static_cast<std::ptrdiff_t>(r) * ldc + j, acc);
            }
        }
        for (; i < m; ++i) {
            const float* ap = a + static_cast<std::ptrdiff_t>(i) * lda + p0;
            float* cp = c + static_cast<std::ptrdiff_t>(i) * ldc;
            int j = 0;
            for (; j + 8 <= n; j += 8) block_1x8(kb, ap, bp + j, ldb, cp + j, acc);
            for (; j < n; ++j) block_1x1(kb, ap, bp + j, ldb, cp + j, acc);
        }
    }
}

float dot_avx2(const float* a, const float* b, std::size_t n) {
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
        acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
    }
    for (; i + 8 <= n; i += 8)
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    float acc = hsum(_mm256_add_ps(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy_avx2(float alpha, const float* x, float* y, std::size_t n) {
    const __m256 av = _mm256_set1_ps(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(y + i, _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum_squared_diff_avx2(const float* a, const float* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 av = _mm256_loadu_ps(a + i);
        const __m256 bv = _mm256_loadu_ps(b + i);
        const __m256d lo = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(av)),
                                         _mm256_cvtps_pd(_mm256_castps256_ps128(bv)));
        const __m256d hi = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(av, 1)),
                                         _mm256_cvtps_pd(_mm256_extractf128_ps(bv, 1)));
        acc0 = _mm256_fmadd_pd(lo, lo, acc0);
        acc1 = _mm256_fmadd_pd(hi, hi, acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += d * d;
    }
    return acc;
}

void adadelta_avx2(float* w, const float* g, float* msg, float* msd, std::size_t n,
                   AdadeltaParams p) {
    const __m256 keep = _mm256_set1_ps(p.rho);
    const __m256 blend = _mm256_set1_ps(1.0f - p.rho);
    const __m256 eps = _mm256_set1_ps(p.epsilon);
    const __m256 lr = _mm256_set1_ps(p.learning_rate);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 gv = _mm256_loadu_ps(g + i);
        __m256 sg = _mm256_loadu_ps(msg + i);
        sg = _mm256_add_ps(_mm256_mul_ps(keep, sg), _mm256_mul_ps(blend, _mm256_mul_ps(gv, gv)));
        __m256 sd = _mm256_loadu_ps(msd + i);
        const __m256 ratio = _mm256_div_ps(_mm256_sqrt_ps(_mm256_add_ps(sd, eps)),
                                           _mm256_sqrt_ps(_mm256_add_ps(sg, eps)));
        const __m256 delta = _mm256_mul_ps(ratio, gv);
        sd = _mm256_add_ps(_mm256_mul_ps(keep, sd), _mm256_mul_ps(blend, _mm256_mul_ps(delta, delta)));
        _mm256_storeu_ps(msg + i, sg);
        _mm256_storeu_ps(msd + i, sd);
        _mm256_storeu_ps(w + i, _mm256_sub_ps(_mm256_loadu_ps(w + i), _mm256_mul_ps(lr, delta)));
    }
    for (; i < n; ++i) {
        msg[i] = p.rho * msg[i] + (1.0f - p.rho) * g[i] * g[i];
        const float delta = std::sqrt(msd[i] + p.epsilon) / std::sqrt(msg[i] + p.epsilon) * g[i];
        msd[i] = p.rho * msd[i] + (1.0f - p.rho) * delta * delta;
        w[i] -= p.learning_rate * delta;
    }
}

}  // namespace

const KernelTable& avx2_kernel_table() noexcept {
    static const KernelTable table{Isa::avx2, gemm_avx2, dot_avx2, axpy_avx2, sum_squared_diff_avx2,
                                   adadelta_avx2};
    return table;
}

}  // namespace shl::simd
