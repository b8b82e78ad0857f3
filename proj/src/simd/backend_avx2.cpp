// AVX2 (+FMA) variants of the sweep kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; callers reach it through the runtime
// dispatch in backend.cpp.

#include "solsched/simd/backend.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

namespace solsched::simd {

namespace {

double dot_indexed_avx2(const double* w, const std::int32_t* idx, std::size_t n,
                        const double* v) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m128i i0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        const __m128i i1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i + 4));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_i32gather_pd(v, i0, 8), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4), _mm256_i32gather_pd(v, i1, 8), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m128i i0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_i32gather_pd(v, i0, 8), acc0);
    }
    // Fixed-order reduction keeps results reproducible run to run.
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    double out = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
    for (; i < n; ++i) out += w[i] * v[idx[i]];
    return out;
}

void minmax_avx2(const double* v, std::size_t n, double& lo, double& hi) {
    if (n < 8) {
        double mn = v[0], mx = v[0];
        for (std::size_t i = 1; i < n; ++i) {
            if (v[i] < mn) mn = v[i];
            if (v[i] > mx) mx = v[i];
        }
        lo = mn;
        hi = mx;
        return;
    }
    __m256d vmin = _mm256_loadu_pd(v);
    __m256d vmax = vmin;
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(v + i);
        vmin = _mm256_min_pd(vmin, x);
        vmax = _mm256_max_pd(vmax, x);
    }
    if (i < n) {  // overlapping tail load; n >= 8 guarantees validity
        const __m256d x = _mm256_loadu_pd(v + n - 4);
        vmin = _mm256_min_pd(vmin, x);
        vmax = _mm256_max_pd(vmax, x);
    }
    const __m128d min2 = _mm_min_pd(_mm256_castpd256_pd128(vmin), _mm256_extractf128_pd(vmin, 1));
    const __m128d max2 = _mm_max_pd(_mm256_castpd256_pd128(vmax), _mm256_extractf128_pd(vmax, 1));
    lo = _mm_cvtsd_f64(_mm_min_sd(min2, _mm_unpackhi_pd(min2, min2)));
    hi = _mm_cvtsd_f64(_mm_max_sd(max2, _mm_unpackhi_pd(max2, max2)));
}

void subtract_avx2(const double* a, const double* b, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

}  // namespace

extern const Backend kAvx2Backend;
const Backend kAvx2Backend{"avx2", dot_indexed_avx2, minmax_avx2, subtract_avx2};

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace solsched::simd

#endif  // __x86_64__
