// NEON variants of the sweep kernels (aarch64 baseline, no runtime probe
// needed). NEON has no gather, so indexed loads assemble lanes explicitly.

#include "solsched/simd/backend.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace solsched::simd {

namespace {

double dot_indexed_neon(const double* w, const std::int32_t* idx, std::size_t n,
                        const double* v) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t g0 = {v[idx[i]], v[idx[i + 1]]};
        const float64x2_t g1 = {v[idx[i + 2]], v[idx[i + 3]]};
        acc0 = vfmaq_f64(acc0, vld1q_f64(w + i), g0);
        acc1 = vfmaq_f64(acc1, vld1q_f64(w + i + 2), g1);
    }
    const float64x2_t acc = vaddq_f64(acc0, acc1);
    double out = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) out += w[i] * v[idx[i]];
    return out;
}

void minmax_neon(const double* v, std::size_t n, double& lo, double& hi) {
    if (n < 4) {
        double mn = v[0], mx = v[0];
        for (std::size_t i = 1; i < n; ++i) {
            if (v[i] < mn) mn = v[i];
            if (v[i] > mx) mx = v[i];
        }
        lo = mn;
        hi = mx;
        return;
    }
    float64x2_t vmin = vld1q_f64(v);
    float64x2_t vmax = vmin;
    std::size_t i = 2;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t x = vld1q_f64(v + i);
        vmin = vminq_f64(vmin, x);
        vmax = vmaxq_f64(vmax, x);
    }
    if (i < n) {
        const float64x2_t x = vld1q_f64(v + n - 2);
        vmin = vminq_f64(vmin, x);
        vmax = vmaxq_f64(vmax, x);
    }
    lo = vminvq_f64(vmin);
    hi = vmaxvq_f64(vmax);
}

void subtract_neon(const double* a, const double* b, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

}  // namespace

extern const Backend kNeonBackend;
const Backend kNeonBackend{"neon", dot_indexed_neon, minmax_neon, subtract_neon};

}  // namespace solsched::simd

#endif  // __aarch64__
