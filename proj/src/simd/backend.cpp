#include "solsched/simd/backend.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace solsched::simd {

// ============================================================================
// Scalar reference kernels
// ============================================================================

namespace {

double dot_indexed_scalar(const double* w, const std::int32_t* idx, std::size_t n,
                          const double* v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * v[idx[i]];
    return acc;
}

void minmax_scalar(const double* v, std::size_t n, double& lo, double& hi) {
    double mn = v[0], mx = v[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (v[i] < mn) mn = v[i];
        if (v[i] > mx) mx = v[i];
    }
    lo = mn;
    hi = mx;
}

void subtract_scalar(const double* a, const double* b, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

}  // namespace

const Backend kScalarBackend{"scalar", dot_indexed_scalar, minmax_scalar, subtract_scalar};

#if defined(__x86_64__)
extern const Backend kAvx2Backend;  // backend_avx2.cpp
bool avx2_supported();
#endif
#if defined(__aarch64__)
extern const Backend kNeonBackend;  // backend_neon.cpp
#endif

// ============================================================================
// Runtime dispatch
// ============================================================================

namespace {

std::vector<const Backend*> probe_backends() {
    std::vector<const Backend*> out{&kScalarBackend};
#if defined(__x86_64__)
    if (avx2_supported()) out.push_back(&kAvx2Backend);
#endif
#if defined(__aarch64__)
    out.push_back(&kNeonBackend);
#endif
    return out;
}

const Backend* initial_backend() {
    const auto probed = probe_backends();
    if (const char* env = std::getenv("SOLSCHED_SIMD")) {
        for (const Backend* b : probed)
            if (std::string_view(b->name) == env) return b;
        throw std::runtime_error("SOLSCHED_SIMD=" + std::string(env) +
                                 " is not available on this machine");
    }
    return probed.back();  // widest available
}

std::atomic<const Backend*> g_active{nullptr};

}  // namespace

const Backend& active_backend() {
    const Backend* b = g_active.load(std::memory_order_acquire);
    if (b == nullptr) {
        b = initial_backend();
        const Backend* expected = nullptr;
        g_active.compare_exchange_strong(expected, b);
        b = g_active.load(std::memory_order_acquire);
    }
    return *b;
}

std::vector<const Backend*> available_backends() { return probe_backends(); }

const Backend* find_backend(std::string_view name) {
    for (const Backend* b : probe_backends())
        if (std::string_view(b->name) == name) return b;
    return nullptr;
}

void select_backend(const Backend& backend) { g_active.store(&backend, std::memory_order_release); }

}  // namespace solsched::simd
