#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace solsched::simd {

// Vectorized inner loops of the Bellman sweeps. Every entry point has a
// scalar reference implementation; wider variants must agree with it within
// floating-point reassociation error (equivalence-tested in tests/test_simd).
struct Backend {
    const char* name;

    // sum_i weights[i] * values[indices[i]]
    double (*dot_indexed)(const double* weights, const std::int32_t* indices, std::size_t n,
                          const double* values);

    // elementwise min/max over v[0..n); n >= 1
    void (*minmax)(const double* v, std::size_t n, double& lo, double& hi);

    // out[i] = a[i] - b[i]
    void (*subtract)(const double* a, const double* b, std::size_t n, double* out);
};

/// Backend chosen for this process: the widest variant the CPU supports,
/// or the one named by the SOLSCHED_SIMD environment variable
/// (scalar | avx2 | neon). Stable for the lifetime of the process unless
/// overridden via select_backend.
const Backend& active_backend();

/// Backends usable on this machine, scalar first.
std::vector<const Backend*> available_backends();

/// Look up a backend by name; null if unknown or unsupported here.
const Backend* find_backend(std::string_view name);

/// Force the active backend (tests). Not safe while a solve is running.
void select_backend(const Backend& backend);

}  // namespace solsched::simd
