#include "valconf/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace valconf::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(VALCONF_HAVE_AVX2) && defined(__x86_64__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect_backend() {
    if (const char* env = std::getenv("VALCONF_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::Avx2;
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<const KernelTable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::Scalar};

const KernelTable* table_for(Backend b) {
#if defined(VALCONF_HAVE_AVX2)
    if (b == Backend::Avx2) return &avx2_table();
#endif
    (void)b;
    return &scalar_table();
}

const KernelTable& table() {
    const KernelTable* t = g_table.load(std::memory_order_acquire);
    if (!t) {
        Backend b = detect_backend();
        g_backend.store(b, std::memory_order_relaxed);
        t = table_for(b);
        g_table.store(t, std::memory_order_release);
    }
    return *t;
}

}  // namespace

Backend active_backend() {
    table();
    return g_backend.load(std::memory_order_relaxed);
}

bool backend_available(Backend b) {
    if (b == Backend::Scalar) return true;
    return cpu_has_avx2();
}

void set_backend(Backend b) {
    if (!backend_available(b)) b = Backend::Scalar;
    g_backend.store(b, std::memory_order_relaxed);
    g_table.store(table_for(b), std::memory_order_release);
}

std::string_view backend_name() {
    switch (active_backend()) {
        case Backend::Avx2: return "avx2";
        case Backend::Scalar: break;
    }
    return "scalar";
}

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
double sum(const double* a, std::size_t n) { return table().sum(a, n); }
double sum_squares(const double* a, std::size_t n) { return table().sum_squares(a, n); }
double l1_distance(const double* a, const double* b, std::size_t n) { return table().l1_distance(a, b, n); }
double weighted_dot(const double* a, const double* w, const double* b, std::size_t n) {
    return table().weighted_dot(a, w, b, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) { table().axpy(alpha, x, y, n); }
void scale(double* x, double alpha, std::size_t n) { table().scale(x, alpha, n); }

double bilinear(const double* a, const double* m, const double* b, std::size_t n) {
    // a^T M b = sum_i a_i (row_i . b); rows reuse the dispatched dot kernel.
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] != 0.0) acc += a[i] * dot(m + i * n, b, n);
    }
    return acc;
}

}  // namespace valconf::kernels
