#pragma once

#include <cstddef>
#include <string_view>

// Dense double-precision primitives used by the similarity metrics, the
// covariance accumulation and the logistic-regression inner loops. Every
// operation has a scalar reference implementation and (on x86-64) an AVX2+FMA
// variant; the active table is chosen once at startup from CPU capabilities
// and can be pinned with the VALCONF_SIMD environment variable or
// set_backend(), which the equivalence tests rely on.
namespace valconf::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
void set_backend(Backend b);
bool backend_available(Backend b);
std::string_view backend_name();

// sum_i a_i * b_i
double dot(const double* a, const double* b, std::size_t n);
// sum_i a_i
double sum(const double* a, std::size_t n);
// sum_i a_i^2
double sum_squares(const double* a, std::size_t n);
// sum_i |a_i - b_i|
double l1_distance(const double* a, const double* b, std::size_t n);
// sum_i a_i * w_i * b_i
double weighted_dot(const double* a, const double* w, const double* b, std::size_t n);
// y_i += alpha * x_i
void axpy(double alpha, const double* x, double* y, std::size_t n);
// x_i *= alpha
void scale(double* x, double alpha, std::size_t n);
// a^T M b with M row-major n-by-n
double bilinear(const double* a, const double* m, const double* b, std::size_t n);

// Function table a backend fills in; exposed so tests can compare variants
// pairwise without flipping the global dispatch state.
struct KernelTable {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    double (*sum_squares)(const double*, std::size_t);
    double (*l1_distance)(const double*, const double*, std::size_t);
    double (*weighted_dot)(const double*, const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scale)(double*, double, std::size_t);
};

const KernelTable& scalar_table();
#if defined(VALCONF_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace valconf::kernels
