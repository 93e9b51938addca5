#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace valconf::numeric {

// ---------------------------------------------------------------------------
// Special functions (enough for Student-t CDFs and F quantiles)
// ---------------------------------------------------------------------------

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);
// ln I_x(a, b); stays finite far into the underflow range of I_x itself.
double log_incomplete_beta(double a, double b, double x);
// Inverse of I_x(a, b) in x; bisection refined by Newton steps.
double incomplete_beta_inv(double a, double b, double p);
double student_t_cdf(double x, double nu);
// ln of the CDF; exact in the far left tail where the CDF underflows.
double log_student_t_cdf(double x, double nu);
double f_quantile(double p, double d1, double d2);
double normal_cdf(double x);

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (G7K15) quadrature on a finite interval
// ---------------------------------------------------------------------------

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
    bool converged = false;
};

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-8, int max_intervals = 2000);

// ---------------------------------------------------------------------------
// Dense symmetric matrices and eigendecomposition
// ---------------------------------------------------------------------------

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // column k is the eigenvector of values[k]
};

// Cyclic Jacobi sweeps; intended for the small symmetric matrices that show
// up here (10x10 kernels and covariances).
EigenDecomposition eigen_symmetric(const Matrix& m);

// ---------------------------------------------------------------------------
// Portable deterministic RNG helpers
// ---------------------------------------------------------------------------

// splitmix64 core. <random> distributions are implementation-defined, so all
// sampling used in seeded pipelines goes through these helpers instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    double normal();  // Box-Muller, cached second variate

private:
    std::uint64_t state_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(std::string_view s);

}  // namespace valconf::numeric
