#include "valconf/numeric.hpp"

#include <cmath>
#include <limits>
#include <string_view>

namespace valconf::numeric {
namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double log_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("log_incomplete_beta: a, b must be positive");
    }
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    if (x >= 1.0) return 0.0;
    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return ln_front + std::log(betacf(a, b, x) / a);
    }
    // complement branch; safe because the complement is bounded away from 1
    const double complement = std::exp(ln_front) * betacf(b, a, 1.0 - x) / b;
    return std::log1p(-complement);
}

double incomplete_beta_inv(double a, double b, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    double x = 0.5;
    for (int i = 0; i < 200; ++i) {
        const double v = incomplete_beta(a, b, x);
        if (v < p) {
            lo = x;
        } else {
            hi = x;
        }
        // Newton step using the beta density, clipped to the bracket.
        const double ln_pdf = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                              (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
        const double pdf = std::exp(ln_pdf);
        double next = (pdf > 0.0 && std::isfinite(pdf)) ? x - (v - p) / pdf : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) < 1e-15 * (1.0 + std::fabs(x))) return next;
        x = next;
    }
    return x;
}

double student_t_cdf(double x, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("student_t_cdf: nu must be positive");
    if (x == 0.0) return 0.5;
    const double z = nu / (nu + x * x);
    const double tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, z);
    return x > 0.0 ? 1.0 - tail : tail;
}

double log_student_t_cdf(double x, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("log_student_t_cdf: nu must be positive");
    if (x == 0.0) return std::log(0.5);
    const double z = nu / (nu + x * x);
    const double log_tail = std::log(0.5) + log_incomplete_beta(0.5 * nu, 0.5, z);
    if (x < 0.0) return log_tail;
    return std::log1p(-std::exp(log_tail));  // tail <= 0.5, no cancellation blowup
}

double f_quantile(double p, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw std::invalid_argument("f_quantile: dof must be positive");
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    // F cdf(x) = I_{d1 x / (d1 x + d2)}(d1/2, d2/2)
    const double y = incomplete_beta_inv(0.5 * d1, 0.5 * d2, p);
    return d2 * y / (d1 * (1.0 - y));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

}  // namespace valconf::numeric
