#include "valconf/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace valconf::numeric {
namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

struct Segment {
    double a, b;
    double value;  // K15 estimate
    double error;  // |K15 - G7|
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment evaluate_segment(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    if (!std::isfinite(kronrod)) {
        throw std::runtime_error("integrate_adaptive: non-finite integrand on [" +
                                 std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    return Segment{a, b, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, int max_intervals) {
    QuadratureResult result;
    std::priority_queue<Segment> queue;
    Segment whole = evaluate_segment(f, a, b);
    result.evaluations = 15;
    double total = whole.value;
    double total_error = whole.error;
    queue.push(whole);
    int intervals = 1;
    while (intervals < max_intervals) {
        if (total_error <= rel_tol * std::max(std::fabs(total), 1e-300)) break;
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = evaluate_segment(f, worst.a, mid);
        Segment right = evaluate_segment(f, mid, worst.b);
        result.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++intervals;
    }
    result.value = total;
    result.error_estimate = total_error;
    result.converged = total_error <= rel_tol * std::max(std::fabs(total), 1e-300);
    return result;
}

}  // namespace valconf::numeric
