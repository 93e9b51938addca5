#include "valconf/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "valconf/kernels.hpp"

namespace valconf {
namespace {

void check_same_size(std::span<const double> v, std::span<const double> w) {
    if (v.size() != w.size() || v.empty()) {
        throw std::invalid_argument("similarity: profiles must have equal nonzero length");
    }
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::Tau: return "tau";
        case Metric::Md: return "md";
        case Metric::Co: return "co";
        case Metric::Wc: return "wc";
        case Metric::Rho: return "rho";
    }
    return "tau";
}

std::optional<Metric> metric_from_name(std::string_view name) {
    if (name == "tau") return Metric::Tau;
    if (name == "md") return Metric::Md;
    if (name == "co") return Metric::Co;
    if (name == "wc") return Metric::Wc;
    if (name == "rho") return Metric::Rho;
    return std::nullopt;
}

bool metric_higher_means_conflict(Metric m) { return m == Metric::Md; }

SimilarityResult kendall_tau(std::span<const double> v, std::span<const double> w,
                             TauVariant variant) {
    check_same_size(v, w);
    const std::size_t n = v.size();
    long discordant = 0;
    long concordant = 0;
    long ties_v = 0;
    long ties_w = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const int sv = sign_of(v[i] - v[j]);
            const int sw = sign_of(w[i] - w[j]);
            if (sv == 0) ++ties_v;
            if (sw == 0) ++ties_w;
            if (sv * sw < 0) ++discordant;
            if (sv * sw > 0) ++concordant;
        }
    }
    const double pairs = static_cast<double>(n * (n - 1) / 2);
    SimilarityResult result{Metric::Tau, 0.0, false, false};
    if (variant == TauVariant::EquationDenominator) {
        result.score = 1.0 - 2.0 * static_cast<double>(discordant) / pairs;
        result.degenerate = (concordant == 0 && discordant == 0);
    } else {
        const double dv = pairs - static_cast<double>(ties_v);
        const double dw = pairs - static_cast<double>(ties_w);
        if (dv <= 0.0 || dw <= 0.0) {
            throw std::domain_error("kendall_tau (tie-adjusted): constant profile");
        }
        result.score = static_cast<double>(concordant - discordant) / std::sqrt(dv * dw);
    }
    return result;
}

SimilarityResult manhattan(std::span<const double> v, std::span<const double> w) {
    check_same_size(v, w);
    return {Metric::Md, kernels::l1_distance(v.data(), w.data(), v.size()), true, false};
}

SimilarityResult cosine(std::span<const double> v, std::span<const double> w) {
    check_same_size(v, w);
    const double nv = kernels::sum_squares(v.data(), v.size());
    const double nw = kernels::sum_squares(w.data(), w.size());
    if (nv <= 0.0 || nw <= 0.0) throw std::domain_error("cosine: undefined for zero-norm profile");
    const double num = kernels::dot(v.data(), w.data(), v.size());
    return {Metric::Co, num / (std::sqrt(nv) * std::sqrt(nw)), false, false};
}

SimilarityResult weighted_cosine(std::span<const double> v, std::span<const double> w,
                                 const CircumplexKernel& kernel) {
    check_same_size(v, w);
    if (v.size() != kValueCount) {
        throw std::invalid_argument("weighted_cosine: kernel is defined over the 10 values");
    }
    const double nv = kernels::bilinear(v.data(), kernel.data(), v.data(), v.size());
    const double nw = kernels::bilinear(w.data(), kernel.data(), w.data(), w.size());
    if (nv <= 0.0 || nw <= 0.0) {
        throw std::domain_error("weighted_cosine: non-positive kernel norm");
    }
    const double num = kernels::bilinear(v.data(), kernel.data(), w.data(), v.size());
    return {Metric::Wc, num / (std::sqrt(nv) * std::sqrt(nw)), false, false};
}

std::vector<double> average_ranks_desc(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] > xs[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && xs[order[j]] == xs[order[i]]) ++j;
        const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean_rank;
        i = j;
    }
    return ranks;
}

SimilarityResult spearman_rho(std::span<const double> v, std::span<const double> w) {
    check_same_size(v, w);
    const auto rv = average_ranks_desc(v);
    const auto rw = average_ranks_desc(w);
    const std::size_t n = v.size();
    const double mean = 0.5 * static_cast<double>(n + 1);
    double num = 0.0, den_v = 0.0, den_w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = rv[i] - mean;
        const double b = rw[i] - mean;
        num += a * b;
        den_v += a * a;
        den_w += b * b;
    }
    if (den_v <= 0.0 || den_w <= 0.0) {
        throw std::domain_error("spearman_rho: undefined for constant profile");
    }
    return {Metric::Rho, num / std::sqrt(den_v * den_w), false, false};
}

std::array<double, kValueCount> profile_scores(const ValueProfile& p) {
    if (p.normalized || p.source == ProfileSource::Survey) return p.scores;
    return normalize(p).scores;
}

SimilarityResult compute_similarity(Metric m, const ValueProfile& a, const ValueProfile& b,
                                    const CircumplexKernel& kernel) {
    const auto va = profile_scores(a);
    const auto vb = profile_scores(b);
    switch (m) {
        case Metric::Tau: return kendall_tau(va, vb);
        case Metric::Md: return manhattan(va, vb);
        case Metric::Co: return cosine(va, vb);
        case Metric::Wc: return weighted_cosine(va, vb, kernel);
        case Metric::Rho: return spearman_rho(va, vb);
    }
    throw std::logic_error("compute_similarity: invalid metric");
}

}  // namespace valconf
