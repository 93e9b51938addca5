#include "valconf/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "valconf/io.hpp"
#include "valconf/kernels.hpp"

namespace valconf {

std::string_view tail_name(Tail t) {
    switch (t) {
        case Tail::Lower: return "lower";
        case Tail::Higher: return "higher";
        case Tail::TwoSided: return "two_sided";
    }
    return "two_sided";
}

std::optional<Tail> tail_from_name(std::string_view name) {
    if (name == "lower") return Tail::Lower;
    if (name == "higher") return Tail::Higher;
    if (name == "two_sided" || name == "two-sided") return Tail::TwoSided;
    return std::nullopt;
}

Tail default_tail(Metric m) { return m == Metric::Md ? Tail::Higher : Tail::Lower; }

Groups split_groups(std::span<const AgreementInstance> instances) {
    Groups groups;
    for (const auto& inst : instances) {
        switch (inst.label) {
            case AgreementLabel::Disagree:
                groups.disagree.push_back({inst.parent_author, inst.child_author});
                break;
            case AgreementLabel::Agree:
                groups.agree.push_back({inst.parent_author, inst.child_author});
                break;
            case AgreementLabel::Neutral:
                break;
        }
    }
    return groups;
}

GroupMeanResult group_mean(std::span<const AuthorPair> group, const ProfileMap& profiles,
                           Metric metric, std::int64_t threshold, const CircumplexKernel& kernel) {
    GroupMeanResult result;
    double sum = 0.0;
    for (const auto& pair : group) {
        const auto pa = profiles.find(pair.parent);
        const auto pb = profiles.find(pair.child);
        auto passes = [&](const ValueProfile& p) {
            // Survey profiles have no mention count to threshold on.
            return p.source == ProfileSource::Survey || p.total_mentions >= threshold;
        };
        if (pa == profiles.end() || pb == profiles.end() || !passes(pa->second) ||
            !passes(pb->second)) {
            ++result.skipped_missing_profile;
            continue;
        }
        try {
            const double s = compute_similarity(metric, pa->second, pb->second, kernel).score;
            result.similarities.push_back(s);
            sum += s;
            ++result.used;
        } catch (const std::exception&) {
            ++result.skipped_undefined;
        }
    }
    if (result.used == 0) throw io::DataError("group_mean: empty group after filtering");
    result.theta = sum / static_cast<double>(result.used);
    return result;
}

std::string_view bin_name(BfBin b) {
    switch (b) {
        case BfBin::FavorsH0: return "favors_H0";
        case BfBin::Inconclusive: return "inconclusive";
        case BfBin::FavorsHa: return "favors_Ha";
    }
    return "inconclusive";
}

BfBin classify_bf(double bf10) {
    if (bf10 > 3.0) return BfBin::FavorsHa;
    if (bf10 < 1.0 / 3.0) return BfBin::FavorsH0;
    return BfBin::Inconclusive;
}

namespace {

struct TTest {
    double t = 0.0;
    double nu = 0.0;
    double n_eff = 0.0;
};

TTest pooled_t(std::span<const double> x, std::span<const double> y) {
    const auto nx = static_cast<double>(x.size());
    const auto ny = static_cast<double>(y.size());
    if (x.size() < 2 || y.size() < 2) {
        throw io::DataError("jzs_bf10: need at least 2 observations per group");
    }
    const double mx = kernels::sum(x.data(), x.size()) / nx;
    const double my = kernels::sum(y.data(), y.size()) / ny;
    double ssx = 0.0, ssy = 0.0;
    for (double v : x) ssx += (v - mx) * (v - mx);
    for (double v : y) ssy += (v - my) * (v - my);
    const double nu = nx + ny - 2.0;
    const double pooled_var = (ssx + ssy) / nu;
    if (pooled_var <= 0.0) throw io::DataError("jzs_bf10: degenerate pooled variance");
    TTest result;
    result.t = (mx - my) / std::sqrt(pooled_var * (1.0 / nx + 1.0 / ny));
    result.nu = nu;
    result.n_eff = nx * ny / (nx + ny);
    return result;
}

// Log of the marginal-likelihood integrand on the z = g/(1+g) substitution,
// Jacobian included:
//   (1 + N g r^2)^{-1/2} (1 + t^2/((1 + N g r^2) nu))^{-(nu+1)/2}
//     * (2 pi)^{-1/2} g^{-3/2} exp(-1/(2g)) * (1-z)^{-2}
// Evaluated in log space: extreme t drives the likelihood ratio far past
// double range, so the integral is scaled by its peak before quadrature.
double log_jzs_integrand_z(double z, double t, double nu, double n_eff, double r) {
    const double omz = 1.0 - z;
    if (z <= 0.0 || omz <= 0.0) return -std::numeric_limits<double>::infinity();
    const double g = z / omz;
    const double a = 1.0 + n_eff * g * r * r;
    const double log_lik = -0.5 * std::log(a) - 0.5 * (nu + 1.0) * std::log1p(t * t / (a * nu));
    const double log_prior =
        -0.5 * std::log(2.0 * 3.14159265358979323846) - 1.5 * std::log(g) - 1.0 / (2.0 * g);
    return log_lik + log_prior - 2.0 * std::log(omz);
}

double null_log_likelihood(double t, double nu) { return -0.5 * (nu + 1.0) * std::log1p(t * t / nu); }

// log P(delta in direction | g, data): a Student-t closed form conditional
// on g, kept in log space so the far tail survives extreme t.
double log_direction_given_g(double z, double t, double nu, double n_eff, double r, int sign) {
    const double g = z / (1.0 - z);
    const double big_g = g * r * r;
    const double denom = nu * (1.0 + n_eff * big_g) + t * t;
    const double arg = t * std::sqrt(n_eff * big_g * (nu + 1.0) / denom);
    return numeric::log_student_t_cdf(sign > 0 ? arg : -arg, nu + 1.0);
}

struct MarginalIntegral {
    double log_value = 0.0;    // log of the marginal-likelihood integral
    double log_dir_pos = 0.0;  // log P(delta > 0 | data, H1)
    double log_dir_neg = 0.0;  // log P(delta < 0 | data, H1)
};

// Integrates exp(log_f) over (0, 1) after scaling by the peak found on a
// coarse scan; returns the log of the integral.
double log_integral_scaled(const std::function<double(double)>& log_f) {
    double peak = -std::numeric_limits<double>::infinity();
    constexpr int kScan = 256;
    for (int i = 1; i < kScan; ++i) {
        peak = std::max(peak, log_f(static_cast<double>(i) / kScan));
    }
    if (!std::isfinite(peak)) throw io::DataError("jzs_bf10: degenerate integrand");
    const auto scaled =
        numeric::integrate_adaptive([&](double z) { return std::exp(log_f(z) - peak); }, 0.0, 1.0,
                                    1e-8);
    if (!std::isfinite(scaled.value) || scaled.value <= 0.0) {
        throw io::DataError("jzs_bf10: non-finite quadrature result");
    }
    return peak + std::log(scaled.value);
}

MarginalIntegral jzs_marginal(double t, double nu, double n_eff, double r) {
    MarginalIntegral result;
    result.log_value =
        log_integral_scaled([&](double z) { return log_jzs_integrand_z(z, t, nu, n_eff, r); });
    for (int sign : {+1, -1}) {
        const double log_num = log_integral_scaled([&](double z) {
            return log_jzs_integrand_z(z, t, nu, n_eff, r) +
                   log_direction_given_g(z, t, nu, n_eff, r, sign);
        });
        const double log_p = std::min(log_num - result.log_value, 0.0);
        (sign > 0 ? result.log_dir_pos : result.log_dir_neg) = log_p;
    }
    return result;
}

double bf10_from_stats(double t, double nu, double n_eff, double r) {
    const auto marginal = jzs_marginal(t, nu, n_eff, r);
    return std::exp(marginal.log_value - null_log_likelihood(t, nu));
}

double posterior_direction_from_stats(double t, double nu, double n_eff, double r) {
    return std::exp(jzs_marginal(t, nu, n_eff, r).log_dir_pos);
}

}  // namespace

double jzs_bf10_two_sided(double t, int nx, int ny, double prior_scale) {
    const double nu = nx + ny - 2.0;
    const double n_eff = static_cast<double>(nx) * ny / (nx + ny);
    return bf10_from_stats(t, nu, n_eff, prior_scale);
}

double jzs_posterior_direction(double t, int nx, int ny, double prior_scale) {
    const double nu = nx + ny - 2.0;
    const double n_eff = static_cast<double>(nx) * ny / (nx + ny);
    return posterior_direction_from_stats(t, nu, n_eff, prior_scale);
}

BayesFactorResult jzs_bf10(std::span<const double> x, std::span<const double> y, Tail tail,
                           double prior_scale) {
    if (!(prior_scale > 0.0)) throw io::DataError("jzs_bf10: prior scale must be positive");
    const TTest tt = pooled_t(x, y);
    const auto marginal = jzs_marginal(tt.t, tt.nu, tt.n_eff, prior_scale);
    double log_bf = marginal.log_value - null_log_likelihood(tt.t, tt.nu);
    if (tail != Tail::TwoSided) {
        // truncated-prior decomposition, fully in logs: an extreme t against
        // the hypothesized direction must drive the factor to zero, not
        // overflow through a clamped probability.
        const double log_p_dir = tail == Tail::Higher ? marginal.log_dir_pos : marginal.log_dir_neg;
        log_bf += std::log(2.0) + log_p_dir;
    }
    const double bf = std::exp(log_bf);
    if (std::isnan(bf)) {
        throw io::DataError("jzs_bf10: invalid Bayes factor (t=" + std::to_string(tt.t) + ")");
    }
    BayesFactorResult result;
    result.bf10 = bf;
    result.t_stat = tt.t;
    result.n_minus = static_cast<int>(x.size());
    result.n_plus = static_cast<int>(y.size());
    result.theta_minus = kernels::sum(x.data(), x.size()) / static_cast<double>(x.size());
    result.theta_plus = kernels::sum(y.data(), y.size()) / static_cast<double>(y.size());
    result.bin = classify_bf(bf);
    return result;
}

std::vector<GridCell> run_grid(std::span<const AgreementInstance> instances,
                               const ProfileMap& profiles, const GridConfig& config) {
    std::vector<std::string> forums = config.forums;
    if (forums.empty()) {
        std::set<std::string> seen;
        for (const auto& inst : instances) seen.insert(inst.forum);
        forums.assign(seen.begin(), seen.end());
    }
    // output contract: cells sorted by (forum, metric, threshold)
    std::sort(forums.begin(), forums.end());
    forums.erase(std::unique(forums.begin(), forums.end()), forums.end());
    std::vector<Metric> metrics = config.metrics;
    std::sort(metrics.begin(), metrics.end());
    metrics.erase(std::unique(metrics.begin(), metrics.end()), metrics.end());
    std::vector<std::int64_t> thresholds = config.thresholds;
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    const CircumplexKernel kernel = build_kernel(config.sigma);

    std::map<std::string, std::vector<AgreementInstance>> by_forum;
    for (const auto& inst : instances) by_forum[inst.forum].push_back(inst);

    std::vector<GridCell> cells;
    for (const auto& forum : forums) {
        const auto forum_it = by_forum.find(forum);
        Groups groups;
        if (forum_it != by_forum.end()) groups = split_groups(forum_it->second);
        for (const Metric metric : metrics) {
            for (const std::int64_t threshold : thresholds) {
                GridCell cell;
                cell.forum = forum;
                cell.metric = metric;
                cell.threshold = threshold;
                try {
                    if (groups.disagree.empty() || groups.agree.empty()) {
                        throw io::DataError("no labeled pairs in forum");
                    }
                    const auto minus =
                        group_mean(groups.disagree, profiles, metric, threshold, kernel);
                    const auto plus = group_mean(groups.agree, profiles, metric, threshold, kernel);
                    const Tail tail =
                        config.tail_override ? *config.tail_override : default_tail(metric);
                    cell.result = jzs_bf10(minus.similarities, plus.similarities, tail,
                                           config.prior_scale);
                } catch (const std::exception& e) {
                    cell.result.reset();
                    cell.skip_reason = e.what();
                }
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

std::string grid_to_csv(std::span<const GridCell> cells) {
    std::string out = "forum,metric,threshold,n_minus,n_plus,theta_minus,theta_plus,t,bf10,bin\n";
    for (const auto& cell : cells) {
        out += io::csv_escape(cell.forum);
        out += ',';
        out += metric_name(cell.metric);
        out += ',';
        out += std::to_string(cell.threshold);
        if (cell.result) {
            const auto& r = *cell.result;
            out += ',' + std::to_string(r.n_minus) + ',' + std::to_string(r.n_plus);
            out += ',' + io::format_compact(r.theta_minus) + ',' + io::format_compact(r.theta_plus);
            out += ',' + io::format_compact(r.t_stat) + ',' + io::format_compact(r.bf10);
            out += ',';
            out += bin_name(r.bin);
        } else {
            out += ",,,,,,," + io::csv_escape("skipped: " + cell.skip_reason);
        }
        out += '\n';
    }
    return out;
}

std::string grid_ranked_csv(std::span<const GridCell> cells) {
    std::vector<const GridCell*> tested;
    for (const auto& cell : cells) {
        if (cell.result) tested.push_back(&cell);
    }
    std::stable_sort(tested.begin(), tested.end(), [](const GridCell* a, const GridCell* b) {
        return a->result->bf10 > b->result->bf10;
    });
    std::string out = "bf10,forum,metric,threshold\n";
    for (const GridCell* cell : tested) {
        out += io::format_compact(cell->result->bf10);
        out += ',';
        out += io::csv_escape(cell->forum);
        out += ',';
        out += metric_name(cell->metric);
        out += ',';
        out += std::to_string(cell->threshold);
        out += '\n';
    }
    return out;
}

numeric::Matrix value_covariance(std::span<const ValueProfile> profiles) {
    const std::size_t n = profiles.size();
    if (n < 2) throw io::DataError("value_covariance: need at least 2 profiles");
    std::array<double, kValueCount> mean{};
    std::vector<std::array<double, kValueCount>> rows;
    rows.reserve(n);
    for (const auto& p : profiles) {
        rows.push_back(profile_scores(p));
        kernels::axpy(1.0, rows.back().data(), mean.data(), kValueCount);
    }
    kernels::scale(mean.data(), 1.0 / static_cast<double>(n), kValueCount);

    numeric::Matrix cov(kValueCount, kValueCount);
    for (const auto& row : rows) {
        std::array<double, kValueCount> centered;
        for (int i = 0; i < kValueCount; ++i) {
            centered[static_cast<std::size_t>(i)] =
                row[static_cast<std::size_t>(i)] - mean[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < kValueCount; ++i) {
            kernels::axpy(centered[static_cast<std::size_t>(i)], centered.data(),
                          cov.data.data() + static_cast<std::size_t>(i) * kValueCount, kValueCount);
        }
    }
    kernels::scale(cov.data.data(), 1.0 / static_cast<double>(n - 1), cov.data.size());
    return cov;
}

MdsResult classical_mds(const numeric::Matrix& covariance) {
    if (covariance.rows != covariance.cols) {
        throw std::invalid_argument("classical_mds: matrix must be square");
    }
    const std::size_t n = covariance.rows;
    MdsResult result;
    result.coordinates.assign(n, {0.0, 0.0});

    numeric::Matrix d2(n, n);
    double max_d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            d2.at(i, j) = covariance.at(i, i) + covariance.at(j, j) - 2.0 * covariance.at(i, j);
            max_d2 = std::max(max_d2, std::fabs(d2.at(i, j)));
        }
    }
    if (max_d2 <= 1e-300) {
        result.all_zero = true;
        return result;
    }

    // B = -1/2 J d2 J with J = I - 11^T/n
    std::vector<double> row_mean(n, 0.0), col_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            row_mean[i] += d2.at(i, j);
            col_mean[j] += d2.at(i, j);
            grand += d2.at(i, j);
        }
    }
    for (auto& v : row_mean) v /= static_cast<double>(n);
    for (auto& v : col_mean) v /= static_cast<double>(n);
    grand /= static_cast<double>(n * n);

    numeric::Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            b.at(i, j) = -0.5 * (d2.at(i, j) - row_mean[i] - col_mean[j] + grand);
        }
    }

    const auto eig = numeric::eigen_symmetric(b);
    for (int k = 0; k < 2; ++k) {
        double lambda = eig.values[static_cast<std::size_t>(k)];
        if (lambda < 0.0) {
            result.clamped_negative_eigenvalue = true;
            lambda = 0.0;
        }
        const double s = std::sqrt(lambda);
        for (std::size_t i = 0; i < n; ++i) {
            result.coordinates[i][static_cast<std::size_t>(k)] =
                s * eig.vectors.at(i, static_cast<std::size_t>(k));
        }
    }
    // recenter to kill numerical drift
    for (int k = 0; k < 2; ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += result.coordinates[i][static_cast<std::size_t>(k)];
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) result.coordinates[i][static_cast<std::size_t>(k)] -= mean;
    }
    return result;
}

}  // namespace valconf
