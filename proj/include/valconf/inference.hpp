#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "valconf/corpus.hpp"
#include "valconf/numeric.hpp"
#include "valconf/profiles.hpp"
#include "valconf/similarity.hpp"

namespace valconf {

inline constexpr double kDefaultPriorScale = 0.7071067811865476;  // sqrt(2)/2
inline const std::vector<std::int64_t> kDefaultThresholds = {1, 10, 50, 200, 500};

enum class Tail { Lower, Higher, TwoSided };

std::string_view tail_name(Tail t);
std::optional<Tail> tail_from_name(std::string_view name);

// Direction of the alternative per metric: distance flips the sign.
Tail default_tail(Metric m);

struct AuthorPair {
    std::string parent;
    std::string child;
};

struct Groups {
    std::vector<AuthorPair> disagree;  // G-
    std::vector<AuthorPair> agree;     // G+
};

// Drops neutral instances; duplicates are preserved.
Groups split_groups(std::span<const AgreementInstance> instances);

struct GroupMeanResult {
    double theta = 0.0;
    int used = 0;
    int skipped_missing_profile = 0;
    int skipped_undefined = 0;
    std::vector<double> similarities;  // per included pair, input order
};

// Mean pairwise similarity over a group; pairs lacking a thresholded profile
// on either side are skipped and counted. Throws when nothing survives.
GroupMeanResult group_mean(std::span<const AuthorPair> group, const ProfileMap& profiles,
                           Metric metric, std::int64_t threshold, const CircumplexKernel& kernel);

enum class BfBin { FavorsH0, Inconclusive, FavorsHa };

std::string_view bin_name(BfBin b);
BfBin classify_bf(double bf10);

struct BayesFactorResult {
    double bf10 = 0.0;
    double t_stat = 0.0;
    int n_minus = 0;
    int n_plus = 0;
    double theta_minus = 0.0;
    double theta_plus = 0.0;
    BfBin bin = BfBin::Inconclusive;
};

// Two-sample JZS Bayes factor on samples x (G-) and y (G+). The t statistic
// is pooled-variance Student with nu = nx + ny - 2, effective size
// N = nx ny / (nx + ny). The marginal-likelihood integral over the prior on
// g runs through adaptive Gauss-Kronrod after the substitution g = z/(1-z),
// relative tolerance 1e-8. One-sided factors use the truncated-prior
// decomposition BF = BF_two_sided * 2 P(direction | data, H1).
BayesFactorResult jzs_bf10(std::span<const double> x, std::span<const double> y, Tail tail,
                           double prior_scale = kDefaultPriorScale);

// Exposed for oracle tests: the two-sided integral and the posterior
// direction probability P(delta > 0 | data, H1).
double jzs_bf10_two_sided(double t, int nx, int ny, double prior_scale = kDefaultPriorScale);
double jzs_posterior_direction(double t, int nx, int ny, double prior_scale = kDefaultPriorScale);

struct GridCell {
    std::string forum;
    Metric metric = Metric::Tau;
    std::int64_t threshold = 0;
    std::optional<BayesFactorResult> result;
    std::string skip_reason;  // non-empty when result is absent
};

struct GridConfig {
    std::vector<std::string> forums;           // empty = all forums present, sorted
    std::vector<Metric> metrics = {Metric::Tau, Metric::Md, Metric::Co, Metric::Wc};
    std::vector<std::int64_t> thresholds = kDefaultThresholds;
    std::optional<Tail> tail_override;         // default: per-metric direction
    double prior_scale = kDefaultPriorScale;
    double sigma = 1.0;
};

// One cell per forum x metric x threshold, sorted that way; cells that
// cannot be tested carry a reason instead of a result.
std::vector<GridCell> run_grid(std::span<const AgreementInstance> instances,
                               const ProfileMap& profiles, const GridConfig& config);

std::string grid_to_csv(std::span<const GridCell> cells);
// Tested cells ranked by bf10 descending: bf10,forum,metric,threshold.
std::string grid_ranked_csv(std::span<const GridCell> cells);

// Sample covariance (n-1) of the 10 score dimensions across users.
numeric::Matrix value_covariance(std::span<const ValueProfile> profiles);

struct MdsResult {
    std::vector<std::array<double, 2>> coordinates;
    bool clamped_negative_eigenvalue = false;
    bool all_zero = false;
};

// Classical (Torgerson) MDS: similarities to squared distances, double
// centering, top-2 eigenpairs.
MdsResult classical_mds(const numeric::Matrix& covariance);

}  // namespace valconf
