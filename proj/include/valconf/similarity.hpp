#pragma once

#include <optional>
#include <span>
#include <string>

#include "valconf/profiles.hpp"
#include "valconf/value_model.hpp"

namespace valconf {

enum class Metric { Tau, Md, Co, Wc, Rho };

std::string_view metric_name(Metric m);
std::optional<Metric> metric_from_name(std::string_view name);

// Higher score means more conflict only for the Manhattan distance.
bool metric_higher_means_conflict(Metric m);

struct SimilarityResult {
    Metric metric;
    double score = 0.0;
    bool higher_means_conflict = false;
    bool degenerate = false;  // e.g. tau over a constant profile
};

enum class TauVariant { EquationDenominator, TieAdjusted };

// 1 - 2 * (# discordant pairs) / C(n,2); a tie on either side contributes
// nothing. TieAdjusted switches to the tau-b denominator.
SimilarityResult kendall_tau(std::span<const double> v, std::span<const double> w,
                             TauVariant variant = TauVariant::EquationDenominator);
SimilarityResult manhattan(std::span<const double> v, std::span<const double> w);
SimilarityResult cosine(std::span<const double> v, std::span<const double> w);
SimilarityResult weighted_cosine(std::span<const double> v, std::span<const double> w,
                                 const CircumplexKernel& kernel);
SimilarityResult spearman_rho(std::span<const double> v, std::span<const double> w);

// Average ranks for descending order; ties share the mean rank.
std::vector<double> average_ranks_desc(std::span<const double> xs);

// Profile-level entry point. VPE profiles are normalized on the fly; survey
// profiles are used as stored. Throws on undefined cases (zero norms,
// constant profile for rho, empty vpe profile).
SimilarityResult compute_similarity(Metric m, const ValueProfile& a, const ValueProfile& b,
                                    const CircumplexKernel& kernel);

std::array<double, kValueCount> profile_scores(const ValueProfile& p);

}  // namespace valconf
