#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "valconf/extraction.hpp"
#include "valconf/io.hpp"
#include "valconf/value_model.hpp"

namespace valconf {

enum class ProfileSource { Vpe, Survey };

struct ValueProfile {
    std::string user;
    ProfileSource source = ProfileSource::Vpe;
    std::array<std::int64_t, kValueCount> counts{};  // raw VPE mention counts
    std::array<double, kValueCount> scores{};        // normalized weights / survey scores
    std::int64_t total_mentions = 0;
    bool normalized = false;
    bool zero_flagged = false;  // survey response centered to all-zero
};

using ProfileMap = std::map<std::string, ValueProfile>;

struct AggregateResult {
    ProfileMap profiles;
    io::RejectsReport rejects;  // labels whose comment_id has no known author
};

// counts[v] = number of the user's comments with v relevant. Every author in
// the authorship map appears, including users with no labeled comments.
AggregateResult aggregate_profiles(std::span<const ValueLabels> labels,
                                   const std::map<std::string, std::string>& authorship);

// Keeps users with total_mentions >= l ("at least l" is inclusive).
ProfileMap threshold_filter(const ProfileMap& profiles, std::int64_t l);

// scores[v] = counts[v] / total_mentions; throws on an empty profile.
ValueProfile normalize(const ValueProfile& profile);

// Dictionary pipeline weighting: scores[v] = counts[v] * w_v, L1-normalized.
ValueProfile weighted_dictionary_profile(const ValueProfile& raw, const ValueLexicon& lex);

// ---------------------------------------------------------------------------
// PVQ-21 survey scoring
// ---------------------------------------------------------------------------

inline constexpr int kPvqItemCount = 21;
inline constexpr int kLikertMin = 1;
inline constexpr int kLikertMax = 6;

struct AttentionCheck {
    int item_index = 0;  // survey-side index, informational
    int required = 0;
    int answered = 0;
};

struct PvqResponse {
    std::string respondent;
    std::array<int, kPvqItemCount> item_scores{};
    std::array<AttentionCheck, 2> attention{};
};

// item indices are 1-based positions in the questionnaire
struct PvqItemMap {
    std::array<std::vector<int>, kValueCount> items_for_value;

    void validate() const;  // 21 items total, each value non-empty, indices distinct
    std::span<const int> items(ValueId v) const {
        return items_for_value[static_cast<std::size_t>(position(v))];
    }
};

// The official instrument key: two items per value, three for universalism.
const PvqItemMap& official_pvq21_key();

enum class PvqStatus { Scored, RejectedAttention };

struct PvqOutcome {
    PvqStatus status = PvqStatus::Scored;
    ValueProfile profile;  // valid when status == Scored
};

// MRAT-centered per-value means, L1-scaled; a failed attention check rejects
// the respondent, malformed responses throw instead.
PvqOutcome score_pvq(const PvqResponse& resp, const PvqItemMap& item_map = official_pvq21_key());

struct CronbachResult {
    double alpha = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool defined = false;
    int n = 0;
    int k = 0;
};

// Feldt F-based 95% interval. Undefined (zero variance of item sums) is
// reported, not thrown.
CronbachResult cronbach_alpha(std::span<const PvqResponse> responses, ValueId value,
                              const PvqItemMap& item_map = official_pvq21_key());

struct PvqLoadResult {
    std::vector<PvqResponse> responses;
    io::RejectsReport rejects;
};

// CSV: respondent,item_1..item_21,att_idx1,att_req1,att_ans1,att_idx2,att_req2,att_ans2
PvqLoadResult load_pvq_csv(const std::string& path);

// ---------------------------------------------------------------------------
// Profile CSV: user,source,total_mentions,<value names in circumplex order>
// VPE rows carry raw counts; survey rows carry scores.
// ---------------------------------------------------------------------------

std::string profiles_to_csv(const ProfileMap& profiles);
ProfileMap profiles_from_csv(const std::string& content);

}  // namespace valconf
