#include "valconf/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "valconf/numeric.hpp"

namespace valconf {

AggregateResult aggregate_profiles(std::span<const ValueLabels> labels,
                                   const std::map<std::string, std::string>& authorship) {
    AggregateResult result;
    for (const auto& [comment_id, user] : authorship) {
        (void)comment_id;
        auto [it, inserted] = result.profiles.try_emplace(user);
        if (inserted) {
            it->second.user = user;
            it->second.source = ProfileSource::Vpe;
        }
    }
    std::size_t row = 0;
    for (const auto& label : labels) {
        ++row;
        const auto author_it = authorship.find(label.comment_id);
        if (author_it == authorship.end()) {
            result.rejects.add(row, "unknown comment_id: " + label.comment_id);
            continue;
        }
        ValueProfile& profile = result.profiles[author_it->second];
        if (profile.user.empty()) profile.user = author_it->second;
        label.relevant.for_each([&](ValueId v) {
            ++profile.counts[static_cast<std::size_t>(position(v))];
            ++profile.total_mentions;
        });
    }
    return result;
}

ProfileMap threshold_filter(const ProfileMap& profiles, std::int64_t l) {
    ProfileMap out;
    for (const auto& [user, profile] : profiles) {
        if (profile.total_mentions >= l) out.emplace(user, profile);
    }
    return out;
}

ValueProfile normalize(const ValueProfile& profile) {
    if (profile.total_mentions <= 0) {
        throw io::DataError("normalize: empty profile for user '" + profile.user + "'");
    }
    ValueProfile out = profile;
    const double total = static_cast<double>(profile.total_mentions);
    for (int i = 0; i < kValueCount; ++i) {
        out.scores[static_cast<std::size_t>(i)] =
            static_cast<double>(profile.counts[static_cast<std::size_t>(i)]) / total;
    }
    out.normalized = true;
    return out;
}

ValueProfile weighted_dictionary_profile(const ValueProfile& raw, const ValueLexicon& lex) {
    double denom = 0.0;
    for (int i = 0; i < kValueCount; ++i) {
        denom += static_cast<double>(raw.counts[static_cast<std::size_t>(i)]) *
                 lex.weights[static_cast<std::size_t>(i)];
    }
    if (denom <= 0.0) {
        throw io::DataError("weighted_dictionary_profile: all-zero profile for user '" + raw.user +
                            "'");
    }
    ValueProfile out = raw;
    for (int i = 0; i < kValueCount; ++i) {
        out.scores[static_cast<std::size_t>(i)] =
            static_cast<double>(raw.counts[static_cast<std::size_t>(i)]) *
            lex.weights[static_cast<std::size_t>(i)] / denom;
    }
    out.normalized = true;
    return out;
}

void PvqItemMap::validate() const {
    std::set<int> seen;
    int total = 0;
    for (int v = 0; v < kValueCount; ++v) {
        const auto& items = items_for_value[static_cast<std::size_t>(v)];
        if (items.empty()) {
            throw io::DataError(std::string("pvq item map: no items for value ") +
                                std::string(value_name(static_cast<ValueId>(v))));
        }
        for (int idx : items) {
            if (idx < 1 || idx > kPvqItemCount) throw io::DataError("pvq item map: index out of range");
            if (!seen.insert(idx).second) throw io::DataError("pvq item map: duplicate item index");
            ++total;
        }
    }
    if (total != kPvqItemCount) throw io::DataError("pvq item map: must cover all 21 items");
}

const PvqItemMap& official_pvq21_key() {
    static const PvqItemMap key = [] {
        PvqItemMap m;
        auto set = [&m](ValueId v, std::vector<int> items) {
            m.items_for_value[static_cast<std::size_t>(position(v))] = std::move(items);
        };
        set(ValueId::SelfDirection, {1, 11});
        set(ValueId::Power, {2, 17});
        set(ValueId::Universalism, {3, 8, 19});
        set(ValueId::Achievement, {4, 13});
        set(ValueId::Security, {5, 14});
        set(ValueId::Stimulation, {6, 15});
        set(ValueId::Conformity, {7, 16});
        set(ValueId::Tradition, {9, 20});
        set(ValueId::Benevolence, {12, 18});
        set(ValueId::Hedonism, {10, 21});
        m.validate();
        return m;
    }();
    return key;
}

PvqOutcome score_pvq(const PvqResponse& resp, const PvqItemMap& item_map) {
    item_map.validate();
    for (int s : resp.item_scores) {
        if (s < kLikertMin || s > kLikertMax) {
            throw io::DataError("pvq: item score out of Likert range for respondent '" +
                                resp.respondent + "'");
        }
    }
    for (const auto& check : resp.attention) {
        if (check.answered != check.required) {
            return {PvqStatus::RejectedAttention, {}};
        }
    }

    double mrat = 0.0;
    for (int s : resp.item_scores) mrat += s;
    mrat /= static_cast<double>(kPvqItemCount);

    ValueProfile profile;
    profile.user = resp.respondent;
    profile.source = ProfileSource::Survey;
    double l1 = 0.0;
    for (int v = 0; v < kValueCount; ++v) {
        const auto items = item_map.items(static_cast<ValueId>(v));
        double centered_sum = 0.0;
        for (int idx : items) centered_sum += resp.item_scores[static_cast<std::size_t>(idx - 1)] - mrat;
        const double score = centered_sum / static_cast<double>(items.size());
        profile.scores[static_cast<std::size_t>(v)] = score;
        l1 += std::fabs(score);
    }
    if (l1 <= 1e-12) {
        profile.scores.fill(0.0);
        profile.zero_flagged = true;
    } else {
        for (double& s : profile.scores) s /= l1;
    }
    profile.normalized = true;
    return {PvqStatus::Scored, profile};
}

CronbachResult cronbach_alpha(std::span<const PvqResponse> responses, ValueId value,
                              const PvqItemMap& item_map) {
    const auto items = item_map.items(value);
    const int k = static_cast<int>(items.size());
    const int n = static_cast<int>(responses.size());
    CronbachResult result;
    result.n = n;
    result.k = k;
    if (n < 3) throw io::DataError("cronbach_alpha: need at least 3 responses");
    if (k < 2) throw io::DataError("cronbach_alpha: value must have at least 2 items");

    auto sample_variance = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        return ss / static_cast<double>(xs.size() - 1);
    };

    double item_var_sum = 0.0;
    for (int idx : items) {
        std::vector<double> col(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            col[static_cast<std::size_t>(i)] =
                responses[static_cast<std::size_t>(i)].item_scores[static_cast<std::size_t>(idx - 1)];
        }
        item_var_sum += sample_variance(col);
    }
    std::vector<double> sums(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int idx : items) {
            sums[static_cast<std::size_t>(i)] +=
                responses[static_cast<std::size_t>(i)].item_scores[static_cast<std::size_t>(idx - 1)];
        }
    }
    const double total_var = sample_variance(sums);
    if (total_var <= 1e-300) {
        result.defined = false;
        return result;
    }
    result.alpha = (static_cast<double>(k) / (k - 1.0)) * (1.0 - item_var_sum / total_var);
    const double df1 = n - 1.0;
    const double df2 = (n - 1.0) * (k - 1.0);
    result.ci_low = 1.0 - (1.0 - result.alpha) * numeric::f_quantile(0.975, df1, df2);
    result.ci_high = 1.0 - (1.0 - result.alpha) * numeric::f_quantile(0.025, df1, df2);
    result.defined = true;
    return result;
}

PvqLoadResult load_pvq_csv(const std::string& path) {
    PvqLoadResult result;
    const auto rows = io::parse_csv(io::read_file(path));
    if (rows.empty()) throw io::DataError("pvq csv: empty file: " + path);
    constexpr std::size_t kFieldCount = 1 + kPvqItemCount + 6;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != kFieldCount) {
            result.rejects.add(r + 1, "wrong field count");
            continue;
        }
        PvqResponse resp;
        resp.respondent = row[0];
        bool ok = true;
        auto parse_int = [&](const std::string& s, int* out) {
            try {
                std::size_t pos = 0;
                *out = std::stoi(s, &pos);
                return pos == s.size();
            } catch (const std::exception&) {
                return false;
            }
        };
        for (int i = 0; i < kPvqItemCount && ok; ++i) {
            ok = parse_int(row[static_cast<std::size_t>(1 + i)],
                           &resp.item_scores[static_cast<std::size_t>(i)]);
        }
        for (int a = 0; a < 2 && ok; ++a) {
            const std::size_t base = 1 + kPvqItemCount + static_cast<std::size_t>(3 * a);
            ok = parse_int(row[base], &resp.attention[static_cast<std::size_t>(a)].item_index) &&
                 parse_int(row[base + 1], &resp.attention[static_cast<std::size_t>(a)].required) &&
                 parse_int(row[base + 2], &resp.attention[static_cast<std::size_t>(a)].answered);
        }
        if (!ok) {
            result.rejects.add(r + 1, "non-integer field");
            continue;
        }
        result.responses.push_back(std::move(resp));
    }
    return result;
}

std::string profiles_to_csv(const ProfileMap& profiles) {
    std::string out = "user,source,total_mentions";
    for (int v = 0; v < kValueCount; ++v) {
        out += ',';
        out += value_name(static_cast<ValueId>(v));
    }
    out += '\n';
    for (const auto& [user, p] : profiles) {
        out += io::csv_escape(user);
        out += p.source == ProfileSource::Vpe ? ",vpe," : ",survey,";
        out += std::to_string(p.total_mentions);
        for (int v = 0; v < kValueCount; ++v) {
            out += ',';
            if (p.source == ProfileSource::Vpe && !p.normalized) {
                out += std::to_string(p.counts[static_cast<std::size_t>(v)]);
            } else {
                out += io::format_double(p.scores[static_cast<std::size_t>(v)]);
            }
        }
        out += '\n';
    }
    return out;
}

ProfileMap profiles_from_csv(const std::string& content) {
    const auto rows = io::parse_csv(content);
    if (rows.empty()) throw io::DataError("profiles csv: empty content");
    if (rows[0].size() != 3 + kValueCount || rows[0][0] != "user") {
        throw io::DataError("profiles csv: unexpected header");
    }
    ProfileMap out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 3 + kValueCount) {
            throw io::DataError("profiles csv: wrong field count at row " + std::to_string(r + 1));
        }
        ValueProfile p;
        p.user = row[0];
        if (row[1] == "vpe") {
            p.source = ProfileSource::Vpe;
        } else if (row[1] == "survey") {
            p.source = ProfileSource::Survey;
        } else {
            throw io::DataError("profiles csv: unknown source '" + row[1] + "'");
        }
        p.total_mentions = std::stoll(row[2]);
        std::array<double, kValueCount> entries{};
        bool integral = true;
        double entry_sum = 0.0;
        for (int v = 0; v < kValueCount; ++v) {
            const double x = std::stod(row[static_cast<std::size_t>(3 + v)]);
            entries[static_cast<std::size_t>(v)] = x;
            entry_sum += x;
            if (std::fabs(x - std::llround(x)) > 1e-9) integral = false;
        }
        if (p.source == ProfileSource::Vpe && integral &&
            std::fabs(entry_sum - static_cast<double>(p.total_mentions)) < 1e-9) {
            // raw count row
            for (int v = 0; v < kValueCount; ++v) {
                p.counts[static_cast<std::size_t>(v)] =
                    std::llround(entries[static_cast<std::size_t>(v)]);
            }
        } else {
            p.scores = entries;
            p.normalized = true;
        }
        if (out.count(p.user)) throw io::DataError("profiles csv: duplicate user '" + p.user + "'");
        out.emplace(p.user, std::move(p));
    }
    return out;
}

}  // namespace valconf
