#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "test_util.hpp"
#include "valconf/numeric.hpp"
#include "valconf/profiles.hpp"

using namespace valconf;

namespace {

ValueLabels labels_of(std::string id, std::initializer_list<ValueId> values) {
    ValueLabels l;
    l.comment_id = std::move(id);
    for (ValueId v : values) l.relevant.insert(v);
    return l;
}

PvqResponse uniform_response(const std::string& who, int score) {
    PvqResponse r;
    r.respondent = who;
    r.item_scores.fill(score);
    r.attention = {AttentionCheck{22, 3, 3}, AttentionCheck{23, 5, 5}};
    return r;
}

}  // namespace

TEST_CASE("aggregate_profiles counts per value") {
    const std::map<std::string, std::string> authorship = {
        {"c1", "alice"}, {"c2", "alice"}, {"c3", "alice"}, {"c4", "bob"}};
    const std::vector<ValueLabels> labels = {
        labels_of("c1", {ValueId::Power}),
        labels_of("c2", {ValueId::Power, ValueId::Security}),
        labels_of("c3", {}),
    };
    const auto result = aggregate_profiles(labels, authorship);
    REQUIRE(result.profiles.count("alice"));
    const auto& alice = result.profiles.at("alice");
    CHECK(alice.counts[position(ValueId::Power)] == 2);
    CHECK(alice.counts[position(ValueId::Security)] == 1);
    CHECK(alice.total_mentions == 3);
    // bob has comments but no labels: all-zero profile still present
    REQUIRE(result.profiles.count("bob"));
    CHECK(result.profiles.at("bob").total_mentions == 0);
}

TEST_CASE("aggregate_profiles order-insensitive") {
    const std::map<std::string, std::string> authorship = {
        {"c1", "u1"}, {"c2", "u2"}, {"c3", "u3"}, {"c4", "u1"}};
    std::vector<ValueLabels> labels = {
        labels_of("c1", {ValueId::Hedonism}),
        labels_of("c2", {ValueId::Tradition, ValueId::Power}),
        labels_of("c3", {ValueId::Security}),
        labels_of("c4", {ValueId::Hedonism}),
    };
    const auto a = aggregate_profiles(labels, authorship);
    std::reverse(labels.begin(), labels.end());
    const auto b = aggregate_profiles(labels, authorship);
    REQUIRE(a.profiles.size() == b.profiles.size());
    for (const auto& [user, profile] : a.profiles) {
        CHECK(b.profiles.at(user).counts == profile.counts);
    }
}

TEST_CASE("aggregation and normalization commute with user relabeling") {
    const std::map<std::string, std::string> authorship = {
        {"c1", "alice"}, {"c2", "alice"}, {"c3", "bob"}};
    const std::map<std::string, std::string> relabeled = {
        {"c1", "zz_9"}, {"c2", "zz_9"}, {"c3", "aa_1"}};
    const std::vector<ValueLabels> labels = {
        labels_of("c1", {ValueId::Power, ValueId::Hedonism}),
        labels_of("c2", {ValueId::Power}),
        labels_of("c3", {ValueId::Tradition}),
    };
    const auto original = aggregate_profiles(labels, authorship);
    const auto renamed = aggregate_profiles(labels, relabeled);
    CHECK(normalize(original.profiles.at("alice")).scores ==
          normalize(renamed.profiles.at("zz_9")).scores);
    CHECK(normalize(original.profiles.at("bob")).scores ==
          normalize(renamed.profiles.at("aa_1")).scores);
}

TEST_CASE("aggregate_profiles unknown comment rejected") {
    const std::map<std::string, std::string> authorship = {{"c1", "u1"}};
    const std::vector<ValueLabels> labels = {labels_of("cX", {ValueId::Power})};
    const auto result = aggregate_profiles(labels, authorship);
    CHECK(result.rejects.count() == 1);
}

TEST_CASE("threshold_filter inclusive boundary") {
    ProfileMap profiles;
    ValueProfile p;
    p.user = "a";
    p.counts[0] = 10;
    p.total_mentions = 10;
    profiles["a"] = p;
    p.user = "b";
    p.counts[0] = 9;
    p.total_mentions = 9;
    profiles["b"] = p;

    const auto kept = threshold_filter(profiles, 10);
    CHECK(kept.count("a") == 1);
    CHECK(kept.count("b") == 0);

    const auto all_nonzero = threshold_filter(profiles, 1);
    CHECK(all_nonzero.size() == 2);

    ValueProfile zero;
    zero.user = "z";
    profiles["z"] = zero;
    CHECK(threshold_filter(profiles, 1).size() == 2);
    CHECK(threshold_filter(profiles, 0).size() == 3);
}

TEST_CASE("threshold_filter nested for increasing l") {
    numeric::Rng rng(11);
    ProfileMap profiles;
    for (int u = 0; u < 50; ++u) {
        ValueProfile p;
        p.user = "u" + std::to_string(u);
        for (int v = 0; v < kValueCount; ++v) {
            p.counts[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(rng.below(30));
            p.total_mentions += p.counts[static_cast<std::size_t>(v)];
        }
        profiles[p.user] = p;
    }
    const auto at10 = threshold_filter(profiles, 10);
    const auto at50 = threshold_filter(profiles, 50);
    for (const auto& [user, profile] : at50) {
        (void)profile;
        CHECK(at10.count(user) == 1);
    }
}

TEST_CASE("normalize") {
    ValueProfile p;
    p.user = "a";
    p.counts[0] = 2;
    p.counts[1] = 1;
    p.total_mentions = 3;
    const auto n = normalize(p);
    CHECK(n.scores[0] == doctest::Approx(2.0 / 3.0));
    CHECK(n.scores[1] == doctest::Approx(1.0 / 3.0));
    CHECK(n.normalized);

    // uniform counts give uniform scores
    ValueProfile u;
    u.user = "u";
    u.counts.fill(4);
    u.total_mentions = 40;
    const auto nu = normalize(u);
    for (double s : nu.scores) CHECK(s == doctest::Approx(0.1));

    ValueProfile zero;
    zero.user = "z";
    CHECK_THROWS_AS(normalize(zero), io::DataError);
}

TEST_CASE("normalize then re-multiply recovers counts exactly") {
    numeric::Rng rng(4);
    for (int rep = 0; rep < 200; ++rep) {
        ValueProfile p;
        p.user = "r";
        for (int v = 0; v < kValueCount; ++v) {
            p.counts[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(rng.below(100));
            p.total_mentions += p.counts[static_cast<std::size_t>(v)];
        }
        if (p.total_mentions == 0) continue;
        const auto n = normalize(p);
        double sum = 0.0;
        for (int v = 0; v < kValueCount; ++v) {
            const double recovered = n.scores[static_cast<std::size_t>(v)] *
                                     static_cast<double>(p.total_mentions);
            CHECK(std::llround(recovered) == p.counts[static_cast<std::size_t>(v)]);
            sum += n.scores[static_cast<std::size_t>(v)];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("weighted dictionary profile") {
    ValueLexicon lex;
    for (int v = 0; v < kValueCount; ++v) lex.terms[static_cast<std::size_t>(v)] = {"t"};
    // counts (10, 10, 0...) with weights 0.1 and 0.2: scores 1/3 and 2/3
    lex.terms[0] = std::vector<std::string>(10, "a");  // w = 0.1
    lex.terms[1] = std::vector<std::string>(5, "b");   // w = 0.2
    for (int i = 0; i < 10; ++i) lex.terms[0][static_cast<std::size_t>(i)] += std::to_string(i);
    for (int i = 0; i < 5; ++i) lex.terms[1][static_cast<std::size_t>(i)] += std::to_string(i);
    lex.recompute_weights();

    ValueProfile p;
    p.user = "x";
    p.counts[0] = 10;
    p.counts[1] = 10;
    p.total_mentions = 20;
    const auto w = weighted_dictionary_profile(p, lex);
    CHECK(w.scores[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(w.scores[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // equal counts, equal weights: uniform
    ValueProfile eq;
    eq.user = "e";
    eq.counts.fill(3);
    eq.total_mentions = 30;
    ValueLexicon unif;
    for (int v = 0; v < kValueCount; ++v) {
        unif.terms[static_cast<std::size_t>(v)] = {"w" + std::to_string(v)};
    }
    unif.recompute_weights();
    const auto wu = weighted_dictionary_profile(eq, unif);
    for (double s : wu.scores) CHECK(s == doctest::Approx(0.1));

    // single nonzero value scores 1
    ValueProfile spike;
    spike.user = "s";
    spike.counts[7] = 4;
    spike.total_mentions = 4;
    const auto ws = weighted_dictionary_profile(spike, unif);
    CHECK(ws.scores[7] == doctest::Approx(1.0));

    ValueProfile zero;
    zero.user = "z";
    CHECK_THROWS_AS(weighted_dictionary_profile(zero, unif), io::DataError);
}

TEST_CASE("official pvq key covers 21 items") {
    const auto& key = official_pvq21_key();
    key.validate();
    CHECK(key.items(ValueId::Universalism).size() == 3);
    CHECK(key.items(ValueId::Conformity).size() == 2);
}

TEST_CASE("score_pvq all-equal answers give flagged zero profile") {
    const auto outcome = score_pvq(uniform_response("r1", 4));
    REQUIRE(outcome.status == PvqStatus::Scored);
    CHECK(outcome.profile.zero_flagged);
    for (double s : outcome.profile.scores) CHECK(s == 0.0);
}

TEST_CASE("score_pvq rejects failed attention checks") {
    auto resp = uniform_response("r2", 4);
    resp.attention[0] = {22, 3, 5};
    const auto outcome = score_pvq(resp);
    CHECK(outcome.status == PvqStatus::RejectedAttention);
}

TEST_CASE("score_pvq malformed response throws (distinct from rejection)") {
    auto resp = uniform_response("r3", 4);
    resp.item_scores[0] = 9;  // out of Likert range
    CHECK_THROWS_AS(score_pvq(resp), io::DataError);
}

TEST_CASE("score_pvq single elevated value becomes an L1 spike") {
    auto resp = uniform_response("r4", 3);
    // push both conformity items (7 and 16) one above the rest
    resp.item_scores[6] = 4;
    resp.item_scores[15] = 4;
    const auto outcome = score_pvq(resp);
    REQUIRE(outcome.status == PvqStatus::Scored);
    const auto& s = outcome.profile.scores;
    // hand arithmetic: MRAT = (19*3 + 2*4)/21 = 65/21; conformity centered
    // mean = 4 - 65/21 = 19/21; other values centered = 3 - 65/21 = -2/21.
    // L1 = 19/21 + 9 * 2/21 = 37/21; conformity score = 19/37.
    CHECK(s[position(ValueId::Conformity)] == doctest::Approx(19.0 / 37.0).epsilon(1e-12));
    for (int v = 0; v < kValueCount; ++v) {
        if (v == position(ValueId::Conformity)) continue;
        CHECK(s[static_cast<std::size_t>(v)] == doctest::Approx(-2.0 / 37.0).epsilon(1e-12));
    }
    double l1 = 0.0;
    for (double x : s) l1 += std::fabs(x);
    CHECK(l1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("score_pvq invariant to a constant shift of all items") {
    auto base = uniform_response("r5", 2);
    base.item_scores = {2, 3, 2, 4, 2, 3, 2, 3, 4, 2, 3, 2, 4, 2, 3, 2, 3, 4, 2, 3, 2};
    auto shifted = base;
    for (int& s : shifted.item_scores) s += 2;  // stays within [1,6]
    const auto a = score_pvq(base);
    const auto b = score_pvq(shifted);
    REQUIRE(a.status == PvqStatus::Scored);
    REQUIRE(b.status == PvqStatus::Scored);
    for (int v = 0; v < kValueCount; ++v) {
        CHECK(a.profile.scores[static_cast<std::size_t>(v)] ==
              doctest::Approx(b.profile.scores[static_cast<std::size_t>(v)]).epsilon(1e-12));
    }
}

TEST_CASE("cronbach alpha perfect consistency") {
    std::vector<PvqResponse> responses;
    for (int i = 0; i < 10; ++i) {
        auto r = uniform_response("r" + std::to_string(i), 3);
        // conformity items both get the same varying score
        r.item_scores[6] = 1 + (i % 5);
        r.item_scores[15] = 1 + (i % 5);
        responses.push_back(r);
    }
    const auto result = cronbach_alpha(responses, ValueId::Conformity);
    REQUIRE(result.defined);
    CHECK(result.alpha == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cronbach alpha zero variance undefined") {
    std::vector<PvqResponse> responses(5, uniform_response("r", 4));
    const auto result = cronbach_alpha(responses, ValueId::Conformity);
    CHECK_FALSE(result.defined);
}

TEST_CASE("cronbach alpha against frozen oracle") {
    // item pairs and the alpha/CI computed independently (scipy, Feldt CI)
    const int pairs[10][2] = {{3, 4}, {2, 2}, {5, 4}, {4, 5}, {1, 2},
                              {3, 3}, {4, 4}, {2, 3}, {5, 5}, {3, 2}};
    std::vector<PvqResponse> responses;
    for (int i = 0; i < 10; ++i) {
        auto r = uniform_response("r" + std::to_string(i), 3);
        r.item_scores[6] = pairs[i][0];
        r.item_scores[15] = pairs[i][1];
        responses.push_back(r);
    }
    const auto result = cronbach_alpha(responses, ValueId::Conformity);
    REQUIRE(result.defined);
    CHECK(result.alpha == doctest::Approx(0.888888888888889).epsilon(1e-12));
    CHECK(result.ci_low == doctest::Approx(0.552667315746336).epsilon(1e-9));
    CHECK(result.ci_high == doctest::Approx(0.972401571700616).epsilon(1e-9));
}

TEST_CASE("cronbach alpha near zero for independent items") {
    // Monte Carlo oracle: independent items have alpha ~ 0
    numeric::Rng rng(2024);
    std::vector<PvqResponse> responses;
    const int n = 10000;
    responses.reserve(n);
    for (int i = 0; i < n; ++i) {
        auto r = uniform_response("r" + std::to_string(i), 3);
        r.item_scores[6] = 1 + static_cast<int>(rng.below(6));
        r.item_scores[15] = 1 + static_cast<int>(rng.below(6));
        responses.push_back(r);
    }
    const auto result = cronbach_alpha(responses, ValueId::Conformity);
    REQUIRE(result.defined);
    CHECK(std::fabs(result.alpha) < 0.05);
}

TEST_CASE("pvq csv loader") {
    std::string csv = "respondent";
    for (int i = 1; i <= 21; ++i) csv += ",item_" + std::to_string(i);
    csv += ",att_idx1,att_req1,att_ans1,att_idx2,att_req2,att_ans2\n";
    csv += "alice";
    for (int i = 0; i < 21; ++i) csv += ",4";
    csv += ",22,3,3,23,5,5\n";
    csv += "bob";
    for (int i = 0; i < 21; ++i) csv += ",4";
    csv += ",22,3,1,23,5,5\n";
    testutil::TempFile f("pvq.csv", csv);
    const auto result = load_pvq_csv(f.path());
    REQUIRE(result.responses.size() == 2);
    CHECK(score_pvq(result.responses[0]).status == PvqStatus::Scored);
    CHECK(score_pvq(result.responses[1]).status == PvqStatus::RejectedAttention);
}

TEST_CASE("profiles csv round trip") {
    ProfileMap profiles;
    ValueProfile raw;
    raw.user = "alice";
    raw.counts[2] = 7;
    raw.counts[9] = 3;
    raw.total_mentions = 10;
    profiles["alice"] = raw;

    ValueProfile survey;
    survey.user = "bob";
    survey.source = ProfileSource::Survey;
    survey.scores[0] = 0.4;
    survey.scores[5] = -0.6;
    survey.normalized = true;
    profiles["bob"] = survey;

    const auto csv = profiles_to_csv(profiles);
    CHECK(csv.rfind("user,source,total_mentions,self-direction,", 0) == 0);
    const auto loaded = profiles_from_csv(csv);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded.at("alice").counts == raw.counts);
    CHECK(loaded.at("alice").total_mentions == 10);
    CHECK(loaded.at("bob").scores[5] == doctest::Approx(-0.6));
    CHECK(loaded.at("bob").source == ProfileSource::Survey);
}
