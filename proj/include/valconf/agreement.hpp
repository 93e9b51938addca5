#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "valconf/corpus.hpp"
#include "valconf/extraction.hpp"
#include "valconf/profiles.hpp"

namespace valconf {

inline constexpr std::size_t kDefaultVocabSize = 768;
inline constexpr std::size_t kNoiseDim = 768;
inline constexpr std::size_t kUserFeatureDim = 9;

struct SparseVec {
    std::vector<std::pair<int, double>> entries;  // sorted by index
    int dim = 0;
};

// Vocabulary is the top vocab_size terms by document frequency, ties broken
// lexicographically; idf = ln((1+N)/(1+df)) + 1; vectors L2-normalized.
struct TfidfVectorizer {
    std::vector<std::string> vocabulary;
    std::unordered_map<std::string, int> index;
    std::vector<double> idf;
    std::size_t n_docs = 0;

    SparseVec transform(const std::string& text) const;
    std::vector<double> transform_dense(const std::string& text) const;
};

TfidfVectorizer fit_tfidf(std::span<const std::string> corpus, std::size_t vocab_size = kDefaultVocabSize);

// Mean TF-IDF vector of the user's posts that contain at least one lexicon
// term; all-zero (flagged) when none qualify.
std::vector<double> user_centroid(std::span<const std::string> posts, const ValueLexicon& lex,
                                  const TfidfVectorizer& vectorizer, bool* none_qualified = nullptr);

enum class ContextKind { Noise, Centroid, UserFeatures, ValueProfile, None };

std::string_view context_kind_name(ContextKind k);
std::optional<ContextKind> context_kind_from_name(std::string_view name);

// The nine account-level features commonly scraped for Reddit users.
struct UserFeatures {
    double comment_karma = 0;
    double link_karma = 0;
    double date_created = 0;  // seconds since epoch
    double gold_status = 0;
    double mod_status = 0;
    double employee_status = 0;
    double num_gilded = 0;
    double num_comments = 0;
    double num_links = 0;

    std::vector<double> to_vector() const;
};

// CSV: user,comment_karma,link_karma,date_created,gold_status,mod_status,
//      employee_status,num_gilded,num_comments,num_links
std::map<std::string, UserFeatures> load_user_features_csv(const std::string& path);

struct FeatureBundle {
    std::string id;
    SparseVec text_parent;
    SparseVec text_child;
    std::vector<double> context_parent;
    std::vector<double> context_child;
    AgreementLabel label = AgreementLabel::Neutral;
    std::int64_t timestamp = 0;
    std::string split;  // train / val / test
};

struct TimeSplit {
    std::vector<AgreementInstance> train;
    std::vector<AgreementInstance> val;
    std::vector<AgreementInstance> test;
};

// Ascending timestamp (ties by id): first 80% train, next 10% val, rest test.
TimeSplit time_split(std::vector<AgreementInstance> instances);

// Per-dimension train statistics; constant dimensions map to zero.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stdev;     // 0 marks a constant dimension
    std::size_t constant_dims = 0;

    void apply(std::vector<double>& v) const;
};

Standardizer fit_standardizer(std::span<const std::vector<double>> vectors);

struct ContextInputs {
    const std::map<std::string, std::vector<std::string>>* user_posts = nullptr;  // Centroid
    const ValueLexicon* lexicon = nullptr;                                        // Centroid
    const TfidfVectorizer* vectorizer = nullptr;                                  // Centroid
    const std::map<std::string, UserFeatures>* user_features = nullptr;           // UserFeatures
    const ProfileMap* profiles = nullptr;                                         // ValueProfile
};

// Deterministic per (seed, user): noise vectors hash the user id into the
// stream seed. Returns nullopt when the user lacks the required data, which
// drops the instance upstream.
std::optional<std::vector<double>> make_context(ContextKind kind, const std::string& user,
                                                const ContextInputs& inputs, std::uint64_t seed);

struct BundlePipelineResult {
    std::vector<FeatureBundle> bundles;  // train + val + test, split tagged
    std::size_t dropped_missing_context = 0;
    std::size_t context_dim = 0;
    TfidfVectorizer vectorizer;
};

// Full leakage-safe pipeline: time split, TF-IDF fitted on train texts,
// contexts standardized with train statistics only.
BundlePipelineResult build_bundles(std::vector<AgreementInstance> instances, ContextKind kind,
                                   const ContextInputs& inputs, std::uint64_t seed,
                                   std::size_t vocab_size = kDefaultVocabSize);

std::string bundles_to_jsonl(std::span<const FeatureBundle> bundles);
std::vector<FeatureBundle> bundles_from_jsonl(const std::string& content);

// ---------------------------------------------------------------------------
// Multinomial logistic regression over [text_p, text_c, ctx_p, ctx_c]
// ---------------------------------------------------------------------------

inline constexpr int kNumClasses = 3;

struct LogRegConfig {
    double l2 = 1e-4;
    double learning_rate = 0.1;
    int epochs = 500;
    std::uint64_t seed = 0;
};

struct LogRegModel {
    int feature_dim = 0;
    // row-major kNumClasses x (feature_dim + 1); last column is the bias
    std::vector<double> weights;

    std::array<double, kNumClasses> probabilities(const FeatureBundle& b) const;
    int predict(const FeatureBundle& b) const;
};

int bundle_feature_dim(const FeatureBundle& b);
int label_index(AgreementLabel l);
AgreementLabel label_at(int index);

// Mean cross-entropy + (l2/2)||W||^2 (bias unregularized); gradient written
// into grad (same layout as weights).
double logreg_loss_and_gradient(const LogRegModel& model, std::span<const FeatureBundle> data,
                                double l2, std::vector<double>* grad);

// Full-batch gradient descent; deterministic. Throws if the loss goes
// non-finite.
LogRegModel train_logreg(std::span<const FeatureBundle> train, const LogRegConfig& config);

struct EvalMetrics {
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double accuracy = 0.0;
};

EvalMetrics evaluate_predictions(std::span<const int> predicted, std::span<const int> actual);
EvalMetrics evaluate_model(const LogRegModel& model, std::span<const FeatureBundle> split);
// Predicts the most frequent train label everywhere.
EvalMetrics evaluate_majority(std::span<const FeatureBundle> train,
                              std::span<const FeatureBundle> split);

}  // namespace valconf
