#include "valconf/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "valconf/kernels.hpp"
#include "valconf/numeric.hpp"
#include "valconf/similarity.hpp"

#include "json.hpp"

namespace valconf {
namespace {

using nlohmann::json;

std::map<std::string, int> term_counts(const std::string& text) {
    std::map<std::string, int> counts;
    for (const auto& token : preprocess(text)) ++counts[token];
    return counts;
}

}  // namespace

SparseVec TfidfVectorizer::transform(const std::string& text) const {
    SparseVec vec;
    vec.dim = static_cast<int>(vocabulary.size());
    for (const auto& [term, count] : term_counts(text)) {
        const auto it = index.find(term);
        if (it == index.end()) continue;  // unseen terms contribute nothing
        vec.entries.emplace_back(it->second,
                                 static_cast<double>(count) * idf[static_cast<std::size_t>(it->second)]);
    }
    std::sort(vec.entries.begin(), vec.entries.end());
    double norm_sq = 0.0;
    for (const auto& [idx, val] : vec.entries) norm_sq += val * val;
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [idx, val] : vec.entries) val *= inv;
    }
    return vec;
}

std::vector<double> TfidfVectorizer::transform_dense(const std::string& text) const {
    const SparseVec sparse = transform(text);
    std::vector<double> dense(vocabulary.size(), 0.0);
    for (const auto& [idx, val] : sparse.entries) dense[static_cast<std::size_t>(idx)] = val;
    return dense;
}

TfidfVectorizer fit_tfidf(std::span<const std::string> corpus, std::size_t vocab_size) {
    if (corpus.empty()) throw io::DataError("fit_tfidf: empty corpus");
    std::map<std::string, std::size_t> df;  // ordered: lexicographic tie-break for free
    for (const auto& text : corpus) {
        for (const auto& [term, count] : term_counts(text)) {
            (void)count;
            ++df[term];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> terms(df.begin(), df.end());
    std::stable_sort(terms.begin(), terms.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (terms.size() > vocab_size) terms.resize(vocab_size);

    TfidfVectorizer vec;
    vec.n_docs = corpus.size();
    std::sort(terms.begin(), terms.end());  // stable vocabulary order
    for (const auto& [term, doc_freq] : terms) {
        vec.index.emplace(term, static_cast<int>(vec.vocabulary.size()));
        vec.vocabulary.push_back(term);
        vec.idf.push_back(std::log((1.0 + static_cast<double>(vec.n_docs)) /
                                   (1.0 + static_cast<double>(doc_freq))) +
                          1.0);
    }
    return vec;
}

std::vector<double> user_centroid(std::span<const std::string> posts, const ValueLexicon& lex,
                                  const TfidfVectorizer& vectorizer, bool* none_qualified) {
    std::vector<double> centroid(vectorizer.vocabulary.size(), 0.0);
    std::size_t qualified = 0;
    for (const auto& post : posts) {
        const auto tokens = preprocess(post);
        if (classify_dictionary(tokens, lex).relevant.empty()) continue;
        const SparseVec vec = vectorizer.transform(post);
        for (const auto& [idx, val] : vec.entries) centroid[static_cast<std::size_t>(idx)] += val;
        ++qualified;
    }
    if (none_qualified) *none_qualified = qualified == 0;
    if (qualified > 0) {
        kernels::scale(centroid.data(), 1.0 / static_cast<double>(qualified), centroid.size());
    }
    return centroid;
}

std::string_view context_kind_name(ContextKind k) {
    switch (k) {
        case ContextKind::Noise: return "noise";
        case ContextKind::Centroid: return "centroid";
        case ContextKind::UserFeatures: return "user_features";
        case ContextKind::ValueProfile: return "value_profile";
        case ContextKind::None: return "none";
    }
    return "none";
}

std::optional<ContextKind> context_kind_from_name(std::string_view name) {
    if (name == "noise") return ContextKind::Noise;
    if (name == "centroid") return ContextKind::Centroid;
    if (name == "user_features") return ContextKind::UserFeatures;
    if (name == "value_profile") return ContextKind::ValueProfile;
    if (name == "none" || name == "text_only") return ContextKind::None;
    return std::nullopt;
}

std::vector<double> UserFeatures::to_vector() const {
    return {comment_karma, link_karma,  date_created, gold_status, mod_status,
            employee_status, num_gilded, num_comments, num_links};
}

std::map<std::string, UserFeatures> load_user_features_csv(const std::string& path) {
    const auto rows = io::parse_csv(io::read_file(path));
    if (rows.empty()) throw io::DataError("user features csv: empty file: " + path);
    const std::vector<std::string> expected = {
        "user",          "comment_karma", "link_karma", "date_created", "gold_status",
        "mod_status",    "employee_status", "num_gilded", "num_comments", "num_links"};
    if (rows[0] != expected) throw io::DataError("user features csv: unexpected header in " + path);
    std::map<std::string, UserFeatures> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != expected.size()) {
            throw io::DataError("user features csv: wrong field count at row " + std::to_string(r + 1));
        }
        UserFeatures f;
        double* fields[kUserFeatureDim] = {&f.comment_karma, &f.link_karma,  &f.date_created,
                                           &f.gold_status,   &f.mod_status,  &f.employee_status,
                                           &f.num_gilded,    &f.num_comments, &f.num_links};
        for (std::size_t i = 0; i < kUserFeatureDim; ++i) *fields[i] = std::stod(row[i + 1]);
        out.emplace(row[0], f);
    }
    return out;
}

TimeSplit time_split(std::vector<AgreementInstance> instances) {
    std::stable_sort(instances.begin(), instances.end(),
                     [](const AgreementInstance& a, const AgreementInstance& b) {
                         if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                         return a.id < b.id;
                     });
    const std::size_t n = instances.size();
    const std::size_t n_train = n * 8 / 10;
    const std::size_t n_train_val = n * 9 / 10;
    TimeSplit split;
    split.train.assign(instances.begin(), instances.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.val.assign(instances.begin() + static_cast<std::ptrdiff_t>(n_train),
                     instances.begin() + static_cast<std::ptrdiff_t>(n_train_val));
    split.test.assign(instances.begin() + static_cast<std::ptrdiff_t>(n_train_val), instances.end());
    return split;
}

void Standardizer::apply(std::vector<double>& v) const {
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = stdev[i] > 0.0 ? (v[i] - mean[i]) / stdev[i] : 0.0;
    }
}

Standardizer fit_standardizer(std::span<const std::vector<double>> vectors) {
    Standardizer st;
    if (vectors.empty()) return st;
    const std::size_t dim = vectors.front().size();
    st.mean.assign(dim, 0.0);
    st.stdev.assign(dim, 0.0);
    for (const auto& v : vectors) kernels::axpy(1.0, v.data(), st.mean.data(), dim);
    kernels::scale(st.mean.data(), 1.0 / static_cast<double>(vectors.size()), dim);
    for (const auto& v : vectors) {
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = v[i] - st.mean[i];
            st.stdev[i] += d * d;
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        st.stdev[i] = std::sqrt(st.stdev[i] / static_cast<double>(vectors.size()));
        if (st.stdev[i] < 1e-12) {
            st.stdev[i] = 0.0;
            ++st.constant_dims;
        }
    }
    return st;
}

std::optional<std::vector<double>> make_context(ContextKind kind, const std::string& user,
                                                const ContextInputs& inputs, std::uint64_t seed) {
    switch (kind) {
        case ContextKind::None:
            return std::vector<double>{};
        case ContextKind::Noise: {
            numeric::Rng rng(seed ^ numeric::fnv1a64(user));
            std::vector<double> v(kNoiseDim);
            for (double& x : v) x = rng.uniform();
            return v;
        }
        case ContextKind::Centroid: {
            if (!inputs.user_posts || !inputs.lexicon || !inputs.vectorizer) {
                throw io::DataError("make_context: centroid inputs missing");
            }
            const auto it = inputs.user_posts->find(user);
            if (it == inputs.user_posts->end()) return std::nullopt;
            return user_centroid(it->second, *inputs.lexicon, *inputs.vectorizer);
        }
        case ContextKind::UserFeatures: {
            if (!inputs.user_features) throw io::DataError("make_context: user features missing");
            const auto it = inputs.user_features->find(user);
            if (it == inputs.user_features->end()) return std::nullopt;
            return it->second.to_vector();
        }
        case ContextKind::ValueProfile: {
            if (!inputs.profiles) throw io::DataError("make_context: profiles missing");
            const auto it = inputs.profiles->find(user);
            if (it == inputs.profiles->end()) return std::nullopt;
            const auto scores = profile_scores(it->second);
            return std::vector<double>(scores.begin(), scores.end());
        }
    }
    throw std::logic_error("make_context: invalid kind");
}

BundlePipelineResult build_bundles(std::vector<AgreementInstance> instances, ContextKind kind,
                                   const ContextInputs& inputs, std::uint64_t seed,
                                   std::size_t vocab_size) {
    BundlePipelineResult result;
    TimeSplit split = time_split(std::move(instances));

    std::vector<std::string> train_texts;
    train_texts.reserve(split.train.size() * 2);
    for (const auto& inst : split.train) {
        train_texts.push_back(inst.parent_text);
        train_texts.push_back(inst.child_text);
    }
    result.vectorizer = fit_tfidf(train_texts, vocab_size);

    struct Pending {
        FeatureBundle bundle;
        bool is_train = false;
    };
    std::vector<Pending> pending;
    auto process = [&](std::span<const AgreementInstance> part, const char* tag) {
        for (const auto& inst : part) {
            auto ctx_p = make_context(kind, inst.parent_author, inputs, seed);
            auto ctx_c = make_context(kind, inst.child_author, inputs, seed);
            if (!ctx_p || !ctx_c) {
                ++result.dropped_missing_context;
                continue;
            }
            FeatureBundle b;
            b.id = inst.id;
            b.text_parent = result.vectorizer.transform(inst.parent_text);
            b.text_child = result.vectorizer.transform(inst.child_text);
            b.context_parent = std::move(*ctx_p);
            b.context_child = std::move(*ctx_c);
            b.label = inst.label;
            b.timestamp = inst.timestamp;
            b.split = tag;
            pending.push_back({std::move(b), std::string_view(tag) == "train"});
        }
    };
    process(split.train, "train");
    process(split.val, "val");
    process(split.test, "test");

    if (kind != ContextKind::None) {
        std::vector<std::vector<double>> train_contexts;
        for (const auto& p : pending) {
            if (!p.is_train) continue;
            train_contexts.push_back(p.bundle.context_parent);
            train_contexts.push_back(p.bundle.context_child);
        }
        const Standardizer st = fit_standardizer(train_contexts);
        if (!st.mean.empty()) {
            for (auto& p : pending) {
                st.apply(p.bundle.context_parent);
                st.apply(p.bundle.context_child);
            }
        }
    }
    for (auto& p : pending) {
        result.context_dim = std::max(result.context_dim, p.bundle.context_parent.size());
        result.bundles.push_back(std::move(p.bundle));
    }
    return result;
}

namespace {

json sparse_to_json(const SparseVec& v) {
    json j;
    j["dim"] = v.dim;
    json entries = json::object();
    for (const auto& [idx, val] : v.entries) entries[std::to_string(idx)] = val;
    j["entries"] = entries;
    return j;
}

SparseVec sparse_from_json(const json& j) {
    SparseVec v;
    v.dim = j.at("dim").get<int>();
    for (const auto& [key, val] : j.at("entries").items()) {
        v.entries.emplace_back(std::stoi(key), val.get<double>());
    }
    std::sort(v.entries.begin(), v.entries.end());
    return v;
}

}  // namespace

std::string bundles_to_jsonl(std::span<const FeatureBundle> bundles) {
    std::string out;
    for (const auto& b : bundles) {
        json j;
        j["id"] = b.id;
        j["text_parent"] = sparse_to_json(b.text_parent);
        j["text_child"] = sparse_to_json(b.text_child);
        j["context_parent"] = b.context_parent;
        j["context_child"] = b.context_child;
        j["label"] = std::string(label_name(b.label));
        j["timestamp"] = b.timestamp;
        j["split"] = b.split;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<FeatureBundle> bundles_from_jsonl(const std::string& content) {
    std::vector<FeatureBundle> bundles;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < content.size()) {
        std::size_t end = content.find('\n', start);
        if (end == std::string::npos) end = content.size();
        ++line_no;
        const std::string_view line(content.data() + start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw io::DataError("bundles: invalid json at line " + std::to_string(line_no));
        }
        FeatureBundle b;
        b.id = j.at("id").get<std::string>();
        b.text_parent = sparse_from_json(j.at("text_parent"));
        b.text_child = sparse_from_json(j.at("text_child"));
        b.context_parent = j.at("context_parent").get<std::vector<double>>();
        b.context_child = j.at("context_child").get<std::vector<double>>();
        const auto label = label_from_name(j.at("label").get<std::string>());
        if (!label) throw io::DataError("bundles: unknown label at line " + std::to_string(line_no));
        b.label = *label;
        b.timestamp = j.at("timestamp").get<std::int64_t>();
        b.split = j.at("split").get<std::string>();
        bundles.push_back(std::move(b));
    }
    return bundles;
}

int bundle_feature_dim(const FeatureBundle& b) {
    return b.text_parent.dim + b.text_child.dim +
           static_cast<int>(b.context_parent.size() + b.context_child.size());
}

int label_index(AgreementLabel l) {
    switch (l) {
        case AgreementLabel::Agree: return 0;
        case AgreementLabel::Neutral: return 1;
        case AgreementLabel::Disagree: return 2;
    }
    return 1;
}

AgreementLabel label_at(int index) {
    switch (index) {
        case 0: return AgreementLabel::Agree;
        case 2: return AgreementLabel::Disagree;
        default: return AgreementLabel::Neutral;
    }
}

namespace {

// scores_k = w_k . x + b_k over the concatenated feature layout
void raw_scores(const LogRegModel& model, const FeatureBundle& b,
                std::array<double, kNumClasses>& scores) {
    const int d = model.feature_dim;
    const int stride = d + 1;
    const int off_tc = b.text_parent.dim;
    const int off_cp = off_tc + b.text_child.dim;
    const int off_cc = off_cp + static_cast<int>(b.context_parent.size());
    for (int k = 0; k < kNumClasses; ++k) {
        const double* w = model.weights.data() + static_cast<std::size_t>(k) * stride;
        double s = w[d];  // bias
        for (const auto& [idx, val] : b.text_parent.entries) s += w[idx] * val;
        for (const auto& [idx, val] : b.text_child.entries) s += w[off_tc + idx] * val;
        if (!b.context_parent.empty()) {
            s += kernels::dot(w + off_cp, b.context_parent.data(), b.context_parent.size());
        }
        if (!b.context_child.empty()) {
            s += kernels::dot(w + off_cc, b.context_child.data(), b.context_child.size());
        }
        scores[static_cast<std::size_t>(k)] = s;
    }
}

void softmax_inplace(std::array<double, kNumClasses>& scores) {
    const double max_s = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    for (double& s : scores) {
        s = std::exp(s - max_s);
        sum += s;
    }
    for (double& s : scores) s /= sum;
}

}  // namespace

std::array<double, kNumClasses> LogRegModel::probabilities(const FeatureBundle& b) const {
    std::array<double, kNumClasses> scores;
    raw_scores(*this, b, scores);
    softmax_inplace(scores);
    return scores;
}

int LogRegModel::predict(const FeatureBundle& b) const {
    const auto probs = probabilities(b);
    return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

double logreg_loss_and_gradient(const LogRegModel& model, std::span<const FeatureBundle> data,
                                double l2, std::vector<double>* grad) {
    const int d = model.feature_dim;
    const int stride = d + 1;
    if (grad) grad->assign(model.weights.size(), 0.0);
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (const auto& b : data) {
        std::array<double, kNumClasses> probs;
        raw_scores(model, b, probs);
        softmax_inplace(probs);
        const int y = label_index(b.label);
        loss -= std::log(std::max(probs[static_cast<std::size_t>(y)], 1e-300)) * inv_n;
        if (!grad) continue;
        const int off_tc = b.text_parent.dim;
        const int off_cp = off_tc + b.text_child.dim;
        const int off_cc = off_cp + static_cast<int>(b.context_parent.size());
        for (int k = 0; k < kNumClasses; ++k) {
            const double coef = (probs[static_cast<std::size_t>(k)] - (k == y ? 1.0 : 0.0)) * inv_n;
            double* g = grad->data() + static_cast<std::size_t>(k) * stride;
            for (const auto& [idx, val] : b.text_parent.entries) g[idx] += coef * val;
            for (const auto& [idx, val] : b.text_child.entries) g[off_tc + idx] += coef * val;
            if (!b.context_parent.empty()) {
                kernels::axpy(coef, b.context_parent.data(), g + off_cp, b.context_parent.size());
            }
            if (!b.context_child.empty()) {
                kernels::axpy(coef, b.context_child.data(), g + off_cc, b.context_child.size());
            }
            g[d] += coef;
        }
    }
    // L2 on weights, not biases
    for (int k = 0; k < kNumClasses; ++k) {
        const double* w = model.weights.data() + static_cast<std::size_t>(k) * stride;
        loss += 0.5 * l2 * kernels::sum_squares(w, static_cast<std::size_t>(d));
        if (grad) {
            kernels::axpy(l2, w, grad->data() + static_cast<std::size_t>(k) * stride,
                          static_cast<std::size_t>(d));
        }
    }
    return loss;
}

LogRegModel train_logreg(std::span<const FeatureBundle> train, const LogRegConfig& config) {
    if (train.empty()) throw io::DataError("train_logreg: empty training set");
    bool multi_class = false;
    for (const auto& b : train) {
        if (label_index(b.label) != label_index(train.front().label)) {
            multi_class = true;
            break;
        }
    }
    if (!multi_class) throw io::DataError("train_logreg: need at least 2 classes in train");

    LogRegModel model;
    model.feature_dim = bundle_feature_dim(train.front());
    for (const auto& b : train) {
        if (bundle_feature_dim(b) != model.feature_dim) {
            throw io::DataError("train_logreg: inconsistent feature dimensions");
        }
    }
    model.weights.assign(static_cast<std::size_t>(kNumClasses) * (model.feature_dim + 1), 0.0);

    std::vector<double> grad;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double loss = logreg_loss_and_gradient(model, train, config.l2, &grad);
        if (!std::isfinite(loss)) {
            throw io::DataError("train_logreg: loss diverged (epoch " + std::to_string(epoch) +
                                "); reduce --lr");
        }
        kernels::axpy(-config.learning_rate, grad.data(), model.weights.data(), model.weights.size());
    }
    return model;
}

EvalMetrics evaluate_predictions(std::span<const int> predicted, std::span<const int> actual) {
    if (predicted.size() != actual.size() || predicted.empty()) {
        throw io::DataError("evaluate: empty or mismatched predictions");
    }
    std::array<std::array<double, kNumClasses>, kNumClasses> confusion{};  // [actual][predicted]
    double correct = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        confusion[static_cast<std::size_t>(actual[i])][static_cast<std::size_t>(predicted[i])] += 1.0;
        if (predicted[i] == actual[i]) correct += 1.0;
    }
    EvalMetrics m;
    for (int k = 0; k < kNumClasses; ++k) {
        double tp = confusion[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
        double pred_k = 0.0, actual_k = 0.0;
        for (int j = 0; j < kNumClasses; ++j) {
            pred_k += confusion[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            actual_k += confusion[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        }
        const double p = pred_k > 0.0 ? tp / pred_k : 0.0;
        const double r = actual_k > 0.0 ? tp / actual_k : 0.0;
        const double f1 = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
        m.macro_precision += p / kNumClasses;
        m.macro_recall += r / kNumClasses;
        m.macro_f1 += f1 / kNumClasses;
    }
    m.accuracy = correct / static_cast<double>(predicted.size());
    return m;
}

EvalMetrics evaluate_model(const LogRegModel& model, std::span<const FeatureBundle> split) {
    std::vector<int> predicted, actual;
    predicted.reserve(split.size());
    actual.reserve(split.size());
    for (const auto& b : split) {
        predicted.push_back(model.predict(b));
        actual.push_back(label_index(b.label));
    }
    return evaluate_predictions(predicted, actual);
}

EvalMetrics evaluate_majority(std::span<const FeatureBundle> train,
                              std::span<const FeatureBundle> split) {
    std::array<int, kNumClasses> counts{};
    for (const auto& b : train) ++counts[static_cast<std::size_t>(label_index(b.label))];
    const int majority =
        static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    std::vector<int> predicted(split.size(), majority), actual;
    actual.reserve(split.size());
    for (const auto& b : split) actual.push_back(label_index(b.label));
    return evaluate_predictions(predicted, actual);
}

}  // namespace valconf
