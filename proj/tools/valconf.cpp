// valconf: value-profile construction, conflict metrics, Bayes-factor tests
// and agreement-prediction features behind one binary.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "valconf/agreement.hpp"
#include "valconf/corpus.hpp"
#include "valconf/extraction.hpp"
#include "valconf/inference.hpp"
#include "valconf/io.hpp"
#include "valconf/manifest.hpp"
#include "valconf/profiles.hpp"
#include "valconf/similarity.hpp"
#include "valconf/svg_report.hpp"
#include "valconf/value_model.hpp"

namespace {

using namespace valconf;
using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

int thread_cap() {
    if (const char* env = std::getenv("VALCONF_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Deterministic regardless of scheduling: slot i always receives fn(i).
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const int threads = std::min<int>(thread_cap(), static_cast<int>(count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = static_cast<std::size_t>(t); i < count;
                 i += static_cast<std::size_t>(threads)) {
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

AgreementFormat format_of(const std::string& path, const std::string& override_fmt) {
    if (override_fmt == "csv") return AgreementFormat::Csv;
    if (override_fmt == "jsonl") return AgreementFormat::Jsonl;
    if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl") return AgreementFormat::Jsonl;
    return AgreementFormat::Csv;
}

std::string comments_to_jsonl(const std::vector<Comment>& comments) {
    std::string out;
    for (const auto& c : comments) {
        json j;
        j["id"] = c.id;
        j["author"] = c.author;
        j["forum"] = c.forum;
        j["timestamp"] = c.timestamp;
        j["text"] = c.text;
        if (c.lang) j["lang"] = *c.lang;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void write_manifest(const std::string& subcommand, const std::vector<std::string>& inputs,
                    const json& config, const std::vector<std::string>& outputs) {
    if (outputs.empty()) return;
    RunManifest manifest;
    manifest.subcommand = subcommand;
    for (const auto& path : inputs) manifest.add_input(path);
    manifest.config_json = config.dump();
    manifest.outputs = outputs;
    manifest.write_beside(outputs.front());
}

// ---------------------------------------------------------------------- //

struct KernelArgs {
    double sigma = 1.0;
    std::string out;
};

int run_kernel(const KernelArgs& args) {
    const auto kernel = build_kernel(args.sigma);
    const auto csv = kernel_to_csv(kernel);
    if (!kernel.positive_semidefinite) {
        std::cerr << "warning: kernel at sigma=" << args.sigma
                  << " is not positive semi-definite (min eigenvalue " << kernel.min_eigenvalue
                  << ")\n";
    }
    if (args.out.empty()) {
        std::cout << csv;
    } else {
        io::write_file(args.out, csv);
        write_manifest("kernel", {}, json{{"sigma", args.sigma}}, {args.out});
    }
    return 0;
}

struct FilterArgs {
    std::string in, out, exclude, rejects, report;
    int min_forum_posts = 50;
    bool english_only = false;
    bool allow_empty_text = false;
};

int run_filter(const FilterArgs& args) {
    FilterConfig cfg;
    cfg.min_forum_posts = args.min_forum_posts;
    cfg.english_only = args.english_only;
    cfg.allow_empty_text = args.allow_empty_text;
    std::vector<std::string> inputs = {args.in};
    if (!args.exclude.empty()) {
        io::for_each_line(args.exclude, [&](std::size_t, std::string_view line) {
            if (!line.empty()) cfg.exclusion_list.insert(std::string(line));
        });
        inputs.push_back(args.exclude);
    }
    auto loaded = load_comments(args.in, args.allow_empty_text);
    auto filtered = apply_filters(std::move(loaded.comments), cfg);

    std::vector<std::string> outputs = {args.out};
    io::write_file(args.out, comments_to_jsonl(filtered.comments));
    if (!args.rejects.empty()) {
        io::write_file(args.rejects, loaded.rejects.to_jsonl());
        outputs.push_back(args.rejects);
    }
    if (!args.report.empty()) {
        io::write_file(args.report, filtered.report.to_json() + "\n");
        outputs.push_back(args.report);
    }
    std::cerr << "filter: " << filtered.report.input_count << " in, "
              << filtered.report.output_count << " out, " << loaded.rejects.count()
              << " rejects\n";
    write_manifest("filter", inputs,
                   json{{"min_forum_posts", cfg.min_forum_posts},
                        {"english_only", cfg.english_only},
                        {"exclusion_list_size", cfg.exclusion_list.size()}},
                   outputs);
    return 0;
}

struct ExtractArgs {
    std::string lexicon, in, out, rejects;
};

int run_extract(const ExtractArgs& args) {
    const auto lex = load_lexicon(args.lexicon);
    const auto loaded = load_comments(args.in, true);
    std::vector<ValueLabels> labels(loaded.comments.size());
    parallel_for(loaded.comments.size(), [&](std::size_t i) {
        const auto tokens = preprocess(loaded.comments[i].text);
        labels[i] = classify_dictionary(tokens, lex, loaded.comments[i].id);
    });
    std::vector<std::string> outputs = {args.out};
    io::write_file(args.out, labels_to_jsonl(labels));
    if (!args.rejects.empty()) {
        io::write_file(args.rejects, loaded.rejects.to_jsonl());
        outputs.push_back(args.rejects);
    }
    write_manifest("extract", {args.lexicon, args.in}, json::object(), outputs);
    return 0;
}

struct ProfileArgs {
    std::string labels, comments, out, lexicon, rejects;
    bool weighted = false;
};

int run_profile(const ProfileArgs& args) {
    const auto predictions = load_predictions(args.labels);
    const auto loaded = load_comments(args.comments, true);
    std::map<std::string, std::string> authorship;
    for (const auto& c : loaded.comments) authorship[c.id] = c.author;
    auto aggregated = aggregate_profiles(predictions.labels, authorship);

    ProfileMap final_profiles;
    std::size_t skipped_empty = 0;
    if (args.weighted) {
        if (args.lexicon.empty()) {
            throw io::DataError("profile: --weighted requires --lexicon for the term weights");
        }
        const auto lex = load_lexicon(args.lexicon);
        for (const auto& [user, profile] : aggregated.profiles) {
            if (profile.total_mentions == 0) {
                ++skipped_empty;
                continue;
            }
            final_profiles.emplace(user, weighted_dictionary_profile(profile, lex));
        }
    } else {
        final_profiles = std::move(aggregated.profiles);
    }

    std::vector<std::string> outputs = {args.out};
    io::write_file(args.out, profiles_to_csv(final_profiles));
    if (!args.rejects.empty()) {
        io::write_file(args.rejects, aggregated.rejects.to_jsonl());
        outputs.push_back(args.rejects);
    }
    if (skipped_empty > 0) {
        std::cerr << "profile: " << skipped_empty << " all-zero profiles skipped in weighted mode\n";
    }
    std::vector<std::string> inputs = {args.labels, args.comments};
    if (!args.lexicon.empty()) inputs.push_back(args.lexicon);
    write_manifest("profile", inputs, json{{"weighted", args.weighted}}, outputs);
    return 0;
}

struct PvqArgs {
    std::string in, out, alpha, rejects;
};

int run_pvq(const PvqArgs& args) {
    const auto loaded = load_pvq_csv(args.in);
    ProfileMap profiles;
    std::vector<PvqResponse> accepted;
    std::size_t attention_rejected = 0;
    for (const auto& resp : loaded.responses) {
        const auto outcome = score_pvq(resp);
        if (outcome.status == PvqStatus::RejectedAttention) {
            ++attention_rejected;
            continue;
        }
        accepted.push_back(resp);
        profiles.emplace(resp.respondent, outcome.profile);
    }
    std::vector<std::string> outputs = {args.out};
    io::write_file(args.out, profiles_to_csv(profiles));
    if (!args.alpha.empty()) {
        std::string csv = "value,alpha,ci_low,ci_high\n";
        for (int v = 0; v < kValueCount; ++v) {
            const auto result = cronbach_alpha(accepted, static_cast<ValueId>(v));
            csv += std::string(value_name(static_cast<ValueId>(v)));
            if (result.defined) {
                csv += ',' + io::format_compact(result.alpha) + ',' +
                       io::format_compact(result.ci_low) + ',' +
                       io::format_compact(result.ci_high);
            } else {
                csv += ",undefined,,";
            }
            csv += '\n';
        }
        io::write_file(args.alpha, csv);
        outputs.push_back(args.alpha);
    }
    if (!args.rejects.empty()) {
        io::write_file(args.rejects, loaded.rejects.to_jsonl());
        outputs.push_back(args.rejects);
    }
    std::cerr << "pvq: " << accepted.size() << " scored, " << attention_rejected
              << " failed attention checks\n";
    write_manifest("pvq", {args.in}, json::object(), outputs);
    return 0;
}

struct SimilarityArgs {
    std::string metric = "tau";
    std::string profiles, pairs, out;
    double sigma = 1.0;
    std::int64_t threshold = 1;
};

int run_similarity(const SimilarityArgs& args) {
    const auto metric = metric_from_name(args.metric);
    if (!metric) throw CLI::ValidationError("--metric", "unknown metric: " + args.metric);
    const auto profiles = profiles_from_csv(io::read_file(args.profiles));
    const auto kernel = build_kernel(args.sigma);
    const auto thresholded = threshold_filter(profiles, args.threshold);

    const auto rows = io::parse_csv(io::read_file(args.pairs));
    if (rows.empty() || rows[0] != std::vector<std::string>{"user_a", "user_b"}) {
        throw io::DataError("pairs csv: expected header user_a,user_b in " + args.pairs);
    }
    // validate inputs fully before any output is written
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 2) {
            throw io::DataError("pairs csv: wrong field count at row " + std::to_string(r + 1));
        }
        for (const auto& user : rows[r]) {
            if (!profiles.count(user)) {
                throw io::DataError("pairs csv: unknown user '" + user + "'");
            }
        }
    }

    struct Row {
        double score = 0.0;
        bool ok = false;
        std::string note;
    };
    std::vector<Row> results(rows.size() > 0 ? rows.size() - 1 : 0);
    parallel_for(results.size(), [&](std::size_t i) {
        const auto& row = rows[i + 1];
        const auto a = thresholded.find(row[0]);
        const auto b = thresholded.find(row[1]);
        if (a == thresholded.end() || b == thresholded.end()) {
            results[i].note = "below threshold";
            return;
        }
        try {
            results[i].score = compute_similarity(*metric, a->second, b->second, kernel).score;
            results[i].ok = true;
        } catch (const std::exception& e) {
            results[i].note = e.what();
        }
    });

    std::string csv = "user_a,user_b,metric,score,note\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        csv += io::csv_escape(rows[i + 1][0]) + ',' + io::csv_escape(rows[i + 1][1]) + ',' +
               std::string(metric_name(*metric)) + ',';
        if (results[i].ok) {
            csv += io::format_compact(results[i].score);
        }
        csv += ',' + io::csv_escape(results[i].note) + '\n';
    }
    io::write_file(args.out, csv);
    write_manifest("similarity", {args.profiles, args.pairs},
                   json{{"metric", args.metric},
                        {"sigma", args.sigma},
                        {"threshold", args.threshold}},
                   {args.out});
    return 0;
}

struct BftestArgs {
    std::string agreement, profiles, out, plot, ranked, forums;
    std::string format = "auto";
    std::string metrics = "tau,md,co,wc";
    std::string thresholds = "1,10,50,200,500";
    std::string tail = "auto";
    double prior_scale = kDefaultPriorScale;
    double sigma = 1.0;
};

int run_bftest(const BftestArgs& args) {
    const auto loaded = load_agreement(args.agreement, format_of(args.agreement, args.format));
    const auto profiles = profiles_from_csv(io::read_file(args.profiles));

    GridConfig config;
    config.metrics.clear();
    for (const auto& name : split_list(args.metrics)) {
        const auto m = metric_from_name(name);
        if (!m) throw CLI::ValidationError("--metrics", "unknown metric: " + name);
        config.metrics.push_back(*m);
    }
    config.thresholds.clear();
    for (const auto& t : split_list(args.thresholds)) config.thresholds.push_back(std::stoll(t));
    if (args.tail != "auto") {
        const auto tail = tail_from_name(args.tail);
        if (!tail) throw CLI::ValidationError("--tail", "unknown tail: " + args.tail);
        config.tail_override = *tail;
    }
    config.forums = split_list(args.forums);
    config.prior_scale = args.prior_scale;
    config.sigma = args.sigma;

    const auto cells = run_grid(loaded.instances, profiles, config);
    std::vector<std::string> outputs = {args.out};
    io::write_file(args.out, grid_to_csv(cells));
    if (!args.ranked.empty()) {
        io::write_file(args.ranked, grid_ranked_csv(cells));
        outputs.push_back(args.ranked);
    }
    if (!args.plot.empty()) {
        std::vector<double> bf_values;
        for (const auto& cell : cells) {
            if (cell.result) bf_values.push_back(cell.result->bf10);
        }
        if (bf_values.empty()) throw io::DataError("bftest: no testable cells to plot");
        io::write_file(args.plot, svg::bf_histogram(bf_values));
        outputs.push_back(args.plot);
    }
    std::size_t tested = 0;
    for (const auto& cell : cells) tested += cell.result ? 1u : 0u;
    std::cerr << "bftest: " << cells.size() << " cells, " << tested << " tested, "
              << cells.size() - tested << " skipped\n";
    write_manifest("bftest", {args.agreement, args.profiles},
                   json{{"metrics", args.metrics},
                        {"thresholds", args.thresholds},
                        {"tail", args.tail},
                        {"prior_scale", args.prior_scale},
                        {"sigma", args.sigma}},
                   outputs);
    return 0;
}

struct MdsArgs {
    std::string profiles, out, cov, plot;
    std::int64_t threshold = 1;
};

int run_mds(const MdsArgs& args) {
    const auto profiles = profiles_from_csv(io::read_file(args.profiles));
    const auto thresholded = threshold_filter(profiles, args.threshold);
    std::vector<ValueProfile> rows;
    rows.reserve(thresholded.size());
    for (const auto& [user, profile] : thresholded) {
        (void)user;
        rows.push_back(profile);
    }
    const auto cov = value_covariance(rows);
    const auto mds = classical_mds(cov);
    if (mds.clamped_negative_eigenvalue) {
        std::cerr << "warning: negative eigenvalue clamped to zero in MDS\n";
    }
    if (mds.all_zero) std::cerr << "warning: zero covariance, all points at the origin\n";

    std::string csv = "value,x,y\n";
    std::vector<svg::LabeledPoint> points;
    for (int v = 0; v < kValueCount; ++v) {
        const auto& c = mds.coordinates[static_cast<std::size_t>(v)];
        csv += std::string(value_name(static_cast<ValueId>(v))) + ',' + io::format_compact(c[0]) +
               ',' + io::format_compact(c[1]) + '\n';
        points.push_back({c[0], c[1], std::string(value_name(static_cast<ValueId>(v)))});
    }
    std::vector<std::string> outputs = {args.out};
    io::write_file(args.out, csv);
    if (!args.cov.empty()) {
        std::string cov_csv = "value";
        for (int j = 0; j < kValueCount; ++j) {
            cov_csv += ',' + std::string(value_name(static_cast<ValueId>(j)));
        }
        cov_csv += '\n';
        for (int i = 0; i < kValueCount; ++i) {
            cov_csv += std::string(value_name(static_cast<ValueId>(i)));
            for (int j = 0; j < kValueCount; ++j) {
                cov_csv += ',' + io::format_compact(cov.at(static_cast<std::size_t>(i),
                                                           static_cast<std::size_t>(j)));
            }
            cov_csv += '\n';
        }
        io::write_file(args.cov, cov_csv);
        outputs.push_back(args.cov);
    }
    if (!args.plot.empty()) {
        io::write_file(args.plot, svg::mds_scatter(points));
        outputs.push_back(args.plot);
    }
    write_manifest("mds", {args.profiles}, json{{"threshold", args.threshold}}, outputs);
    return 0;
}

struct AgreeFeaturesArgs {
    std::string agreement, out, kind = "none";
    std::string format = "auto";
    std::string comments, lexicon, profiles, user_features;
    std::uint64_t seed = 0;
    std::size_t vocab = kDefaultVocabSize;
};

int run_agree_features(const AgreeFeaturesArgs& args) {
    const auto kind = context_kind_from_name(args.kind);
    if (!kind) throw CLI::ValidationError("--kind", "unknown context kind: " + args.kind);
    const auto loaded = load_agreement(args.agreement, format_of(args.agreement, args.format));

    ContextInputs inputs;
    std::map<std::string, std::vector<std::string>> user_posts;
    ValueLexicon lexicon;
    ProfileMap profiles;
    std::map<std::string, UserFeatures> user_features;
    std::vector<std::string> manifest_inputs = {args.agreement};

    if (*kind == ContextKind::Centroid) {
        if (args.comments.empty() || args.lexicon.empty()) {
            throw io::DataError("agree-features: centroid needs --comments and --lexicon");
        }
        const auto comments = load_comments(args.comments, true);
        for (const auto& c : comments.comments) user_posts[c.author].push_back(c.text);
        lexicon = load_lexicon(args.lexicon);
        inputs.user_posts = &user_posts;
        inputs.lexicon = &lexicon;
        manifest_inputs.push_back(args.comments);
        manifest_inputs.push_back(args.lexicon);
        // the pipeline's own train-fitted vectorizer is wired in below
    } else if (*kind == ContextKind::ValueProfile) {
        if (args.profiles.empty()) {
            throw io::DataError("agree-features: value_profile needs --profiles");
        }
        profiles = profiles_from_csv(io::read_file(args.profiles));
        inputs.profiles = &profiles;
        manifest_inputs.push_back(args.profiles);
    } else if (*kind == ContextKind::UserFeatures) {
        if (args.user_features.empty()) {
            throw io::DataError("agree-features: user_features needs --user-features");
        }
        user_features = load_user_features_csv(args.user_features);
        inputs.user_features = &user_features;
        manifest_inputs.push_back(args.user_features);
    }

    const auto result = build_bundles(loaded.instances, *kind, inputs, args.seed, args.vocab);
    io::write_file(args.out, bundles_to_jsonl(result.bundles));
    std::cerr << "agree-features: " << result.bundles.size() << " bundles, "
              << result.dropped_missing_context << " dropped (missing context data)\n";
    write_manifest("agree-features", manifest_inputs,
                   json{{"kind", args.kind}, {"seed", args.seed}, {"vocab", args.vocab}},
                   {args.out});
    return 0;
}

struct AgreeTrainArgs {
    std::string bundles, out;
    double l2 = 1e-4;
    double lr = 0.1;
    int epochs = 500;
    std::uint64_t seed = 0;
    std::string eval_split = "test";
    double baseline_f1 = -1.0;  // ΔF1 column filled when >= 0
};

int run_agree_train(const AgreeTrainArgs& args) {
    const auto all = bundles_from_jsonl(io::read_file(args.bundles));
    std::vector<FeatureBundle> train, eval;
    for (const auto& b : all) {
        if (b.split == "train") train.push_back(b);
        if (b.split == args.eval_split) eval.push_back(b);
    }
    if (train.empty()) throw io::DataError("agree-train: no train bundles");
    if (eval.empty()) throw io::DataError("agree-train: no '" + args.eval_split + "' bundles");

    LogRegConfig config;
    config.l2 = args.l2;
    config.learning_rate = args.lr;
    config.epochs = args.epochs;
    config.seed = args.seed;
    const auto model = train_logreg(train, config);
    const auto majority = evaluate_majority(train, eval);
    const auto logreg = evaluate_model(model, eval);

    auto row = [&](const std::string& name, const EvalMetrics& m, bool with_delta) {
        std::string out = name + ',' + io::format_compact(m.macro_precision) + ',' +
                          io::format_compact(m.macro_recall) + ',' +
                          io::format_compact(m.macro_f1) + ',' + io::format_compact(m.accuracy);
        out += ',';
        if (with_delta && args.baseline_f1 >= 0.0) {
            out += io::format_compact(m.macro_f1 - args.baseline_f1);
        }
        return out + '\n';
    };
    std::string csv = "model,precision,recall,f1,accuracy,delta_f1_vs_text\n";
    csv += row("majority", majority, false);
    csv += row("tfidf_logreg", logreg, true);
    io::write_file(args.out, csv);
    std::cerr << "agree-train: eval on " << args.eval_split << ", accuracy "
              << logreg.accuracy << " (majority " << majority.accuracy << ")\n";
    write_manifest("agree-train", {args.bundles},
                   json{{"l2", args.l2},
                        {"lr", args.lr},
                        {"epochs", args.epochs},
                        {"seed", args.seed},
                        {"eval", args.eval_split}},
                   {args.out});
    return 0;
}

struct ReportArgs {
    std::string kind;
    std::vector<std::string> in;
    std::string out;
};

int run_report(const ReportArgs& args) {
    if (args.in.empty()) throw io::DataError("report: need at least one --in file");
    std::string svg_doc;
    if (args.kind == "bf_hist") {
        const auto rows = io::parse_csv(io::read_file(args.in.front()));
        if (rows.empty()) throw io::DataError("report: empty grid csv");
        const auto& hdr = rows[0];
        const auto col = std::find(hdr.begin(), hdr.end(), "bf10");
        if (col == hdr.end()) throw io::DataError("report: grid csv lacks a bf10 column");
        const auto idx = static_cast<std::size_t>(col - hdr.begin());
        std::vector<double> values;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (rows[r].size() > idx && !rows[r][idx].empty()) {
                values.push_back(std::stod(rows[r][idx]));
            }
        }
        if (values.empty()) throw io::DataError("report: no bf10 values found");
        svg_doc = svg::bf_histogram(values);
    } else if (args.kind == "mds_scatter") {
        const auto rows = io::parse_csv(io::read_file(args.in.front()));
        if (rows.size() < 2 || rows[0] != std::vector<std::string>{"value", "x", "y"}) {
            throw io::DataError("report: expected coords csv with header value,x,y");
        }
        std::vector<svg::LabeledPoint> points;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            points.push_back({std::stod(rows[r][1]), std::stod(rows[r][2]), rows[r][0]});
        }
        svg_doc = svg::mds_scatter(points);
    } else if (args.kind == "f1_bars") {
        // each metrics csv contributes its model rows; the first file's
        // logreg row anchors the deltas
        std::vector<svg::F1Bar> bars;
        double baseline = -1.0;
        for (const auto& path : args.in) {
            const auto rows = io::parse_csv(io::read_file(path));
            if (rows.size() < 2 || rows[0].empty() || rows[0][0] != "model") {
                throw io::DataError("report: expected metrics csv from agree-train: " + path);
            }
            for (std::size_t r = 1; r < rows.size(); ++r) {
                if (rows[r].size() < 4 || rows[r][0] == "majority") continue;
                const double f1 = std::stod(rows[r][3]);
                std::string stem = path;
                const auto slash = stem.find_last_of('/');
                if (slash != std::string::npos) stem = stem.substr(slash + 1);
                const auto dot = stem.find_last_of('.');
                if (dot != std::string::npos) stem = stem.substr(0, dot);
                svg::F1Bar bar;
                bar.name = stem;
                bar.f1 = f1;
                if (baseline < 0.0) {
                    baseline = f1;
                } else {
                    bar.has_delta = true;
                    bar.delta_vs_text = f1 - baseline;
                }
                bars.push_back(bar);
            }
        }
        svg_doc = svg::f1_bars(bars);
    } else {
        throw CLI::ValidationError("--kind", "unknown report kind: " + args.kind);
    }
    io::write_file(args.out, svg_doc);
    write_manifest("report", args.in, json{{"kind", args.kind}}, {args.out});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"valconf: Schwartz value profiles, conflict metrics and agreement analysis"};
    app.require_subcommand(1);

    KernelArgs kernel_args;
    auto* kernel_cmd = app.add_subcommand("kernel", "Dump the circumplex kernel as CSV");
    kernel_cmd->add_option("--sigma", kernel_args.sigma, "Kernel width")->check(CLI::PositiveNumber);
    kernel_cmd->add_option("--out", kernel_args.out, "Output CSV (stdout when omitted)");

    FilterArgs filter_args;
    auto* filter_cmd = app.add_subcommand("filter", "Filter a comment corpus");
    filter_cmd->add_option("--in", filter_args.in, "Comments JSONL")->required();
    filter_cmd->add_option("--out", filter_args.out, "Filtered JSONL")->required();
    filter_cmd->add_option("--exclude", filter_args.exclude, "Forum exclusion list, one per line");
    filter_cmd->add_option("--min-forum-posts", filter_args.min_forum_posts,
                           "Low-frequency forum cutoff");
    filter_cmd->add_flag("--english-only", filter_args.english_only,
                         "Drop comments tagged with a non-English language");
    filter_cmd->add_flag("--allow-empty-text", filter_args.allow_empty_text,
                         "Accept comments with empty text");
    filter_cmd->add_option("--rejects", filter_args.rejects, "Rejects report JSONL");
    filter_cmd->add_option("--report", filter_args.report, "Filter report JSON");

    ExtractArgs extract_args;
    auto* extract_cmd = app.add_subcommand("extract", "Label comments with relevant values");
    extract_cmd->add_option("--lexicon", extract_args.lexicon, "Value lexicon (json or csv)")
        ->required();
    extract_cmd->add_option("--in", extract_args.in, "Comments JSONL")->required();
    extract_cmd->add_option("--out", extract_args.out, "Labels JSONL")->required();
    extract_cmd->add_option("--rejects", extract_args.rejects, "Rejects report JSONL");

    ProfileArgs profile_args;
    auto* profile_cmd = app.add_subcommand("profile", "Aggregate labels into user value profiles");
    profile_cmd->add_option("--labels", profile_args.labels, "Labels JSONL")->required();
    profile_cmd->add_option("--comments", profile_args.comments, "Comments JSONL (authorship)")
        ->required();
    profile_cmd->add_option("--out", profile_args.out, "Profiles CSV")->required();
    profile_cmd->add_flag("--weighted", profile_args.weighted,
                          "Apply dictionary term weights and normalize");
    profile_cmd->add_option("--lexicon", profile_args.lexicon, "Lexicon for --weighted");
    profile_cmd->add_option("--rejects", profile_args.rejects, "Rejects report JSONL");

    PvqArgs pvq_args;
    auto* pvq_cmd = app.add_subcommand("pvq", "Score PVQ-21 survey responses");
    pvq_cmd->add_option("--in", pvq_args.in, "PVQ responses CSV")->required();
    pvq_cmd->add_option("--out", pvq_args.out, "Survey profiles CSV")->required();
    pvq_cmd->add_option("--alpha", pvq_args.alpha, "Cronbach alpha table CSV");
    pvq_cmd->add_option("--rejects", pvq_args.rejects, "Rejects report JSONL");

    SimilarityArgs sim_args;
    auto* sim_cmd = app.add_subcommand("similarity", "Score profile pairs with one metric");
    sim_cmd->add_option("--metric", sim_args.metric, "tau|md|co|wc|rho")->required();
    sim_cmd->add_option("--profiles", sim_args.profiles, "Profiles CSV")->required();
    sim_cmd->add_option("--pairs", sim_args.pairs, "Pairs CSV (user_a,user_b)")->required();
    sim_cmd->add_option("--out", sim_args.out, "Scores CSV")->required();
    sim_cmd->add_option("--sigma", sim_args.sigma, "Kernel width for wc");
    sim_cmd->add_option("--threshold", sim_args.threshold, "Profile mention threshold");

    BftestArgs bf_args;
    auto* bf_cmd = app.add_subcommand("bftest", "Bayes-factor grid over forums x metrics x thresholds");
    bf_cmd->add_option("--agreement", bf_args.agreement, "Agreement pairs (csv or jsonl)")
        ->required();
    bf_cmd->add_option("--profiles", bf_args.profiles, "Profiles CSV")->required();
    bf_cmd->add_option("--out", bf_args.out, "Grid CSV")->required();
    bf_cmd->add_option("--format", bf_args.format, "agreement format: auto|csv|jsonl");
    bf_cmd->add_option("--metrics", bf_args.metrics, "Comma list of metrics");
    bf_cmd->add_option("--thresholds", bf_args.thresholds, "Comma list of thresholds");
    bf_cmd->add_option("--forums", bf_args.forums, "Comma list of forums (default: all)");
    bf_cmd->add_option("--tail", bf_args.tail, "auto|lower|higher|two_sided");
    bf_cmd->add_option("--prior-scale", bf_args.prior_scale, "JZS prior scale r");
    bf_cmd->add_option("--sigma", bf_args.sigma, "Kernel width for wc");
    bf_cmd->add_option("--plot", bf_args.plot, "BF histogram SVG");
    bf_cmd->add_option("--ranked", bf_args.ranked, "Ranked grid CSV (bf10 descending)");

    MdsArgs mds_args;
    auto* mds_cmd = app.add_subcommand("mds", "Value covariance and classical MDS embedding");
    mds_cmd->add_option("--profiles", mds_args.profiles, "Profiles CSV")->required();
    mds_cmd->add_option("--out", mds_args.out, "Coordinates CSV")->required();
    mds_cmd->add_option("--cov", mds_args.cov, "Covariance matrix CSV");
    mds_cmd->add_option("--plot", mds_args.plot, "Scatter SVG");
    mds_cmd->add_option("--threshold", mds_args.threshold, "Profile mention threshold");

    AgreeFeaturesArgs feat_args;
    auto* feat_cmd = app.add_subcommand("agree-features", "Build agreement feature bundles");
    feat_cmd->add_option("--agreement", feat_args.agreement, "Agreement pairs (csv or jsonl)")
        ->required();
    feat_cmd->add_option("--out", feat_args.out, "Bundles JSONL")->required();
    feat_cmd->add_option("--kind", feat_args.kind,
                         "Context kind: none|noise|centroid|user_features|value_profile");
    feat_cmd->add_option("--format", feat_args.format, "agreement format: auto|csv|jsonl");
    feat_cmd->add_option("--comments", feat_args.comments, "Background comments (centroid)");
    feat_cmd->add_option("--lexicon", feat_args.lexicon, "Lexicon (centroid)");
    feat_cmd->add_option("--profiles", feat_args.profiles, "Profiles CSV (value_profile)");
    feat_cmd->add_option("--user-features", feat_args.user_features,
                         "User features CSV (user_features)");
    feat_cmd->add_option("--seed", feat_args.seed, "Noise seed");
    feat_cmd->add_option("--vocab", feat_args.vocab, "TF-IDF vocabulary size");

    AgreeTrainArgs train_args;
    auto* train_cmd = app.add_subcommand("agree-train", "Train and evaluate the agreement classifier");
    train_cmd->add_option("--bundles", train_args.bundles, "Bundles JSONL")->required();
    train_cmd->add_option("--out", train_args.out, "Metrics CSV")->required();
    train_cmd->add_option("--l2", train_args.l2, "L2 regularization strength");
    train_cmd->add_option("--lr", train_args.lr, "Learning rate");
    train_cmd->add_option("--epochs", train_args.epochs, "Training epochs");
    train_cmd->add_option("--seed", train_args.seed, "Seed");
    train_cmd->add_option("--eval", train_args.eval_split, "Evaluation split: val|test");
    train_cmd->add_option("--baseline-f1", train_args.baseline_f1,
                          "Text-only macro F1 for the delta column");

    ReportArgs report_args;
    auto* report_cmd = app.add_subcommand("report", "Render SVG plots from result files");
    report_cmd->add_option("--kind", report_args.kind, "bf_hist|mds_scatter|f1_bars")->required();
    report_cmd->add_option("--in", report_args.in, "Input CSV (repeatable for f1_bars)")
        ->required();
    report_cmd->add_option("--out", report_args.out, "Output SVG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (kernel_cmd->parsed()) return run_kernel(kernel_args);
        if (filter_cmd->parsed()) return run_filter(filter_args);
        if (extract_cmd->parsed()) return run_extract(extract_args);
        if (profile_cmd->parsed()) return run_profile(profile_args);
        if (pvq_cmd->parsed()) return run_pvq(pvq_args);
        if (sim_cmd->parsed()) return run_similarity(sim_args);
        if (bf_cmd->parsed()) return run_bftest(bf_args);
        if (mds_cmd->parsed()) return run_mds(mds_args);
        if (feat_cmd->parsed()) return run_agree_features(feat_args);
        if (train_cmd->parsed()) return run_agree_train(train_args);
        if (report_cmd->parsed()) return run_report(report_args);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
