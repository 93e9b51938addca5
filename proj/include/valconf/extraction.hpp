#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "valconf/io.hpp"
#include "valconf/value_model.hpp"

namespace valconf {

// Small set-of-values type; bit i is the value at circumplex position i.
class ValueSet {
public:
    ValueSet() = default;
    void insert(ValueId v) { bits_ |= static_cast<std::uint16_t>(1u << position(v)); }
    bool contains(ValueId v) const { return bits_ & (1u << position(v)); }
    bool empty() const { return bits_ == 0; }
    int size() const { return __builtin_popcount(bits_); }
    ValueSet& operator|=(ValueSet o) {
        bits_ |= o.bits_;
        return *this;
    }
    bool operator==(const ValueSet&) const = default;

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (int i = 0; i < kValueCount; ++i)
            if (bits_ & (1u << i)) fn(static_cast<ValueId>(i));
    }

private:
    std::uint16_t bits_ = 0;
};

struct ValueLabels {
    std::string comment_id;
    ValueSet relevant;
};

// Terms are lowercase lemmas; a trailing '*' makes the term a prefix match.
// w_v = 1 / |terms(v)|, recomputed on load.
struct ValueLexicon {
    std::array<std::vector<std::string>, kValueCount> terms;
    std::array<double, kValueCount> weights{};

    void recompute_weights();
    const std::vector<std::string>& terms_for(ValueId v) const {
        return terms[static_cast<std::size_t>(position(v))];
    }
};

ValueLexicon load_lexicon_json(const std::string& path);
ValueLexicon load_lexicon_csv(const std::string& path);
ValueLexicon load_lexicon(const std::string& path);  // picks by extension

using Lemmatizer = std::function<std::string(const std::string&)>;

// Shipped suffix-stripping rules for English plural / -ing / -ed forms.
// Intentionally small; the lexicon regression fixture pins its behavior.
std::string rule_lemmatize(const std::string& token);

// URL spans become the literal token [URL]; everything else is split on word
// boundaries, lowercased and lemmatized. Idempotent on its own output.
std::vector<std::string> preprocess(std::string_view text);
std::vector<std::string> preprocess(std::string_view text, const Lemmatizer& lemmatizer);

inline constexpr std::string_view kUrlToken = "[URL]";

ValueLabels classify_dictionary(const std::vector<std::string>& tokens, const ValueLexicon& lex,
                                std::string comment_id = {});

bool term_matches(std::string_view term, std::string_view token);

struct PredictionsLoadResult {
    std::vector<ValueLabels> labels;  // one entry per comment_id, input order of first sighting
    io::RejectsReport rejects;
    std::size_t duplicate_merges = 0;  // rows OR-merged into an earlier comment_id
};

// JSONL rows: {"comment_id": .., "values": [..]} or
// {"comment_id": .., "value": .., "relevant": 0|1}.
PredictionsLoadResult load_predictions(const std::string& path);

std::string labels_to_jsonl(const std::vector<ValueLabels>& labels);

}  // namespace valconf
