#include "valconf/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace valconf {
namespace {

using nlohmann::json;

bool is_word_byte(unsigned char c) {
    // ASCII alphanumerics plus any non-ASCII byte (UTF-8 continuation or
    // lead); punctuation and control bytes separate tokens.
    return std::isalnum(c) || c >= 0x80;
}

bool has_vowel(std::string_view s) {
    for (char c : s) {
        if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y') return true;
    }
    return false;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_double_consonant_end(std::string_view s) {
    if (s.size() < 2) return false;
    const char c = s[s.size() - 1];
    if (c != s[s.size() - 2]) return false;
    switch (c) {
        case 'b': case 'd': case 'f': case 'g': case 'm':
        case 'n': case 'p': case 'r': case 't': case 'l':
            return true;
        default:
            return false;
    }
}

// Matches "http://...", "https://..." and "www...." spans. The span ends at
// the first whitespace.
bool match_url(std::string_view text, std::size_t pos, std::size_t* end) {
    auto starts = [&](std::string_view prefix) {
        if (text.size() - pos < prefix.size()) return false;
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            char c = text[pos + i];
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            if (c != prefix[i]) return false;
        }
        return true;
    };
    if (!starts("http://") && !starts("https://") && !starts("www.")) return false;
    std::size_t e = pos;
    while (e < text.size() && !std::isspace(static_cast<unsigned char>(text[e]))) ++e;
    *end = e;
    return true;
}

}  // namespace

std::string rule_lemmatize(const std::string& token) {
    const std::string_view t = token;
    // plural forms
    if (ends_with(t, "sses")) return std::string(t.substr(0, t.size() - 2));
    if (ends_with(t, "ies") && t.size() >= 5) return std::string(t.substr(0, t.size() - 3)) + "y";
    if (ends_with(t, "s") && t.size() >= 3 && !ends_with(t, "ss") && !ends_with(t, "us") &&
        !ends_with(t, "is")) {
        return std::string(t.substr(0, t.size() - 1));
    }
    // -ing forms
    if (ends_with(t, "ing") && t.size() >= 6) {
        std::string stem(t.substr(0, t.size() - 3));
        if (!has_vowel(stem)) return token;
        if (is_double_consonant_end(stem)) stem.pop_back();
        return stem;
    }
    // -ed forms
    if (ends_with(t, "ied") && t.size() >= 5) return std::string(t.substr(0, t.size() - 3)) + "y";
    if (ends_with(t, "ed") && t.size() >= 5 && !ends_with(t, "eed")) {
        std::string stem(t.substr(0, t.size() - 2));
        if (!has_vowel(stem)) return token;
        if (is_double_consonant_end(stem)) stem.pop_back();
        return stem;
    }
    return token;
}

std::vector<std::string> preprocess(std::string_view text) { return preprocess(text, rule_lemmatize); }

std::vector<std::string> preprocess(std::string_view text, const Lemmatizer& lemmatizer) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        // Already-substituted [URL] tokens pass through untouched so that
        // preprocessing its own output is a no-op.
        if (text.compare(i, kUrlToken.size(), kUrlToken) == 0) {
            tokens.emplace_back(kUrlToken);
            i += kUrlToken.size();
            continue;
        }
        std::size_t url_end = 0;
        if (match_url(text, i, &url_end)) {
            tokens.emplace_back(kUrlToken);
            i = url_end;
            continue;
        }
        if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
        std::string token(text.substr(start, i - start));
        for (char& c : token) {
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
        tokens.push_back(lemmatizer(token));
    }
    return tokens;
}

void ValueLexicon::recompute_weights() {
    for (int v = 0; v < kValueCount; ++v) {
        const auto& list = terms[static_cast<std::size_t>(v)];
        if (list.empty()) {
            throw io::DataError(std::string("lexicon: value has no terms: ") +
                                std::string(value_name(static_cast<ValueId>(v))));
        }
        weights[static_cast<std::size_t>(v)] = 1.0 / static_cast<double>(list.size());
    }
}

namespace {

void validate_and_insert(ValueLexicon& lex, std::string_view value_name_str, std::string term,
                         const std::string& path) {
    const auto v = value_from_name(value_name_str);
    if (!v) throw io::DataError("lexicon: unknown value name '" + std::string(value_name_str) +
                                "' in " + path);
    std::transform(term.begin(), term.end(), term.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto& list = lex.terms[static_cast<std::size_t>(position(*v))];
    if (std::find(list.begin(), list.end(), term) != list.end()) {
        throw io::DataError("lexicon: duplicate term '" + term + "' for value " +
                            std::string(value_name(*v)));
    }
    list.push_back(std::move(term));
}

}  // namespace

ValueLexicon load_lexicon_json(const std::string& path) {
    ValueLexicon lex;
    json j = json::parse(io::read_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw io::DataError("lexicon: invalid json: " + path);
    for (const auto& [key, arr] : j.items()) {
        if (!arr.is_array()) throw io::DataError("lexicon: value entry must be an array: " + key);
        for (const auto& term : arr) {
            if (!term.is_string()) throw io::DataError("lexicon: term must be a string under " + key);
            validate_and_insert(lex, key, term.get<std::string>(), path);
        }
    }
    lex.recompute_weights();
    return lex;
}

ValueLexicon load_lexicon_csv(const std::string& path) {
    ValueLexicon lex;
    const auto rows = io::parse_csv(io::read_file(path));
    if (rows.empty()) throw io::DataError("lexicon: empty csv: " + path);
    std::size_t start = 0;
    if (rows[0].size() == 2 && rows[0][0] == "value" && rows[0][1] == "term") start = 1;
    for (std::size_t r = start; r < rows.size(); ++r) {
        if (rows[r].size() != 2) throw io::DataError("lexicon: csv row must have 2 fields: " + path);
        validate_and_insert(lex, rows[r][0], rows[r][1], path);
    }
    lex.recompute_weights();
    return lex;
}

ValueLexicon load_lexicon(const std::string& path) {
    if (ends_with(path, ".csv")) return load_lexicon_csv(path);
    return load_lexicon_json(path);
}

bool term_matches(std::string_view term, std::string_view token) {
    if (!term.empty() && term.back() == '*') {
        const std::string_view prefix = term.substr(0, term.size() - 1);
        return token.size() >= prefix.size() && token.substr(0, prefix.size()) == prefix;
    }
    return term == token;
}

ValueLabels classify_dictionary(const std::vector<std::string>& tokens, const ValueLexicon& lex,
                                std::string comment_id) {
    ValueLabels out;
    out.comment_id = std::move(comment_id);
    for (int v = 0; v < kValueCount; ++v) {
        const auto& terms = lex.terms[static_cast<std::size_t>(v)];
        bool hit = false;
        for (const auto& token : tokens) {
            for (const auto& term : terms) {
                if (term_matches(term, token)) {
                    hit = true;
                    break;
                }
            }
            if (hit) break;
        }
        if (hit) out.relevant.insert(static_cast<ValueId>(v));
    }
    return out;
}

PredictionsLoadResult load_predictions(const std::string& path) {
    PredictionsLoadResult result;
    std::unordered_map<std::string, std::size_t> index;
    // Per-value rows legitimately arrive one value at a time; a warning is
    // only due when rows disagree or a whole-set row repeats an id.
    std::unordered_map<std::string, ValueSet> seen_not_relevant;
    std::unordered_set<std::string> seen_set_row;

    auto slot_for = [&](const std::string& id, bool* inserted) -> ValueLabels& {
        auto [it, fresh] = index.try_emplace(id, result.labels.size());
        if (fresh) result.labels.push_back({id, {}});
        *inserted = fresh;
        return result.labels[it->second];
    };

    io::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
        if (line.empty()) return;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.rejects.add(line_no, "invalid json");
            return;
        }
        if (!j.contains("comment_id") || !j["comment_id"].is_string()) {
            result.rejects.add(line_no, "missing comment_id");
            return;
        }
        const std::string id = j["comment_id"].get<std::string>();
        if (j.contains("values")) {
            if (!j["values"].is_array()) {
                result.rejects.add(line_no, "values must be an array");
                return;
            }
            ValueSet values;
            for (const auto& name : j["values"]) {
                if (!name.is_string()) {
                    result.rejects.add(line_no, "value name must be a string");
                    return;
                }
                const auto v = value_from_name(name.get<std::string>());
                if (!v) {
                    result.rejects.add(line_no, "unknown value: " + name.get<std::string>());
                    return;
                }
                values.insert(*v);
            }
            bool inserted = false;
            ValueLabels& slot = slot_for(id, &inserted);
            if (!inserted || !seen_set_row.insert(id).second) ++result.duplicate_merges;
            slot.relevant |= values;
        } else if (j.contains("value") && j.contains("relevant")) {
            if (!j["value"].is_string() || !j["relevant"].is_number_integer()) {
                result.rejects.add(line_no, "value/relevant row malformed");
                return;
            }
            const auto v = value_from_name(j["value"].get<std::string>());
            if (!v) {
                result.rejects.add(line_no, "unknown value: " + j["value"].get<std::string>());
                return;
            }
            const int rel = j["relevant"].get<int>();
            if (rel != 0 && rel != 1) {
                result.rejects.add(line_no, "relevant must be 0 or 1");
                return;
            }
            bool inserted = false;
            ValueLabels& slot = slot_for(id, &inserted);
            if (rel == 1) {
                if (seen_not_relevant[id].contains(*v)) ++result.duplicate_merges;
                slot.relevant.insert(*v);
            } else {
                if (slot.relevant.contains(*v)) ++result.duplicate_merges;
                seen_not_relevant[id].insert(*v);
            }
        } else {
            result.rejects.add(line_no, "row must have 'values' or 'value'+'relevant'");
            return;
        }
    });
    return result;
}

std::string labels_to_jsonl(const std::vector<ValueLabels>& labels) {
    std::string out;
    for (const auto& l : labels) {
        json j;
        j["comment_id"] = l.comment_id;
        json arr = json::array();
        l.relevant.for_each([&](ValueId v) { arr.push_back(std::string(value_name(v))); });
        j["values"] = arr;
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace valconf
