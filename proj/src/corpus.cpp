#include "valconf/corpus.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace valconf {
namespace {

using nlohmann::json;

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

}  // namespace

std::string_view label_name(AgreementLabel l) {
    switch (l) {
        case AgreementLabel::Agree: return "agree";
        case AgreementLabel::Neutral: return "neutral";
        case AgreementLabel::Disagree: return "disagree";
    }
    return "neutral";
}

std::optional<AgreementLabel> label_from_name(std::string_view name) {
    const std::string n = lower_ascii(name);
    if (n == "agree") return AgreementLabel::Agree;
    if (n == "neutral") return AgreementLabel::Neutral;
    if (n == "disagree") return AgreementLabel::Disagree;
    return std::nullopt;
}

FilterReport& FilterReport::merge(const FilterReport& other) {
    input_count += other.input_count;
    excluded_forum += other.excluded_forum;
    user_forum_prefix += other.user_forum_prefix;
    non_english += other.non_english;
    missing_lang_kept += other.missing_lang_kept;
    low_frequency += other.low_frequency;
    output_count += other.output_count;
    return *this;
}

std::string FilterReport::to_json() const {
    json j;
    j["input_count"] = input_count;
    j["excluded_forum"] = excluded_forum;
    j["user_forum_prefix"] = user_forum_prefix;
    j["non_english"] = non_english;
    j["missing_lang_kept"] = missing_lang_kept;
    j["low_frequency"] = low_frequency;
    j["output_count"] = output_count;
    return j.dump(2);
}

CommentLoadResult load_comments(const std::string& path, bool allow_empty_text) {
    CommentLoadResult result;
    std::unordered_set<std::string> seen_ids;
    io::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
        if (line.empty()) return;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.rejects.add(line_no, "invalid json");
            return;
        }
        Comment c;
        for (const char* field : {"id", "author", "forum", "text"}) {
            if (!j.contains(field) || !j[field].is_string()) {
                result.rejects.add(line_no, std::string("missing or non-string field: ") + field);
                return;
            }
        }
        if (!j.contains("timestamp") || !j["timestamp"].is_number_integer()) {
            result.rejects.add(line_no, "missing or non-integer field: timestamp");
            return;
        }
        c.id = j["id"].get<std::string>();
        c.author = j["author"].get<std::string>();
        c.forum = j["forum"].get<std::string>();
        c.timestamp = j["timestamp"].get<std::int64_t>();
        c.text = j["text"].get<std::string>();
        if (j.contains("lang") && j["lang"].is_string()) c.lang = j["lang"].get<std::string>();
        if (c.id.empty()) {
            result.rejects.add(line_no, "empty id");
            return;
        }
        if (!seen_ids.insert(c.id).second) {
            result.rejects.add(line_no, "duplicate id: " + c.id);
            return;
        }
        if (c.text.empty() && !allow_empty_text) {
            result.rejects.add(line_no, "empty text");
            return;
        }
        result.comments.push_back(std::move(c));
    });
    return result;
}

FilterResult apply_filters(std::vector<Comment> comments, const FilterConfig& cfg) {
    FilterResult result;
    result.report.input_count = comments.size();

    std::vector<Comment> survivors;
    survivors.reserve(comments.size());
    for (auto& c : comments) {
        if (cfg.exclusion_list.count(c.forum)) {
            ++result.report.excluded_forum;
            continue;
        }
        if (!cfg.drop_user_forums_prefix.empty() &&
            c.forum.rfind(cfg.drop_user_forums_prefix, 0) == 0) {
            ++result.report.user_forum_prefix;
            continue;
        }
        if (cfg.english_only && c.lang) {
            if (*c.lang != "en") {
                ++result.report.non_english;
                continue;
            }
        } else if (cfg.english_only && !c.lang) {
            ++result.report.missing_lang_kept;
        }
        survivors.push_back(std::move(c));
    }

    // Low-frequency rule runs last, on the final survivor counts, so a second
    // pass over the output removes nothing.
    std::unordered_map<std::string, std::size_t> forum_counts;
    for (const auto& c : survivors) ++forum_counts[c.forum];
    for (auto& c : survivors) {
        if (static_cast<int>(forum_counts[c.forum]) < cfg.min_forum_posts) {
            ++result.report.low_frequency;
            continue;
        }
        result.comments.push_back(std::move(c));
    }
    result.report.output_count = result.comments.size();
    return result;
}

namespace {

std::optional<AgreementInstance> instance_from_fields(
    const std::string& id, const std::string& forum, const std::string& parent_author,
    const std::string& child_author, const std::string& parent_text, const std::string& child_text,
    const std::string& label_str, const std::string& ts_str, std::string* reason) {
    AgreementInstance inst;
    inst.id = id;
    inst.forum = forum;
    inst.parent_author = parent_author;
    inst.child_author = child_author;
    inst.parent_text = parent_text;
    inst.child_text = child_text;
    const auto label = label_from_name(label_str);
    if (!label) {
        *reason = "unknown label: " + label_str;
        return std::nullopt;
    }
    inst.label = *label;
    try {
        std::size_t pos = 0;
        inst.timestamp = std::stoll(ts_str, &pos);
        if (pos != ts_str.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        *reason = "invalid timestamp: " + ts_str;
        return std::nullopt;
    }
    if (inst.id.empty()) {
        *reason = "empty id";
        return std::nullopt;
    }
    return inst;
}

AgreementLoadResult load_agreement_csv(const std::string& path) {
    AgreementLoadResult result;
    const auto rows = io::parse_csv(io::read_file(path));
    if (rows.empty()) throw io::DataError("agreement csv: empty file: " + path);
    const std::vector<std::string> expected = {"id",          "forum",      "parent_author",
                                               "child_author", "parent_text", "child_text",
                                               "label",       "timestamp"};
    if (rows[0] != expected) throw io::DataError("agreement csv: unexpected header in " + path);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != expected.size()) {
            result.rejects.add(r + 1, "wrong field count");
            continue;
        }
        std::string reason;
        auto inst = instance_from_fields(row[0], row[1], row[2], row[3], row[4], row[5], row[6],
                                         row[7], &reason);
        if (!inst) {
            result.rejects.add(r + 1, reason);
            continue;
        }
        result.instances.push_back(std::move(*inst));
    }
    return result;
}

AgreementLoadResult load_agreement_jsonl(const std::string& path) {
    AgreementLoadResult result;
    io::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
        if (line.empty()) return;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.rejects.add(line_no, "invalid json");
            return;
        }
        for (const char* field :
             {"id", "forum", "parent_author", "child_author", "parent_text", "child_text", "label"}) {
            if (!j.contains(field) || !j[field].is_string()) {
                result.rejects.add(line_no, std::string("missing or non-string field: ") + field);
                return;
            }
        }
        if (!j.contains("timestamp") || !j["timestamp"].is_number_integer()) {
            result.rejects.add(line_no, "missing or non-integer field: timestamp");
            return;
        }
        std::string reason;
        auto inst = instance_from_fields(
            j["id"].get<std::string>(), j["forum"].get<std::string>(),
            j["parent_author"].get<std::string>(), j["child_author"].get<std::string>(),
            j["parent_text"].get<std::string>(), j["child_text"].get<std::string>(),
            j["label"].get<std::string>(), std::to_string(j["timestamp"].get<std::int64_t>()),
            &reason);
        if (!inst) {
            result.rejects.add(line_no, reason);
            return;
        }
        result.instances.push_back(std::move(*inst));
    });
    return result;
}

}  // namespace

AgreementLoadResult load_agreement(const std::string& path, AgreementFormat format) {
    return format == AgreementFormat::Csv ? load_agreement_csv(path) : load_agreement_jsonl(path);
}

}  // namespace valconf
