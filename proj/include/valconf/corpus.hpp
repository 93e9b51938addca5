#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "valconf/io.hpp"

namespace valconf {

struct Comment {
    std::string id;
    std::string author;
    std::string forum;
    std::int64_t timestamp = 0;  // UTC seconds
    std::string text;
    std::optional<std::string> lang;  // ISO-639-1
};

enum class AgreementLabel { Agree, Neutral, Disagree };

std::string_view label_name(AgreementLabel l);
std::optional<AgreementLabel> label_from_name(std::string_view name);

struct AgreementInstance {
    std::string id;
    std::string forum;
    std::string parent_author;
    std::string child_author;
    std::string parent_text;
    std::string child_text;
    AgreementLabel label = AgreementLabel::Neutral;
    std::int64_t timestamp = 0;
};

struct FilterConfig {
    std::set<std::string> exclusion_list;
    int min_forum_posts = 50;
    bool english_only = false;
    std::string drop_user_forums_prefix = "u_";
    bool allow_empty_text = false;
};

// Per-rule removal counts. Associative merge so partial reports from
// parallel shards can be combined.
struct FilterReport {
    std::size_t input_count = 0;
    std::size_t excluded_forum = 0;
    std::size_t user_forum_prefix = 0;
    std::size_t non_english = 0;
    std::size_t missing_lang_kept = 0;  // kept, informational only
    std::size_t low_frequency = 0;
    std::size_t output_count = 0;

    FilterReport& merge(const FilterReport& other);
    std::size_t removed() const { return excluded_forum + user_forum_prefix + non_english + low_frequency; }
    std::string to_json() const;
};

struct CommentLoadResult {
    std::vector<Comment> comments;
    io::RejectsReport rejects;
};

// JSONL, one object per line: {id, author, forum, timestamp, text, lang?}.
// Malformed lines land in the rejects report; the stream keeps going.
CommentLoadResult load_comments(const std::string& path, bool allow_empty_text = false);

struct FilterResult {
    std::vector<Comment> comments;
    FilterReport report;
};

// Rule order: exclusion list and user-forum prefix, then the language rule,
// then the low-frequency forum rule on what survived. Running the filter on
// its own output is a no-op.
FilterResult apply_filters(std::vector<Comment> comments, const FilterConfig& cfg);

struct AgreementLoadResult {
    std::vector<AgreementInstance> instances;
    io::RejectsReport rejects;
};

enum class AgreementFormat { Csv, Jsonl };

// CSV header: id,forum,parent_author,child_author,parent_text,child_text,label,timestamp
// or the equivalent JSONL. Label strings are matched case-insensitively.
AgreementLoadResult load_agreement(const std::string& path, AgreementFormat format);

}  // namespace valconf
