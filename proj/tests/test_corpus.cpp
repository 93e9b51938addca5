#include "doctest.h"

#include <algorithm>

#include "test_util.hpp"
#include "valconf/corpus.hpp"

using namespace valconf;

namespace {

std::string comment_line(const std::string& id, const std::string& forum,
                         const std::string& lang = {}) {
    std::string line = R"({"id":")" + id + R"(","author":"u_of_)" + id +
                       R"(","forum":")" + forum + R"(","timestamp":0,"text":"hi")";
    if (!lang.empty()) line += R"(,"lang":")" + lang + "\"";
    return line + "}\n";
}

std::vector<Comment> make_forum_comments(const std::string& forum, int count,
                                         const std::string& lang = {}) {
    std::vector<Comment> out;
    for (int i = 0; i < count; ++i) {
        Comment c;
        c.id = forum + "_" + std::to_string(i);
        c.author = "user" + std::to_string(i);
        c.forum = forum;
        c.text = "hello";
        if (!lang.empty()) c.lang = lang;
        out.push_back(c);
    }
    return out;
}

}  // namespace

TEST_CASE("load_comments happy path and rejects") {
    testutil::TempFile f("comments.jsonl",
                         R"({"id":"a","author":"u1","forum":"climate","timestamp":0,"text":"hi"})"
                         "\n"
                         R"({"id":"b","forum":"climate","timestamp":0,"text":"no author"})"
                         "\n"
                         R"({"id":"c","author":"u2","forum":"climate","timestamp":5,"text":"ok","lang":"en"})"
                         "\n");
    const auto result = load_comments(f.path());
    REQUIRE(result.comments.size() == 2);
    CHECK(result.comments[0].id == "a");
    CHECK(result.comments[1].lang == "en");
    REQUIRE(result.rejects.count() == 1);
    CHECK(result.rejects.rejects[0].line_no == 2);
    CHECK(result.rejects.rejects[0].reason.find("author") != std::string::npos);
}

TEST_CASE("load_comments empty file") {
    testutil::TempFile f("empty.jsonl", "");
    const auto result = load_comments(f.path());
    CHECK(result.comments.empty());
    CHECK(result.rejects.count() == 0);
}

TEST_CASE("load_comments duplicate ids rejected") {
    testutil::TempFile f("dup.jsonl", comment_line("x", "a") + comment_line("x", "a"));
    const auto result = load_comments(f.path());
    CHECK(result.comments.size() == 1);
    CHECK(result.rejects.count() == 1);
}

TEST_CASE("load_comments missing file is fatal") {
    CHECK_THROWS_AS(load_comments("/nonexistent/zzz.jsonl"), io::DataError);
}

TEST_CASE("low-frequency forum rule at the boundary") {
    auto comments = make_forum_comments("F", 60);
    auto g = make_forum_comments("G", 40);
    comments.insert(comments.end(), g.begin(), g.end());
    FilterConfig cfg;
    cfg.min_forum_posts = 50;
    const auto result = apply_filters(comments, cfg);
    CHECK(result.comments.size() == 60);
    CHECK(result.report.low_frequency == 40);
    for (const auto& c : result.comments) CHECK(c.forum == "F");
}

TEST_CASE("user-forum prefix rule") {
    auto comments = make_forum_comments("u_alice", 100);
    auto keep = make_forum_comments("politics", 100);
    comments.insert(comments.end(), keep.begin(), keep.end());
    FilterConfig cfg;
    cfg.min_forum_posts = 1;
    const auto result = apply_filters(comments, cfg);
    CHECK(result.report.user_forum_prefix == 100);
    CHECK(result.comments.size() == 100);
}

TEST_CASE("exclusion list rule") {
    auto comments = make_forum_comments("nsfw_stuff", 10);
    auto keep = make_forum_comments("science", 10);
    comments.insert(comments.end(), keep.begin(), keep.end());
    FilterConfig cfg;
    cfg.min_forum_posts = 1;
    cfg.exclusion_list = {"nsfw_stuff"};
    const auto result = apply_filters(comments, cfg);
    CHECK(result.report.excluded_forum == 10);
    CHECK(result.comments.size() == 10);
}

TEST_CASE("english-only keeps untagged comments and counts them") {
    auto comments = make_forum_comments("talk", 5, "de");
    auto en = make_forum_comments("talk2", 5, "en");
    auto untagged = make_forum_comments("talk3", 5);
    comments.insert(comments.end(), en.begin(), en.end());
    comments.insert(comments.end(), untagged.begin(), untagged.end());
    FilterConfig cfg;
    cfg.min_forum_posts = 1;
    cfg.english_only = true;
    const auto result = apply_filters(comments, cfg);
    CHECK(result.report.non_english == 5);
    CHECK(result.report.missing_lang_kept == 5);
    CHECK(result.comments.size() == 10);
}

TEST_CASE("filtering is idempotent") {
    std::vector<Comment> comments;
    for (const auto& [forum, n] : std::vector<std::pair<std::string, int>>{
             {"big", 80}, {"small", 3}, {"u_bob", 20}, {"medium", 55}}) {
        auto batch = make_forum_comments(forum, n);
        comments.insert(comments.end(), batch.begin(), batch.end());
    }
    // language tags that knock "medium" below the threshold only after the
    // language rule runs
    for (int i = 0; i < 10; ++i) comments[143 - static_cast<std::size_t>(i)].lang = "fr";
    FilterConfig cfg;
    cfg.min_forum_posts = 50;
    cfg.english_only = true;
    const auto once = apply_filters(comments, cfg);
    const auto twice = apply_filters(once.comments, cfg);
    CHECK(once.comments.size() == twice.comments.size());
    CHECK(twice.report.removed() == 0);
    for (std::size_t i = 0; i < once.comments.size(); ++i) {
        CHECK(once.comments[i].id == twice.comments[i].id);
    }
}

TEST_CASE("count conservation") {
    std::vector<Comment> comments;
    for (const auto& [forum, n] : std::vector<std::pair<std::string, int>>{
             {"a", 30}, {"b", 70}, {"u_x", 12}, {"c", 50}}) {
        auto batch = make_forum_comments(forum, n);
        comments.insert(comments.end(), batch.begin(), batch.end());
    }
    comments[5].lang = "es";
    comments[100].lang = "de";
    FilterConfig cfg;
    cfg.min_forum_posts = 50;
    cfg.english_only = true;
    cfg.exclusion_list = {"a"};
    const auto result = apply_filters(comments, cfg);
    CHECK(result.report.input_count == comments.size());
    CHECK(result.report.input_count == result.report.output_count + result.report.removed());
}

TEST_CASE("filter report merge is associative on counts") {
    FilterReport a{10, 1, 2, 0, 0, 3, 4};
    FilterReport b{20, 2, 0, 1, 1, 6, 11};
    FilterReport ab = a;
    ab.merge(b);
    CHECK(ab.input_count == 30);
    CHECK(ab.low_frequency == 9);
    CHECK(ab.output_count == 15);
}

TEST_CASE("load_agreement csv with label normalization") {
    testutil::TempFile f(
        "agreement.csv",
        "id,forum,parent_author,child_author,parent_text,child_text,label,timestamp\n"
        "1,brexit,alice,bob,\"hello, world\",reply,DISAGREE,100\n"
        "2,brexit,carol,dan,text,other,maybe,200\n"
        "3,climate,erin,frank,\"multi\nline\",ok,Agree,300\n");
    const auto result = load_agreement(f.path(), AgreementFormat::Csv);
    REQUIRE(result.instances.size() == 2);
    CHECK(result.instances[0].label == AgreementLabel::Disagree);
    CHECK(result.instances[0].parent_text == "hello, world");
    CHECK(result.instances[1].label == AgreementLabel::Agree);
    CHECK(result.instances[1].parent_text == "multi\nline");
    REQUIRE(result.rejects.count() == 1);
    CHECK(result.rejects.rejects[0].reason.find("maybe") != std::string::npos);
}

TEST_CASE("load_agreement jsonl preserves order") {
    std::string lines;
    for (int i = 0; i < 3; ++i) {
        lines += R"({"id":")" + std::to_string(i) +
                 R"(","forum":"f","parent_author":"p","child_author":"c","parent_text":"x",)"
                 R"("child_text":"y","label":"neutral","timestamp":)" +
                 std::to_string(i) + "}\n";
    }
    testutil::TempFile f("agreement.jsonl", lines);
    const auto result = load_agreement(f.path(), AgreementFormat::Jsonl);
    REQUIRE(result.instances.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(result.instances[static_cast<std::size_t>(i)].id == std::to_string(i));
}

TEST_CASE("rejects report round-trips to jsonl") {
    io::RejectsReport report;
    report.add(7, "bad row");
    const auto jsonl = report.to_jsonl();
    CHECK(jsonl.find("\"line_no\":7") != std::string::npos);
    CHECK(jsonl.find("bad row") != std::string::npos);
}
