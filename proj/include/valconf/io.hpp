#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace valconf::io {

// Data-level failures (unreadable files, schema mismatches). The CLI maps
// these to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Reject {
    std::size_t line_no = 0;  // 1-based
    std::string reason;
};

struct RejectsReport {
    std::vector<Reject> rejects;

    void add(std::size_t line_no, std::string reason) { rejects.push_back({line_no, std::move(reason)}); }
    std::size_t count() const { return rejects.size(); }
    std::string to_jsonl() const;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
std::uint64_t hash_file(const std::string& path);

// Calls fn(line_no, line) for every line; tolerates a missing trailing newline.
void for_each_line(const std::string& path, const std::function<void(std::size_t, std::string_view)>& fn);

// RFC-4180-ish CSV: quoted fields may contain commas, escaped quotes and
// newlines. Returns one row per record.
std::vector<std::vector<std::string>> parse_csv(std::string_view content);
std::string csv_escape(std::string_view field);

std::string format_double(double v);      // round-trippable, %.17g
std::string format_compact(double v);     // report-friendly, %.12g

}  // namespace valconf::io
