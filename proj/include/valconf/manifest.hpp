#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace valconf {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

// Written beside the primary output of every subcommand; re-running with the
// same input hashes and config reproduces byte-identical outputs (the
// created_unix field is the one exception).
struct RunManifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::uint64_t>> inputs;  // path, fnv1a64
    std::string config_json;
    std::vector<std::string> outputs;
    std::int64_t created_unix = 0;

    void add_input(const std::string& path);
    std::string to_json() const;
    // Written as "<primary_output>.manifest.json".
    void write_beside(const std::string& primary_output) const;
};

}  // namespace valconf
