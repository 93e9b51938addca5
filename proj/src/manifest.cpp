#include "valconf/manifest.hpp"

#include <ctime>

#include "valconf/io.hpp"

#include "json.hpp"

namespace valconf {

void RunManifest::add_input(const std::string& path) {
    inputs.emplace_back(path, io::hash_file(path));
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    j["artifact_version"] = std::string(kArtifactVersion);
    nlohmann::json in = nlohmann::json::array();
    for (const auto& [path, hash] : inputs) {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
        in.push_back({{"path", path}, {"fnv1a64", std::string(buf)}});
    }
    j["inputs"] = in;
    j["config"] = config_json.empty() ? nlohmann::json::object()
                                      : nlohmann::json::parse(config_json);
    j["outputs"] = outputs;
    j["created_unix"] = created_unix;
    return j.dump(2) + "\n";
}

void RunManifest::write_beside(const std::string& primary_output) const {
    RunManifest copy = *this;
    if (copy.created_unix == 0) copy.created_unix = static_cast<std::int64_t>(std::time(nullptr));
    io::write_file(primary_output + ".manifest.json", copy.to_json());
}

}  // namespace valconf
