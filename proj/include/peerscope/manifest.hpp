#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace peerscope::manifest {

std::string sha256_file(const std::filesystem::path& path);
std::string sha256_string(const std::string& data);

struct RunManifest {
    std::string tool_version;
    std::uint64_t rng_seed = 0;
    std::string created_at;                        // ISO-8601, UTC
    std::map<std::string, std::string> flags;      // config snapshot
    std::map<std::string, std::string> inputs;     // path -> sha256
};

std::string to_json(const RunManifest& manifest);  // stable key order, indented
void write(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read(const std::filesystem::path& path);

}  // namespace peerscope::manifest
