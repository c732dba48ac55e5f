#pragma once

#include <string>
#include <vector>

namespace levyqs {

// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const std::string& bytes);

// Writes `content` to `path` and returns its digest.
std::string write_file_with_digest(const std::string& path, const std::string& content);

struct ManifestOutput {
    std::string path;
    std::string sha256;
};

// Run manifest written next to command outputs: command line, model, scalar
// parameters, seed, tool version, timestamps, output digests.
struct RunManifest {
    std::string command;
    std::string model_json;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::uint64_t seed = 0;
    std::string started_utc;
    std::string finished_utc;
    std::vector<ManifestOutput> outputs;

    std::string to_json() const;
};

std::string utc_now();

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace levyqs
