#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dloc::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

struct Failure {
    std::string check;
    std::string detail;
};

struct RunManifest {
    std::string mode;
    std::string config_hash;
    std::string version;
    std::vector<std::pair<std::string, std::string>> files;  // (name, sha256), in write order
    double wall_clock_s = 0.0;
    int workers = 1;
    bool checks_pass = true;
    std::vector<Failure> failures;

    nlohmann::json to_json() const;
};

void write_manifest(const std::string& dir, const RunManifest& m);

}  // namespace dloc::cli
