#include "dloc_cli/manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <memory>
#include <stdexcept>

namespace dloc::cli {

std::string sha256_hex(const std::string& bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw std::runtime_error("sha256: OpenSSL digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string sha256_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    return sha256_hex(std::string(std::istreambuf_iterator<char>(f), {}));
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["mode"] = mode;
    j["config_hash"] = config_hash;
    j["version"] = version;
    j["files"] = nlohmann::json::array();
    for (const auto& [name, sha] : files) j["files"].push_back({{"name", name}, {"sha256", sha}});
    j["wall_clock_s"] = wall_clock_s;
    j["workers"] = workers;
    j["checks_pass"] = checks_pass;
    j["failures"] = nlohmann::json::array();
    for (const auto& f : failures) j["failures"].push_back({{"check", f.check}, {"detail", f.detail}});
    return j;
}

void write_manifest(const std::string& dir, const RunManifest& m) {
    std::ofstream f(dir + "/manifest.json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write manifest in " + dir);
    f << m.to_json().dump(2) << '\n';
}

}  // namespace dloc::cli
