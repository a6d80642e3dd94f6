#include "peerscope/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace peerscope::manifest {

namespace {

std::string digest_to_hex(const unsigned char* digest, unsigned int len) {
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

struct EvpCtx {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    ~EvpCtx() { EVP_MD_CTX_free(ctx); }
};

}  // namespace

std::string sha256_string(const std::string& data) {
    EvpCtx md;
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!md.ctx || EVP_DigestInit_ex(md.ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(md.ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(md.ctx, digest, &len) != 1)
        throw std::runtime_error("sha256 digest failed");
    return digest_to_hex(digest, len);
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    EvpCtx md;
    if (!md.ctx || EVP_DigestInit_ex(md.ctx, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 init failed");
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        if (EVP_DigestUpdate(md.ctx, buf, static_cast<size_t>(in.gcount())) != 1)
            throw std::runtime_error("sha256 update failed");
        if (!in) break;
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(md.ctx, digest, &len) != 1)
        throw std::runtime_error("sha256 final failed");
    return digest_to_hex(digest, len);
}

std::string to_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["tool_version"] = m.tool_version;
    j["rng_seed"] = m.rng_seed;
    j["created_at"] = m.created_at;
    j["flags"] = m.flags;
    j["inputs"] = m.inputs;
    return j.dump(2) + "\n";
}

void write(const RunManifest& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_json(m);
}

RunManifest read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    nlohmann::json j = nlohmann::json::parse(in);
    RunManifest m;
    m.tool_version = j.value("tool_version", "");
    m.rng_seed = j.value("rng_seed", std::uint64_t{0});
    m.created_at = j.value("created_at", "");
    if (j.contains("flags"))
        for (const auto& [k, v] : j["flags"].items()) m.flags[k] = v.get<std::string>();
    if (j.contains("inputs"))
        for (const auto& [k, v] : j["inputs"].items()) m.inputs[k] = v.get<std::string>();
    return m;
}

}  // namespace peerscope::manifest
