#pragma once

// Run manifests: everything needed to reproduce an invocation bit-for-bit
// (command line, seed, config echo, input/output digests) plus wall time.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"
#include "xyz/errors.hpp"
#include "xyz/version.hpp"

namespace cli {

inline std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw xyz::data_error("sha256: cannot open " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

class Manifest {
public:
    Manifest(int argc, char** argv) {
        for (int i = 0; i < argc; ++i) body_["command"].push_back(argv[i]);
        body_["tool"] = "xyz";
        body_["version"] = xyz::version_string;
    }

    nlohmann::json& body() { return body_; }

    void add_input(const std::filesystem::path& path) { add_file("inputs", path); }
    void add_output(const std::filesystem::path& path) { add_file("outputs", path); }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw xyz::data_error("manifest: cannot open " + path.string());
        out << body_.dump(2) << "\n";
    }

private:
    void add_file(const char* section, const std::filesystem::path& path) {
        nlohmann::json entry;
        entry["path"] = path.string();
        entry["bytes"] = std::filesystem::file_size(path);
        entry["sha256"] = sha256_file(path);
        body_[section].push_back(entry);
    }

    nlohmann::json body_;
};

} // namespace cli
