#include "manifest.hpp"

#include "csrkit/errors.hpp"
#include "csrkit/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

namespace csrkit::cli {

using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

std::string file_sha256(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

namespace {

json records_to_json(const std::vector<FileRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(json{{"path", r.path}, {"sha256", r.sha256}});
    return arr;
}

std::vector<FileRecord> records_from_json(const json& j) {
    std::vector<FileRecord> out;
    for (const auto& r : j) out.push_back({r.at("path").get<std::string>(), r.at("sha256").get<std::string>()});
    return out;
}

}  // namespace

json manifest_to_json(const Manifest& m) {
    return json{{"format", "csrkit-manifest"},
                {"version", 1},
                {"command", m.command},
                {"argv", m.argv},
                {"config", m.config},
                {"seeds", m.seeds},
                {"inputs", records_to_json(m.inputs)},
                {"outputs", records_to_json(m.outputs)}};
}

Manifest manifest_from_json(const json& j) {
    try {
        if (j.at("format") != "csrkit-manifest") throw InputError("not a csrkit manifest");
        if (j.at("version") != 1) throw InputError("unsupported manifest version");
        Manifest m;
        m.command = j.at("command").get<std::string>();
        m.argv = j.at("argv").get<std::vector<std::string>>();
        m.config = j.at("config");
        m.seeds = j.at("seeds");
        m.inputs = records_from_json(j.at("inputs"));
        m.outputs = records_from_json(j.at("outputs"));
        return m;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed manifest: ") + e.what());
    }
}

}  // namespace csrkit::cli
