#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace csrkit::cli {

std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::filesystem::path& path);

struct FileRecord {
    std::string path;
    std::string sha256;
};

/// Everything needed to re-run a command: its name, the argv it was invoked
/// with, the fully resolved configuration and the checksums of every file it
/// read or wrote.
struct Manifest {
    std::string command;
    std::vector<std::string> argv;
    nlohmann::json config;
    nlohmann::json seeds = nlohmann::json::object();
    std::vector<FileRecord> inputs;
    std::vector<FileRecord> outputs;
};

nlohmann::json manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const nlohmann::json& j);

}  // namespace csrkit::cli
