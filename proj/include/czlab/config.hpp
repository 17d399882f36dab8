#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace czlab {

inline constexpr const char* kSchema = "czlab/1";

// Parses a JSON config file; unreadable or malformed files raise InputError.
nlohmann::json load_config(const std::filesystem::path& path);

// A config "task" field, when present, must name the subcommand being run.
void check_task(const nlohmann::json& cfg, const std::string& subcommand);

// Writes UTF-8 text with a trailing newline, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

// Pretty-printed JSON (two-space indent, keys sorted by the library).
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace czlab
