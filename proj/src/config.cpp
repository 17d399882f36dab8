#include "czlab/config.hpp"

#include <fstream>
#include <sstream>

#include "czlab/errors.hpp"

namespace czlab {

nlohmann::json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config " + path.string() + ": " + e.what());
  }
}

void check_task(const nlohmann::json& cfg, const std::string& subcommand) {
  if (!cfg.is_object()) throw InputError("config must be a JSON object");
  if (cfg.contains("task") && cfg.at("task") != subcommand)
    throw InputError("config task '" + cfg.at("task").dump() + "' does not match subcommand '" + subcommand + "'");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2)); }

}  // namespace czlab
