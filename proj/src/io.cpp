#include "hetfc/io.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "hetfc/errors.hpp"
#include "hetfc/version.hpp"

namespace hetfc {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ModelError("cannot write '" + tmp + "'");
    out << content;
    if (!out) throw ModelError("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  line += '\n';
  return line;
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string tool_version() { return HETFC_VERSION; }

void write_manifest(const std::string& path, const RunManifest& manifest) {
  Json j{{"command", manifest.command},
         {"config", manifest.config_echo},
         {"master_seed", manifest.master_seed},
         {"started", manifest.started},
         {"finished", manifest.finished},
         {"version", tool_version()}};
  write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace hetfc
