#pragma once

#include <string>
#include <vector>

#include "hetfc/config.hpp"

namespace hetfc {

// 17 significant digits: doubles round-trip exactly through the CSV files.
std::string format_g17(double v);

// Write-then-rename so readers never see a partial file.
void write_text_atomic(const std::string& path, const std::string& content);

std::string csv_line(const std::vector<std::string>& fields);

// Run manifest written next to every output: re-running the recorded command
// with the recorded seed reproduces the outputs bit-identically.
struct RunManifest {
  std::string command;
  Json config_echo;
  std::uint64_t master_seed = 0;
  std::string started;
  std::string finished;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

std::string timestamp_utc();
std::string tool_version();

}  // namespace hetfc
