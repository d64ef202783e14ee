#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "netred/types.hpp"

namespace netred::app {

/// %.17g: round-trips every double.
std::string format_number(double x);

/// One row per matrix row; optional header line.
std::string matrix_csv(const Matrix& m, const std::vector<std::string>& header = {});

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

struct FileRecord {
  std::string path;  ///< relative to the run directory
  std::string hash;  ///< FNV-1a 64 of the contents
  std::size_t bytes = 0;
};

/// Writes `content` to root/relative, creating parent directories.
FileRecord write_output(const std::string& root, const std::string& relative, const std::string& content);

/// Stable pretty-printed JSON (keys sorted, two-space indent, trailing newline).
std::string dump_json(const nlohmann::json& doc);

}  // namespace netred::app
