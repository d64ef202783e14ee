#include "netred/app/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "netred/errors.hpp"

namespace netred::app {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string matrix_csv(const Matrix& m, const std::vector<std::string>& header) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  if (!header.empty()) out += '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_number(m(r, c));
    }
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

FileRecord write_output(const std::string& root, const std::string& relative, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target = fs::path(root) / relative;
  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + target.parent_path().string() + ": " + ec.message());
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + target.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + target.string());
  return FileRecord{relative, hex64(fnv1a64(content)), content.size()};
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace netred::app
