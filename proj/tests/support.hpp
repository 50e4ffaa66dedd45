#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace cssdh::test {

inline std::filesystem::path source_dir() { return CSSDH_SOURCE_DIR; }

inline std::string path_of(const std::string& rel) { return (source_dir() / rel).string(); }

inline std::string read_text(const std::string& rel) {
  std::ifstream in(source_dir() / rel, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cssdh::test
