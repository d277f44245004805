#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "skillmatch/textkit.hpp"

#ifndef SKILLMATCH_SOURCE_DIR
#error "SKILLMATCH_SOURCE_DIR must point at the repository root"
#endif

namespace testsupport {

inline std::filesystem::path source_dir() { return SKILLMATCH_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }
inline std::filesystem::path demo_dir() { return source_dir() / "fixtures" / "demo"; }

inline const skillmatch::text::Analyzer& analyzer() {
  static const auto a = skillmatch::text::Analyzer::from_data_dir(data_dir());
  return a;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("skillmatch-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport
