// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace embed::core {

/// Reads a JSON Lines file line by line. Blank lines are skipped but still
/// counted so reported line numbers match the file.
class JsonlReader {
 public:
  explicit JsonlReader(const std::filesystem::path& path);

  /// Next nonblank line, or false at end of file.
  bool next(std::string& line);
  std::size_t line_number() const { return line_number_; }
  const std::string& source() const { return source_; }

 private:
  std::ifstream in_;
  std::string source_;
  std::size_t line_number_ = 0;
};

std::string read_file(const std::filesystem::path& path);

/// Writes `contents` to `path` through a temporary sibling and rename, so
/// readers never observe a half-written artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Joins records with '\n', each line newline-terminated.
std::string join_lines(const std::vector<std::string>& lines);

}  // namespace embed::core
