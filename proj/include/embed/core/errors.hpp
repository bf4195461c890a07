// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace embed {

/// Base of every error raised by the pipeline. Each subclass maps to one
/// stable process exit code in the CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invariant-violating input record. Carries the source and
/// 1-based line number when known.
class DataError : public Error {
 public:
  DataError(const std::string& what, std::string source = {}, std::size_t line = 0)
      : Error(source.empty() ? what
                             : source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_ = 0;
};

class ServiceError : public Error {
 public:
  ServiceError(const std::string& what, bool transient)
      : Error(what), transient_(transient) {}

  bool transient() const { return transient_; }

 private:
  bool transient_;
};

}  // namespace embed
