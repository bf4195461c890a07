// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <mutex>
#include <string_view>

#include <json.hpp>

namespace embed::pipeline {

/// Line-delimited JSON logs: one object per event with "level" and "event"
/// keys plus free-form fields. Quiet loggers drop everything below "error".
class Logger {
 public:
  explicit Logger(bool quiet = false);
  Logger(std::ostream& out, bool quiet);

  void info(std::string_view event, nlohmann::json fields = nlohmann::json::object());
  void warn(std::string_view event, nlohmann::json fields = nlohmann::json::object());
  void error(std::string_view event, nlohmann::json fields = nlohmann::json::object());

  bool quiet() const { return quiet_; }

 private:
  void emit(std::string_view level, std::string_view event, nlohmann::json fields);

  std::ostream* out_;
  bool quiet_;
  std::mutex mu_;
};

}  // namespace embed::pipeline
