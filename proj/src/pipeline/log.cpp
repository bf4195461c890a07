// Copyright 2026 The embed-curate Authors
// SPDX-License-Identifier: Apache-2.0

#include "embed/pipeline/log.hpp"

#include <iostream>

namespace embed::pipeline {

Logger::Logger(bool quiet) : Logger(std::cerr, quiet) {}
Logger::Logger(std::ostream& out, bool quiet) : out_(&out), quiet_(quiet) {}

void Logger::info(std::string_view event, nlohmann::json fields) {
  if (!quiet_) emit("info", event, std::move(fields));
}

void Logger::warn(std::string_view event, nlohmann::json fields) {
  if (!quiet_) emit("warn", event, std::move(fields));
}

void Logger::error(std::string_view event, nlohmann::json fields) {
  emit("error", event, std::move(fields));
}

void Logger::emit(std::string_view level, std::string_view event, nlohmann::json fields) {
  nlohmann::json line = nlohmann::json::object();
  line["level"] = level;
  line["event"] = event;
  for (auto& [k, v] : fields.items()) line[k] = std::move(v);
  const auto text = line.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  std::lock_guard lock(mu_);
  *out_ << text << '\n';
  out_->flush();
}

}  // namespace embed::pipeline
