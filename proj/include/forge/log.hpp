// Copyright 2026 The xeus-forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGE_LOG_HPP_
#define FORGE_LOG_HPP_

#include <cstdlib>
#include <string>

#include <spdlog/spdlog.h>

namespace forge {

// Applies XEUS_FORGE_LOG (trace|debug|info|warn|error|off) to the default
// logger; unset or unrecognised values leave the level at info.
inline void init_logging_from_env() {
  spdlog::set_level(spdlog::level::info);
  const char* env = std::getenv("XEUS_FORGE_LOG");
  if (env == nullptr) return;
  const std::string level(env);
  if (level == "trace") {
    spdlog::set_level(spdlog::level::trace);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "warn") {
    spdlog::set_level(spdlog::level::warn);
  } else if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "off") {
    spdlog::set_level(spdlog::level::off);
  } else {
    spdlog::warn("unrecognised XEUS_FORGE_LOG level '{}'", level);
  }
}

}  // namespace forge

#endif  // FORGE_LOG_HPP_
