// Copyright 2026 The casegraph Authors.
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

#pragma once

#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace casegraph {

struct Warning {
  std::string code;
  std::string message;
};

// Thread-safe append-only warning sink. The CLI drains it to stderr as one
// JSON object per line.
class WarningLog {
 public:
  void warn(std::string code, std::string message) {
    std::lock_guard lock(mu_);
    entries_.push_back({std::move(code), std::move(message)});
  }

  std::vector<Warning> entries() const {
    std::lock_guard lock(mu_);
    return entries_;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }

  static nlohmann::json to_json(const Warning& w) {
    return {{"level", "warning"}, {"code", w.code}, {"message", w.message}};
  }

 private:
  mutable std::mutex mu_;
  std::vector<Warning> entries_;
};

}  // namespace casegraph
