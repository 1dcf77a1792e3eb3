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

#include "http_transport.hpp"

#include <cstdlib>

#include <httplib.h>

#include "casegraph/backend.hpp"

namespace casegraph::detail {

std::string http_post_json(std::string_view url, const std::string& body,
                           std::string_view api_key_env_var,
                           std::chrono::milliseconds timeout) {
  const std::string u(url);
  const auto scheme_end = u.find("://");
  if (scheme_end == std::string::npos) throw TransportError("endpoint '" + u + "' has no scheme");
  const auto path_start = u.find('/', scheme_end + 3);
  const std::string origin = u.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : u.substr(path_start);

  httplib::Client client(origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!api_key_env_var.empty()) {
    if (const char* key = std::getenv(std::string(api_key_env_var).c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }

  auto res = client.Post(path, headers, body, "application/json");
  if (!res) {
    throw TransportError("request to '" + u + "' failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("request to '" + u + "' returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

}  // namespace casegraph::detail
