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

#include <chrono>
#include <string>
#include <string_view>

namespace casegraph::detail {

// POST a JSON body to `url` (http:// or https://). Adds a bearer token when
// `api_key_env_var` names a set environment variable. Returns the response
// body of a 2xx reply; throws TransportError otherwise.
std::string http_post_json(std::string_view url, const std::string& body,
                           std::string_view api_key_env_var,
                           std::chrono::milliseconds timeout);

}  // namespace casegraph::detail
