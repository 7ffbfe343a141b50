// Copyright 2026 The Seedforge Authors. All Rights Reserved.
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

namespace seedforge::detail {

struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path;  // always begins with '/'

  /// Throws Error(kPrecondition) for anything that is not http(s)://host[:port][/path].
  static Url parse(std::string_view text);
  std::string origin() const;
};

struct HttpResult {
  int status = 0;
  std::string body;
};

/// POSTs a JSON body with bearer auth. Connection failures and timeouts throw
/// Error(kTransport); any HTTP status is returned as-is.
HttpResult post_json(const Url& url, const std::string& body, const std::string& bearer_token,
                     std::chrono::seconds timeout);

}  // namespace seedforge::detail
