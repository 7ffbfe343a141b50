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

#include "http_transport.hpp"

#include <httplib.h>

#include <charconv>

#include "seedforge/error.hpp"

namespace seedforge::detail {
namespace {

[[noreturn]] void bad_url(std::string_view text) {
  throw Error(ErrorCode::kPrecondition, "not an http(s) URL: \"" + std::string(text) + "\"");
}

}  // namespace

Url Url::parse(std::string_view text) {
  Url url;
  const auto scheme_end = text.find("://");
  if (scheme_end == std::string_view::npos) bad_url(text);
  url.scheme = std::string(text.substr(0, scheme_end));
  if (url.scheme != "http" && url.scheme != "https") bad_url(text);

  const std::size_t host_begin = scheme_end + 3;
  const std::size_t slash = text.find('/', host_begin);
  std::string_view authority =
      text.substr(host_begin, slash == std::string_view::npos ? std::string_view::npos : slash - host_begin);
  url.path = slash == std::string_view::npos ? "/" : std::string(text.substr(slash));
  if (authority.empty()) bad_url(text);

  url.port = url.scheme == "https" ? 443 : 80;
  // IPv6 literals keep their brackets in `host`.
  const auto colon = authority.rfind(':');
  const auto bracket = authority.rfind(']');
  if (colon != std::string_view::npos &&
      (bracket == std::string_view::npos || colon > bracket)) {
    const std::string_view port_text = authority.substr(colon + 1);
    int port = 0;
    const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port <= 0 || port > 65535) {
      bad_url(text);
    }
    url.port = port;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) bad_url(text);
  url.host = std::string(authority);
  return url;
}

std::string Url::origin() const {
  return scheme + "://" + host + ":" + std::to_string(port);
}

HttpResult post_json(const Url& url, const std::string& body, const std::string& bearer_token,
                     std::chrono::seconds timeout) {
  httplib::Client client(url.origin());
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  if (url.scheme == "https") client.enable_server_certificate_verification(true);

  httplib::Headers headers;
  if (!bearer_token.empty()) headers.emplace("Authorization", "Bearer " + bearer_token);

  auto res = client.Post(url.path, headers, body, "application/json");
  if (!res) {
    throw Error(ErrorCode::kTransport,
                "POST " + url.origin() + url.path + " failed: " + httplib::to_string(res.error()));
  }
  return HttpResult{res->status, res->body};
}

}  // namespace seedforge::detail
