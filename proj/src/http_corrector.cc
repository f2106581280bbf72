// Copyright (c) 2026 The asrinc Authors. All Rights Reserved.
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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>

#include <json.hpp>

#include "error.h"
#include "reference_gen.h"

namespace asrinc {

HttpCorrectorConfig http_config_from_env(std::string *model_name) {
  const char *url = std::getenv("LLM_ENDPOINT_URL");
  const char *key = std::getenv("LLM_API_KEY");
  if (!url || !*url || !key || !*key) {
    fail(ErrorCode::kMissingConfiguration,
         "LLM_ENDPOINT_URL and LLM_API_KEY must be set (or use the mock corrector)");
  }
  if (model_name) {
    const char *model = std::getenv("LLM_MODEL_NAME");
    if (model && *model) *model_name = model;
  }
  return {url, key, std::chrono::seconds(60)};
}

HttpCorrector::HttpCorrector(HttpCorrectorConfig config) : config_(std::move(config)) {
  const std::string &url = config_.endpoint_url;
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    fail(ErrorCode::kInvalidArgument, "endpoint URL needs a scheme: " + url);
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

std::string HttpCorrector::complete(const CorrectionRequest &request) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);

  nlohmann::ordered_json body;
  body["model"] = request.model_name;
  body["temperature"] = request.temperature;
  body["messages"] = nlohmann::ordered_json::array(
      {nlohmann::ordered_json{{"role", "user"}, {"content", request.prompt}}});

  httplib::Headers headers{{"Authorization", "Bearer " + config_.api_key}};
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    fail(ErrorCode::kTransportError, "request failed: " + httplib::to_string(res.error()));
  }
  if (res->status == 401 || res->status == 403) {
    fail(ErrorCode::kAuthError, "endpoint rejected credentials (HTTP " +
                                    std::to_string(res->status) + ")");
  }
  if (res->status == 429) fail(ErrorCode::kRateLimited, "rate limited (HTTP 429)");
  if (res->status < 200 || res->status >= 300) {
    fail(ErrorCode::kTransportError, "HTTP " + std::to_string(res->status));
  }
  try {
    const auto j = nlohmann::json::parse(res->body);
    const auto &content = j.at("choices").at(0).at("message").at("content");
    return content.is_string() ? content.get<std::string>() : std::string();
  } catch (const nlohmann::json::exception &e) {
    fail(ErrorCode::kTransportError, std::string("malformed completion response: ") + e.what());
  }
}

}  // namespace asrinc
