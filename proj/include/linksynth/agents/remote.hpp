#pragma once

// Chat-completions style HTTP backend.

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "linksynth/agents/backend.hpp"

namespace linksynth::agents {

struct RemoteConfig {
  std::string endpoint;  // e.g. http://localhost:8000/v1/chat/completions
  std::string model;
  std::string api_key;
  double temperature = 0.8;
  std::chrono::seconds timeout{120};
  int max_retries = 3;  // on 5xx and connection failures; 4xx never retried
  std::chrono::milliseconds backoff{1000};  // doubled after each retry

  /// LINKSYNTH_ENDPOINT, LINKSYNTH_MODEL, LINKSYNTH_API_KEY.
  static RemoteConfig from_env() {
    RemoteConfig c;
    auto get = [](const char *k) {
      const char *v = std::getenv(k);
      return v ? std::string(v) : std::string();
    };
    c.endpoint = get("LINKSYNTH_ENDPOINT");
    c.model = get("LINKSYNTH_MODEL");
    c.api_key = get("LINKSYNTH_API_KEY");
    return c;
  }
};

class RemoteBackend final : public AgentBackend {
 public:
  explicit RemoteBackend(RemoteConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.endpoint.empty()) throw std::invalid_argument("remote backend: endpoint URL is empty (set LINKSYNTH_ENDPOINT)");
    const auto scheme_end = cfg_.endpoint.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument("remote backend: endpoint must start with http://");
    if (cfg_.endpoint.compare(0, scheme_end, "http") != 0)
      throw std::invalid_argument("remote backend: only plain http endpoints are supported (no TLS in this build)");
    const auto path_start = cfg_.endpoint.find('/', scheme_end + 3);
    host_ = cfg_.endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/v1/chat/completions" : cfg_.endpoint.substr(path_start);
  }

  std::string complete(const AgentRequest &req) override {
    const nlohmann::json body{{"model", cfg_.model},
                              {"temperature", cfg_.temperature},
                              {"messages",
                               {{{"role", "system"}, {"content", req.prompt}}, {{"role", "user"}, {"content", req.context}}}}};
    httplib::Headers headers;
    if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

    auto wait = cfg_.backoff;
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(wait);
        wait *= 2;
      }
      httplib::Client client(host_);
      client.set_connection_timeout(cfg_.timeout);
      client.set_read_timeout(cfg_.timeout);
      client.set_write_timeout(cfg_.timeout);
      const auto res = client.Post(path_, headers, body.dump(), "application/json");
      if (!res) {
        last_error = "connection failed: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "server error " + std::to_string(res->status);
        continue;
      }
      if (res->status >= 400) throw TransportError("endpoint rejected request with status " + std::to_string(res->status));
      return extract_content(res->body);
    }
    throw TransportError("endpoint unavailable after " + std::to_string(cfg_.max_retries + 1) + " attempts: " +
                         last_error);
  }

  std::string name() const override { return cfg_.model.empty() ? std::string("remote") : cfg_.model; }
  double temperature() const override { return cfg_.temperature; }

 private:
  static std::string extract_content(const std::string &text) {
    try {
      const auto j = nlohmann::json::parse(text);
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception &e) {
      throw TransportError(std::string("malformed completion payload: ") + e.what());
    }
  }

  RemoteConfig cfg_;
  std::string host_;
  std::string path_;
};

}  // namespace linksynth::agents
