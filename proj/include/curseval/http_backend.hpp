#pragma once

// OpenAI-compatible chat completions client. One wire dialect covers every
// provider; endpoint, model name, and the API-key environment variable are
// configuration. Transient failures (connect errors, 429, 5xx) retry with
// exponential backoff and jitter.

#include <httplib.h>

#include "curseval/backend.hpp"

namespace curseval {

class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config)
        : config_(std::move(config)),
          bucket_(config_.requests_per_second),
          jitter_(derive_seed(config_.jitter_seed, "http/jitter")) {
        split_endpoint(config_.endpoint, base_, path_);
        if (path_.empty() || path_ == "/") path_ = "/v1/chat/completions";
        const char* key = config_.api_key_env.empty() ? nullptr
                                                      : std::getenv(config_.api_key_env.c_str());
        if (key) api_key_ = key;
    }

    std::string name() const override { return "http:" + config_.model; }

    int attempts_made() const { return attempts_; }

    std::string complete(const ChatRequest& request) override {
        const std::string body = chat_completion_body(config_.model, request.history).dump();
        std::string last_error;
        for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
            if (attempt > 0) backoff_sleep(attempt);
            bucket_.acquire();
            ++attempts_;

            httplib::Client client(base_);
            client.set_read_timeout(config_.request_timeout_s, 0);
            client.set_connection_timeout(10, 0);
            httplib::Headers headers;
            if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
            auto res = client.Post(path_, headers, body, "application/json");
            if (!res) {
                last_error = "connection failure: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 401 || res->status == 403)
                throw AuthError("endpoint rejected credentials (HTTP " +
                                std::to_string(res->status) + "); check " + config_.api_key_env);
            if (res->status == 429 || res->status >= 500) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200)
                throw TransportError("endpoint returned HTTP " + std::to_string(res->status) +
                                     ": " + res->body.substr(0, 200));
            return extract_content(res->body);
        }
        throw TransportError("exhausted " + std::to_string(config_.max_attempts) +
                             " attempts against " + base_ + path_ + "; last error: " + last_error);
    }

private:
    static void split_endpoint(const std::string& endpoint, std::string& base, std::string& path) {
        auto scheme_end = endpoint.find("://");
        if (scheme_end == std::string::npos)
            throw ConfigError("endpoint must start with http:// or https://: " + endpoint);
        auto path_start = endpoint.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            base = endpoint;
            path.clear();
        } else {
            base = endpoint.substr(0, path_start);
            path = endpoint.substr(path_start);
        }
    }

    static std::string extract_content(const std::string& body) {
        json j = json::parse(body);
        const json& msg = j.at("choices").at(0).at("message");
        const json& content = msg.at("content");
        if (content.is_string()) return content.get<std::string>();
        // Some servers return content parts; concatenate the text ones.
        std::string out;
        for (const auto& part : content)
            if (part.value("type", "") == "text") out += part.at("text").get<std::string>();
        return out;
    }

    void backoff_sleep(int attempt) {
        double base = double(config_.backoff_base_ms) * double(1 << (attempt - 1));
        double jitter;
        {
            std::lock_guard lock(jitter_mu_);
            jitter = jitter_.uniform(0.0, 0.25 * base);
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(long(base + jitter)));
    }

    HttpBackendConfig config_;
    std::string base_;
    std::string path_;
    std::string api_key_;
    TokenBucket bucket_;
    std::mutex jitter_mu_;
    SplitMix64 jitter_;
    std::atomic<int> attempts_{0};
};

}  // namespace curseval
