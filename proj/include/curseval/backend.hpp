#pragma once

// Model backends behind one prediction interface: an OpenAI-compatible chat
// completions client with base64 image parts, and deterministic mock
// oracles used as test doubles for the model.

#include <cstdlib>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "curseval/geometry.hpp"
#include "curseval/hash.hpp"
#include "curseval/prompts.hpp"
#include "curseval/rng.hpp"
#include "curseval/schema.hpp"

namespace curseval {

enum class Role { system, user, assistant };

inline std::string to_string(Role r) {
    switch (r) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    throw std::logic_error("unknown role");
}

struct ChatTurn {
    Role role = Role::user;
    std::string text;
    std::shared_ptr<const std::string> image_png;  // only on user turns
};

// Hidden-target channel for the mock oracles; real backends only read
// `history`. The target is never serialized into any request body.
struct ChatRequest {
    std::vector<ChatTurn> history;
    const Sample* sample = nullptr;
    std::optional<PixelPoint> hidden_target;
    int turn_index = 1;
    std::uint64_t sample_seed = 0;
};

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AuthError : ConfigError {
    using ConfigError::ConfigError;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
    virtual std::string name() const = 0;
};

// ---- mock oracles ----

struct MockOracleConfig {
    enum class Kind { perfect, constant_offset, seeded_noise, feedback_aware, parse_breaker };
    Kind kind = Kind::perfect;
    PixelPoint offset{0.0, 0.0};
    std::vector<double> noise_sigma{10.0};  // per turn, last value repeats
    double gamma = 0.5;                     // convergence factor in (0,1)
    std::uint64_t seed = 0;

    void validate() const {
        if (kind == Kind::feedback_aware && !(gamma > 0.0 && gamma < 1.0))
            throw std::invalid_argument("MockOracleConfig: gamma out of (0,1)");
        if (kind == Kind::seeded_noise && noise_sigma.empty())
            throw std::invalid_argument("MockOracleConfig: noise_sigma empty");
    }
};

inline std::string format_coord(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline std::string coordinate_reply(const PixelPoint& p) {
    return "The target is at (" + format_coord(p.x) + "," + format_coord(p.y) + ")";
}

class MockBackend : public Backend {
public:
    explicit MockBackend(MockOracleConfig config) : config_(std::move(config)) {
        config_.validate();
    }

    std::string name() const override {
        switch (config_.kind) {
            case MockOracleConfig::Kind::perfect: return "mock:perfect";
            case MockOracleConfig::Kind::constant_offset: return "mock:offset";
            case MockOracleConfig::Kind::seeded_noise: return "mock:noise";
            case MockOracleConfig::Kind::feedback_aware: return "mock:feedback_aware";
            case MockOracleConfig::Kind::parse_breaker: return "mock:parse_breaker";
        }
        return "mock";
    }

    std::string complete(const ChatRequest& request) override {
        if (config_.kind == MockOracleConfig::Kind::parse_breaker)
            return "I am unable to determine a coordinate for this request.";
        if (!request.hidden_target)
            throw std::logic_error("mock backend needs a hidden target from the harness fixture");
        const PixelPoint target = *request.hidden_target;
        switch (config_.kind) {
            case MockOracleConfig::Kind::perfect:
                return coordinate_reply(target);
            case MockOracleConfig::Kind::constant_offset:
                return coordinate_reply({target.x + config_.offset.x, target.y + config_.offset.y});
            case MockOracleConfig::Kind::seeded_noise: {
                const auto& sig = config_.noise_sigma;
                double sigma = sig[std::min<std::size_t>(std::size_t(request.turn_index) - 1,
                                                         sig.size() - 1)];
                SplitMix64 rng(derive_seed(config_.seed ^ request.sample_seed, "mock/noise",
                                           std::uint64_t(request.turn_index)));
                return coordinate_reply({target.x + rng.gaussian(0.0, sigma),
                                         target.y + rng.gaussian(0.0, sigma)});
            }
            case MockOracleConfig::Kind::feedback_aware: {
                if (request.turn_index == 1)
                    return coordinate_reply(
                        {target.x + config_.offset.x, target.y + config_.offset.y});
                // Recover the previous answer purely from the rendered
                // feedback text: the loop's coordinates must round-trip.
                auto prev = previous_from_feedback(request.history);
                if (!prev)
                    return coordinate_reply(
                        {target.x + config_.offset.x, target.y + config_.offset.y});
                double keep = 1.0 - config_.gamma;
                return coordinate_reply({target.x + keep * (prev->x - target.x),
                                         target.y + keep * (prev->y - target.y)});
            }
            default: throw std::logic_error("unreachable");
        }
    }

private:
    static std::optional<PixelPoint> previous_from_feedback(const std::vector<ChatTurn>& history) {
        for (auto it = history.rbegin(); it != history.rend(); ++it) {
            if (it->role != Role::user) continue;
            auto parsed = extract_decision(it->text);
            if (parsed.status == ParseStatus::parsed) return parsed.point;
            return std::nullopt;
        }
        return std::nullopt;
    }

    MockOracleConfig config_;
};

// ---- shared rate limiter ----

class TokenBucket {
public:
    // rate <= 0 disables limiting.
    explicit TokenBucket(double requests_per_second = 0.0, double burst = 4.0)
        : rate_(requests_per_second), capacity_(burst), tokens_(burst) {}

    void acquire() {
        if (rate_ <= 0.0) return;
        std::unique_lock lock(mu_);
        while (true) {
            refill();
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            lock.unlock();
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
            lock.lock();
        }
    }

private:
    void refill() {
        auto now = std::chrono::steady_clock::now();
        double dt = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        tokens_ = std::min(capacity_, tokens_ + dt * rate_);
    }

    std::mutex mu_;
    double rate_;
    double capacity_;
    double tokens_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct HttpBackendConfig {
    std::string endpoint;         // e.g. http://127.0.0.1:8000 or full /v1/... URL
    std::string model;
    std::string api_key_env = "CURSEVAL_API_KEY";  // credential comes from the environment
    int max_attempts = 4;
    int backoff_base_ms = 500;
    int request_timeout_s = 120;
    double requests_per_second = 0.0;
    std::uint64_t jitter_seed = 0;
};

// Builds the OpenAI-compatible chat payload. Split out so tests can inspect
// the exact wire shape without a live server.
inline json chat_completion_body(const std::string& model, const std::vector<ChatTurn>& history) {
    json messages = json::array();
    for (const auto& turn : history) {
        if (turn.image_png) {
            json content = json::array();
            content.push_back({{"type", "text"}, {"text", turn.text}});
            content.push_back(
                {{"type", "image_url"},
                 {"image_url",
                  {{"url", "data:image/png;base64," + base64_encode(*turn.image_png)}}}});
            messages.push_back({{"role", to_string(turn.role)}, {"content", std::move(content)}});
        } else {
            messages.push_back({{"role", to_string(turn.role)}, {"content", turn.text}});
        }
    }
    return json{{"model", model}, {"messages", std::move(messages)}};
}

}  // namespace curseval
