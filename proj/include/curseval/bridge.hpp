#pragma once

// Extension-host/renderer split over a loopback WebSocket. The bridge server
// plays the host side: one client, one in-flight request, per-request
// timeout. The renderer simulation answers pixel-measurement queries from
// shared editor state; symbolic cursor indices never cross the socket in
// the host -> renderer direction, mirroring the two-process architecture.

#include <atomic>
#include <chrono>
#include <ctime>
#include <memory>
#include <mutex>
#include <set>
#include <thread>
#include <variant>

#include "curseval/editor.hpp"
#include "curseval/rng.hpp"
#include "curseval/schema.hpp"
#include "curseval/ws.hpp"

namespace curseval {

struct CollectorConfig {
    std::uint16_t port = 54321;
    int settle_delay_ms = 80;
    int request_timeout_ms = 3000;
    int eof_repeat_threshold = 3;
    std::string corpus_path;
    std::string output_path;
    double fault_rate = 0.0;
    std::uint64_t fault_seed = 0;

    void validate() const {
        if (settle_delay_ms < 0 || request_timeout_ms <= 0)
            throw std::invalid_argument("CollectorConfig: durations must be positive");
        if (eof_repeat_threshold < 2)
            throw std::invalid_argument("CollectorConfig: eof_repeat_threshold must be >= 2");
        if (fault_rate < 0.0 || fault_rate > 1.0)
            throw std::invalid_argument("CollectorConfig: fault_rate out of [0,1]");
    }
};

inline std::string iso8601_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Shared in-process stand-in for the renderer's DOM. The collector mutates
// the symbolic cursor (the host-side API in the real editor); the renderer
// task reads it to answer measurement requests.
class RendererState {
public:
    EditorLayout layout;
    WindowGeometry window_geometry{0, 0, 1344, 1344};
    double device_pixel_ratio = 1.0;
    double caret_width = 2.0;  // CSS px
    double fault_rate = 0.0;
    std::uint64_t fault_seed = 0;
    int stall_ms = 0;  // test hook: delay each measurement reply

    void set_text(std::string_view text) {
        std::lock_guard lock(mu_);
        lines_ = split_lines(text);
        cursor_ = {0, 0};
        queried_.clear();
        injected_faults_ = 0;
    }

    // cursorRight semantics; no-op at end of document.
    void cursor_right() {
        std::lock_guard lock(mu_);
        auto [line, col] = cursor_;
        if (col < int(lines_[std::size_t(line)].size()))
            cursor_ = {line, col + 1};
        else if (line + 1 < int(lines_.size()))
            cursor_ = {line + 1, 0};
    }

    std::pair<int, int> cursor() const {
        std::lock_guard lock(mu_);
        return cursor_;
    }

    int injected_faults() const {
        std::lock_guard lock(mu_);
        return injected_faults_;
    }

    // Deterministic per-position fault decision, applied to the first
    // measurement of each position only so EOF re-measurement can succeed.
    bool fault_for(int line, int col) const {
        return SplitMix64(derive_seed(fault_seed, "bridge/fault",
                                      (std::uint64_t(std::uint32_t(line)) << 32) |
                                          std::uint32_t(col)))
                   .uniform() < fault_rate;
    }

    struct Measurement {
        int line = 0, col = 0;
        double window_x = 0, window_y = 0;
        double screen_x = 0, screen_y = 0;
        double cursor_width = 0, cursor_height = 0;
        double device_pixel_ratio = 1.0;
    };

    // The renderer-side measurement: caret box from closed-form layout
    // geometry, screen frame derived by adding the window's screen offset.
    std::variant<Measurement, std::string> measure_cursor() {
        std::lock_guard lock(mu_);
        auto [line, col] = cursor_;
        bool first_query = queried_.insert(cursor_).second;
        if (first_query && fault_for(line, col)) {
            ++injected_faults_;
            return std::string("cursor node measurement failed");
        }
        PixelPoint gt = cursor_ground_truth(line, col, layout);
        Measurement m;
        m.line = line;
        m.col = col;
        m.window_x = gt.x - caret_width / 2.0;
        m.window_y = layout.origin_y + line * layout.line_height;
        m.screen_x = m.window_x + window_geometry.screen_x;
        m.screen_y = m.window_y + window_geometry.screen_y;
        m.cursor_width = caret_width;
        m.cursor_height = layout.line_height;
        m.device_pixel_ratio = device_pixel_ratio;
        return m;
    }

    std::string character_at(int line, int col) const {
        std::lock_guard lock(mu_);
        if (line < 0 || line >= int(lines_.size())) return "";
        const auto& l = lines_[std::size_t(line)];
        if (col < int(l.size())) return std::string(1, l[std::size_t(col)]);
        if (line + 1 < int(lines_.size())) return "\n";
        return "";  // final stop
    }

    std::int64_t char_count() const {
        std::lock_guard lock(mu_);
        std::int64_t n = 0;
        for (const auto& l : lines_) n += std::int64_t(l.size());
        return n + std::int64_t(lines_.size()) - 1;  // newlines between lines
    }

private:
    mutable std::mutex mu_;
    std::vector<std::string> lines_{""};
    std::pair<int, int> cursor_{0, 0};
    std::set<std::pair<int, int>> queried_;
    int injected_faults_ = 0;
};

struct RequestError {
    enum class Kind { timeout, transport, remote };
    Kind kind = Kind::transport;
    std::string message;
};

// Host side of the socket: accepts exactly one client, refuses the rest,
// and issues strictly sequential request/response exchanges.
class BridgeServer {
public:
    explicit BridgeServer(std::uint16_t port) : listener_(port) {}

    ~BridgeServer() { stop(); }

    std::uint16_t port() const { return listener_.port(); }

    void start() {
        running_ = true;
        accept_thread_ = std::thread([this] { accept_loop(); });
    }

    void stop() {
        running_ = false;
        if (accept_thread_.joinable()) accept_thread_.join();
        std::lock_guard lock(mu_);
        if (conn_.valid()) {
            conn_.send_close();
            conn_.close();
        }
    }

    bool wait_for_client(int timeout_ms) {
        auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
        while (std::chrono::steady_clock::now() < deadline) {
            {
                std::lock_guard lock(mu_);
                if (conn_.valid()) return true;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
        return false;
    }

    bool has_client() {
        std::lock_guard lock(mu_);
        return conn_.valid();
    }

    int rejected_connections() const { return rejected_.load(); }

    std::variant<json, RequestError> request(const std::string& method, json payload,
                                             int timeout_ms) {
        if (in_flight_.exchange(true))
            throw std::logic_error("bridge protocol violation: request already in flight");
        struct SlotGuard {
            std::atomic<bool>& flag;
            ~SlotGuard() { flag = false; }
        } guard{in_flight_};

        std::lock_guard lock(mu_);
        if (!conn_.valid())
            return RequestError{RequestError::Kind::transport, "no renderer client connected"};
        const int id = next_id_++;
        json frame{{"id", id}, {"method", method}, {"payload", std::move(payload)}};
        try {
            conn_.send_text(frame.dump());
            auto deadline =
                std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
            while (true) {
                int remaining = int(std::chrono::duration_cast<std::chrono::milliseconds>(
                                        deadline - std::chrono::steady_clock::now())
                                        .count());
                if (remaining <= 0)
                    return RequestError{RequestError::Kind::timeout,
                                        method + " timed out after " +
                                            std::to_string(timeout_ms) + " ms"};
                auto rr = conn_.recv_text(remaining);
                if (rr.status == ws::RecvStatus::timeout)
                    return RequestError{RequestError::Kind::timeout,
                                        method + " timed out after " +
                                            std::to_string(timeout_ms) + " ms"};
                if (rr.status == ws::RecvStatus::closed) {
                    conn_.close();
                    return RequestError{RequestError::Kind::transport,
                                        "renderer disconnected mid-request"};
                }
                json resp = json::parse(rr.text);
                int resp_id = resp.at("id").get<int>();
                if (resp_id != id) continue;  // stale reply from a timed-out slot
                if (resp.contains("error"))
                    return RequestError{RequestError::Kind::remote,
                                        resp.at("error").get<std::string>()};
                return resp.at("result");
            }
        } catch (const std::exception& e) {
            conn_.close();
            return RequestError{RequestError::Kind::transport, e.what()};
        }
    }

private:
    void accept_loop() {
        while (running_) {
            std::optional<ws::Socket> sock;
            try {
                sock = listener_.accept(50);
            } catch (const ws::WsError&) {
                continue;
            }
            if (!sock) continue;
            bool occupied;
            {
                std::lock_guard lock(mu_);
                occupied = conn_.valid();
            }
            if (occupied) {
                // One active client max: drop the surplus connection before
                // it can complete a handshake.
                sock->close();
                ++rejected_;
                continue;
            }
            try {
                auto conn = ws::server_handshake(std::move(*sock), 1000);
                std::lock_guard lock(mu_);
                conn_ = std::move(conn);
            } catch (const ws::WsError&) {
                // malformed handshake; keep serving
            }
        }
    }

    ws::Listener listener_;
    std::thread accept_thread_;
    std::mutex mu_;  // guards conn_ and next_id_
    ws::Connection conn_;
    std::atomic<bool> running_{false};
    std::atomic<bool> in_flight_{false};
    std::atomic<int> rejected_{0};
    int next_id_ = 1;
};

// Renderer task: a WebSocket client answering measurement requests from the
// shared state. Runs until stopped or the server goes away.
class RendererSim {
public:
    RendererSim(std::shared_ptr<RendererState> state, std::uint16_t port)
        : state_(std::move(state)), port_(port) {}

    ~RendererSim() { stop(); }

    void start() {
        running_ = true;
        thread_ = std::thread([this] { run(); });
    }

    void stop() {
        running_ = false;
        if (thread_.joinable()) thread_.join();
    }

private:
    void run() {
        ws::Connection conn;
        try {
            conn = ws::connect("127.0.0.1", port_, 2000);
        } catch (const ws::WsError&) {
            return;
        }
        while (running_) {
            ws::RecvResult rr;
            try {
                rr = conn.recv_text(50);
            } catch (const ws::WsError&) {
                return;
            }
            if (rr.status == ws::RecvStatus::closed) return;
            if (rr.status == ws::RecvStatus::timeout) continue;
            json reply = handle(rr.text);
            // The stall hook simulates a slow layout pass, which only affects
            // measurement replies.
            if (state_->stall_ms > 0 && rr.text.find("get_cursor_position") != std::string::npos)
                std::this_thread::sleep_for(std::chrono::milliseconds(state_->stall_ms));
            try {
                conn.send_text(reply.dump());
            } catch (const ws::WsError&) {
                return;
            }
        }
        conn.send_close();
    }

    json handle(const std::string& text) {
        json req;
        try {
            req = json::parse(text);
        } catch (const std::exception& e) {
            return json{{"id", 0}, {"error", std::string("bad request frame: ") + e.what()}};
        }
        int id = req.value("id", 0);
        std::string method = req.value("method", "");
        if (method == "get_window_metadata") {
            return json{{"id", id},
                        {"result",
                         {{"screen_x", state_->window_geometry.screen_x},
                          {"screen_y", state_->window_geometry.screen_y},
                          {"width", state_->window_geometry.width},
                          {"height", state_->window_geometry.height},
                          {"device_pixel_ratio", state_->device_pixel_ratio},
                          {"font_family", "curseval-5x7"},
                          {"font_size", double(kGlyphRows)},
                          {"line_height", state_->layout.line_height}}}};
        }
        if (method == "get_cursor_position") {
            auto m = state_->measure_cursor();
            if (std::holds_alternative<std::string>(m))
                return json{{"id", id}, {"error", std::get<std::string>(m)}};
            const auto& v = std::get<RendererState::Measurement>(m);
            return json{{"id", id},
                        {"result",
                         {{"line", v.line},
                          {"col", v.col},
                          {"window_x", v.window_x},
                          {"window_y", v.window_y},
                          {"screen_x", v.screen_x},
                          {"screen_y", v.screen_y},
                          {"cursor_width", v.cursor_width},
                          {"cursor_height", v.cursor_height},
                          {"device_pixel_ratio", v.device_pixel_ratio}}}};
        }
        return json{{"id", id}, {"error", "unknown method: " + method}};
    }

    std::shared_ptr<RendererState> state_;
    std::uint16_t port_;
    std::thread thread_;
    std::atomic<bool> running_{false};
};

struct CollectResult {
    DatasetHeader header;
    std::vector<CursorRecord> records;
    int skipped_faults = 0;
    int timeouts = 0;
    bool truncated = false;
    std::string truncation_reason;
    std::vector<std::string> log;
};

// Per-character traversal: settle, measure, record, advance; terminates when
// the measured position repeats eof_repeat_threshold times in a row.
inline CollectResult collect_file(BridgeServer& bridge, RendererState& state,
                                  const CollectorConfig& config, const std::string& file_id,
                                  const std::string& text, const std::string& screenshot_path) {
    config.validate();
    CollectResult out;
    state.set_text(text);

    auto meta = bridge.request("get_window_metadata", json::object(), config.request_timeout_ms);
    if (std::holds_alternative<RequestError>(meta)) {
        out.truncated = true;
        out.truncation_reason = "window metadata unavailable: " +
                                std::get<RequestError>(meta).message;
        return out;
    }
    const json& mj = std::get<json>(meta);
    out.header.file_content = text;
    out.header.char_count = std::int64_t(text.size());
    out.header.font_family = mj.at("font_family").get<std::string>();
    out.header.font_size = mj.at("font_size").get<double>();
    out.header.line_height = mj.at("line_height").get<double>();
    out.header.settle_delay_ms = config.settle_delay_ms;
    out.header.window_geometry = {mj.at("screen_x").get<double>(), mj.at("screen_y").get<double>(),
                                  mj.at("width").get<double>(), mj.at("height").get<double>()};
    out.header.screenshot_path = screenshot_path;
    out.header.timestamp = iso8601_now();

    std::pair<int, int> prev{-1, -1};
    int repeats = 0;
    std::set<std::pair<int, int>> recorded;
    // Hard cap so a permanently stalled renderer cannot loop forever.
    const long max_steps = 2 * (out.header.char_count + 2) + 4 * config.eof_repeat_threshold + 16;
    for (long step = 0; step < max_steps; ++step) {
        if (config.settle_delay_ms > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(config.settle_delay_ms));
        auto resp = bridge.request("get_cursor_position", json::object(), config.request_timeout_ms);
        if (std::holds_alternative<RequestError>(resp)) {
            const auto& err = std::get<RequestError>(resp);
            if (err.kind == RequestError::Kind::transport) {
                out.truncated = true;
                out.truncation_reason = err.message;
                break;
            }
            if (err.kind == RequestError::Kind::timeout)
                ++out.timeouts;
            else
                ++out.skipped_faults;
            out.log.push_back("step " + std::to_string(step) + ": " + err.message + "; continuing");
            state.cursor_right();
            continue;
        }
        const json& r = std::get<json>(resp);
        std::pair<int, int> pos{r.at("line").get<int>(), r.at("col").get<int>()};
        if (pos == prev) {
            if (++repeats >= config.eof_repeat_threshold) break;
        } else {
            repeats = 0;
            prev = pos;
        }
        if (recorded.insert(pos).second) {
            CursorRecord rec;
            rec.file_id = file_id;
            rec.line = pos.first;
            rec.col = pos.second;
            rec.character = state.character_at(pos.first, pos.second);
            rec.window_x = r.at("window_x").get<double>();
            rec.window_y = r.at("window_y").get<double>();
            rec.screen_x = r.at("screen_x").get<double>();
            rec.screen_y = r.at("screen_y").get<double>();
            rec.cursor_width = r.at("cursor_width").get<double>();
            rec.cursor_height = r.at("cursor_height").get<double>();
            rec.device_pixel_ratio = r.at("device_pixel_ratio").get<double>();
            out.records.push_back(std::move(rec));
        }
        state.cursor_right();
    }
    return out;
}

inline void write_collect_result(const std::string& path, const CollectResult& result) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SchemaError("cannot write " + path);
    f << to_json(result.header).dump() << "\n";
    for (const auto& r : result.records) f << to_json(r).dump() << "\n";
    if (result.truncated)
        f << json{{"truncated", true}, {"reason", result.truncation_reason}}.dump() << "\n";
}

}  // namespace curseval
