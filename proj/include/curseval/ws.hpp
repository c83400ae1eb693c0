#pragma once

// Minimal RFC 6455 WebSocket over loopback TCP: HTTP upgrade handshake plus
// unfragmented text frames. Enough surface for the collector bridge's strict
// request/response protocol; not a general-purpose client.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "curseval/hash.hpp"

namespace curseval::ws {

struct WsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kHandshakeGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

inline std::string accept_key(std::string_view client_key) {
    auto digest = sha1_bytes(std::string(client_key) + std::string(kHandshakeGuid));
    return base64_encode(digest.data(), digest.size());
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline int remaining_ms(Clock::time_point deadline) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    return ms < 0 ? 0 : int(ms);
}

}  // namespace detail

class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket() { close(); }
    Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    Socket& operator=(Socket&& other) noexcept {
        if (this != &other) {
            close();
            fd_ = other.fd_;
            other.fd_ = -1;
        }
        return *this;
    }
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    int fd() const { return fd_; }
    bool valid() const { return fd_ >= 0; }

    void close() {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }

    void send_all(std::string_view data) const {
        std::size_t off = 0;
        while (off < data.size()) {
            ssize_t n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
            if (n <= 0) throw WsError("socket send failed");
            off += std::size_t(n);
        }
    }

    // Reads at most `cap` bytes before `deadline`; 0 = peer closed,
    // nullopt = deadline passed with nothing readable.
    std::optional<std::size_t> recv_some(char* buf, std::size_t cap,
                                         detail::Clock::time_point deadline) const {
        pollfd pfd{fd_, POLLIN, 0};
        int rc = ::poll(&pfd, 1, detail::remaining_ms(deadline));
        if (rc == 0) return std::nullopt;
        if (rc < 0) throw WsError("poll failed");
        ssize_t n = ::recv(fd_, buf, cap, 0);
        if (n < 0) throw WsError("socket recv failed");
        return std::size_t(n);
    }

private:
    int fd_ = -1;
};

enum class RecvStatus { message, timeout, closed };

struct RecvResult {
    RecvStatus status = RecvStatus::timeout;
    std::string text;
};

// One established WebSocket connection; `masked` is true on the client side.
class Connection {
public:
    Connection() = default;
    Connection(Socket sock, bool masked) : sock_(std::move(sock)), masked_(masked) {}

    bool valid() const { return sock_.valid(); }
    void close() { sock_.close(); }

    void send_text(std::string_view payload) { send_frame(0x1, payload); }

    void send_close() {
        try {
            send_frame(0x8, {});
        } catch (const WsError&) {
            // peer already gone
        }
    }

    RecvResult recv_text(int timeout_ms) {
        auto deadline = detail::Clock::now() + std::chrono::milliseconds(timeout_ms);
        while (true) {
            std::uint8_t opcode = 0;
            std::string payload;
            if (!read_frame(opcode, payload, deadline)) return {RecvStatus::timeout, {}};
            switch (opcode) {
                case 0x1: return {RecvStatus::message, std::move(payload)};
                case 0x8: sock_.close(); return {RecvStatus::closed, {}};
                case 0x9: send_frame(0xA, payload); break;  // ping -> pong
                case 0xA: break;                            // unsolicited pong
                default: throw WsError("unsupported websocket opcode");
            }
        }
    }

private:
    void send_frame(std::uint8_t opcode, std::string_view payload) {
        std::string frame;
        frame.push_back(char(0x80 | opcode));  // FIN + opcode
        std::uint8_t mask_bit = masked_ ? 0x80 : 0x00;
        if (payload.size() < 126) {
            frame.push_back(char(mask_bit | std::uint8_t(payload.size())));
        } else if (payload.size() <= 0xFFFF) {
            frame.push_back(char(mask_bit | 126));
            frame.push_back(char(payload.size() >> 8));
            frame.push_back(char(payload.size() & 0xFF));
        } else {
            frame.push_back(char(mask_bit | 127));
            for (int i = 7; i >= 0; --i) frame.push_back(char((payload.size() >> (8 * i)) & 0xFF));
        }
        if (masked_) {
            std::uint32_t key = next_mask_key();
            std::uint8_t kb[4] = {std::uint8_t(key >> 24), std::uint8_t(key >> 16),
                                  std::uint8_t(key >> 8), std::uint8_t(key)};
            frame.append(reinterpret_cast<char*>(kb), 4);
            for (std::size_t i = 0; i < payload.size(); ++i)
                frame.push_back(char(std::uint8_t(payload[i]) ^ kb[i % 4]));
        } else {
            frame.append(payload);
        }
        sock_.send_all(frame);
    }

    static std::uint32_t next_mask_key() {
        static std::atomic<std::uint32_t> counter{0x12345678u};
        std::uint32_t v = counter.fetch_add(0x9E3779B9u);
        v ^= v >> 16;
        return v;
    }

    bool fill_to(std::size_t need, detail::Clock::time_point deadline) {
        char tmp[4096];
        while (buf_.size() < need) {
            auto got = sock_.recv_some(tmp, sizeof(tmp), deadline);
            if (!got) return false;
            if (*got == 0) throw WsError("peer closed connection mid-frame");
            buf_.append(tmp, *got);
        }
        return true;
    }

    bool read_frame(std::uint8_t& opcode, std::string& payload,
                    detail::Clock::time_point deadline) {
        if (!fill_to(2, deadline)) return false;
        std::uint8_t b0 = std::uint8_t(buf_[0]);
        std::uint8_t b1 = std::uint8_t(buf_[1]);
        if (!(b0 & 0x80)) throw WsError("fragmented frames not supported");
        opcode = b0 & 0x0F;
        bool masked = b1 & 0x80;
        std::uint64_t len = b1 & 0x7F;
        std::size_t header = 2;
        if (len == 126) {
            if (!fill_to(4, deadline)) return false;
            len = (std::uint64_t(std::uint8_t(buf_[2])) << 8) | std::uint8_t(buf_[3]);
            header = 4;
        } else if (len == 127) {
            if (!fill_to(10, deadline)) return false;
            len = 0;
            for (int i = 0; i < 8; ++i) len = (len << 8) | std::uint8_t(buf_[2 + i]);
            header = 10;
        }
        std::size_t mask_off = header;
        if (masked) header += 4;
        if (!fill_to(header + len, deadline)) return false;
        payload.assign(buf_, header, std::size_t(len));
        if (masked) {
            for (std::size_t i = 0; i < payload.size(); ++i)
                payload[i] = char(std::uint8_t(payload[i]) ^ std::uint8_t(buf_[mask_off + i % 4]));
        }
        buf_.erase(0, header + std::size_t(len));
        return true;
    }

    Socket sock_;
    bool masked_ = false;
    std::string buf_;
};

class Listener {
public:
    explicit Listener(std::uint16_t port) {
        int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd < 0) throw WsError("cannot create socket");
        int one = 1;
        ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        addr.sin_port = htons(port);
        if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
            ::close(fd);
            throw WsError("port " + std::to_string(port) + " unavailable");
        }
        if (::listen(fd, 8) != 0) {
            ::close(fd);
            throw WsError("listen failed");
        }
        sock_ = Socket(fd);
        socklen_t len = sizeof(addr);
        ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
    }

    std::uint16_t port() const { return port_; }

    // Raw TCP accept; nullopt on timeout. Handshake is a separate step so the
    // caller can refuse surplus clients before upgrading.
    std::optional<Socket> accept(int timeout_ms) {
        pollfd pfd{sock_.fd(), POLLIN, 0};
        int rc = ::poll(&pfd, 1, timeout_ms);
        if (rc == 0) return std::nullopt;
        if (rc < 0) throw WsError("poll failed on listener");
        int fd = ::accept(sock_.fd(), nullptr, nullptr);
        if (fd < 0) throw WsError("accept failed");
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        return Socket(fd);
    }

private:
    Socket sock_;
    std::uint16_t port_ = 0;
};

// Server side of the upgrade. Throws on malformed requests.
inline Connection server_handshake(Socket sock, int timeout_ms) {
    auto deadline = detail::Clock::now() + std::chrono::milliseconds(timeout_ms);
    std::string request;
    char tmp[2048];
    while (request.find("\r\n\r\n") == std::string::npos) {
        auto got = sock.recv_some(tmp, sizeof(tmp), deadline);
        if (!got || *got == 0) throw WsError("handshake read failed");
        request.append(tmp, *got);
        if (request.size() > 64 * 1024) throw WsError("oversized handshake request");
    }
    auto key_pos = request.find("Sec-WebSocket-Key:");
    if (key_pos == std::string::npos) throw WsError("missing Sec-WebSocket-Key");
    key_pos += std::strlen("Sec-WebSocket-Key:");
    while (key_pos < request.size() && request[key_pos] == ' ') ++key_pos;
    auto key_end = request.find("\r\n", key_pos);
    std::string key = request.substr(key_pos, key_end - key_pos);

    std::string response = "HTTP/1.1 101 Switching Protocols\r\n"
                           "Upgrade: websocket\r\n"
                           "Connection: Upgrade\r\n"
                           "Sec-WebSocket-Accept: " + accept_key(key) + "\r\n\r\n";
    sock.send_all(response);
    return Connection(std::move(sock), /*masked=*/false);
}

inline Connection connect(const std::string& host, std::uint16_t port, int timeout_ms) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw WsError("cannot create socket");
    Socket sock(fd);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw WsError("bad address: " + host);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
        throw WsError("connect to " + host + ":" + std::to_string(port) + " refused");
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));

    std::uint8_t key_bytes[16];
    static std::atomic<std::uint32_t> key_counter{0};
    std::uint32_t seed = std::uint32_t(::getpid()) * 2654435761u + key_counter.fetch_add(1);
    for (int i = 0; i < 16; ++i) key_bytes[i] = std::uint8_t((seed = seed * 1103515245u + 12345u) >> 16);
    std::string key = base64_encode(key_bytes, sizeof(key_bytes));

    std::string request = "GET / HTTP/1.1\r\n"
                          "Host: " + host + ":" + std::to_string(port) + "\r\n"
                          "Upgrade: websocket\r\n"
                          "Connection: Upgrade\r\n"
                          "Sec-WebSocket-Key: " + key + "\r\n"
                          "Sec-WebSocket-Version: 13\r\n\r\n";
    sock.send_all(request);

    auto deadline = detail::Clock::now() + std::chrono::milliseconds(timeout_ms);
    std::string response;
    char tmp[2048];
    while (response.find("\r\n\r\n") == std::string::npos) {
        auto got = sock.recv_some(tmp, sizeof(tmp), deadline);
        if (!got) throw WsError("handshake response timed out");
        if (*got == 0) throw WsError("connection closed during handshake");
        response.append(tmp, *got);
    }
    if (response.find(" 101 ") == std::string::npos)
        throw WsError("handshake rejected: " + response.substr(0, response.find("\r\n")));
    if (response.find(accept_key(key)) == std::string::npos)
        throw WsError("bad Sec-WebSocket-Accept");
    return Connection(std::move(sock), /*masked=*/true);
}

}  // namespace curseval::ws
