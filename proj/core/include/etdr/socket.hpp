#pragma once

#include <chrono>
#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "etdr/channel.hpp"
#include "etdr/roles.hpp"

namespace etdr::transport {

/// TTP listens on host:port (default 127.0.0.1:7400). Each party opens one
/// TCP connection per phase, writes its single frame and reads back the
/// TTP's announcement; frame boundaries come from the frame header.
inline constexpr std::uint16_t kDefaultPort = 7400;

struct Address {
  std::string host = "127.0.0.1";
  std::uint16_t port = kDefaultPort;

  /// "host:port", "host" or ":port".
  static Address parse(const std::string& text);
  std::string str() const;
};

class TcpConnection {
 public:
  TcpConnection() = default;
  explicit TcpConnection(int fd) : fd_(fd) {}
  TcpConnection(TcpConnection&& other) noexcept;
  TcpConnection& operator=(TcpConnection&& other) noexcept;
  TcpConnection(const TcpConnection&) = delete;
  TcpConnection& operator=(const TcpConnection&) = delete;
  ~TcpConnection();

  static TcpConnection connect(const Address& addr, std::chrono::milliseconds timeout);

  void set_timeout(std::chrono::milliseconds timeout);
  void send_frame(std::span<const std::uint8_t> bytes);
  /// Reads exactly one frame (header first, then the length it declares).
  std::vector<std::uint8_t> recv_frame();
  bool valid() const noexcept { return fd_ >= 0; }

 private:
  void read_exact(std::uint8_t* out, std::size_t n);
  int fd_ = -1;
};

class TcpListener {
 public:
  explicit TcpListener(const Address& addr);
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;
  ~TcpListener();

  /// Bound port (useful when constructed with port 0).
  std::uint16_t port() const noexcept { return port_; }
  TcpConnection accept(std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// Thread-safe transcript shared by concurrent handlers.
class SharedTranscript {
 public:
  void add(Link link, std::vector<std::uint8_t> bytes);
  Transcript snapshot() const;

 private:
  mutable std::mutex mu_;
  Transcript entries_;
};

/// Serves one phase for both parties concurrently: each connection delivers
/// one frame, and receives the announcement (or Error) addressed to it.
/// Frame handling on the endpoint is serialized.
void serve_phase(TtpEndpoint& ttp, TcpListener& listener, SharedTranscript* transcript,
                 std::chrono::milliseconds timeout = std::chrono::seconds(30));

/// Party side of one phase: connect, send `frame`, return the reply frame.
std::vector<std::uint8_t> exchange(const Address& addr, std::span<const std::uint8_t> frame,
                                   std::chrono::milliseconds timeout = std::chrono::seconds(30));

}  // namespace etdr::transport
