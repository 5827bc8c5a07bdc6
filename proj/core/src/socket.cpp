#include "etdr/socket.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <map>
#include <thread>

#include "etdr/error.hpp"

namespace etdr::transport {

namespace {

[[noreturn]] void sys_fail(const std::string& what) {
  fail(ErrorKind::Transport, what + ": " + std::strerror(errno));
}

sockaddr_in resolve(const Address& addr) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(addr.port);
  if (inet_pton(AF_INET, addr.host.c_str(), &sa.sin_addr) == 1) return sa;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(addr.host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
    fail(ErrorKind::Transport, "cannot resolve " + addr.host);
  }
  sa.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return sa;
}

}  // namespace

Address Address::parse(const std::string& text) {
  Address a;
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    if (!text.empty()) a.host = text;
    return a;
  }
  if (colon > 0) a.host = text.substr(0, colon);
  const std::string port = text.substr(colon + 1);
  std::size_t used = 0;
  unsigned long p = 0;
  try {
    p = std::stoul(port, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != port.size() || p > 65535) fail(ErrorKind::Transport, "bad port in address " + text);
  a.port = static_cast<std::uint16_t>(p);
  return a;
}

std::string Address::str() const { return host + ":" + std::to_string(port); }

TcpConnection::TcpConnection(TcpConnection&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

TcpConnection& TcpConnection::operator=(TcpConnection&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

TcpConnection::~TcpConnection() {
  if (fd_ >= 0) ::close(fd_);
}

TcpConnection TcpConnection::connect(const Address& addr, std::chrono::milliseconds timeout) {
  const sockaddr_in sa = resolve(addr);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  // The TTP may still be starting up; retry refused connections until the deadline.
  for (;;) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) sys_fail("socket");
    TcpConnection conn(fd);
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&sa), sizeof(sa)) == 0) {
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      conn.set_timeout(timeout);
      return conn;
    }
    if ((errno != ECONNREFUSED && errno != EINTR) || std::chrono::steady_clock::now() >= deadline) {
      sys_fail("connect to " + addr.str());
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

void TcpConnection::set_timeout(std::chrono::milliseconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  ::setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

void TcpConnection::send_frame(std::span<const std::uint8_t> bytes) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_fail("send");
    }
    done += static_cast<std::size_t>(n);
  }
}

void TcpConnection::read_exact(std::uint8_t* out, std::size_t n) {
  std::size_t done = 0;
  while (done < n) {
    const ssize_t got = ::recv(fd_, out + done, n - done, 0);
    if (got == 0) fail(ErrorKind::Transport, "connection closed mid-frame");
    if (got < 0) {
      if (errno == EINTR) continue;
      sys_fail("recv");
    }
    done += static_cast<std::size_t>(got);
  }
}

std::vector<std::uint8_t> TcpConnection::recv_frame() {
  std::vector<std::uint8_t> buf(kHeaderBytes);
  read_exact(buf.data(), kHeaderBytes);
  const std::size_t total = frame_size(std::span<const std::uint8_t, kHeaderBytes>(buf.data(), kHeaderBytes));
  // Bound the allocation by the largest legitimate frame we could accept.
  constexpr std::size_t kMaxFrame = std::size_t{1} << 32;
  if (total > kMaxFrame) fail(ErrorKind::Malformed, "frame too large");
  buf.resize(total);
  read_exact(buf.data() + kHeaderBytes, total - kHeaderBytes);
  return buf;
}

TcpListener::TcpListener(const Address& addr) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) sys_fail("socket");
  const int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  const sockaddr_in sa = resolve(addr);
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&sa), sizeof(sa)) != 0) {
    const int saved = errno;
    ::close(fd_);
    errno = saved;
    sys_fail("bind " + addr.str());
  }
  if (::listen(fd_, 8) != 0) sys_fail("listen");
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

TcpConnection TcpListener::accept(std::chrono::milliseconds timeout) {
  pollfd p{fd_, POLLIN, 0};
  const int ready = ::poll(&p, 1, static_cast<int>(timeout.count()));
  if (ready == 0) fail(ErrorKind::Transport, "timed out waiting for a party to connect");
  if (ready < 0) sys_fail("poll");
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) sys_fail("accept");
  TcpConnection conn(fd);
  conn.set_timeout(timeout);
  return conn;
}

void SharedTranscript::add(Link link, std::vector<std::uint8_t> bytes) {
  std::lock_guard lock(mu_);
  auto copy = bytes;
  entries_.push_back({link, std::move(bytes), std::move(copy)});
}

Transcript SharedTranscript::snapshot() const {
  std::lock_guard lock(mu_);
  return entries_;
}

namespace {

std::optional<Link> link_of(MsgType type) {
  switch (type) {
    case MsgType::EtSubmitA:
    case MsgType::DrClaimA: return Link::AliceToTtp;
    case MsgType::EtSubmitB:
    case MsgType::DrClaimB: return Link::BobToTtp;
    default: return std::nullopt;
  }
}

}  // namespace

void serve_phase(TtpEndpoint& ttp, TcpListener& listener, SharedTranscript* transcript,
                 std::chrono::milliseconds timeout) {
  std::mutex mu;
  std::condition_variable cv;
  std::map<Link, std::vector<std::uint8_t>> outbox;
  std::vector<std::thread> handlers;
  std::exception_ptr accept_error;

  auto handle = [&](TcpConnection conn) {
    std::optional<Link> down;
    try {
      const auto bytes = conn.recv_frame();
      const Frame f = decode_frame(bytes);
      const auto up = link_of(f.type);
      if (!up) return;
      if (transcript) transcript->add(*up, bytes);
      down = downlink(party_of(*up));
      std::unique_lock lock(mu);
      try {
        for (auto& o : ttp.on_frame(*up, f)) outbox[o.link] = encode_frame(o.frame);
      } catch (const Error&) {
        // Session already aborted or out of phase; an Error frame may still be queued.
      }
      cv.notify_all();
      cv.wait_for(lock, timeout, [&] { return outbox.count(*down) > 0 || ttp.record().aborted(); });
      const auto it = outbox.find(*down);
      if (it == outbox.end()) return;
      const auto reply = it->second;
      lock.unlock();
      if (transcript) transcript->add(*down, reply);
      conn.send_frame(reply);
    } catch (const Error&) {
      // Malformed or broken connection: nothing to announce on it.
    }
  };

  for (int i = 0; i < 2; ++i) {
    try {
      handlers.emplace_back(handle, listener.accept(timeout));
    } catch (...) {
      accept_error = std::current_exception();
      break;
    }
  }
  for (auto& t : handlers) t.join();
  if (accept_error) std::rethrow_exception(accept_error);
}

std::vector<std::uint8_t> exchange(const Address& addr, std::span<const std::uint8_t> frame,
                                   std::chrono::milliseconds timeout) {
  TcpConnection conn = TcpConnection::connect(addr, timeout);
  conn.send_frame(frame);
  return conn.recv_frame();
}

}  // namespace etdr::transport
