// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

#include "hemacd/socket.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <thread>

namespace hemacd {

namespace {

std::string sys_error(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

sockaddr_in resolve(const Endpoint& ep) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  const std::string host = ep.host.empty() ? "127.0.0.1" : ep.host;
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
    throw NetError("cannot resolve host '" + host + "'");
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  ::freeaddrinfo(res);
  return addr;
}

// Waits for `events` on fd; false on timeout.
bool wait_for(int fd, short events, std::optional<std::chrono::milliseconds> timeout) {
  pollfd p{fd, events, 0};
  const int ms = timeout ? static_cast<int>(timeout->count()) : -1;
  for (;;) {
    const int rc = ::poll(&p, 1, ms);
    if (rc > 0) return true;
    if (rc == 0) return false;
    if (errno != EINTR) throw NetError(sys_error("poll"));
  }
}

}  // namespace

Endpoint Endpoint::parse(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw ConfigError("address must be host:port, got '" + text + "'");
  Endpoint ep;
  ep.host = text.substr(0, colon);
  if (ep.host.empty()) ep.host = "127.0.0.1";
  const std::string port = text.substr(colon + 1);
  unsigned value = 0;
  auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc() || p != port.data() + port.size() || value > 65535) {
    throw ConfigError("invalid port in address '" + text + "'");
  }
  ep.port = static_cast<std::uint16_t>(value);
  return ep;
}

std::string Endpoint::to_string() const { return host + ":" + std::to_string(port); }

TcpStream::~TcpStream() { close(); }

TcpStream::TcpStream(TcpStream&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

TcpStream TcpStream::connect(const Endpoint& ep, std::chrono::milliseconds timeout) {
  const sockaddr_in addr = resolve(ep);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (fd < 0) throw NetError(sys_error("socket"));
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) == 0) {
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      return TcpStream(fd);
    }
    const int err = errno;
    ::close(fd);
    if ((err != ECONNREFUSED && err != EINTR) || std::chrono::steady_clock::now() >= deadline) {
      errno = err;
      throw NetError(sys_error(("connect to " + ep.to_string()).c_str()));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

void TcpStream::send_all(std::span<const std::uint8_t> data) {
  if (fd_ < 0) throw NetError("send on closed stream");
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw NetError(sys_error("send"));
    }
    sent += static_cast<std::size_t>(n);
  }
}

void TcpStream::recv_exact(std::span<std::uint8_t> out,
                           std::optional<std::chrono::milliseconds> timeout) {
  if (fd_ < 0) throw NetError("recv on closed stream");
  std::size_t got = 0;
  while (got < out.size()) {
    if (!wait_for(fd_, POLLIN, timeout)) throw TimeoutError("receive timed out");
    const ssize_t n = ::recv(fd_, out.data() + got, out.size() - got, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw NetError(sys_error("recv"));
    }
    if (n == 0) throw NetError("connection closed by peer");
    got += static_cast<std::size_t>(n);
  }
}

void TcpStream::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void TcpStream::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

TcpListener TcpListener::bind(const Endpoint& ep) {
  const sockaddr_in addr = resolve(ep);
  const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) throw NetError(sys_error("socket"));
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(fd, 16) != 0) {
    const std::string msg = sys_error(("bind " + ep.to_string()).c_str());
    ::close(fd);
    throw NetError(msg);
  }
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
  return TcpListener(fd, ntohs(bound.sin_port));
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

TcpListener::TcpListener(TcpListener&& other) noexcept : fd_(other.fd_), port_(other.port_) {
  other.fd_ = -1;
}

TcpStream TcpListener::accept(std::chrono::milliseconds timeout) {
  if (!wait_for(fd_, POLLIN, timeout)) throw TimeoutError("no trader connected in time");
  const int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
  if (fd < 0) throw NetError(sys_error("accept"));
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return TcpStream(fd);
}

void FrameChannel::send(FrameType type, std::vector<std::uint8_t> payload) {
  const Frame frame{type, next_send_seq_++, std::move(payload)};
  stream_.send_all(serialize_frame(frame, max_payload_));
}

Frame FrameChannel::recv(std::optional<std::chrono::milliseconds> timeout) {
  std::array<std::uint8_t, kFrameHeaderSize> header{};
  stream_.recv_exact(header, timeout);
  const FrameHeader h = parse_frame_header(header, max_payload_);
  Frame frame{h.type, h.seq, std::vector<std::uint8_t>(h.length)};
  stream_.recv_exact(frame.payload, timeout);
  if (last_recv_seq_ && h.seq <= *last_recv_seq_) {
    throw ProtocolError("sequence number " + std::to_string(h.seq) + " not above " +
                        std::to_string(*last_recv_seq_));
  }
  last_recv_seq_ = h.seq;
  return frame;
}

}  // namespace hemacd
