// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Minimal blocking TCP over POSIX sockets, plus a framed channel that
// enforces the size cap and per-connection sequence monotonicity.

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hemacd/errors.hpp"
#include "hemacd/netproto.hpp"

namespace hemacd {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  // "host:port"; host may be empty (loopback).
  static Endpoint parse(const std::string& text);
  std::string to_string() const;
};

class NetError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public NetError {
 public:
  using NetError::NetError;
};

class TcpStream {
 public:
  TcpStream() = default;
  explicit TcpStream(int fd) : fd_(fd) {}
  ~TcpStream();
  TcpStream(TcpStream&& other) noexcept;
  TcpStream& operator=(TcpStream&& other) noexcept;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  // Retries refused connections until `timeout` elapses.
  static TcpStream connect(const Endpoint& ep, std::chrono::milliseconds timeout);

  bool valid() const { return fd_ >= 0; }
  void send_all(std::span<const std::uint8_t> data);
  // Throws TimeoutError if nothing arrives in time, NetError on EOF.
  void recv_exact(std::span<std::uint8_t> out, std::optional<std::chrono::milliseconds> timeout);
  void shutdown();
  void close();

 private:
  int fd_ = -1;
};

class TcpListener {
 public:
  static TcpListener bind(const Endpoint& ep);
  ~TcpListener();
  TcpListener(TcpListener&& other) noexcept;
  TcpListener& operator=(TcpListener&&) = delete;
  TcpListener(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }
  TcpStream accept(std::chrono::milliseconds timeout);

 private:
  TcpListener(int fd, std::uint16_t port) : fd_(fd), port_(port) {}
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

class FrameChannel {
 public:
  explicit FrameChannel(TcpStream stream, std::size_t max_payload = kDefaultMaxPayload)
      : stream_(std::move(stream)), max_payload_(max_payload) {}

  void send(FrameType type, std::vector<std::uint8_t> payload);
  // Rejects non-increasing sequence numbers with ProtocolError.
  Frame recv(std::optional<std::chrono::milliseconds> timeout = std::nullopt);
  void close() { stream_.close(); }

 private:
  TcpStream stream_;
  std::size_t max_payload_;
  std::uint64_t next_send_seq_ = 1;
  std::optional<std::uint64_t> last_recv_seq_;
};

}  // namespace hemacd
