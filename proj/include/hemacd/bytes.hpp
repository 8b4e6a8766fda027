// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Bounds-checked byte cursors. Every read past the end throws FormatError,
// so decoders never observe partial input.

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hemacd/errors.hpp"

namespace hemacd {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16_le(std::uint16_t v) { put_le(v, 2); }
  void u32_le(std::uint32_t v) { put_le(v, 4); }
  void u64_le(std::uint64_t v) { put_le(v, 8); }
  void u16_be(std::uint16_t v) { put_be(v, 2); }
  void u32_be(std::uint32_t v) { put_be(v, 4); }
  void u64_be(std::uint64_t v) { put_be(v, 8); }
  void bytes(std::span<const std::uint8_t> b) { append(b.data(), b.size()); }
  void text(std::string_view s) { append(s.data(), s.size()); }
  // Finite double as (int64 significand, int32 exponent); exact.
  void real(double v);

  std::vector<std::uint8_t>& data() { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void put_be(std::uint64_t v, int n) {
    for (int i = n - 1; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void append(const void* p, std::size_t n) {
    if (n == 0) return;
    const std::size_t at = buf_.size();
    buf_.resize(at + n);
    std::memcpy(buf_.data() + at, p, n);
  }
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint16_t u16_le() { return static_cast<std::uint16_t>(get_le(2)); }
  std::uint32_t u32_le() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64_le() { return get_le(8); }
  std::uint16_t u16_be() { return static_cast<std::uint16_t>(get_be(2)); }
  std::uint32_t u32_be() { return static_cast<std::uint32_t>(get_be(4)); }
  std::uint64_t u64_be() { return get_be(8); }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::string text(std::size_t n) {
    auto b = bytes(n);
    return std::string(b.begin(), b.end());
  }
  double real();

  std::size_t remaining() const { return data_.size() - pos_; }
  void expect_end(const char* what) const {
    if (remaining() != 0) throw FormatError(std::string(what) + ": trailing bytes");
  }

 private:
  void need(std::size_t n) const {
    if (n > remaining()) throw FormatError("truncated input");
  }
  std::uint64_t get_le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::uint64_t get_be(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v = (v << 8) | data_[pos_ + i];
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace hemacd
