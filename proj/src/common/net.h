// Copyright 2026 The Anthill Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANTHILL_COMMON_NET_H_
#define ANTHILL_COMMON_NET_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "common/bytes.h"

namespace anthill {

// Outcome of a frame read. Distinguishes an orderly/ dropped connection from
// a timeout: callers treat the former as target death and the latter as a
// stall.
enum class IoStatus { kOk, kTimeout, kClosed, kError };

// One TCP connection carrying length-prefixed frames (u32 little-endian
// length, then that many bytes). Not thread safe; one owner per connection.
class TcpConn {
 public:
  TcpConn() = default;
  explicit TcpConn(int fd) : fd_(fd) {}
  ~TcpConn() { close(); }
  TcpConn(TcpConn&& other) noexcept { *this = std::move(other); }
  TcpConn& operator=(TcpConn&& other) noexcept;
  TcpConn(const TcpConn&) = delete;
  TcpConn& operator=(const TcpConn&) = delete;

  static std::optional<TcpConn> connect(const std::string& host, uint16_t port,
                                        int timeout_ms);

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }

  IoStatus send_frame(const Bytes& payload);
  IoStatus recv_frame(Bytes& out, int timeout_ms);

  // Half-close for write, then close. Used when tearing down all clients.
  void shutdown_both();
  void close();

 private:
  IoStatus read_exact(uint8_t* buf, size_t n, int timeout_ms);
  int fd_ = -1;
};

class TcpListener {
 public:
  TcpListener() = default;
  ~TcpListener() { close(); }
  TcpListener(TcpListener&&) noexcept;
  TcpListener& operator=(TcpListener&&) noexcept;
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  // Binds 127.0.0.1:port; port 0 picks an ephemeral port.
  static TcpListener bind(uint16_t port);

  uint16_t port() const { return port_; }
  bool valid() const { return fd_ >= 0; }

  // Returns nullopt on timeout.
  std::optional<TcpConn> accept(int timeout_ms);
  void close();

 private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

// Splits "host:port"; throws Error(kConfig) on malformed input.
std::pair<std::string, uint16_t> parse_endpoint(const std::string& endpoint);

// Max frame body accepted on any anthill socket. Oversized frames are a
// protocol violation and drop the connection.
inline constexpr uint32_t kMaxFrameBytes = 1 << 20;

}  // namespace anthill

#endif  // ANTHILL_COMMON_NET_H_
