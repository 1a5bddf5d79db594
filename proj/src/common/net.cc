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

#include "common/net.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "common/clock.h"
#include "common/error.h"

namespace anthill {

namespace {

void set_nonblocking(int fd, bool nb) {
  int flags = fcntl(fd, F_GETFL, 0);
  if (nb)
    fcntl(fd, F_SETFL, flags | O_NONBLOCK);
  else
    fcntl(fd, F_SETFL, flags & ~O_NONBLOCK);
}

bool wait_fd(int fd, short events, int timeout_ms) {
  struct pollfd pfd{fd, events, 0};
  int rc = poll(&pfd, 1, timeout_ms);
  return rc > 0 && (pfd.revents & (events | POLLHUP | POLLERR));
}

}  // namespace

TcpConn& TcpConn::operator=(TcpConn&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

std::optional<TcpConn> TcpConn::connect(const std::string& host, uint16_t port,
                                        int timeout_ms) {
  int fd = socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) return std::nullopt;
  struct sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host == "localhost" ? "127.0.0.1" : host.c_str(),
                &addr.sin_addr) != 1) {
    ::close(fd);
    return std::nullopt;
  }
  set_nonblocking(fd, true);
  int rc = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
  if (rc != 0) {
    if (errno != EINPROGRESS) {
      ::close(fd);
      return std::nullopt;
    }
    if (!wait_fd(fd, POLLOUT, timeout_ms)) {
      ::close(fd);
      return std::nullopt;
    }
    int err = 0;
    socklen_t len = sizeof(err);
    getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) {
      ::close(fd);
      return std::nullopt;
    }
  }
  set_nonblocking(fd, false);
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return TcpConn(fd);
}

IoStatus TcpConn::send_frame(const Bytes& payload) {
  if (fd_ < 0) return IoStatus::kClosed;
  uint32_t len = static_cast<uint32_t>(payload.size());
  Bytes frame;
  frame.reserve(4 + payload.size());
  frame.insert(frame.end(), reinterpret_cast<uint8_t*>(&len),
               reinterpret_cast<uint8_t*>(&len) + 4);
  frame.insert(frame.end(), payload.begin(), payload.end());
  size_t sent = 0;
  while (sent < frame.size()) {
    ssize_t n = ::send(fd_, frame.data() + sent, frame.size() - sent,
                       MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return IoStatus::kClosed;
    }
    sent += static_cast<size_t>(n);
  }
  return IoStatus::kOk;
}

IoStatus TcpConn::read_exact(uint8_t* buf, size_t n, int timeout_ms) {
  int64_t deadline = mono_ms() + timeout_ms;
  size_t got = 0;
  while (got < n) {
    int64_t left = timeout_ms < 0 ? -1 : deadline - mono_ms();
    if (timeout_ms >= 0 && left <= 0) return IoStatus::kTimeout;
    if (!wait_fd(fd_, POLLIN, timeout_ms < 0 ? -1 : static_cast<int>(left)))
      return IoStatus::kTimeout;
    ssize_t r = ::recv(fd_, buf + got, n - got, 0);
    if (r == 0) return IoStatus::kClosed;
    if (r < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return IoStatus::kError;
    }
    got += static_cast<size_t>(r);
  }
  return IoStatus::kOk;
}

IoStatus TcpConn::recv_frame(Bytes& out, int timeout_ms) {
  if (fd_ < 0) return IoStatus::kClosed;
  uint32_t len = 0;
  IoStatus st = read_exact(reinterpret_cast<uint8_t*>(&len), 4, timeout_ms);
  if (st != IoStatus::kOk) return st;
  if (len > kMaxFrameBytes) return IoStatus::kError;
  out.resize(len);
  if (len == 0) return IoStatus::kOk;
  return read_exact(out.data(), len, timeout_ms);
}

void TcpConn::shutdown_both() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void TcpConn::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

TcpListener::TcpListener(TcpListener&& other) noexcept {
  fd_ = other.fd_;
  port_ = other.port_;
  other.fd_ = -1;
}

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    port_ = other.port_;
    other.fd_ = -1;
  }
  return *this;
}

TcpListener TcpListener::bind(uint16_t port) {
  int fd = socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw Error(ErrorKind::kInfra, "socket() failed");
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  struct sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    throw Error(ErrorKind::kRetryable,
                "bind failed on port " + std::to_string(port) + ": " +
                    std::strerror(errno));
  }
  if (listen(fd, 128) != 0) {
    ::close(fd);
    throw Error(ErrorKind::kInfra, "listen failed");
  }
  socklen_t len = sizeof(addr);
  getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  TcpListener l;
  l.fd_ = fd;
  l.port_ = ntohs(addr.sin_port);
  return l;
}

std::optional<TcpConn> TcpListener::accept(int timeout_ms) {
  if (fd_ < 0) return std::nullopt;
  if (!wait_fd(fd_, POLLIN, timeout_ms)) return std::nullopt;
  int cfd = ::accept(fd_, nullptr, nullptr);
  if (cfd < 0) return std::nullopt;
  int one = 1;
  setsockopt(cfd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return TcpConn(cfd);
}

void TcpListener::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

std::pair<std::string, uint16_t> parse_endpoint(const std::string& endpoint) {
  auto pos = endpoint.rfind(':');
  if (pos == std::string::npos || pos == 0 || pos + 1 >= endpoint.size())
    throw Error(ErrorKind::kConfig, "endpoint must be host:port, got '" +
                                        endpoint + "'");
  int port = 0;
  try {
    port = std::stoi(endpoint.substr(pos + 1));
  } catch (...) {
    port = -1;
  }
  if (port <= 0 || port > 65535)
    throw Error(ErrorKind::kConfig, "bad port in endpoint '" + endpoint + "'");
  return {endpoint.substr(0, pos), static_cast<uint16_t>(port)};
}

}  // namespace anthill
