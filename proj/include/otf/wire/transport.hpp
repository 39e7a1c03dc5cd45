#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include "otf/bytes.hpp"

namespace otf::wire {

class TransportError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A reliable, ordered byte stream.
class Transport {
public:
  virtual ~Transport() = default;
  virtual void send(ByteView data) = 0;
  /// Fills `out` completely or throws TransportError.
  virtual void recv(std::span<std::uint8_t> out) = 0;
};

// In-process duplex pipe; each end is handed to one thread.
class MemoryPipe {
  struct Channel {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<std::uint8_t> data;
    bool closed = false;
  };

public:
  class End : public Transport {
  public:
    End(std::shared_ptr<Channel> in, std::shared_ptr<Channel> out) : in_(std::move(in)), out_(std::move(out)) {}
    ~End() override {
      std::lock_guard lock(out_->mu);
      out_->closed = true;
      out_->cv.notify_all();
    }
    void send(ByteView data) override {
      std::lock_guard lock(out_->mu);
      out_->data.insert(out_->data.end(), data.begin(), data.end());
      out_->cv.notify_all();
    }
    void recv(std::span<std::uint8_t> out) override {
      std::unique_lock lock(in_->mu);
      for (auto& b : out) {
        in_->cv.wait(lock, [&] { return !in_->data.empty() || in_->closed; });
        if (in_->data.empty()) throw TransportError("peer closed the pipe");
        b = in_->data.front();
        in_->data.pop_front();
      }
    }

  private:
    std::shared_ptr<Channel> in_;
    std::shared_ptr<Channel> out_;
  };

  static std::pair<std::unique_ptr<End>, std::unique_ptr<End>> create() {
    auto a = std::make_shared<Channel>();
    auto b = std::make_shared<Channel>();
    return {std::make_unique<End>(a, b), std::make_unique<End>(b, a)};
  }
};

class TcpTransport : public Transport {
public:
  explicit TcpTransport(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;
  ~TcpTransport() override {
    if (fd_ >= 0) ::close(fd_);
  }

  static std::unique_ptr<TcpTransport> connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res); rc != 0)
      throw TransportError("resolve " + host + ": " + ::gai_strerror(rc));
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, &::freeaddrinfo);
    for (auto* ai = res; ai; ai = ai->ai_next) {
      int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) return std::make_unique<TcpTransport>(fd);
      ::close(fd);
    }
    throw TransportError("connect " + host + ":" + std::to_string(port) + " failed");
  }

  void send(ByteView data) override {
    std::size_t off = 0;
    while (off < data.size()) {
      auto n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
      if (n <= 0) throw TransportError(std::string("send: ") + std::strerror(errno));
      off += static_cast<std::size_t>(n);
    }
  }

  void recv(std::span<std::uint8_t> out) override {
    std::size_t off = 0;
    while (off < out.size()) {
      auto n = ::recv(fd_, out.data() + off, out.size() - off, 0);
      if (n == 0) throw TransportError("peer closed the connection");
      if (n < 0) throw TransportError(std::string("recv: ") + std::strerror(errno));
      off += static_cast<std::size_t>(n);
    }
  }

private:
  int fd_ = -1;
};

class TcpListener {
public:
  /// Port 0 picks an ephemeral port; see port().
  TcpListener(const std::string& host, std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw TransportError("socket failed");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
      ::close(fd_);
      throw TransportError("listen address must be an IPv4 literal: " + host);
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(fd_, 16) != 0) {
      ::close(fd_);
      throw TransportError("bind/listen " + host + ":" + std::to_string(port) + ": " + std::strerror(errno));
    }
  }
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;
  ~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
  }

  [[nodiscard]] std::uint16_t port() const {
    sockaddr_in addr{};
    socklen_t len = sizeof(addr);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    return ntohs(addr.sin_port);
  }

  std::unique_ptr<TcpTransport> accept() {
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) throw TransportError(std::string("accept: ") + std::strerror(errno));
    return std::make_unique<TcpTransport>(fd);
  }

private:
  int fd_ = -1;
};

/// Splits "host:port".
inline std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
  auto colon = endpoint.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("endpoint must be host:port");
  int port = std::stoi(endpoint.substr(colon + 1));
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range");
  return {endpoint.substr(0, colon), static_cast<std::uint16_t>(port)};
}

}  // namespace otf::wire
