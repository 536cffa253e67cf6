#include "indyforge/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "indyforge/errors.hpp"
#include "indyforge/genesis.hpp"

namespace indyforge::netsim {

using nlohmann::json;

namespace {

std::string_view kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::Request: return "request";
    case MessageKind::Forward: return "forward";
    case MessageKind::Ordered: return "ordered";
  }
  return "?";
}

json endpoint_json(const Endpoint& e) { return {{"ip", e.ip}, {"port", e.port}}; }

Endpoint endpoint_from(const json& j) {
  if (!j.is_object() || !j.contains("ip") || !j.contains("port") || !j.at("ip").is_string() ||
      !j.at("port").is_number_unsigned() || j.at("port").get<std::uint64_t>() > 65535) {
    throw Error(Errc::BadJson, "malformed endpoint in envelope");
  }
  return {j.at("ip").get<std::string>(), j.at("port").get<std::uint16_t>()};
}

}  // namespace

json to_json(const Envelope& envelope) {
  return {{"from", endpoint_json(envelope.from)},
          {"id", envelope.id},
          {"msg",
           {{"kind", kind_name(envelope.msg.kind)},
            {"order", envelope.msg.order},
            {"sub", poolstate::to_json(envelope.msg.sub)}}},
          {"to", endpoint_json(envelope.to)}};
}

Envelope envelope_from_json(const json& j) {
  try {
    Envelope e;
    e.id = j.at("id").get<std::uint64_t>();
    e.from = endpoint_from(j.at("from"));
    e.to = endpoint_from(j.at("to"));
    const auto& msg = j.at("msg");
    const auto kind = msg.at("kind").get<std::string>();
    if (kind == "request") {
      e.msg.kind = MessageKind::Request;
    } else if (kind == "forward") {
      e.msg.kind = MessageKind::Forward;
    } else if (kind == "ordered") {
      e.msg.kind = MessageKind::Ordered;
    } else {
      throw Error(Errc::BadJson, "unknown message kind '" + kind + "'");
    }
    e.msg.order = msg.at("order").get<std::uint64_t>();
    e.msg.sub = poolstate::submission_from_json(msg.at("sub"));
    return e;
  } catch (const json::exception& ex) {
    throw Error(Errc::BadJson, std::string("malformed envelope: ") + ex.what());
  }
}

std::vector<std::uint8_t> encode_frame(const Envelope& envelope) {
  const auto body = genesis::canonical(to_json(envelope));
  const auto n = static_cast<std::uint32_t>(body.size());
  std::vector<std::uint8_t> frame{static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                                  static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
  frame.insert(frame.end(), body.begin(), body.end());
  return frame;
}

std::optional<Envelope> decode_frame(std::span<const std::uint8_t> bytes, std::size_t& consumed) {
  if (bytes.size() < 4) return std::nullopt;
  const std::uint32_t n = (std::uint32_t{bytes[0]} << 24) | (std::uint32_t{bytes[1]} << 16) |
                          (std::uint32_t{bytes[2]} << 8) | std::uint32_t{bytes[3]};
  if (bytes.size() < 4 + std::size_t{n}) return std::nullopt;
  const auto body = bytes.subspan(4, n);
  auto j = json::parse(body.begin(), body.end(), nullptr, false);
  if (j.is_discarded()) throw Error(Errc::BadJson, "frame body is not JSON");
  consumed = 4 + std::size_t{n};
  return envelope_from_json(j);
}

namespace {

class InProcTransport final : public Transport {
 public:
  void bind(const Endpoint& endpoint) override { bound_.insert(endpoint); }

  void send(const Envelope& envelope) override {
    if (!bound_.contains(envelope.to)) {
      throw Error(Errc::UnknownNode, "no node listens on " + to_string(envelope.to),
                  {{"endpoint", to_string(envelope.to)}});
    }
    queue_.push_back(envelope);
  }

  std::vector<Envelope> collect() override {
    auto out = std::move(queue_);
    queue_.clear();
    std::stable_sort(out.begin(), out.end(), [](const Envelope& a, const Envelope& b) { return a.id < b.id; });
    return out;
  }

  std::size_t in_flight() const override { return queue_.size(); }

 private:
  std::set<Endpoint> bound_;
  std::vector<Envelope> queue_;
};

class TcpTransport final : public Transport {
 public:
  TcpTransport() {
    if (::pipe(wake_) != 0) throw Error(Errc::Io, "pipe() failed");
    io_ = std::thread([this] { run(); });
  }

  ~TcpTransport() override {
    stop_ = true;
    wake();
    if (io_.joinable()) io_.join();
    for (const auto& [_, fd] : outgoing_) ::close(fd);
    for (const auto& l : listeners_) ::close(l.fd);
    ::close(wake_[0]);
    ::close(wake_[1]);
  }

  void bind(const Endpoint& endpoint) override {
    if (ports_.contains(endpoint)) return;
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw Error(Errc::Io, "socket() failed");
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(fd, 64) != 0) {
      ::close(fd);
      throw Error(Errc::Io, "cannot listen on loopback for " + to_string(endpoint));
    }
    socklen_t len = sizeof(addr);
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    ports_[endpoint] = ntohs(addr.sin_port);
    {
      std::lock_guard lock(mu_);
      listeners_.push_back({fd});
    }
    wake();
  }

  void send(const Envelope& envelope) override {
    const auto port = ports_.find(envelope.to);
    if (port == ports_.end()) {
      throw Error(Errc::UnknownNode, "no node listens on " + to_string(envelope.to),
                  {{"endpoint", to_string(envelope.to)}});
    }
    auto conn = outgoing_.find(envelope.to);
    if (conn == outgoing_.end()) conn = outgoing_.emplace(envelope.to, connect_to(port->second)).first;
    const int fd = conn->second;
    const auto frame = encode_frame(envelope);
    std::size_t off = 0;
    while (off < frame.size()) {
      const auto n = ::send(fd, frame.data() + off, frame.size() - off, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw Error(Errc::Io, "write to loopback socket failed");
      off += static_cast<std::size_t>(n);
    }
    std::lock_guard lock(mu_);
    ++sent_;
  }

  std::vector<Envelope> collect() override {
    std::unique_lock lock(mu_);
    const bool done = cv_.wait_for(lock, std::chrono::seconds(30), [&] { return received_ >= sent_ || failed_; });
    if (failed_) throw Error(Errc::Io, "loopback transport failed: " + failure_);
    if (!done) throw Error(Errc::Io, "timed out waiting for in-flight frames");
    auto out = std::move(inbox_);
    inbox_.clear();
    std::stable_sort(out.begin(), out.end(), [](const Envelope& a, const Envelope& b) { return a.id < b.id; });
    return out;
  }

  std::size_t in_flight() const override {
    std::lock_guard lock(mu_);
    return static_cast<std::size_t>(sent_ > received_ ? sent_ - received_ : 0) + inbox_.size();
  }

 private:
  struct Listener {
    int fd;
  };
  struct Connection {
    int fd;
    std::vector<std::uint8_t> buffer;
  };

  static int connect_to(std::uint16_t port) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw Error(Errc::Io, "socket() failed");
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
      ::close(fd);
      throw Error(Errc::Io, "connect to loopback port " + std::to_string(port) + " failed");
    }
    return fd;
  }

  void wake() {
    const char c = 0;
    [[maybe_unused]] auto n = ::write(wake_[1], &c, 1);
  }

  void fail(const std::string& why) {
    std::lock_guard lock(mu_);
    failed_ = true;
    failure_ = why;
    cv_.notify_all();
  }

  void run() {
    std::vector<Connection> conns;
    while (!stop_) {
      std::vector<pollfd> fds;
      fds.push_back({wake_[0], POLLIN, 0});
      std::size_t listener_count = 0;
      {
        std::lock_guard lock(mu_);
        for (const auto& l : listeners_) fds.push_back({l.fd, POLLIN, 0});
        listener_count = listeners_.size();
      }
      for (const auto& c : conns) fds.push_back({c.fd, POLLIN, 0});

      if (::poll(fds.data(), fds.size(), 200) < 0) {
        if (errno == EINTR) continue;
        fail("poll() failed");
        return;
      }
      if (fds[0].revents & POLLIN) {
        char buf[64];
        [[maybe_unused]] auto n = ::read(wake_[0], buf, sizeof(buf));
      }
      for (std::size_t i = 0; i < listener_count; ++i) {
        if (fds[1 + i].revents & POLLIN) {
          const int fd = ::accept(fds[1 + i].fd, nullptr, nullptr);
          if (fd >= 0) conns.push_back({fd, {}});
        }
      }
      const std::size_t first_conn = 1 + listener_count;
      std::vector<std::size_t> closed;
      for (std::size_t i = first_conn; i < fds.size(); ++i) {
        if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
        auto& conn = conns[i - first_conn];
        std::uint8_t buf[4096];
        const auto n = ::read(conn.fd, buf, sizeof(buf));
        if (n <= 0) {
          closed.push_back(i - first_conn);
          continue;
        }
        conn.buffer.insert(conn.buffer.end(), buf, buf + n);
        try {
          std::size_t consumed = 0;
          while (auto envelope = decode_frame(conn.buffer, consumed)) {
            conn.buffer.erase(conn.buffer.begin(), conn.buffer.begin() + static_cast<std::ptrdiff_t>(consumed));
            std::lock_guard lock(mu_);
            inbox_.push_back(std::move(*envelope));
            ++received_;
            cv_.notify_all();
          }
        } catch (const Error& e) {
          fail(e.what());
          return;
        }
      }
      for (auto it = closed.rbegin(); it != closed.rend(); ++it) {
        ::close(conns[*it].fd);
        conns.erase(conns.begin() + static_cast<std::ptrdiff_t>(*it));
      }
    }
    for (const auto& c : conns) ::close(c.fd);
  }

  int wake_[2]{-1, -1};
  std::thread io_;
  std::atomic<bool> stop_{false};

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::vector<Listener> listeners_;
  std::vector<Envelope> inbox_;
  std::uint64_t sent_ = 0;
  std::uint64_t received_ = 0;
  bool failed_ = false;
  std::string failure_;

  // Touched only by the thread that drives the transport.
  std::map<Endpoint, std::uint16_t> ports_;
  std::map<Endpoint, int> outgoing_;
};

}  // namespace

std::unique_ptr<Transport> make_inproc_transport() { return std::make_unique<InProcTransport>(); }

std::unique_ptr<Transport> make_tcp_transport() { return std::make_unique<TcpTransport>(); }

}  // namespace indyforge::netsim
