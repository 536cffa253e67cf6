#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "indyforge/poolstate.hpp"
#include "indyforge/roster.hpp"

namespace indyforge::netsim {

enum class MessageKind {
  Request,  // client -> target node, on the client endpoint
  Forward,  // target node -> sequencer, on the node endpoint
  Ordered,  // sequencer -> every node, on the node endpoint
};

struct Message {
  MessageKind kind = MessageKind::Request;
  std::uint64_t order = 0;  // position in the ordering log, Ordered only
  poolstate::Submission sub;

  bool operator==(const Message&) const = default;
};

struct Envelope {
  std::uint64_t id = 0;  // assigned by the sender; delivery order within a round
  Endpoint from;
  Endpoint to;
  Message msg;

  bool operator==(const Envelope&) const = default;
};

nlohmann::json to_json(const Envelope& envelope);
/// Throws Error(BadJson).
Envelope envelope_from_json(const nlohmann::json& j);

/// 4-byte big-endian length followed by the canonical JSON of the envelope.
std::vector<std::uint8_t> encode_frame(const Envelope& envelope);
/// Decodes one frame from the front of `bytes`. Returns std::nullopt while
/// the frame is incomplete; `consumed` receives the frame size otherwise.
std::optional<Envelope> decode_frame(std::span<const std::uint8_t> bytes, std::size_t& consumed);

/// Message channel between logical endpoints. Nodes never share memory;
/// everything they learn arrives through a Transport.
class Transport {
 public:
  virtual ~Transport() = default;

  /// Registers a logical endpoint that can receive messages.
  virtual void bind(const Endpoint& endpoint) = 0;
  /// Throws Error(UnknownNode) when `to` was never bound.
  virtual void send(const Envelope& envelope) = 0;
  /// Blocks until every envelope sent so far has arrived, then hands them
  /// over ordered by id.
  virtual std::vector<Envelope> collect() = 0;
  virtual std::size_t in_flight() const = 0;
};

std::unique_ptr<Transport> make_inproc_transport();

/// Real sockets on 127.0.0.1. Each bound logical endpoint gets an
/// ephemeral loopback port; frames are as encode_frame produces them.
std::unique_ptr<Transport> make_tcp_transport();

}  // namespace indyforge::netsim
