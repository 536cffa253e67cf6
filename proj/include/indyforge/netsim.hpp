#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "indyforge/genesis.hpp"
#include "indyforge/poolstate.hpp"
#include "indyforge/transport.hpp"

namespace indyforge::netsim {

/// One logical validator process. It owns its state and learns about the
/// rest of the pool only through messages.
struct SimNode {
  std::string alias;
  Endpoint node_endpoint;
  Endpoint client_endpoint;
  poolstate::PoolState local_state;

  std::uint64_t applied = 0;               // last ordering position applied
  std::map<std::uint64_t, poolstate::Submission> held;  // arrived out of order

  // Used only while this node is the sequencer.
  poolstate::PoolState sequenced_state;
  std::uint64_t sequenced = 0;
};

enum class TransportKind { InProc, Tcp };
/// How a round's inboxes are processed. Both give identical results.
enum class Schedule { Serial, OpenMP };

struct SimOptions {
  std::string network_name = "sandbox";
  bool strict = true;
  TransportKind transport = TransportKind::InProc;
  Schedule schedule = Schedule::Serial;
};

struct SimReport {
  bool converged = false;
  bool accepted = true;
  std::optional<poolstate::AuthError> error;
  std::size_t rounds_to_converge = 0;
  std::size_t messages_delivered = 0;
  std::size_t catch_up_steps = 0;          // txns replayed by newcomers
  std::vector<std::string> aliases;        // node order
  std::vector<std::size_t> membership_size;  // validators known per node

  nlohmann::json to_json() const;
  bool operator==(const SimReport&) const = default;
};

/// Stand-in client address for submissions coming from outside the pool.
Endpoint client_origin();

class SimPool {
 public:
  /// One node per NODE txn, each bootstrapped from the pair. Throws
  /// poolstate::GenesisInvalid when the pair does not verify.
  static SimPool spawn(const genesis::GenesisDoc& domain, const genesis::GenesisDoc& pool, SimOptions options = {});

  SimPool(SimPool&&) noexcept;
  SimPool& operator=(SimPool&&) noexcept;
  ~SimPool();

  /// Delivers `sub` to the client endpoint of `target_alias` and settles.
  /// Throws Error(UnknownNode) for an alias that is not live.
  SimReport submit(const std::string& target_alias, const poolstate::Submission& sub);

  /// Runs the trustee-sponsored node addition through the ordering path and
  /// starts a node for the newcomer, which catches up by replaying the
  /// ordering log. Throws Error(EndpointInUse) when the validator reuses a
  /// live endpoint; authorization failures come back in the report.
  SimReport join_new_node(const ParticipantRecord& steward, const ValidatorInfo& validator,
                          const std::string& sponsor_trustee);

  /// Snapshot of the current state of the pool.
  SimReport report() const;

  const std::vector<SimNode>& nodes() const noexcept { return nodes_; }
  const std::vector<poolstate::Submission>& ordering_log() const noexcept { return ordering_log_; }
  const genesis::GenesisDoc& domain() const noexcept { return domain_; }
  const genesis::GenesisDoc& pool() const noexcept { return pool_; }
  const SimOptions& options() const noexcept { return options_; }

  /// Alias-lexicographically first live node.
  const SimNode& sequencer() const;
  /// Target used by join_new_node: the alias-lexicographically last node.
  const SimNode& entry_node() const;

  /// No messages in flight and every node has applied the whole log.
  bool quiescent() const;
  /// All local states pairwise equal.
  bool states_agree() const;

 private:
  SimPool() = default;

  std::size_t index_of_alias(const std::string& alias) const;
  void add_node(SimNode node);
  void send(const Endpoint& from, const Endpoint& to, Message msg);
  /// Delivers rounds until nothing is in flight.
  void settle(SimReport& report, std::optional<poolstate::AuthError>& rejection);
  void fill_membership(SimReport& report) const;

  SimOptions options_;
  genesis::GenesisDoc domain_;
  genesis::GenesisDoc pool_;
  std::vector<SimNode> nodes_;
  std::map<Endpoint, std::size_t> node_by_endpoint_;
  std::vector<poolstate::Submission> ordering_log_;
  std::unique_ptr<Transport> transport_;
  std::uint64_t next_envelope_id_ = 1;
};

SimPool spawn_pool(const genesis::GenesisDoc& domain, const genesis::GenesisDoc& pool, SimOptions options = {});

/// Deterministic protocol-step counts for a synthetic pool of `pool_size`
/// validators followed by `joins` node additions. A regression metric, not
/// a wall-clock benchmark.
SimReport measure_bootstrap(std::size_t pool_size, std::size_t joins);

}  // namespace indyforge::netsim
