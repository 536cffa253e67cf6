#include "indyforge/netsim.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>

#include "indyforge/errors.hpp"
#include "indyforge/synthetic.hpp"

namespace indyforge::netsim {

using poolstate::AuthError;
using poolstate::PoolState;
using poolstate::Submission;

nlohmann::json SimReport::to_json() const {
  nlohmann::json membership = nlohmann::json::object();
  for (std::size_t i = 0; i < aliases.size() && i < membership_size.size(); ++i) {
    membership[aliases[i]] = membership_size[i];
  }
  nlohmann::json j = {{"accepted", accepted},
                      {"converged", converged},
                      {"rounds_to_converge", rounds_to_converge},
                      {"messages_delivered", messages_delivered},
                      {"catch_up_steps", catch_up_steps},
                      {"membership_size", membership}};
  if (error) j["error"] = error->to_json();
  return j;
}

Endpoint client_origin() { return {"0.0.0.0", 0}; }

namespace {

struct Outbound {
  Endpoint to;
  Message msg;
};

struct RoundContext {
  bool is_sequencer = false;
  Endpoint sequencer;           // node endpoint of the sequencer
  std::vector<Endpoint> peers;  // node endpoints of every live node
};

struct RoundOutput {
  std::vector<Outbound> outbound;
  std::vector<std::pair<std::uint64_t, Submission>> sequenced;
  std::vector<AuthError> rejections;
};

void sequence(SimNode& node, const Submission& sub, const RoundContext& ctx, RoundOutput& out) {
  if (node.sequenced < node.applied) {
    node.sequenced_state = node.local_state;
    node.sequenced = node.applied;
  }
  auto next = poolstate::apply_txn(node.sequenced_state, sub);
  if (auto* error = std::get_if<AuthError>(&next)) {
    out.rejections.push_back(std::move(*error));
    return;
  }
  node.sequenced_state = std::get<PoolState>(std::move(next));
  const auto order = ++node.sequenced;
  out.sequenced.emplace_back(order, sub);
  for (const auto& peer : ctx.peers) out.outbound.push_back({peer, {MessageKind::Ordered, order, sub}});
}

void apply_ordered(SimNode& node, std::uint64_t order, const Submission& sub) {
  if (order <= node.applied) return;
  node.held.emplace(order, sub);
  for (auto it = node.held.find(node.applied + 1); it != node.held.end(); it = node.held.find(node.applied + 1)) {
    auto next = poolstate::apply_txn(node.local_state, it->second);
    if (!poolstate::accepted(next)) {
      throw std::logic_error("node " + node.alias + " cannot apply ordered submission " + std::to_string(it->first));
    }
    node.local_state = std::get<PoolState>(std::move(next));
    node.applied = it->first;
    node.held.erase(it);
  }
}

RoundOutput process_inbox(SimNode& node, const std::vector<Envelope>& inbox, const RoundContext& ctx) {
  RoundOutput out;
  for (const auto& envelope : inbox) {
    const auto& msg = envelope.msg;
    switch (msg.kind) {
      case MessageKind::Request: {
        if (ctx.is_sequencer) {
          sequence(node, msg.sub, ctx, out);
          break;
        }
        auto check = poolstate::apply_txn(node.local_state, msg.sub);
        if (auto* error = std::get_if<AuthError>(&check)) {
          out.rejections.push_back(std::move(*error));
        } else {
          out.outbound.push_back({ctx.sequencer, {MessageKind::Forward, 0, msg.sub}});
        }
        break;
      }
      case MessageKind::Forward:
        if (ctx.is_sequencer) sequence(node, msg.sub, ctx, out);
        break;
      case MessageKind::Ordered:
        apply_ordered(node, msg.order, msg.sub);
        break;
    }
  }
  return out;
}

}  // namespace

SimPool::SimPool(SimPool&&) noexcept = default;
SimPool& SimPool::operator=(SimPool&&) noexcept = default;
SimPool::~SimPool() = default;

SimPool SimPool::spawn(const genesis::GenesisDoc& domain, const genesis::GenesisDoc& pool, SimOptions options) {
  const auto base = poolstate::bootstrap_state(options.network_name, domain, pool, options.strict);

  SimPool sim;
  sim.options_ = std::move(options);
  sim.domain_ = domain;
  sim.pool_ = pool;
  sim.transport_ =
      sim.options_.transport == TransportKind::Tcp ? make_tcp_transport() : make_inproc_transport();
  for (const auto& entry : pool.txns) {
    const auto& node = std::get<genesis::NodeTxn>(entry.txn);
    SimNode sim_node;
    sim_node.alias = node.data.alias;
    sim_node.node_endpoint = node.data.node;
    sim_node.client_endpoint = node.data.client;
    sim_node.local_state = base;
    sim_node.sequenced_state = base;
    sim.add_node(std::move(sim_node));
  }
  return sim;
}

SimPool spawn_pool(const genesis::GenesisDoc& domain, const genesis::GenesisDoc& pool, SimOptions options) {
  return SimPool::spawn(domain, pool, std::move(options));
}

void SimPool::add_node(SimNode node) {
  const auto index = nodes_.size();
  for (const auto& endpoint : {node.node_endpoint, node.client_endpoint}) {
    if (node_by_endpoint_.contains(endpoint)) {
      throw Error(Errc::EndpointInUse, "endpoint " + to_string(endpoint) + " is already bound",
                  {{"endpoint", to_string(endpoint)}});
    }
  }
  node_by_endpoint_[node.node_endpoint] = index;
  node_by_endpoint_[node.client_endpoint] = index;
  transport_->bind(node.node_endpoint);
  transport_->bind(node.client_endpoint);
  nodes_.push_back(std::move(node));
}

std::size_t SimPool::index_of_alias(const std::string& alias) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].alias == alias) return i;
  }
  throw Error(Errc::UnknownNode, "no live node with alias '" + alias + "'", {{"alias", alias}});
}

const SimNode& SimPool::sequencer() const {
  return *std::min_element(nodes_.begin(), nodes_.end(),
                           [](const SimNode& a, const SimNode& b) { return a.alias < b.alias; });
}

const SimNode& SimPool::entry_node() const {
  return *std::max_element(nodes_.begin(), nodes_.end(),
                           [](const SimNode& a, const SimNode& b) { return a.alias < b.alias; });
}

void SimPool::send(const Endpoint& from, const Endpoint& to, Message msg) {
  transport_->send({next_envelope_id_++, from, to, std::move(msg)});
}

void SimPool::settle(SimReport& report, std::optional<AuthError>& rejection) {
  const auto sequencer_index = index_of_alias(sequencer().alias);
  RoundContext base;
  base.sequencer = nodes_[sequencer_index].node_endpoint;
  for (const auto& n : nodes_) base.peers.push_back(n.node_endpoint);

  for (;;) {
    auto envelopes = transport_->collect();
    if (envelopes.empty()) break;
    ++report.rounds_to_converge;
    report.messages_delivered += envelopes.size();

    std::vector<std::vector<Envelope>> inboxes(nodes_.size());
    for (auto& e : envelopes) inboxes[node_by_endpoint_.at(e.to)].push_back(std::move(e));

    std::vector<RoundOutput> outputs(nodes_.size());
    std::vector<std::exception_ptr> failures(nodes_.size());
    const auto run_node = [&](std::size_t i) {
      if (inboxes[i].empty()) return;
      try {
        RoundContext ctx = base;
        ctx.is_sequencer = i == sequencer_index;
        outputs[i] = process_inbox(nodes_[i], inboxes[i], ctx);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    };

    if (options_.schedule == Schedule::OpenMP) {
      const auto n = static_cast<std::ptrdiff_t>(nodes_.size());
#pragma omp parallel for schedule(dynamic)
      for (std::ptrdiff_t i = 0; i < n; ++i) run_node(static_cast<std::size_t>(i));
    } else {
      for (std::size_t i = 0; i < nodes_.size(); ++i) run_node(i);
    }

    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
    // Outputs are merged in node order so envelope ids do not depend on the
    // schedule.
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      for (auto& [order, sub] : outputs[i].sequenced) {
        if (order != ordering_log_.size() + 1) throw std::logic_error("sequencer skipped an ordering position");
        ordering_log_.push_back(std::move(sub));
      }
      if (!rejection && !outputs[i].rejections.empty()) rejection = outputs[i].rejections.front();
      for (auto& out : outputs[i].outbound) send(nodes_[i].node_endpoint, out.to, std::move(out.msg));
    }
  }
}

void SimPool::fill_membership(SimReport& report) const {
  report.aliases.clear();
  report.membership_size.clear();
  for (const auto& n : nodes_) {
    report.aliases.push_back(n.alias);
    report.membership_size.push_back(n.local_state.validators.size());
  }
  report.converged = quiescent() && states_agree();
}

SimReport SimPool::report() const {
  SimReport r;
  fill_membership(r);
  return r;
}

bool SimPool::quiescent() const {
  if (transport_->in_flight() != 0) return false;
  return std::all_of(nodes_.begin(), nodes_.end(), [&](const SimNode& n) {
    return n.held.empty() && n.applied == ordering_log_.size();
  });
}

bool SimPool::states_agree() const {
  return std::all_of(nodes_.begin(), nodes_.end(),
                     [&](const SimNode& n) { return n.local_state == nodes_.front().local_state; });
}

SimReport SimPool::submit(const std::string& target_alias, const Submission& sub) {
  const auto index = index_of_alias(target_alias);
  SimReport report;
  std::optional<AuthError> rejection;
  send(client_origin(), nodes_[index].client_endpoint, {MessageKind::Request, 0, sub});
  settle(report, rejection);
  report.accepted = !rejection.has_value();
  report.error = std::move(rejection);
  fill_membership(report);
  return report;
}

SimReport SimPool::join_new_node(const ParticipantRecord& steward, const ValidatorInfo& validator,
                                 const std::string& sponsor_trustee) {
  for (const auto& endpoint : {validator.node, validator.client}) {
    if (node_by_endpoint_.contains(endpoint)) {
      throw Error(Errc::EndpointInUse, "endpoint " + to_string(endpoint) + " is already used by a live node",
                  {{"endpoint", to_string(endpoint)}});
    }
  }

  SimReport report;
  const auto& entry = entry_node();
  auto dry_run = poolstate::add_node_workflow(entry.local_state, sponsor_trustee, steward, validator);
  if (auto* error = std::get_if<AuthError>(&dry_run)) {
    report.accepted = false;
    report.error = std::move(*error);
    fill_membership(report);
    return report;
  }

  const auto entry_alias = entry.alias;
  for (const auto& sub : poolstate::add_node_submissions(sponsor_trustee, steward, validator)) {
    auto step = submit(entry_alias, sub);
    report.rounds_to_converge += step.rounds_to_converge;
    report.messages_delivered += step.messages_delivered;
    if (!step.accepted) {
      report.accepted = false;
      report.error = std::move(step.error);
      fill_membership(report);
      return report;
    }
  }

  // The newcomer starts from genesis and replays everything ordered so far.
  SimNode newcomer;
  newcomer.alias = validator.alias;
  newcomer.node_endpoint = validator.node;
  newcomer.client_endpoint = validator.client;
  newcomer.local_state = poolstate::replay(options_.network_name, domain_, pool_, ordering_log_, options_.strict);
  newcomer.applied = ordering_log_.size();
  newcomer.sequenced_state = newcomer.local_state;
  newcomer.sequenced = newcomer.applied;
  report.catch_up_steps = ordering_log_.size();
  add_node(std::move(newcomer));

  fill_membership(report);
  return report;
}

SimReport measure_bootstrap(std::size_t pool_size, std::size_t joins) {
  if (pool_size == 0) throw std::invalid_argument("pool_size must be at least 1");
  const auto roster = synthetic::roster(3, pool_size, pool_size == roster::kGenesisStewards);
  const auto domain = genesis::build_domain_genesis(roster);
  const auto pool = genesis::build_pool_genesis(roster);

  SimOptions options;
  options.strict = roster.strict;
  auto sim = SimPool::spawn(domain, pool, options);

  SimReport total;
  for (std::size_t j = 1; j <= joins; ++j) {
    const auto entry = synthetic::steward(pool_size + j);
    auto step = sim.join_new_node(entry.steward, entry.validator, roster.trustees.front().did);
    total.rounds_to_converge += step.rounds_to_converge;
    total.messages_delivered += step.messages_delivered;
    total.catch_up_steps += step.catch_up_steps;
    if (!step.accepted) {
      total.accepted = false;
      total.error = step.error;
      break;
    }
  }
  const auto snapshot = sim.report();
  total.aliases = snapshot.aliases;
  total.membership_size = snapshot.membership_size;
  total.converged = snapshot.converged;
  return total;
}

}  // namespace indyforge::netsim
