// Serial reference vs OpenMP for the batch kernels. Set OMP_NUM_THREADS to
// compare thread counts.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "indyforge/genesis.hpp"
#include "indyforge/keymat.hpp"
#include "indyforge/netsim.hpp"
#include "indyforge/synthetic.hpp"

namespace {

using namespace indyforge;

std::vector<keymat::Seed> make_seeds(std::size_t n) {
  std::mt19937_64 rng(n);
  std::vector<keymat::Seed> seeds;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint8_t> raw(keymat::kSeedSize);
    for (auto& b : raw) b = static_cast<std::uint8_t>(rng());
    seeds.push_back(keymat::Seed::from_bytes(raw));
  }
  return seeds;
}

std::vector<keymat::BlsIdentity> make_pairs(std::size_t n) {
  std::vector<keymat::BlsIdentity> pairs;
  for (const auto& k : keymat::derive_node_keys_serial(make_seeds(n))) pairs.push_back(k.bls);
  return pairs;
}

void BM_DeriveNodeKeysSerial(benchmark::State& state) {
  const auto seeds = make_seeds(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(keymat::derive_node_keys_serial(seeds));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DeriveNodeKeysOpenMP(benchmark::State& state) {
  const auto seeds = make_seeds(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(keymat::derive_node_keys(seeds));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_VerifyPopsSerial(benchmark::State& state) {
  const auto pairs = make_pairs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(keymat::verify_pops_serial(pairs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_VerifyPopsOpenMP(benchmark::State& state) {
  const auto pairs = make_pairs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(keymat::verify_pops(pairs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// A pool of range(0) validators taking 8 node additions.
void run_joins(benchmark::State& state, netsim::Schedule schedule) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto roster = synthetic::roster(3, n, false);
  const auto domain = genesis::build_domain_genesis(roster);
  const auto pool = genesis::build_pool_genesis(roster);
  std::vector<StewardEntry> joiners;
  for (std::size_t j = 1; j <= 8; ++j) joiners.push_back(synthetic::steward(n + j));

  netsim::SimOptions opts;
  opts.strict = false;
  opts.schedule = schedule;
  for (auto _ : state) {
    auto sim = netsim::spawn_pool(domain, pool, opts);
    for (const auto& e : joiners) sim.join_new_node(e.steward, e.validator, roster.trustees.front().did);
    benchmark::DoNotOptimize(sim.report());
  }
}

void BM_NetSimSerial(benchmark::State& state) { run_joins(state, netsim::Schedule::Serial); }
void BM_NetSimOpenMP(benchmark::State& state) { run_joins(state, netsim::Schedule::OpenMP); }

}  // namespace

BENCHMARK(BM_DeriveNodeKeysSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeriveNodeKeysOpenMP)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyPopsSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyPopsOpenMP)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NetSimSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NetSimOpenMP)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
