#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "xmas/model.hpp"
#include "xmas/signal.hpp"

namespace xmas {

/// Oracle behaviours. Scripted and Silent sources and Scripted and
/// AlwaysReady sinks are deterministic; Seeded draws from a named PRNG
/// (mt19937_64 over a splitmix64-mixed substream seed) once per cycle.
enum class OracleMode { Scripted, Seeded, AlwaysReady, Silent };

std::string_view to_string(OracleMode);
std::optional<OracleMode> oracle_mode_from(std::string_view);

struct SourceOracle {
  OracleMode mode = OracleMode::Silent;
  std::vector<PacketTag> script;  // packets to inject, in order
  size_t position = 0;            // advances only when the packet transfers
  double probability = 0.5;       // Seeded: chance of offering a packet
  uint64_t seed = 0;
  std::mt19937_64 rng{0};
  bool offering = false;  // Seeded: this cycle's draw
  PacketTag offer;

  bool operator==(const SourceOracle&) const = default;
};

struct SinkOracle {
  OracleMode mode = OracleMode::AlwaysReady;
  std::vector<bool> script;  // per-consumption accept flags; exhausted reads false
  size_t position = 0;       // advances only when a packet is consumed
  double probability = 0.5;  // Seeded: chance of being ready
  uint64_t seed = 0;
  std::mt19937_64 rng{0};
  bool ready_draw = false;  // Seeded: this cycle's draw
  std::vector<PacketTag> consumed;

  bool operator==(const SinkOracle&) const = default;
};

/// Mutable half of a simulation: queue contents plus oracle positions,
/// keyed by component id. The network itself stays immutable.
struct NetworkState {
  std::map<std::string, std::deque<PacketTag>> queues;
  std::map<std::string, SourceOracle> sources;
  std::map<std::string, SinkOracle> sinks;
  uint64_t cycle = 0;

  bool operator==(const NetworkState&) const = default;
};

/// Empty queues, silent sources, always-ready sinks, cycle 0.
NetworkState initial_state(const XmasNetwork&);

/// Whether the resource on the sending side has a packet to offer.
/// Precondition: c is a Queue or Source (throws std::logic_error otherwise).
bool can_send(const Component& c, const NetworkState&);

/// Whether the resource on the receiving side accepts a packet this cycle.
/// Precondition: c is a Queue or Sink (throws std::logic_error otherwise).
bool can_receive(const Component& c, const NetworkState&);

/// Front of the queue, or NoData when empty. Precondition: c is a Queue.
DataValue next_data(const Component& c, const NetworkState&);

/// The packet a source offers this cycle, if any. Precondition: c is a Source.
std::optional<PacketTag> source_packet(const Component& c, const NetworkState&);

bool scripted_pending(const SourceOracle&);
bool has_seeded_oracle(const NetworkState&);

/// Seeds every Seeded oracle's generator from its own `seed` field (substream
/// by component id) and draws the cycle-0 values. Call after building a state
/// whose oracle seeds were assigned externally.
void init_seeded(const XmasNetwork&, NetworkState&);

/// Overwrites every Seeded oracle's seed with `base`, then init_seeded.
void reseed_oracles(const XmasNetwork&, NetworkState&, uint64_t base);

/// One draw for every Seeded oracle, in network component order. Runs once
/// per cycle regardless of firing.
void redraw_seeded(const XmasNetwork&, NetworkState&);

}  // namespace xmas
