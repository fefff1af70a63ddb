#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "xmas/eval.hpp"
#include "xmas/model.hpp"
#include "xmas/state.hpp"

namespace xmas {

/// The four guarantees every evaluated network must exhibit, checked over the
/// full signal assignment of a state. Error-valued signals carry no routing
/// claim and are skipped.
enum class Obligation {
  RoutingNonEmpty,        // trdy: at least one potential destination
  TargetsAreResources,    // irdy+trdy: every destination is queue/source/sink
  TransferSubsetRouting,  // irdy+trdy: transfer within routing, set semantics
  TransferAvailable,      // trdy: every transfer destination can receive now
};

std::string_view to_string(Obligation);

struct ObligationWitness {
  SignalKey key;
  std::string channel_id;
  std::string value_text;
};

struct ObligationReport {
  Obligation obligation = Obligation::RoutingNonEmpty;
  bool passed = true;
  size_t checked = 0;  // signals inspected
  std::optional<ObligationWitness> witness;
};

/// Core predicate over a precomputed assignment; lets tests feed corrupted
/// assignments to prove the checks can fail.
ObligationReport check_obligation(Obligation, const XmasNetwork&, const NetworkState&,
                                  const SignalAssignment&);

ObligationReport check_routing_nonempty(const XmasNetwork&, const NetworkState&);
ObligationReport check_targets_are_resources(const XmasNetwork&, const NetworkState&);
ObligationReport check_transfer_subset(const XmasNetwork&, const NetworkState&);
ObligationReport check_transfer_available(const XmasNetwork&, const NetworkState&);

std::array<ObligationReport, 4> check_all_obligations(const XmasNetwork&, const NetworkState&);

struct GenParams {
  uint64_t seed = 0;
  size_t min_components = 3;
  size_t max_components = 12;
  size_t alphabet_size = 2;  // capped at the built-in tag pool (8)
  int min_capacity = 1;
  int max_capacity = 3;
  /// Restricts switch/function wiring to a topological order so no
  /// combinational cycle can form; edges with a queue, source or sink
  /// endpoint stay unrestricted because resources cut combinational paths.
  bool acyclic_only = true;
};

/// Grows a network from random port-compatible wiring until every port is
/// connected; the result always validates. Deterministic per seed.
XmasNetwork gen_random_network(const GenParams&);

enum class StateFill { Random, AllEmpty, AllFull };

/// Random deterministic-oracle state: queue fills up to capacity, scripted
/// or silent sources, scripted or always-ready sinks. Deterministic per seed.
NetworkState gen_random_state(const XmasNetwork&, uint64_t seed, StateFill = StateFill::Random);

}  // namespace xmas
