#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "xmas/eval.hpp"
#include "xmas/model.hpp"
#include "xmas/state.hpp"

namespace xmas {

/// One channel that fired (irdy and trdy both high) and the packet it moved.
struct FiredTransfer {
  std::string channel;
  PacketTag packet;

  bool operator==(const FiredTransfer&) const = default;
};

struct TraceEvent {
  uint64_t cycle = 0;
  std::vector<FiredTransfer> fired;  // in channel order
  // queue occupancy after the cycle, in network component order
  std::vector<std::pair<std::string, std::vector<PacketTag>>> queues_after;

  bool operator==(const TraceEvent&) const = default;
};

/// A combinational cycle surfaced while evaluating; names the keys on it.
struct EvalError {
  uint64_t cycle = 0;
  std::vector<SignalKey> keys;
};

struct StepSuccess {
  NetworkState state;
  TraceEvent event;
};

/// One synchronous cycle: evaluate every signal against the pre-state, fire
/// every channel whose irdy and trdy are both high, then advance the cycle
/// counter and redraw seeded oracles. Precondition: validated network.
std::variant<StepSuccess, EvalError> step(const XmasNetwork&, const NetworkState&);

/// Sequential-phase effects of the given transfers only (no cycle advance).
/// The result does not depend on the order of the span; queue capacity is
/// re-checked after everything applied.
NetworkState apply_transfers(const XmasNetwork&, const NetworkState&,
                             std::span<const FiredTransfer>);

/// Cycle counter increment plus the per-cycle draw of seeded oracles.
NetworkState advance_cycle(const XmasNetwork&, NetworkState);

enum class Quiescence { Active, Drained, Stuck };

std::string_view to_string(Quiescence);

/// Classifies the state without mutating it. Stuck: nothing fires although a
/// queue holds packets or a scripted source still has some; since nothing
/// changes, such a state reproduces itself forever. Drained: queues empty and
/// every source is a finished script. Anything else is Active. Throws
/// std::invalid_argument when a seeded oracle is present, because a random
/// oracle can wake the network at any cycle.
std::variant<Quiescence, EvalError> detect_quiescence(const XmasNetwork&, const NetworkState&);

enum class RunStatus { Drained, MaxCycles, Stuck, Error };

std::string_view to_string(RunStatus);

struct RunResult {
  RunStatus status = RunStatus::MaxCycles;
  std::vector<TraceEvent> trace;
  NetworkState final_state;
  std::optional<uint64_t> stall_cycle;  // set for Stuck
  std::vector<SignalKey> error_keys;    // set for Error
};

/// Steps until quiescence (deterministic oracles only) or max_cycles.
RunResult run(const XmasNetwork&, NetworkState initial, uint64_t max_cycles);

/// Multiset packet balance over a trace: initial queue contents plus source
/// injections plus function retag outputs must equal final queue contents
/// plus sink consumptions plus function retag inputs. Function applications
/// are recovered from the fired records of the function's two channels.
bool conservation_check(const XmasNetwork&, std::span<const TraceEvent>,
                        const NetworkState& initial, const NetworkState& final_state);

/// Canonical one-line rendering: cycle=N fired=[(c0,red)] queues={q0:[red]}
std::string trace_line(const TraceEvent&);

}  // namespace xmas
