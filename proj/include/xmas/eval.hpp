#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xmas/model.hpp"
#include "xmas/signal.hpp"
#include "xmas/state.hpp"

namespace xmas {

enum class SignalFlag : unsigned char { Irdy, Trdy, Data };

std::string_view to_string(SignalFlag);
std::optional<SignalFlag> signal_flag_from(std::string_view);

/// One signal of one channel.
struct SignalKey {
  size_t channel = 0;  // index into network.channels
  SignalFlag flag = SignalFlag::Irdy;

  bool operator==(const SignalKey&) const = default;
  bool operator<(const SignalKey& o) const {
    if (channel != o.channel) return channel < o.channel;
    return flag < o.flag;
  }
};

std::string to_text(const SignalKey&, const XmasNetwork&);

/// Set of signal keys still allowed on the current evaluation path. Every
/// nested call removes its own key, so the set size bounds the recursion;
/// sibling calls receive the same reduced set.
class KeySet {
 public:
  KeySet() = default;
  static KeySet full(size_t channel_count);
  static KeySet empty(size_t channel_count);

  static size_t index_of(size_t channel, SignalFlag f) {
    return channel * 3 + static_cast<size_t>(f);
  }

  bool contains(size_t channel, SignalFlag f) const;
  void insert(size_t channel, SignalFlag f);
  void remove(size_t channel, SignalFlag f);
  size_t size() const { return count_; }

 private:
  std::vector<uint64_t> words_;
  size_t count_ = 0;
};

/// Routing decision of a switch for a data value: True routes to output 0,
/// False to output 1. A missing packet falls to output 0; Error passes
/// through.
Ternary switch_route(const Component&, const DataValue&);

struct EvalStats {
  int max_depth = 0;
  long calls = 0;
};

/// Reference evaluator for one irdy/trdy wire, threading the unvisited set
/// exactly as written: revisiting a key on the current path yields Error.
/// Pass no set to start from the full one. Precondition: validated network.
SignalValue eval_wire(const XmasNetwork&, const NetworkState&, SignalFlag, const Channel&,
                      const KeySet* unvisited = nullptr, EvalStats* = nullptr);

/// Reference evaluator for one data wire.
DataValue eval_data(const XmasNetwork&, const NetworkState&, const Channel&,
                    const KeySet* unvisited = nullptr, EvalStats* = nullptr);

/// Every signal of every channel, one value each.
struct SignalAssignment {
  std::vector<SignalValue> irdy, trdy;  // by channel index
  std::vector<DataValue> data;
  std::vector<SignalKey> cycle_keys;  // keys on detected combinational cycles

  bool has_cycle() const { return !cycle_keys.empty(); }
  const SignalValue& wire(size_t channel, SignalFlag f) const {
    return f == SignalFlag::Irdy ? irdy[channel] : trdy[channel];
  }
};

/// Batch evaluator: memoizes each key once and marks keys on the active path,
/// so a revisit is recognized as a combinational cycle from any entry point.
/// Agrees with the reference evaluator on every key (tested, not assumed).
/// Precondition: validated network.
SignalAssignment eval_all(const XmasNetwork&, const NetworkState&);

}  // namespace xmas
