#include "xmas/eval.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_map>

namespace xmas {

std::string_view to_string(SignalFlag f) {
  switch (f) {
    case SignalFlag::Irdy: return "irdy";
    case SignalFlag::Trdy: return "trdy";
    case SignalFlag::Data: return "data";
  }
  return "?";
}

std::optional<SignalFlag> signal_flag_from(std::string_view s) {
  if (s == "irdy") return SignalFlag::Irdy;
  if (s == "trdy") return SignalFlag::Trdy;
  if (s == "data") return SignalFlag::Data;
  return std::nullopt;
}

std::string to_text(const SignalKey& k, const XmasNetwork& ntk) {
  std::string out = "(";
  out += k.channel < ntk.channels.size() ? ntk.channels[k.channel].id
                                         : "#" + std::to_string(k.channel);
  out += ',';
  out += to_string(k.flag);
  out += ')';
  return out;
}

KeySet KeySet::full(size_t channel_count) {
  KeySet s;
  size_t bits = channel_count * 3;
  s.words_.assign((bits + 63) / 64, ~0ULL);
  if (bits % 64) s.words_.back() = (1ULL << (bits % 64)) - 1;
  s.count_ = bits;
  return s;
}

KeySet KeySet::empty(size_t channel_count) {
  KeySet s;
  s.words_.assign((channel_count * 3 + 63) / 64, 0ULL);
  return s;
}

bool KeySet::contains(size_t channel, SignalFlag f) const {
  size_t i = index_of(channel, f);
  return (words_[i / 64] >> (i % 64)) & 1;
}

void KeySet::insert(size_t channel, SignalFlag f) {
  size_t i = index_of(channel, f);
  uint64_t bit = 1ULL << (i % 64);
  if (!(words_[i / 64] & bit)) {
    words_[i / 64] |= bit;
    ++count_;
  }
}

void KeySet::remove(size_t channel, SignalFlag f) {
  size_t i = index_of(channel, f);
  uint64_t bit = 1ULL << (i % 64);
  if (words_[i / 64] & bit) {
    words_[i / 64] &= ~bit;
    --count_;
  }
}

Ternary switch_route(const Component& c, const DataValue& d) {
  if (is_error(d)) return Ternary::Error;
  if (is_nodata(d)) return Ternary::True;  // no packet falls to output 0
  auto entry = apply_field(0, c, std::get<PacketTag>(d));
  if (!entry) throw std::logic_error("switch " + c.id + " table is not total");
  const int* branch = std::get_if<int>(&*entry);
  if (!branch) throw std::logic_error("switch " + c.id + " table maps to a tag");
  return ternary_of(*branch == 0);
}

namespace {

// Id-to-index resolution done once per evaluation; assumes the network
// validated, so every lookup lands.
struct Resolved {
  const XmasNetwork& ntk;
  std::vector<size_t> chan_init, chan_target;          // channel -> component index
  std::vector<std::vector<size_t>> comp_in, comp_out;  // component -> channel indices

  explicit Resolved(const XmasNetwork& n) : ntk(n) {
    std::unordered_map<std::string_view, size_t> comp_idx, chan_idx;
    for (size_t i = 0; i < n.components.size(); ++i) comp_idx.emplace(n.components[i].id, i);
    for (size_t i = 0; i < n.channels.size(); ++i) chan_idx.emplace(n.channels[i].id, i);
    chan_init.resize(n.channels.size());
    chan_target.resize(n.channels.size());
    for (size_t i = 0; i < n.channels.size(); ++i) {
      chan_init[i] = comp_idx.at(n.channels[i].init);
      chan_target[i] = comp_idx.at(n.channels[i].target);
    }
    comp_in.resize(n.components.size());
    comp_out.resize(n.components.size());
    for (size_t i = 0; i < n.components.size(); ++i) {
      for (const std::string& id : n.components[i].ins) comp_in[i].push_back(chan_idx.at(id));
      for (const std::string& id : n.components[i].outs) comp_out[i].push_back(chan_idx.at(id));
    }
  }

  const Component& comp(size_t i) const { return ntk.components[i]; }
};

PacketTag function_apply(const Component& c, const PacketTag& tag) {
  auto entry = apply_field(0, c, tag);
  if (!entry) throw std::logic_error("function " + c.id + " table is not total");
  const PacketTag* out = std::get_if<PacketTag>(&*entry);
  if (!out) throw std::logic_error("function " + c.id + " table maps to a branch");
  return *out;
}

// Trdy contribution of a receiving resource (queue or sink): the packet on
// the wire paired with the resource, reachable exactly when it can receive.
// An Error on the data wire poisons the whole value.
SignalValue receiver_result(const Component& resource, bool ready, const DataValue& d) {
  if (is_error(d)) return CycleError{};
  std::optional<PacketTag> pkt;
  if (!is_nodata(d)) pkt = std::get<PacketTag>(d);
  std::vector<RoutingEntry> routing{{resource.id, pkt}};
  std::vector<RoutingEntry> transfer;
  if (ready) transfer = routing;
  return make_result(ternary_of(ready), std::move(routing), std::move(transfer));
}

// Reference evaluator. The unvisited set is passed by value down every edge
// of the call tree: each call removes its own key and hands the same reduced
// set to all nested calls, so only true dependency cycles are rejected.
struct RefEval {
  const Resolved& r;
  const NetworkState& st;
  EvalStats* stats;

  void note(int depth) {
    if (!stats) return;
    ++stats->calls;
    stats->max_depth = std::max(stats->max_depth, depth);
  }

  DataValue data(size_t ch, const KeySet& unvisited, int depth) {
    note(depth);
    if (!unvisited.contains(ch, SignalFlag::Data)) return CycleError{};
    KeySet next = unvisited;
    next.remove(ch, SignalFlag::Data);
    const Component& init = r.comp(r.chan_init[ch]);
    switch (init.type) {
      case ComponentType::Queue: return next_data(init, st);
      case ComponentType::Source: {
        auto pkt = source_packet(init, st);
        if (pkt) return *pkt;
        return NoData{};
      }
      case ComponentType::Switch: return data(r.comp_in[r.chan_init[ch]][0], next, depth + 1);
      case ComponentType::Function: {
        DataValue d = data(r.comp_in[r.chan_init[ch]][0], next, depth + 1);
        if (is_error(d) || is_nodata(d)) return d;
        return function_apply(init, std::get<PacketTag>(d));
      }
      case ComponentType::Sink: break;
    }
    throw std::logic_error("sink cannot initiate a channel");
  }

  SignalValue wire(SignalFlag flag, size_t ch, const KeySet& unvisited, int depth) {
    note(depth);
    if (!unvisited.contains(ch, flag)) return CycleError{};
    KeySet next = unvisited;
    next.remove(ch, flag);
    if (flag == SignalFlag::Irdy) {
      size_t ci = r.chan_init[ch];
      const Component& init = r.comp(ci);
      switch (init.type) {
        case ComponentType::Queue:
        case ComponentType::Source:
          return make_result(ternary_of(can_send(init, st)), {}, {});
        case ComponentType::Function:
          return wire(SignalFlag::Irdy, r.comp_in[ci][0], next, depth + 1);
        case ComponentType::Switch: {
          // Output index decides which side of the routing guard applies.
          size_t out = r.comp_out[ci][0] == ch ? 0 : 1;
          Ternary guard = switch_route(init, data(r.comp_in[ci][0], next, depth + 1));
          if (out == 1) guard = signal_not(guard);
          return signal_and(wire(SignalFlag::Irdy, r.comp_in[ci][0], next, depth + 1),
                            make_result(guard, {}, {}));
        }
        case ComponentType::Sink: break;
      }
      throw std::logic_error("sink cannot initiate a channel");
    }
    // trdy
    size_t ti = r.chan_target[ch];
    const Component& target = r.comp(ti);
    switch (target.type) {
      case ComponentType::Queue:
        return receiver_result(target, can_receive(target, st), data(ch, next, depth + 1));
      case ComponentType::Sink:
        return receiver_result(target, can_receive(target, st), data(ch, next, depth + 1));
      case ComponentType::Function:
        return wire(SignalFlag::Trdy, r.comp_out[ti][0], next, depth + 1);
      case ComponentType::Switch: {
        size_t a = r.comp_out[ti][0], b = r.comp_out[ti][1];
        return signal_or(signal_and(wire(SignalFlag::Irdy, a, next, depth + 1),
                                    wire(SignalFlag::Trdy, a, next, depth + 1)),
                         signal_and(wire(SignalFlag::Irdy, b, next, depth + 1),
                                    wire(SignalFlag::Trdy, b, next, depth + 1)));
      }
      case ComponentType::Source: break;
    }
    throw std::logic_error("source cannot be targeted by a channel");
  }
};

// Batch evaluator: white/grey/black per key. Grey means on the active path,
// so hitting grey closes a combinational cycle; black values are reused.
struct MemoEval {
  const Resolved& r;
  const NetworkState& st;
  SignalAssignment out;
  enum : uint8_t { White, Grey, Black };
  std::vector<uint8_t> color;
  std::vector<SignalKey> stack;

  MemoEval(const Resolved& rr, const NetworkState& s) : r(rr), st(s) {
    size_t n = r.ntk.channels.size();
    out.irdy.assign(n, CycleError{});
    out.trdy.assign(n, CycleError{});
    out.data.assign(n, CycleError{});
    color.assign(n * 3, White);
  }

  void record_cycle(const SignalKey& k) {
    auto it = std::find(stack.rbegin(), stack.rend(), k);
    size_t from = stack.size() - 1 - static_cast<size_t>(it - stack.rbegin());
    for (size_t i = from; i < stack.size(); ++i)
      if (std::find(out.cycle_keys.begin(), out.cycle_keys.end(), stack[i]) ==
          out.cycle_keys.end())
        out.cycle_keys.push_back(stack[i]);
  }

  DataValue data(size_t ch) {
    size_t idx = KeySet::index_of(ch, SignalFlag::Data);
    if (color[idx] == Black) return out.data[ch];
    if (color[idx] == Grey) {
      record_cycle({ch, SignalFlag::Data});
      return CycleError{};
    }
    color[idx] = Grey;
    stack.push_back({ch, SignalFlag::Data});
    DataValue v = compute_data(ch);
    stack.pop_back();
    color[idx] = Black;
    out.data[ch] = v;
    return v;
  }

  DataValue compute_data(size_t ch) {
    const Component& init = r.comp(r.chan_init[ch]);
    switch (init.type) {
      case ComponentType::Queue: return next_data(init, st);
      case ComponentType::Source: {
        auto pkt = source_packet(init, st);
        if (pkt) return *pkt;
        return NoData{};
      }
      case ComponentType::Switch: return data(r.comp_in[r.chan_init[ch]][0]);
      case ComponentType::Function: {
        DataValue d = data(r.comp_in[r.chan_init[ch]][0]);
        if (is_error(d) || is_nodata(d)) return d;
        return function_apply(init, std::get<PacketTag>(d));
      }
      case ComponentType::Sink: break;
    }
    throw std::logic_error("sink cannot initiate a channel");
  }

  SignalValue wire(SignalFlag flag, size_t ch) {
    size_t idx = KeySet::index_of(ch, flag);
    auto& slot = flag == SignalFlag::Irdy ? out.irdy[ch] : out.trdy[ch];
    if (color[idx] == Black) return slot;
    if (color[idx] == Grey) {
      record_cycle({ch, flag});
      return CycleError{};
    }
    color[idx] = Grey;
    stack.push_back({ch, flag});
    SignalValue v = compute_wire(flag, ch);
    stack.pop_back();
    color[idx] = Black;
    slot = v;
    return v;
  }

  SignalValue compute_wire(SignalFlag flag, size_t ch) {
    if (flag == SignalFlag::Irdy) {
      size_t ci = r.chan_init[ch];
      const Component& init = r.comp(ci);
      switch (init.type) {
        case ComponentType::Queue:
        case ComponentType::Source:
          return make_result(ternary_of(can_send(init, st)), {}, {});
        case ComponentType::Function: return wire(SignalFlag::Irdy, r.comp_in[ci][0]);
        case ComponentType::Switch: {
          size_t out_port = r.comp_out[ci][0] == ch ? 0 : 1;
          Ternary guard = switch_route(init, data(r.comp_in[ci][0]));
          if (out_port == 1) guard = signal_not(guard);
          return signal_and(wire(SignalFlag::Irdy, r.comp_in[ci][0]),
                            make_result(guard, {}, {}));
        }
        case ComponentType::Sink: break;
      }
      throw std::logic_error("sink cannot initiate a channel");
    }
    size_t ti = r.chan_target[ch];
    const Component& target = r.comp(ti);
    switch (target.type) {
      case ComponentType::Queue:
      case ComponentType::Sink:
        return receiver_result(target, can_receive(target, st), data(ch));
      case ComponentType::Function: return wire(SignalFlag::Trdy, r.comp_out[ti][0]);
      case ComponentType::Switch: {
        size_t a = r.comp_out[ti][0], b = r.comp_out[ti][1];
        return signal_or(
            signal_and(wire(SignalFlag::Irdy, a), wire(SignalFlag::Trdy, a)),
            signal_and(wire(SignalFlag::Irdy, b), wire(SignalFlag::Trdy, b)));
      }
      case ComponentType::Source: break;
    }
    throw std::logic_error("source cannot be targeted by a channel");
  }
};

}  // namespace

SignalValue eval_wire(const XmasNetwork& ntk, const NetworkState& st, SignalFlag flag,
                      const Channel& ch, const KeySet* unvisited, EvalStats* stats) {
  if (flag == SignalFlag::Data) throw std::invalid_argument("use eval_data for the data wire");
  Resolved r(ntk);
  RefEval ev{r, st, stats};
  KeySet full = KeySet::full(ntk.channels.size());
  return ev.wire(flag, channel_index(ntk, ch), unvisited ? *unvisited : full, 1);
}

DataValue eval_data(const XmasNetwork& ntk, const NetworkState& st, const Channel& ch,
                    const KeySet* unvisited, EvalStats* stats) {
  Resolved r(ntk);
  RefEval ev{r, st, stats};
  KeySet full = KeySet::full(ntk.channels.size());
  return ev.data(channel_index(ntk, ch), unvisited ? *unvisited : full, 1);
}

SignalAssignment eval_all(const XmasNetwork& ntk, const NetworkState& st) {
  Resolved r(ntk);
  MemoEval ev(r, st);
  for (size_t ch = 0; ch < ntk.channels.size(); ++ch) {
    ev.wire(SignalFlag::Irdy, ch);
    ev.wire(SignalFlag::Trdy, ch);
    ev.data(ch);
  }
  std::sort(ev.out.cycle_keys.begin(), ev.out.cycle_keys.end());
  return std::move(ev.out);
}

}  // namespace xmas
