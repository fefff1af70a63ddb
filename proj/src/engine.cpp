#include "xmas/engine.hpp"

#include <map>
#include <stdexcept>

namespace xmas {

std::string_view to_string(Quiescence q) {
  switch (q) {
    case Quiescence::Active: return "active";
    case Quiescence::Drained: return "drained";
    case Quiescence::Stuck: return "stuck";
  }
  return "?";
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Drained: return "drained";
    case RunStatus::MaxCycles: return "active";
    case RunStatus::Stuck: return "stuck";
    case RunStatus::Error: return "error";
  }
  return "?";
}

namespace {

std::vector<FiredTransfer> fired_transfers(const XmasNetwork& ntk, const SignalAssignment& a) {
  std::vector<FiredTransfer> fired;
  for (size_t i = 0; i < ntk.channels.size(); ++i) {
    if (is_error(a.irdy[i]) || is_error(a.trdy[i])) continue;
    if (!as_triple(a.irdy[i]).wire || !as_triple(a.trdy[i]).wire) continue;
    // a high irdy implies the initiating resource offered a packet
    const PacketTag* tag = std::get_if<PacketTag>(&a.data[i]);
    if (!tag)
      throw std::logic_error("channel " + ntk.channels[i].id + " fired without a packet");
    fired.push_back({ntk.channels[i].id, *tag});
  }
  return fired;
}

std::vector<std::pair<std::string, std::vector<PacketTag>>> queue_snapshot(
    const XmasNetwork& ntk, const NetworkState& st) {
  std::vector<std::pair<std::string, std::vector<PacketTag>>> out;
  for (const Component& c : ntk.components) {
    if (c.type != ComponentType::Queue) continue;
    const auto& q = st.queues.at(c.id);
    out.emplace_back(c.id, std::vector<PacketTag>(q.begin(), q.end()));
  }
  return out;
}

}  // namespace

NetworkState apply_transfers(const XmasNetwork& ntk, const NetworkState& st,
                             std::span<const FiredTransfer> fired) {
  NetworkState ns = st;
  for (const FiredTransfer& f : fired) {
    const Channel* ch = find_channel(ntk, f.channel);
    if (!ch) throw std::logic_error("fired unknown channel " + f.channel);
    const Component& init = get_init_component(ntk, *ch);
    const Component& target = get_target_component(ntk, *ch);

    if (init.type == ComponentType::Queue) {
      auto& q = ns.queues.at(init.id);
      if (q.empty()) throw std::logic_error("queue " + init.id + " fired while empty");
      q.pop_front();
    } else if (init.type == ComponentType::Source) {
      SourceOracle& o = ns.sources.at(init.id);
      if (o.mode == OracleMode::Scripted) ++o.position;
    }

    if (target.type == ComponentType::Queue) {
      ns.queues.at(target.id).push_back(f.packet);
    } else if (target.type == ComponentType::Sink) {
      SinkOracle& o = ns.sinks.at(target.id);
      o.consumed.push_back(f.packet);
      if (o.mode == OracleMode::Scripted) ++o.position;
    }
  }
  // The trdy guard makes overflow impossible; transient excess during the
  // loop above is fine, the end of the cycle is what counts.
  for (const Component& c : ntk.components)
    if (c.type == ComponentType::Queue &&
        ns.queues.at(c.id).size() > static_cast<size_t>(c.capacity))
      throw std::logic_error("queue " + c.id + " exceeded its capacity");
  return ns;
}

NetworkState advance_cycle(const XmasNetwork& ntk, NetworkState st) {
  ++st.cycle;
  redraw_seeded(ntk, st);
  return st;
}

std::variant<StepSuccess, EvalError> step(const XmasNetwork& ntk, const NetworkState& st) {
  SignalAssignment a = eval_all(ntk, st);
  if (a.has_cycle()) return EvalError{st.cycle, a.cycle_keys};
  std::vector<FiredTransfer> fired = fired_transfers(ntk, a);
  NetworkState ns = apply_transfers(ntk, st, fired);
  TraceEvent ev{st.cycle, std::move(fired), queue_snapshot(ntk, ns)};
  return StepSuccess{advance_cycle(ntk, std::move(ns)), std::move(ev)};
}

std::variant<Quiescence, EvalError> detect_quiescence(const XmasNetwork& ntk,
                                                      const NetworkState& st) {
  if (has_seeded_oracle(st))
    throw std::invalid_argument("quiescence is undecidable with seeded oracles");
  SignalAssignment a = eval_all(ntk, st);
  if (a.has_cycle()) return EvalError{st.cycle, a.cycle_keys};

  bool fires = false;
  for (size_t i = 0; i < ntk.channels.size() && !fires; ++i)
    fires = as_triple(a.irdy[i]).wire && as_triple(a.trdy[i]).wire;

  bool queues_empty = true;
  for (const auto& [id, q] : st.queues) queues_empty = queues_empty && q.empty();
  bool scripts_pending = false;
  bool all_scripts_done = true;
  for (const auto& [id, o] : st.sources) {
    scripts_pending = scripts_pending || scripted_pending(o);
    all_scripts_done =
        all_scripts_done && o.mode == OracleMode::Scripted && !scripted_pending(o);
  }

  if (queues_empty && all_scripts_done) return Quiescence::Drained;
  if (!fires && (!queues_empty || scripts_pending)) return Quiescence::Stuck;
  return Quiescence::Active;
}

RunResult run(const XmasNetwork& ntk, NetworkState initial, uint64_t max_cycles) {
  RunResult rr;
  NetworkState st = std::move(initial);
  const bool deterministic = !has_seeded_oracle(st);

  for (uint64_t i = 0; i < max_cycles; ++i) {
    if (deterministic) {
      auto q = detect_quiescence(ntk, st);
      if (const EvalError* e = std::get_if<EvalError>(&q)) {
        rr.status = RunStatus::Error;
        rr.error_keys = e->keys;
        rr.final_state = std::move(st);
        return rr;
      }
      if (std::get<Quiescence>(q) == Quiescence::Drained) {
        rr.status = RunStatus::Drained;
        rr.final_state = std::move(st);
        return rr;
      }
      if (std::get<Quiescence>(q) == Quiescence::Stuck) {
        rr.status = RunStatus::Stuck;
        rr.stall_cycle = st.cycle;
        rr.final_state = std::move(st);
        return rr;
      }
    }
    auto s = step(ntk, st);
    if (const EvalError* e = std::get_if<EvalError>(&s)) {
      rr.status = RunStatus::Error;
      rr.error_keys = e->keys;
      rr.final_state = std::move(st);
      return rr;
    }
    StepSuccess& ok = std::get<StepSuccess>(s);
    rr.trace.push_back(std::move(ok.event));
    st = std::move(ok.state);
  }

  rr.status = RunStatus::MaxCycles;
  if (deterministic) {
    auto q = detect_quiescence(ntk, st);
    if (const Quiescence* v = std::get_if<Quiescence>(&q); v && *v == Quiescence::Drained)
      rr.status = RunStatus::Drained;
  }
  rr.final_state = std::move(st);
  return rr;
}

bool conservation_check(const XmasNetwork& ntk, std::span<const TraceEvent> trace,
                        const NetworkState& initial, const NetworkState& final_state) {
  std::map<PacketTag, long> supplied, absorbed;
  for (const auto& [id, q] : initial.queues)
    for (const PacketTag& t : q) ++supplied[t];
  for (const auto& [id, q] : final_state.queues)
    for (const PacketTag& t : q) ++absorbed[t];

  for (const TraceEvent& ev : trace) {
    for (const FiredTransfer& f : ev.fired) {
      const Channel* ch = find_channel(ntk, f.channel);
      if (!ch) return false;
      const Component& init = get_init_component(ntk, *ch);
      const Component& target = get_target_component(ntk, *ch);
      // A function rewrites the tag in flight: its input record balances the
      // original, its output record supplies the new one.
      if (init.type == ComponentType::Source) ++supplied[f.packet];
      if (init.type == ComponentType::Function) ++supplied[f.packet];
      if (target.type == ComponentType::Sink) ++absorbed[f.packet];
      if (target.type == ComponentType::Function) ++absorbed[f.packet];
    }
  }
  return supplied == absorbed;
}

std::string trace_line(const TraceEvent& ev) {
  std::string out = "cycle=" + std::to_string(ev.cycle) + " fired=[";
  for (size_t i = 0; i < ev.fired.size(); ++i) {
    if (i) out += ',';
    out += '(' + ev.fired[i].channel + ',' + ev.fired[i].packet + ')';
  }
  out += "] queues={";
  for (size_t i = 0; i < ev.queues_after.size(); ++i) {
    if (i) out += ',';
    out += ev.queues_after[i].first + ":[";
    const auto& tags = ev.queues_after[i].second;
    for (size_t j = 0; j < tags.size(); ++j) {
      if (j) out += ',';
      out += tags[j];
    }
    out += ']';
  }
  out += '}';
  return out;
}

}  // namespace xmas
