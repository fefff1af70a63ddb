#include "xmas/state.hpp"

#include <stdexcept>

#include "xmas/rng.hpp"

namespace xmas {

std::string_view to_string(OracleMode m) {
  switch (m) {
    case OracleMode::Scripted: return "scripted";
    case OracleMode::Seeded: return "seeded";
    case OracleMode::AlwaysReady: return "always_ready";
    case OracleMode::Silent: return "silent";
  }
  return "?";
}

std::optional<OracleMode> oracle_mode_from(std::string_view s) {
  if (s == "scripted") return OracleMode::Scripted;
  if (s == "seeded") return OracleMode::Seeded;
  if (s == "always_ready") return OracleMode::AlwaysReady;
  if (s == "silent") return OracleMode::Silent;
  return std::nullopt;
}

NetworkState initial_state(const XmasNetwork& ntk) {
  NetworkState st;
  for (const Component& c : ntk.components) {
    switch (c.type) {
      case ComponentType::Queue: st.queues[c.id]; break;
      case ComponentType::Source: st.sources[c.id]; break;
      case ComponentType::Sink: st.sinks[c.id]; break;
      default: break;
    }
  }
  return st;
}

bool scripted_pending(const SourceOracle& o) {
  return o.mode == OracleMode::Scripted && o.position < o.script.size();
}

bool can_send(const Component& c, const NetworkState& st) {
  if (c.type == ComponentType::Queue) return !st.queues.at(c.id).empty();
  if (c.type == ComponentType::Source) {
    const SourceOracle& o = st.sources.at(c.id);
    switch (o.mode) {
      case OracleMode::Scripted: return scripted_pending(o);
      case OracleMode::Seeded: return o.offering;
      case OracleMode::Silent: return false;
      default: throw std::logic_error("source " + c.id + " has a sink oracle mode");
    }
  }
  throw std::logic_error("can_send applies to queues and sources, not " +
                         std::string(to_string(c.type)));
}

bool can_receive(const Component& c, const NetworkState& st) {
  if (c.type == ComponentType::Queue)
    return st.queues.at(c.id).size() < static_cast<size_t>(c.capacity);
  if (c.type == ComponentType::Sink) {
    const SinkOracle& o = st.sinks.at(c.id);
    switch (o.mode) {
      case OracleMode::AlwaysReady: return true;
      case OracleMode::Scripted: return o.position < o.script.size() && o.script[o.position];
      case OracleMode::Seeded: return o.ready_draw;
      default: throw std::logic_error("sink " + c.id + " has a source oracle mode");
    }
  }
  throw std::logic_error("can_receive applies to queues and sinks, not " +
                         std::string(to_string(c.type)));
}

DataValue next_data(const Component& c, const NetworkState& st) {
  if (c.type != ComponentType::Queue)
    throw std::logic_error("next_data applies to queues, not " + std::string(to_string(c.type)));
  const auto& q = st.queues.at(c.id);
  if (q.empty()) return NoData{};
  return q.front();
}

std::optional<PacketTag> source_packet(const Component& c, const NetworkState& st) {
  if (c.type != ComponentType::Source)
    throw std::logic_error("source_packet applies to sources, not " +
                           std::string(to_string(c.type)));
  const SourceOracle& o = st.sources.at(c.id);
  switch (o.mode) {
    case OracleMode::Scripted:
      if (o.position < o.script.size()) return o.script[o.position];
      return std::nullopt;
    case OracleMode::Seeded:
      if (o.offering) return o.offer;
      return std::nullopt;
    case OracleMode::Silent: return std::nullopt;
    default: throw std::logic_error("source " + c.id + " has a sink oracle mode");
  }
}

bool has_seeded_oracle(const NetworkState& st) {
  for (const auto& [id, o] : st.sources)
    if (o.mode == OracleMode::Seeded) return true;
  for (const auto& [id, o] : st.sinks)
    if (o.mode == OracleMode::Seeded) return true;
  return false;
}

namespace {

void draw_source(const XmasNetwork& ntk, SourceOracle& o) {
  o.offering = rand_unit(o.rng) < o.probability;
  if (o.offering && !ntk.alphabet.empty())
    o.offer = ntk.alphabet[rand_below(o.rng, ntk.alphabet.size())];
  else
    o.offering = false;  // nothing to offer from an empty alphabet
}

}  // namespace

void init_seeded(const XmasNetwork& ntk, NetworkState& st) {
  for (const Component& c : ntk.components) {
    if (c.type == ComponentType::Source) {
      auto it = st.sources.find(c.id);
      if (it != st.sources.end() && it->second.mode == OracleMode::Seeded) {
        it->second.rng.seed(substream_seed(it->second.seed, c.id));
        draw_source(ntk, it->second);
      }
    } else if (c.type == ComponentType::Sink) {
      auto it = st.sinks.find(c.id);
      if (it != st.sinks.end() && it->second.mode == OracleMode::Seeded) {
        it->second.rng.seed(substream_seed(it->second.seed, c.id));
        it->second.ready_draw = rand_unit(it->second.rng) < it->second.probability;
      }
    }
  }
}

void reseed_oracles(const XmasNetwork& ntk, NetworkState& st, uint64_t base) {
  for (auto& [id, o] : st.sources)
    if (o.mode == OracleMode::Seeded) o.seed = base;
  for (auto& [id, o] : st.sinks)
    if (o.mode == OracleMode::Seeded) o.seed = base;
  init_seeded(ntk, st);
}

void redraw_seeded(const XmasNetwork& ntk, NetworkState& st) {
  for (const Component& c : ntk.components) {
    if (c.type == ComponentType::Source) {
      auto it = st.sources.find(c.id);
      if (it != st.sources.end() && it->second.mode == OracleMode::Seeded)
        draw_source(ntk, it->second);
    } else if (c.type == ComponentType::Sink) {
      auto it = st.sinks.find(c.id);
      if (it != st.sinks.end() && it->second.mode == OracleMode::Seeded)
        it->second.ready_draw = rand_unit(it->second.rng) < it->second.probability;
    }
  }
}

}  // namespace xmas
