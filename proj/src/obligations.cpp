#include "xmas/obligations.hpp"

#include <algorithm>
#include <stdexcept>

#include "xmas/rng.hpp"

namespace xmas {

std::string_view to_string(Obligation o) {
  switch (o) {
    case Obligation::RoutingNonEmpty: return "RoutingNonEmpty";
    case Obligation::TargetsAreResources: return "TargetsAreResources";
    case Obligation::TransferSubsetRouting: return "TransferSubsetRouting";
    case Obligation::TransferAvailable: return "TransferAvailable";
  }
  return "?";
}

namespace {

bool obligation_holds(Obligation ob, const XmasNetwork& ntk, const NetworkState& st,
                      const SignalTriple& t) {
  switch (ob) {
    case Obligation::RoutingNonEmpty:
      return !t.routing.empty();
    case Obligation::TargetsAreResources:
      return std::all_of(t.routing.begin(), t.routing.end(), [&](const RoutingEntry& e) {
        const Component* c = find_component(ntk, e.resource);
        return c && is_resource(c->type);
      });
    case Obligation::TransferSubsetRouting:
      return entries_subset(t.transfer, t.routing);
    case Obligation::TransferAvailable:
      return std::all_of(t.transfer.begin(), t.transfer.end(), [&](const RoutingEntry& e) {
        const Component* c = find_component(ntk, e.resource);
        if (!c || (c->type != ComponentType::Queue && c->type != ComponentType::Sink))
          return false;
        return can_receive(*c, st);
      });
  }
  return false;
}

// RoutingNonEmpty and TransferAvailable speak about the receiving side, so
// they quantify over trdy only; the other two cover both wires.
bool covers_irdy(Obligation ob) {
  return ob == Obligation::TargetsAreResources || ob == Obligation::TransferSubsetRouting;
}

}  // namespace

ObligationReport check_obligation(Obligation ob, const XmasNetwork& ntk, const NetworkState& st,
                                  const SignalAssignment& a) {
  ObligationReport report;
  report.obligation = ob;
  auto inspect = [&](size_t ch, SignalFlag flag, const SignalValue& v) {
    if (!report.passed || is_error(v)) return;
    ++report.checked;
    if (!obligation_holds(ob, ntk, st, as_triple(v))) {
      report.passed = false;
      report.witness =
          ObligationWitness{{ch, flag}, ntk.channels[ch].id, to_text(as_triple(v))};
    }
  };
  for (size_t ch = 0; ch < ntk.channels.size(); ++ch) {
    if (covers_irdy(ob)) inspect(ch, SignalFlag::Irdy, a.irdy[ch]);
    inspect(ch, SignalFlag::Trdy, a.trdy[ch]);
  }
  return report;
}

ObligationReport check_routing_nonempty(const XmasNetwork& ntk, const NetworkState& st) {
  return check_obligation(Obligation::RoutingNonEmpty, ntk, st, eval_all(ntk, st));
}

ObligationReport check_targets_are_resources(const XmasNetwork& ntk, const NetworkState& st) {
  return check_obligation(Obligation::TargetsAreResources, ntk, st, eval_all(ntk, st));
}

ObligationReport check_transfer_subset(const XmasNetwork& ntk, const NetworkState& st) {
  return check_obligation(Obligation::TransferSubsetRouting, ntk, st, eval_all(ntk, st));
}

ObligationReport check_transfer_available(const XmasNetwork& ntk, const NetworkState& st) {
  return check_obligation(Obligation::TransferAvailable, ntk, st, eval_all(ntk, st));
}

std::array<ObligationReport, 4> check_all_obligations(const XmasNetwork& ntk,
                                                      const NetworkState& st) {
  SignalAssignment a = eval_all(ntk, st);
  return {check_obligation(Obligation::RoutingNonEmpty, ntk, st, a),
          check_obligation(Obligation::TargetsAreResources, ntk, st, a),
          check_obligation(Obligation::TransferSubsetRouting, ntk, st, a),
          check_obligation(Obligation::TransferAvailable, ntk, st, a)};
}

namespace {

const char* kTagPool[] = {"red", "blue", "green", "yellow", "purple", "orange", "cyan", "magenta"};
constexpr size_t kTagPoolSize = sizeof(kTagPool) / sizeof(kTagPool[0]);

bool combinational(ComponentType t) {
  return t == ComponentType::Switch || t == ComponentType::Function;
}

struct Port {
  size_t comp;
  size_t port;
};

// One wiring attempt; empty result when the greedy matcher dead-ends.
std::optional<XmasNetwork> try_build(const GenParams& p, std::mt19937_64& rng) {
  size_t span = p.max_components - p.min_components + 1;
  size_t n = std::max<size_t>(3, p.min_components + rand_below(rng, span));

  size_t nsrc = 1;
  if (n >= 10 && rand_below(rng, 4) == 0) nsrc = 2;
  size_t max_sw = n >= 2 * nsrc ? (n - 2 * nsrc) / 2 : 0;
  size_t nsw = rand_below(rng, std::min<size_t>(max_sw, 5) + 1);
  size_t nsnk = nsrc + nsw;
  size_t rest = n - nsrc - nsnk - nsw;

  XmasNetwork ntk;
  ntk.alphabet.assign(kTagPool, kTagPool + std::min(std::max<size_t>(p.alphabet_size, 1),
                                                    kTagPoolSize));

  auto add = [&](ComponentType type, const std::string& prefix, size_t i) {
    Component c;
    c.id = prefix + std::to_string(i);
    c.type = type;
    c.ins.assign(in_arity(type), "");
    c.outs.assign(out_arity(type), "");
    ntk.components.push_back(std::move(c));
  };

  for (size_t i = 0; i < nsrc; ++i) add(ComponentType::Source, "src", i);
  // Middle of the fabric: at least one queue whenever there is room for one,
  // so small seeds still produce something that buffers.
  size_t nq = 0, nf = 0;
  std::vector<ComponentType> middle(nsw, ComponentType::Switch);
  for (size_t i = 0; i < rest; ++i)
    middle.push_back(i == 0 || rand_below(rng, 2) ? ComponentType::Queue
                                                  : ComponentType::Function);
  std::shuffle(middle.begin(), middle.end(), rng);
  size_t sw_seen = 0;
  for (ComponentType t : middle) {
    if (t == ComponentType::Queue)
      add(t, "q", nq++);
    else if (t == ComponentType::Function)
      add(t, "fn", nf++);
    else
      add(t, "sw", sw_seen++);
  }
  for (size_t i = 0; i < nsnk; ++i) add(ComponentType::Sink, "snk", i);

  // Topological ranks for the combinational components; wiring keeps their
  // mutual edges forward so no combinational cycle can close.
  std::vector<size_t> rank(ntk.components.size(), 0);
  {
    std::vector<size_t> comb;
    for (size_t i = 0; i < ntk.components.size(); ++i)
      if (combinational(ntk.components[i].type)) comb.push_back(i);
    std::shuffle(comb.begin(), comb.end(), rng);
    for (size_t r = 0; r < comb.size(); ++r) rank[comb[r]] = r;
  }

  std::vector<Port> outs, ins;
  for (size_t i = 0; i < ntk.components.size(); ++i) {
    for (size_t j = 0; j < ntk.components[i].outs.size(); ++j) outs.push_back({i, j});
    for (size_t j = 0; j < ntk.components[i].ins.size(); ++j) ins.push_back({i, j});
  }
  std::shuffle(outs.begin(), outs.end(), rng);

  std::vector<bool> in_used(ins.size(), false);
  size_t next_chan = 0;
  for (const Port& out : outs) {
    const Component& from = ntk.components[out.comp];
    std::vector<size_t> candidates;
    for (size_t k = 0; k < ins.size(); ++k) {
      if (in_used[k]) continue;
      const Component& to = ntk.components[ins[k].comp];
      if (p.acyclic_only && combinational(from.type) && combinational(to.type) &&
          rank[out.comp] >= rank[ins[k].comp])
        continue;
      candidates.push_back(k);
    }
    if (candidates.empty()) return std::nullopt;
    size_t k = candidates[rand_below(rng, candidates.size())];
    in_used[k] = true;
    std::string id = "c" + std::to_string(next_chan++);
    ntk.components[out.comp].outs[out.port] = id;
    ntk.components[ins[k].comp].ins[ins[k].port] = id;
    ntk.channels.push_back({id, from.id, ntk.components[ins[k].comp].id});
  }

  for (Component& c : ntk.components) {
    if (c.type == ComponentType::Queue) {
      c.capacity = p.min_capacity +
                   static_cast<int>(rand_below(
                       rng, static_cast<uint64_t>(p.max_capacity - p.min_capacity + 1)));
    } else if (c.type == ComponentType::Switch) {
      c.field.resize(1);
      for (const PacketTag& t : ntk.alphabet)
        c.field[0][t] = static_cast<int>(rand_below(rng, 2));
    } else if (c.type == ComponentType::Function) {
      c.field.resize(1);
      for (const PacketTag& t : ntk.alphabet)
        c.field[0][t] = ntk.alphabet[rand_below(rng, ntk.alphabet.size())];
    }
  }
  return ntk;
}

}  // namespace

XmasNetwork gen_random_network(const GenParams& p) {
  if (p.min_components > p.max_components)
    throw std::invalid_argument("min_components exceeds max_components");
  if (p.min_capacity < 1 || p.min_capacity > p.max_capacity)
    throw std::invalid_argument("bad capacity range");
  std::mt19937_64 rng(mix64(p.seed));
  for (int attempt = 0; attempt < 256; ++attempt) {
    auto ntk = try_build(p, rng);
    if (!ntk) continue;
    if (!validate_network(*ntk).ok())
      throw std::logic_error("generated network failed validation");
    return std::move(*ntk);
  }
  throw std::runtime_error("network generation did not converge; relax the parameters");
}

NetworkState gen_random_state(const XmasNetwork& ntk, uint64_t seed, StateFill fill) {
  std::mt19937_64 rng(mix64(seed ^ 0x5151C0DEULL));
  NetworkState st = initial_state(ntk);
  auto random_tag = [&]() { return ntk.alphabet[rand_below(rng, ntk.alphabet.size())]; };

  for (const Component& c : ntk.components) {
    switch (c.type) {
      case ComponentType::Queue: {
        size_t len = 0;
        if (!ntk.alphabet.empty()) {
          size_t cap = static_cast<size_t>(c.capacity);
          len = fill == StateFill::AllEmpty  ? 0
                : fill == StateFill::AllFull ? cap
                                             : rand_below(rng, cap + 1);
        }
        auto& q = st.queues.at(c.id);
        for (size_t i = 0; i < len; ++i) q.push_back(random_tag());
        break;
      }
      case ComponentType::Source: {
        SourceOracle& o = st.sources.at(c.id);
        if (ntk.alphabet.empty() || rand_below(rng, 4) == 0) {
          o.mode = OracleMode::Silent;
        } else {
          o.mode = OracleMode::Scripted;
          size_t len = fill == StateFill::AllEmpty ? 0 : rand_below(rng, 6);
          for (size_t i = 0; i < len; ++i) o.script.push_back(random_tag());
        }
        break;
      }
      case ComponentType::Sink: {
        SinkOracle& o = st.sinks.at(c.id);
        if (rand_below(rng, 3) == 0) {
          o.mode = OracleMode::AlwaysReady;
        } else {
          o.mode = OracleMode::Scripted;
          size_t len = 1 + rand_below(rng, 5);
          for (size_t i = 0; i < len; ++i) o.script.push_back(rand_below(rng, 2) == 1);
        }
        break;
      }
      default: break;
    }
  }
  return st;
}

}  // namespace xmas
