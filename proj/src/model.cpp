#include "xmas/model.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace xmas {

bool is_resource(ComponentType t) {
  return t == ComponentType::Queue || t == ComponentType::Source || t == ComponentType::Sink;
}

std::string_view to_string(ComponentType t) {
  switch (t) {
    case ComponentType::Queue: return "queue";
    case ComponentType::Switch: return "switch";
    case ComponentType::Source: return "source";
    case ComponentType::Sink: return "sink";
    case ComponentType::Function: return "function";
  }
  return "?";
}

std::optional<ComponentType> component_type_from(std::string_view s) {
  if (s == "queue") return ComponentType::Queue;
  if (s == "switch") return ComponentType::Switch;
  if (s == "source") return ComponentType::Source;
  if (s == "sink") return ComponentType::Sink;
  if (s == "function") return ComponentType::Function;
  return std::nullopt;
}

size_t in_arity(ComponentType t) {
  switch (t) {
    case ComponentType::Source: return 0;
    case ComponentType::Queue:
    case ComponentType::Switch:
    case ComponentType::Sink:
    case ComponentType::Function: return 1;
  }
  return 0;
}

size_t out_arity(ComponentType t) {
  switch (t) {
    case ComponentType::Sink: return 0;
    case ComponentType::Switch: return 2;
    case ComponentType::Queue:
    case ComponentType::Source:
    case ComponentType::Function: return 1;
  }
  return 0;
}

bool XmasNetwork::in_alphabet(const PacketTag& t) const {
  return std::find(alphabet.begin(), alphabet.end(), t) != alphabet.end();
}

const Component* find_component(const XmasNetwork& ntk, std::string_view id) {
  for (const Component& c : ntk.components)
    if (c.id == id) return &c;
  return nullptr;
}

const Channel* find_channel(const XmasNetwork& ntk, std::string_view id) {
  for (const Channel& c : ntk.channels)
    if (c.id == id) return &c;
  return nullptr;
}

const Channel& get_in_channel(const XmasNetwork& ntk, const Component& c, size_t port) {
  if (port >= c.ins.size())
    throw StructuralError("component " + c.id + " has no input port " + std::to_string(port));
  const Channel* ch = find_channel(ntk, c.ins[port]);
  if (!ch)
    throw StructuralError("input port " + std::to_string(port) + " of " + c.id +
                          " names unknown channel '" + c.ins[port] + "'");
  return *ch;
}

const Channel& get_out_channel(const XmasNetwork& ntk, const Component& c, size_t port) {
  if (port >= c.outs.size())
    throw StructuralError("component " + c.id + " has no output port " + std::to_string(port));
  const Channel* ch = find_channel(ntk, c.outs[port]);
  if (!ch)
    throw StructuralError("output port " + std::to_string(port) + " of " + c.id +
                          " names unknown channel '" + c.outs[port] + "'");
  return *ch;
}

const Component& get_init_component(const XmasNetwork& ntk, const Channel& ch) {
  const Component* c = find_component(ntk, ch.init);
  if (!c) throw StructuralError("channel " + ch.id + " is initiated by unknown component '" + ch.init + "'");
  return *c;
}

const Component& get_target_component(const XmasNetwork& ntk, const Channel& ch) {
  const Component* c = find_component(ntk, ch.target);
  if (!c) throw StructuralError("channel " + ch.id + " targets unknown component '" + ch.target + "'");
  return *c;
}

size_t component_index(const XmasNetwork& ntk, const Component& c) {
  const Component* base = ntk.components.data();
  if (&c < base || &c >= base + ntk.components.size())
    throw std::logic_error("component does not belong to this network");
  return static_cast<size_t>(&c - base);
}

size_t channel_index(const XmasNetwork& ntk, const Channel& ch) {
  const Channel* base = ntk.channels.data();
  if (&ch < base || &ch >= base + ntk.channels.size())
    throw std::logic_error("channel does not belong to this network");
  return static_cast<size_t>(&ch - base);
}

std::optional<FieldEntry> apply_field(size_t n, const Component& c, const PacketTag& tag) {
  if (n >= c.field.size()) return std::nullopt;
  auto it = c.field[n].find(tag);
  if (it == c.field[n].end()) return std::nullopt;
  return it->second;
}

char clause_letter(Clause c) {
  switch (c) {
    case Clause::ReferenceIntegrity: return 'a';
    case Clause::PortArity: return 'b';
    case Clause::InvertibleIns: return 'c';
    case Clause::InvertibleOuts: return 'd';
    case Clause::ChannelKnownByTarget: return 'e';
    case Clause::ChannelKnownByInit: return 'f';
    case Clause::UniqueIds: return 'g';
    case Clause::TableTotality: return 'h';
    case Clause::SwitchTableBinary: return 'i';
  }
  return '?';
}

std::string_view clause_name(Clause c) {
  switch (c) {
    case Clause::ReferenceIntegrity: return "reference-integrity";
    case Clause::PortArity: return "port-arity";
    case Clause::InvertibleIns: return "invertible-ins";
    case Clause::InvertibleOuts: return "invertible-outs";
    case Clause::ChannelKnownByTarget: return "channel-known-by-target";
    case Clause::ChannelKnownByInit: return "channel-known-by-init";
    case Clause::UniqueIds: return "unique-ids";
    case Clause::TableTotality: return "table-totality";
    case Clause::SwitchTableBinary: return "switch-table-binary";
  }
  return "?";
}

bool ValidationReport::violates(Clause c) const {
  return std::any_of(findings.begin(), findings.end(),
                     [&](const Finding& f) { return f.clause == c; });
}

bool ValidationReport::violates_exactly(std::initializer_list<Clause> clauses) const {
  std::set<Clause> want(clauses.begin(), clauses.end());
  std::set<Clause> have;
  for (const Finding& f : findings) have.insert(f.clause);
  return want == have;
}

std::string to_text(const Finding& f) {
  std::string out = "clause=(";
  out += clause_letter(f.clause);
  out += ") ";
  out += clause_name(f.clause);
  out += " subject=";
  out += f.subject;
  if (f.port >= 0) {
    out += " port=";
    out += std::to_string(f.port);
  }
  out += ": ";
  out += f.message;
  return out;
}

namespace {

struct Ids {
  std::unordered_map<std::string_view, const Component*> comps;
  std::unordered_map<std::string_view, const Channel*> chans;
};

// First occurrence wins, matching the lookup accessors.
Ids collect_ids(const XmasNetwork& ntk) {
  Ids ids;
  for (const Component& c : ntk.components) ids.comps.emplace(c.id, &c);
  for (const Channel& c : ntk.channels) ids.chans.emplace(c.id, &c);
  return ids;
}

}  // namespace

ValidationReport validate_network(const XmasNetwork& ntk) {
  ValidationReport report;
  auto add = [&](Clause c, std::string subject, int port, std::string msg) {
    report.findings.push_back({c, std::move(subject), port, std::move(msg)});
  };

  Ids ids = collect_ids(ntk);

  // (g) unique ids
  {
    std::unordered_set<std::string_view> seen, dup;
    for (const Component& c : ntk.components)
      if (!seen.insert(c.id).second && dup.insert(c.id).second)
        add(Clause::UniqueIds, c.id, -1, "duplicate component id");
    seen.clear();
    for (const Channel& c : ntk.channels)
      if (!seen.insert(c.id).second && dup.insert(c.id).second)
        add(Clause::UniqueIds, c.id, -1, "duplicate channel id");
  }

  // (a) reference integrity, remembered so later clauses can skip the broken
  // spots instead of tripping over them.
  std::unordered_set<const Channel*> init_bad, target_bad;
  std::unordered_set<const Component*> wiring_bad;
  for (const Channel& ch : ntk.channels) {
    if (!ids.comps.count(ch.init)) {
      init_bad.insert(&ch);
      add(Clause::ReferenceIntegrity, ch.id, -1, "initiator '" + ch.init + "' is not a component");
    }
    if (!ids.comps.count(ch.target)) {
      target_bad.insert(&ch);
      add(Clause::ReferenceIntegrity, ch.id, -1, "target '" + ch.target + "' is not a component");
    }
  }
  for (const Component& c : ntk.components) {
    for (size_t i = 0; i < c.ins.size(); ++i)
      if (!ids.chans.count(c.ins[i])) {
        wiring_bad.insert(&c);
        add(Clause::ReferenceIntegrity, c.id, static_cast<int>(i),
            c.ins[i].empty() ? "input port is unwired"
                             : "input port names unknown channel '" + c.ins[i] + "'");
      }
    for (size_t i = 0; i < c.outs.size(); ++i)
      if (!ids.chans.count(c.outs[i])) {
        wiring_bad.insert(&c);
        add(Clause::ReferenceIntegrity, c.id, static_cast<int>(i),
            c.outs[i].empty() ? "output port is unwired"
                              : "output port names unknown channel '" + c.outs[i] + "'");
      }
  }

  // (b) per-type shape
  for (const Component& c : ntk.components) {
    if (c.ins.size() != in_arity(c.type))
      add(Clause::PortArity, c.id, -1,
          std::string(to_string(c.type)) + " needs " + std::to_string(in_arity(c.type)) +
              " input(s), has " + std::to_string(c.ins.size()));
    if (c.outs.size() != out_arity(c.type))
      add(Clause::PortArity, c.id, -1,
          std::string(to_string(c.type)) + " needs " + std::to_string(out_arity(c.type)) +
              " output(s), has " + std::to_string(c.outs.size()));
    if (c.type == ComponentType::Queue && c.capacity < 1)
      add(Clause::PortArity, c.id, -1, "queue capacity must be at least 1");
  }

  // (c)/(d) the component's port lists point at channels that point back
  for (const Component& c : ntk.components) {
    if (wiring_bad.count(&c)) {
      // only the resolvable slots are checked; the rest was reported under (a)
    }
    for (size_t i = 0; i < c.ins.size(); ++i) {
      auto it = ids.chans.find(c.ins[i]);
      if (it == ids.chans.end()) continue;
      const Channel& ch = *it->second;
      if (target_bad.count(&ch)) continue;
      if (ch.target != c.id)
        add(Clause::InvertibleIns, c.id, static_cast<int>(i),
            "input channel " + ch.id + " targets " + ch.target);
    }
    for (size_t i = 0; i < c.outs.size(); ++i) {
      auto it = ids.chans.find(c.outs[i]);
      if (it == ids.chans.end()) continue;
      const Channel& ch = *it->second;
      if (init_bad.count(&ch)) continue;
      if (ch.init != c.id)
        add(Clause::InvertibleOuts, c.id, static_cast<int>(i),
            "output channel " + ch.id + " is initiated by " + ch.init);
    }
  }

  // (e)/(f) every channel occupies a port on both of its endpoints
  for (const Channel& ch : ntk.channels) {
    if (!target_bad.count(&ch)) {
      const Component& tc = *ids.comps.at(ch.target);
      if (std::find(tc.ins.begin(), tc.ins.end(), ch.id) == tc.ins.end())
        add(Clause::ChannelKnownByTarget, ch.id, -1,
            "not an input of its target " + ch.target);
    }
    if (!init_bad.count(&ch)) {
      const Component& ic = *ids.comps.at(ch.init);
      if (std::find(ic.outs.begin(), ic.outs.end(), ch.id) == ic.outs.end())
        add(Clause::ChannelKnownByInit, ch.id, -1,
            "not an output of its initiator " + ch.init);
    }
  }

  // (h)/(i) tables
  for (const Component& c : ntk.components) {
    if (c.type != ComponentType::Switch && c.type != ComponentType::Function) continue;
    if (c.field.empty()) {
      add(Clause::TableTotality, c.id, -1, "missing lookup table");
      continue;
    }
    const auto& table = c.field[0];
    for (const PacketTag& tag : ntk.alphabet)
      if (!table.count(tag))
        add(Clause::TableTotality, c.id, -1, "table has no entry for tag '" + tag + "'");
    for (const auto& [tag, entry] : table) {
      if (!ntk.in_alphabet(tag))
        add(Clause::TableTotality, c.id, -1, "table key '" + tag + "' is outside the alphabet");
      if (c.type == ComponentType::Function) {
        const PacketTag* out = std::get_if<PacketTag>(&entry);
        if (!out)
          add(Clause::TableTotality, c.id, -1, "entry for '" + tag + "' is not a packet tag");
        else if (!ntk.in_alphabet(*out))
          add(Clause::TableTotality, c.id, -1,
              "entry for '" + tag + "' maps outside the alphabet");
      } else {
        const int* branch = std::get_if<int>(&entry);
        if (!branch || (*branch != 0 && *branch != 1))
          add(Clause::SwitchTableBinary, c.id, -1,
              "entry for '" + tag + "' is not branch 0 or 1");
      }
    }
  }

  return report;
}

}  // namespace xmas
