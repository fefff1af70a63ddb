#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xmas/signal.hpp"

namespace xmas {

enum class ComponentType { Queue, Switch, Source, Sink, Function };

/// Resources hold or absorb packets; the other primitives are combinational.
bool is_resource(ComponentType);
std::string_view to_string(ComponentType);
std::optional<ComponentType> component_type_from(std::string_view);

size_t in_arity(ComponentType);
size_t out_arity(ComponentType);

/// One lookup table. Switch tables map a tag to an output branch (0 or 1),
/// function tables map a tag to the retagged packet.
using FieldEntry = std::variant<int, PacketTag>;
using FieldTable = std::vector<std::map<PacketTag, FieldEntry>>;

struct Component {
  std::string id;
  ComponentType type = ComponentType::Queue;
  std::vector<std::string> ins;   // channel ids in port order; "" marks an unwired slot
  std::vector<std::string> outs;  // likewise
  FieldTable field;
  int capacity = 2;  // queues only

  bool operator==(const Component&) const = default;
};

struct Channel {
  std::string id;
  std::string init;    // component id of the initiator
  std::string target;  // component id of the target

  bool operator==(const Channel&) const = default;
};

/// A fabric: a packet alphabet plus components wired by channels. Kept as a
/// plain aggregate so tests can build arbitrarily broken instances; anything
/// that assumes well-formedness runs validate_network first.
struct XmasNetwork {
  std::vector<PacketTag> alphabet;
  std::vector<Component> components;
  std::vector<Channel> channels;

  bool in_alphabet(const PacketTag& t) const;
  bool operator==(const XmasNetwork&) const = default;
};

/// Raised by the port accessors when the wiring they are asked to follow does
/// not exist.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// First component/channel with the given id, or nullptr.
const Component* find_component(const XmasNetwork&, std::string_view id);
const Channel* find_channel(const XmasNetwork&, std::string_view id);

/// Channel wired to the given input/output port; StructuralError when the
/// port is out of range or the slot does not resolve.
const Channel& get_in_channel(const XmasNetwork&, const Component&, size_t port);
const Channel& get_out_channel(const XmasNetwork&, const Component&, size_t port);

/// Endpoint components of a channel; StructuralError when unresolvable.
const Component& get_init_component(const XmasNetwork&, const Channel&);
const Component& get_target_component(const XmasNetwork&, const Channel&);

size_t component_index(const XmasNetwork&, const Component&);
size_t channel_index(const XmasNetwork&, const Channel&);

/// Table lookup; nullopt when table `n` is missing or has no entry for `tag`.
std::optional<FieldEntry> apply_field(size_t n, const Component&, const PacketTag& tag);

/// Well-formedness clauses. Letters are stable and appear in reports.
enum class Clause {
  ReferenceIntegrity,   // (a) ids in wiring resolve, no unwired slots
  PortArity,            // (b) per-type port counts, queue capacity >= 1
  InvertibleIns,        // (c) in_channel(c,i) targets c
  InvertibleOuts,       // (d) out_channel(c,i) is initiated by c
  ChannelKnownByTarget, // (e) every channel is some input of its target
  ChannelKnownByInit,   // (f) every channel is some output of its initiator
  UniqueIds,            // (g) component and channel ids are unique
  TableTotality,        // (h) tables cover the alphabet, function results in alphabet
  SwitchTableBinary,    // (i) switch tables map to branch 0 or 1
};

char clause_letter(Clause);
std::string_view clause_name(Clause);

struct Finding {
  Clause clause;
  std::string subject;  // component or channel id
  int port = -1;        // port index when the clause speaks about one
  std::string message;

  bool operator==(const Finding&) const = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
  bool violates(Clause c) const;
  /// Exactly the given clauses are violated, regardless of multiplicity.
  bool violates_exactly(std::initializer_list<Clause>) const;
};

std::string to_text(const Finding&);

/// Checks the nine structural clauses. Clauses that would have to follow a
/// dangling reference skip the affected element; the dangling reference
/// itself is reported under (a).
ValidationReport validate_network(const XmasNetwork&);

}  // namespace xmas
