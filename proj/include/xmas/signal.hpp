#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace xmas {

using PacketTag = std::string;

/// Marker for a data wire that carries no packet this cycle (empty queue,
/// silent or exhausted source).
struct NoData {
  bool operator==(const NoData&) const = default;
};

/// Marker for a signal whose value depends on itself through combinational
/// primitives. Absorbed by every operator of the algebra.
struct CycleError {
  bool operator==(const CycleError&) const = default;
};

/// Wire level of an irdy/trdy signal: plain boolean plus the cycle marker.
enum class Ternary : unsigned char { False, True, Error };

constexpr Ternary ternary_of(bool b) { return b ? Ternary::True : Ternary::False; }

/// Error-preserving negation.
constexpr Ternary signal_not(Ternary t) {
  if (t == Ternary::Error) return Ternary::Error;
  return t == Ternary::True ? Ternary::False : Ternary::True;
}

/// One potential or actual destination: a resource component paired with the
/// packet as it would arrive there. An absent packet records that the data
/// wire carried nothing when the entry was built.
struct RoutingEntry {
  std::string resource;
  std::optional<PacketTag> packet;

  bool operator==(const RoutingEntry&) const = default;
  bool operator<(const RoutingEntry& o) const {
    if (resource != o.resource) return resource < o.resource;
    return packet < o.packet;
  }
};

/// Value of one irdy or trdy wire: the boolean level, the destinations the
/// packet could reach (routing) and the destinations it actually reaches this
/// cycle (transfer). Lists keep duplicates and append order; comparisons that
/// want set semantics go through entries_subset / entries_set_equal.
struct SignalTriple {
  bool wire = false;
  std::vector<RoutingEntry> routing;
  std::vector<RoutingEntry> transfer;

  bool operator==(const SignalTriple&) const = default;
};

using SignalValue = std::variant<SignalTriple, CycleError>;
using DataValue = std::variant<PacketTag, NoData, CycleError>;

inline bool is_error(const SignalValue& v) { return std::holds_alternative<CycleError>(v); }
inline bool is_error(const DataValue& v) { return std::holds_alternative<CycleError>(v); }
inline bool is_nodata(const DataValue& v) { return std::holds_alternative<NoData>(v); }

/// Triple accessor; throws std::bad_variant_access on Error values.
inline const SignalTriple& as_triple(const SignalValue& v) { return std::get<SignalTriple>(v); }

Ternary wire_level(const SignalValue& v);

/// Wraps a wire level and destination lists into a signal value; an Error
/// level collapses the whole value to Error.
SignalValue make_result(Ternary wire, std::vector<RoutingEntry> routing,
                        std::vector<RoutingEntry> transfer);

/// Conjunction: both routings always combine, transfers only survive when
/// both wires are high. Error absorbs.
SignalValue signal_and(const SignalValue& x, const SignalValue& y);

/// Disjunction: both routings always combine, each side contributes its
/// transfer only while its own wire is high. Error absorbs.
SignalValue signal_or(const SignalValue& x, const SignalValue& y);

bool entries_subset(const std::vector<RoutingEntry>& sub, const std::vector<RoutingEntry>& super);
bool entries_set_equal(const std::vector<RoutingEntry>& a, const std::vector<RoutingEntry>& b);

std::string to_text(const RoutingEntry&);
std::string to_text(const std::vector<RoutingEntry>&);
std::string to_text(const SignalTriple&);
std::string to_text(const SignalValue&);
std::string to_text(const DataValue&);

}  // namespace xmas
