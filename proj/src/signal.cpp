#include "xmas/signal.hpp"

#include <algorithm>

namespace xmas {

namespace {

std::vector<RoutingEntry> append(std::vector<RoutingEntry> a, const std::vector<RoutingEntry>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

Ternary wire_level(const SignalValue& v) {
  if (is_error(v)) return Ternary::Error;
  return ternary_of(as_triple(v).wire);
}

SignalValue make_result(Ternary wire, std::vector<RoutingEntry> routing,
                        std::vector<RoutingEntry> transfer) {
  if (wire == Ternary::Error) return CycleError{};
  return SignalTriple{wire == Ternary::True, std::move(routing), std::move(transfer)};
}

SignalValue signal_and(const SignalValue& x, const SignalValue& y) {
  if (is_error(x) || is_error(y)) return CycleError{};
  const SignalTriple& xt = as_triple(x);
  const SignalTriple& yt = as_triple(y);
  std::vector<RoutingEntry> routing = append(xt.routing, yt.routing);
  if (xt.wire && yt.wire) {
    return SignalTriple{true, std::move(routing), append(xt.transfer, yt.transfer)};
  }
  return SignalTriple{false, std::move(routing), {}};
}

SignalValue signal_or(const SignalValue& x, const SignalValue& y) {
  if (is_error(x) || is_error(y)) return CycleError{};
  const SignalTriple& xt = as_triple(x);
  const SignalTriple& yt = as_triple(y);
  std::vector<RoutingEntry> routing = append(xt.routing, yt.routing);
  std::vector<RoutingEntry> transfer;
  if (xt.wire) transfer = append(std::move(transfer), xt.transfer);
  if (yt.wire) transfer = append(std::move(transfer), yt.transfer);
  return SignalTriple{xt.wire || yt.wire, std::move(routing), std::move(transfer)};
}

bool entries_subset(const std::vector<RoutingEntry>& sub, const std::vector<RoutingEntry>& super) {
  return std::all_of(sub.begin(), sub.end(), [&](const RoutingEntry& e) {
    return std::find(super.begin(), super.end(), e) != super.end();
  });
}

bool entries_set_equal(const std::vector<RoutingEntry>& a, const std::vector<RoutingEntry>& b) {
  return entries_subset(a, b) && entries_subset(b, a);
}

std::string to_text(const RoutingEntry& e) {
  std::string out = "(";
  out += e.resource;
  out += ',';
  out += e.packet ? *e.packet : "-";
  out += ')';
  return out;
}

std::string to_text(const std::vector<RoutingEntry>& entries) {
  std::string out = "[";
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ',';
    out += to_text(entries[i]);
  }
  out += ']';
  return out;
}

std::string to_text(const SignalTriple& t) {
  std::string out = "bool=";
  out += t.wire ? 't' : 'f';
  out += " routing=";
  out += to_text(t.routing);
  out += " transfer=";
  out += to_text(t.transfer);
  return out;
}

std::string to_text(const SignalValue& v) {
  if (is_error(v)) return "ERROR";
  return to_text(as_triple(v));
}

std::string to_text(const DataValue& v) {
  if (is_error(v)) return "ERROR";
  if (is_nodata(v)) return "NODATA";
  return std::get<PacketTag>(v);
}

}  // namespace xmas
