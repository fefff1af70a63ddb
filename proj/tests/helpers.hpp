#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xmas/engine.hpp"
#include "xmas/eval.hpp"
#include "xmas/model.hpp"
#include "xmas/state.hpp"

namespace xmas::testing {

inline Component make_comp(std::string id, ComponentType t, std::vector<std::string> ins,
                           std::vector<std::string> outs, int capacity = 2) {
  Component c;
  c.id = std::move(id);
  c.type = t;
  c.ins = std::move(ins);
  c.outs = std::move(outs);
  c.capacity = capacity;
  return c;
}

inline Channel make_chan(std::string id, std::string init, std::string target) {
  Channel ch;
  ch.id = std::move(id);
  ch.init = std::move(init);
  ch.target = std::move(target);
  return ch;
}

// src --c0--> q0 --c1--> sw --c2--> q1 --c4--> snk1
//                        sw --c3--> q2 --c5--> snk2
// Switch routes red to output 0 (towards q1), blue to output 1.
inline XmasNetwork make_rb() {
  XmasNetwork n;
  n.alphabet = {"red", "blue"};
  n.components = {
      make_comp("src", ComponentType::Source, {}, {"c0"}),
      make_comp("q0", ComponentType::Queue, {"c0"}, {"c1"}),
      make_comp("sw", ComponentType::Switch, {"c1"}, {"c2", "c3"}),
      make_comp("q1", ComponentType::Queue, {"c2"}, {"c4"}),
      make_comp("q2", ComponentType::Queue, {"c3"}, {"c5"}),
      make_comp("snk1", ComponentType::Sink, {"c4"}, {}),
      make_comp("snk2", ComponentType::Sink, {"c5"}, {}),
  };
  n.components[2].field = {{{"red", 0}, {"blue", 1}}};
  n.channels = {
      make_chan("c0", "src", "q0"), make_chan("c1", "q0", "sw"), make_chan("c2", "sw", "q1"),
      make_chan("c3", "sw", "q2"),  make_chan("c4", "q1", "snk1"), make_chan("c5", "q2", "snk2"),
  };
  return n;
}

// src --k0--> q0 --k1--> snk
inline XmasNetwork make_chain(int capacity = 2) {
  XmasNetwork n;
  n.alphabet = {"red", "blue"};
  n.components = {
      make_comp("src", ComponentType::Source, {}, {"k0"}),
      make_comp("q0", ComponentType::Queue, {"k0"}, {"k1"}, capacity),
      make_comp("snk", ComponentType::Sink, {"k1"}, {}),
  };
  n.channels = {make_chan("k0", "src", "q0"), make_chan("k1", "q0", "snk")};
  return n;
}

// src --k0--> q0 --k1--> fn --k2--> q1 --k3--> snk, fn retags red to blue
// and blue to red.
inline XmasNetwork make_fn_chain() {
  XmasNetwork n;
  n.alphabet = {"red", "blue"};
  n.components = {
      make_comp("src", ComponentType::Source, {}, {"k0"}),
      make_comp("q0", ComponentType::Queue, {"k0"}, {"k1"}),
      make_comp("fn", ComponentType::Function, {"k1"}, {"k2"}),
      make_comp("q1", ComponentType::Queue, {"k2"}, {"k3"}),
      make_comp("snk", ComponentType::Sink, {"k3"}, {}),
  };
  n.components[2].field = {{{"red", PacketTag("blue")}, {"blue", PacketTag("red")}}};
  n.channels = {make_chan("k0", "src", "q0"), make_chan("k1", "q0", "fn"),
                make_chan("k2", "fn", "q1"), make_chan("k3", "q1", "snk")};
  return n;
}

// fa --ka--> fb --kb--> fa: every signal combinational, no resource anywhere.
inline XmasNetwork make_loop() {
  XmasNetwork n;
  n.alphabet = {"red"};
  n.components = {
      make_comp("fa", ComponentType::Function, {"kb"}, {"ka"}),
      make_comp("fb", ComponentType::Function, {"ka"}, {"kb"}),
  };
  n.components[0].field = {{{"red", PacketTag("red")}}};
  n.components[1].field = {{{"red", PacketTag("red")}}};
  n.channels = {make_chan("ka", "fa", "fb"), make_chan("kb", "fb", "fa")};
  return n;
}

inline NetworkState state_with_queue(const XmasNetwork& n, const std::string& qid,
                                     std::vector<PacketTag> contents) {
  NetworkState st = initial_state(n);
  st.queues.at(qid).assign(contents.begin(), contents.end());
  return st;
}

inline void script_source(NetworkState& st, const std::string& id, std::vector<PacketTag> script) {
  SourceOracle& o = st.sources.at(id);
  o.mode = OracleMode::Scripted;
  o.script = std::move(script);
}

inline void script_sink(NetworkState& st, const std::string& id, std::vector<bool> script) {
  SinkOracle& o = st.sinks.at(id);
  o.mode = OracleMode::Scripted;
  o.script = std::move(script);
}

inline bool data_equal(const DataValue& a, const DataValue& b) { return a == b; }

inline bool wires_equivalent(const SignalValue& a, const SignalValue& b) {
  if (is_error(a) || is_error(b)) return is_error(a) && is_error(b);
  const SignalTriple& x = as_triple(a);
  const SignalTriple& y = as_triple(b);
  return x.wire == y.wire && entries_set_equal(x.routing, y.routing) &&
         entries_set_equal(x.transfer, y.transfer);
}

// Compares the batch evaluator against the reference one on every key.
inline bool assignments_agree(const XmasNetwork& n, const NetworkState& st,
                              std::string* mismatch = nullptr) {
  SignalAssignment a = eval_all(n, st);
  for (size_t ci = 0; ci < n.channels.size(); ++ci) {
    const Channel& ch = n.channels[ci];
    SignalValue irdy = eval_wire(n, st, SignalFlag::Irdy, ch);
    SignalValue trdy = eval_wire(n, st, SignalFlag::Trdy, ch);
    DataValue data = eval_data(n, st, ch);
    if (!wires_equivalent(a.irdy[ci], irdy)) {
      if (mismatch) *mismatch = ch.id + ".irdy: " + to_text(a.irdy[ci]) + " vs " + to_text(irdy);
      return false;
    }
    if (!wires_equivalent(a.trdy[ci], trdy)) {
      if (mismatch) *mismatch = ch.id + ".trdy: " + to_text(a.trdy[ci]) + " vs " + to_text(trdy);
      return false;
    }
    if (!data_equal(a.data[ci], data)) {
      if (mismatch) *mismatch = ch.id + ".data: " + to_text(a.data[ci]) + " vs " + to_text(data);
      return false;
    }
  }
  return true;
}

}  // namespace xmas::testing
