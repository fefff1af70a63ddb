#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "xmas/engine.hpp"
#include "xmas/eval.hpp"
#include "xmas/json_io.hpp"
#include "xmas/model.hpp"
#include "xmas/obligations.hpp"

namespace py = pybind11;
using namespace xmas;

namespace {

// A parsed document plus its working state; the network itself stays
// immutable, run() replaces the state.
struct PyNetwork {
  XmasNetwork net;
  NetworkState state;

  void ensure_valid() const {
    ValidationReport r = validate_network(net);
    if (!r.ok()) {
      std::string msg = "network does not validate:";
      for (const Finding& f : r.findings) msg += "\n  " + to_text(f);
      throw std::invalid_argument(msg);
    }
  }
};

PyNetwork parse_py(const std::string& text) {
  NetworkDocument doc = parse_document(text);
  return {doc.network, doc.state_or_initial()};
}

std::vector<std::string> validate_py(const PyNetwork& n) {
  std::vector<std::string> out;
  for (const Finding& f : validate_network(n.net).findings) out.push_back(to_text(f));
  return out;
}

py::dict eval_py(const PyNetwork& n) {
  n.ensure_valid();
  SignalAssignment a = eval_all(n.net, n.state);
  py::dict irdy, trdy, data;
  for (size_t ci = 0; ci < n.net.channels.size(); ++ci) {
    const char* id = n.net.channels[ci].id.c_str();
    irdy[id] = to_text(a.irdy[ci]);
    trdy[id] = to_text(a.trdy[ci]);
    data[id] = to_text(a.data[ci]);
  }
  py::list cycle;
  for (const SignalKey& k : a.cycle_keys) cycle.append(to_text(k, n.net));
  py::dict out;
  out["irdy"] = irdy;
  out["trdy"] = trdy;
  out["data"] = data;
  out["cycle_keys"] = cycle;
  return out;
}

py::dict run_py(PyNetwork& n, uint64_t cycles) {
  n.ensure_valid();
  RunResult r = run(n.net, n.state, cycles);
  py::dict out;
  out["status"] = std::string(to_string(r.status));
  py::list trace;
  for (const TraceEvent& ev : r.trace) trace.append(trace_line(ev));
  out["trace"] = trace;
  out["cycles"] = r.final_state.cycle;
  if (r.stall_cycle) out["stall_cycle"] = *r.stall_cycle;
  py::dict consumed;
  for (const auto& [id, o] : r.final_state.sinks) consumed[id.c_str()] = o.consumed;
  out["consumed"] = consumed;
  out["conserved"] = conservation_check(n.net, r.trace, n.state, r.final_state);
  n.state = r.final_state;
  return out;
}

py::list check_py(const PyNetwork& n) {
  n.ensure_valid();
  py::list out;
  for (const ObligationReport& r : check_all_obligations(n.net, n.state)) {
    py::dict d;
    d["obligation"] = std::string(to_string(r.obligation));
    d["passed"] = r.passed;
    d["checked"] = r.checked;
    if (r.witness) d["witness"] = r.witness->channel_id + ": " + r.witness->value_text;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "xMAS network semantics: validation, signal evaluation, simulation";

  py::register_exception<ParseError>(m, "ParseError");

  py::class_<PyNetwork>(m, "Network")
      .def_static("parse", &parse_py, py::arg("text"),
                  "Parse a JSON network document (with optional embedded state).")
      .def_static(
          "load",
          [](const std::string& path) {
            NetworkDocument doc = load_document(path);
            return PyNetwork{doc.network, doc.state_or_initial()};
          },
          py::arg("path"))
      .def_static(
          "generate",
          [](uint64_t seed, std::optional<size_t> size) {
            GenParams p;
            p.seed = seed;
            if (size) p.min_components = p.max_components = *size;
            XmasNetwork net = gen_random_network(p);
            return PyNetwork{net, initial_state(net)};
          },
          py::arg("seed"), py::arg("size") = std::nullopt,
          "Deterministic random valid network for the given seed.")
      .def("validate", &validate_py, "Finding lines; empty means well-formed.")
      .def("serialize",
           [](const PyNetwork& n, bool with_state) {
             return serialize_document(n.net, with_state ? &n.state : nullptr);
           },
           py::arg("with_state") = false, "Canonical JSON text, byte-stable.")
      .def("load_state",
           [](PyNetwork& n, const std::string& text) { n.state = parse_state(n.net, text); },
           py::arg("text"), "Replace the working state from a bare state document.")
      .def("eval", &eval_py,
           "All signal values as canonical text, keyed irdy/trdy/data then channel.")
      .def("run", &run_py, py::arg("cycles") = 1000,
           "Simulate until quiescence or the cycle budget; advances the working state.")
      .def("check", &check_py, "The four routing obligations against the working state.")
      .def_property_readonly("channel_ids",
                             [](const PyNetwork& n) {
                               std::vector<std::string> out;
                               for (const Channel& c : n.net.channels) out.push_back(c.id);
                               return out;
                             })
      .def_property_readonly("component_ids",
                             [](const PyNetwork& n) {
                               std::vector<std::string> out;
                               for (const Component& c : n.net.components) out.push_back(c.id);
                               return out;
                             })
      .def_property_readonly("queues", [](const PyNetwork& n) {
        py::dict out;
        for (const auto& [id, q] : n.state.queues)
          out[id.c_str()] = std::vector<PacketTag>(q.begin(), q.end());
        return out;
      });
}
