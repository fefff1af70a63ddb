#include "xmas/json_io.hpp"

#include <fstream>
#include <json.hpp>

#include "xmas/rng.hpp"

namespace xmas {

namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw ParseError("parse error: " + msg); }

const json& member(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where + " is missing '" + key + "'");
  return *it;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where + " must be a string");
  return j.get<std::string>();
}

size_t as_port(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(where + " must be a non-negative integer");
  long long v = j.get<long long>();
  if (v > 4096) fail(where + " is implausibly large");
  return static_cast<size_t>(v);
}

Component parse_component(const json& j) {
  if (!j.is_object()) fail("component entries must be objects");
  Component c;
  c.id = as_string(member(j, "id", "component"), "component id");
  std::string type = as_string(member(j, "type", "component " + c.id), "component type");
  auto t = component_type_from(type);
  if (!t) fail("component " + c.id + " has unknown type '" + type + "'");
  c.type = *t;
  if (auto it = j.find("capacity"); it != j.end()) {
    if (!it->is_number_integer()) fail("capacity of " + c.id + " must be an integer");
    c.capacity = it->get<int>();
  }
  if (auto it = j.find("table"); it != j.end()) {
    if (!it->is_object()) fail("table of " + c.id + " must be an object");
    c.field.resize(1);
    for (const auto& [tag, value] : it->items()) {
      // Branch indices and tags both parse; the validator sorts out which
      // one the component type actually allows.
      if (value.is_number_integer())
        c.field[0][tag] = value.get<int>();
      else if (value.is_string())
        c.field[0][tag] = value.get<std::string>();
      else
        fail("table entry '" + tag + "' of " + c.id + " must be an integer or a tag");
    }
  }
  return c;
}

void place(std::vector<std::string>& slots, size_t port, const std::string& channel) {
  if (slots.size() <= port) slots.resize(port + 1);
  // First claimant keeps the slot; a second claim leaves the channel
  // unplaced, which the validator reports.
  if (slots[port].empty()) slots[port] = channel;
}

void parse_endpoint(const json& j, const std::string& where, std::string& comp, size_t& port) {
  if (!j.is_array() || j.size() != 2) fail(where + " must be [component-id, port]");
  comp = as_string(j[0], where + " component");
  port = as_port(j[1], where + " port");
}

SourceOracle parse_source_oracle(const XmasNetwork& ntk, const std::string& id, const json& j) {
  if (!j.is_object()) fail("source oracle " + id + " must be an object");
  SourceOracle o;
  std::string mode = as_string(member(j, "mode", "source oracle " + id), "oracle mode");
  auto m = oracle_mode_from(mode);
  if (!m || *m == OracleMode::AlwaysReady)
    fail("source " + id + " cannot use mode '" + mode + "'");
  o.mode = *m;
  if (auto it = j.find("script"); it != j.end()) {
    if (o.mode != OracleMode::Scripted) fail("source " + id + ": script needs scripted mode");
    if (!it->is_array()) fail("script of " + id + " must be an array");
    for (const json& e : *it) {
      PacketTag tag = as_string(e, "script entry of " + id);
      if (!ntk.in_alphabet(tag)) fail("script of " + id + " uses tag '" + tag + "' outside the alphabet");
      o.script.push_back(std::move(tag));
    }
  }
  if (auto it = j.find("position"); it != j.end()) {
    o.position = as_port(*it, "position of " + id);
    if (o.position > o.script.size()) fail("position of " + id + " is past its script");
  }
  if (auto it = j.find("probability"); it != j.end()) {
    if (!it->is_number()) fail("probability of " + id + " must be a number");
    o.probability = it->get<double>();
    if (!(o.probability > 0.0) || o.probability > 1.0)
      fail("probability of " + id + " must lie in (0,1]");
  }
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_integer()) fail("seed of " + id + " must be an integer");
    o.seed = it->get<uint64_t>();
  }
  return o;
}

SinkOracle parse_sink_oracle(const std::string& id, const json& j) {
  if (!j.is_object()) fail("sink oracle " + id + " must be an object");
  SinkOracle o;
  std::string mode = as_string(member(j, "mode", "sink oracle " + id), "oracle mode");
  auto m = oracle_mode_from(mode);
  if (!m || *m == OracleMode::Silent)
    fail("sink " + id + " cannot use mode '" + mode + "'");
  o.mode = *m;
  if (auto it = j.find("script"); it != j.end()) {
    if (o.mode != OracleMode::Scripted) fail("sink " + id + ": script needs scripted mode");
    if (!it->is_array()) fail("script of " + id + " must be an array");
    for (const json& e : *it) {
      if (!e.is_boolean()) fail("script entries of " + id + " must be booleans");
      o.script.push_back(e.get<bool>());
    }
  }
  if (auto it = j.find("position"); it != j.end()) {
    o.position = as_port(*it, "position of " + id);
    if (o.position > o.script.size()) fail("position of " + id + " is past its script");
  }
  if (auto it = j.find("probability"); it != j.end()) {
    if (!it->is_number()) fail("probability of " + id + " must be a number");
    o.probability = it->get<double>();
    if (!(o.probability > 0.0) || o.probability > 1.0)
      fail("probability of " + id + " must lie in (0,1]");
  }
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_integer()) fail("seed of " + id + " must be an integer");
    o.seed = it->get<uint64_t>();
  }
  return o;
}

NetworkState parse_state_json(const XmasNetwork& ntk, const json& j) {
  if (!j.is_object()) fail("state must be an object");
  for (const auto& [key, value] : j.items())
    if (key != "queues" && key != "sources" && key != "sinks")
      fail("state has unknown key '" + key + "'");

  NetworkState st = initial_state(ntk);
  if (auto it = j.find("queues"); it != j.end()) {
    if (!it->is_object()) fail("state.queues must be an object");
    for (const auto& [id, contents] : it->items()) {
      const Component* c = find_component(ntk, id);
      if (!c || c->type != ComponentType::Queue) fail("'" + id + "' is not a queue");
      if (!contents.is_array()) fail("contents of " + id + " must be an array");
      if (contents.size() > static_cast<size_t>(c->capacity))
        fail("queue " + id + " holds more than its capacity");
      auto& q = st.queues.at(id);
      for (const json& e : contents) {
        PacketTag tag = as_string(e, "queue entry of " + id);
        if (!ntk.in_alphabet(tag)) fail("queue " + id + " holds tag '" + tag + "' outside the alphabet");
        q.push_back(std::move(tag));
      }
    }
  }
  if (auto it = j.find("sources"); it != j.end()) {
    if (!it->is_object()) fail("state.sources must be an object");
    for (const auto& [id, oracle] : it->items()) {
      const Component* c = find_component(ntk, id);
      if (!c || c->type != ComponentType::Source) fail("'" + id + "' is not a source");
      st.sources.at(id) = parse_source_oracle(ntk, id, oracle);
    }
  }
  if (auto it = j.find("sinks"); it != j.end()) {
    if (!it->is_object()) fail("state.sinks must be an object");
    for (const auto& [id, oracle] : it->items()) {
      const Component* c = find_component(ntk, id);
      if (!c || c->type != ComponentType::Sink) fail("'" + id + "' is not a sink");
      st.sinks.at(id) = parse_sink_oracle(id, oracle);
    }
  }
  init_seeded(ntk, st);
  return st;
}

NetworkDocument parse_document_json(const json& doc) {
  if (!doc.is_object()) fail("document root must be an object");
  NetworkDocument out;
  XmasNetwork& ntk = out.network;

  const json& alphabet = member(doc, "alphabet", "document");
  if (!alphabet.is_array()) fail("alphabet must be an array");
  for (const json& t : alphabet) ntk.alphabet.push_back(as_string(t, "alphabet entry"));

  const json& components = member(doc, "components", "document");
  if (!components.is_array()) fail("components must be an array");
  for (const json& c : components) ntk.components.push_back(parse_component(c));

  const json& channels = member(doc, "channels", "document");
  if (!channels.is_array()) fail("channels must be an array");
  for (const json& cj : channels) {
    if (!cj.is_object()) fail("channel entries must be objects");
    Channel ch;
    ch.id = as_string(member(cj, "id", "channel"), "channel id");
    size_t init_port = 0, target_port = 0;
    parse_endpoint(member(cj, "init", "channel " + ch.id), "init of " + ch.id, ch.init, init_port);
    parse_endpoint(member(cj, "target", "channel " + ch.id), "target of " + ch.id, ch.target,
                   target_port);
    // Port lists grow as declared; arity and dangling slots are validation
    // findings, not parse failures.
    if (Component* c = const_cast<Component*>(find_component(ntk, ch.init)))
      place(c->outs, init_port, ch.id);
    if (Component* c = const_cast<Component*>(find_component(ntk, ch.target)))
      place(c->ins, target_port, ch.id);
    ntk.channels.push_back(std::move(ch));
  }

  if (auto it = doc.find("state"); it != doc.end()) out.state = parse_state_json(ntk, *it);
  return out;
}

ordered render_state(const XmasNetwork& ntk, const NetworkState& st) {
  ordered s = ordered::object();
  ordered queues = ordered::object();
  ordered sources = ordered::object();
  ordered sinks = ordered::object();
  for (const Component& c : ntk.components) {
    if (c.type == ComponentType::Queue) {
      auto it = st.queues.find(c.id);
      if (it != st.queues.end()) queues[c.id] = it->second;
    } else if (c.type == ComponentType::Source) {
      auto it = st.sources.find(c.id);
      if (it == st.sources.end()) continue;
      const SourceOracle& o = it->second;
      ordered oj;
      oj["mode"] = std::string(to_string(o.mode));
      if (o.mode == OracleMode::Scripted) {
        oj["script"] = o.script;
        if (o.position) oj["position"] = o.position;
      } else if (o.mode == OracleMode::Seeded) {
        oj["probability"] = o.probability;
        oj["seed"] = o.seed;
      }
      sources[c.id] = std::move(oj);
    } else if (c.type == ComponentType::Sink) {
      auto it = st.sinks.find(c.id);
      if (it == st.sinks.end()) continue;
      const SinkOracle& o = it->second;
      ordered oj;
      oj["mode"] = std::string(to_string(o.mode));
      if (o.mode == OracleMode::Scripted) {
        oj["script"] = o.script;
        if (o.position) oj["position"] = o.position;
      } else if (o.mode == OracleMode::Seeded) {
        oj["probability"] = o.probability;
        oj["seed"] = o.seed;
      }
      if (!o.consumed.empty()) oj["consumed"] = o.consumed;
      sinks[c.id] = std::move(oj);
    }
  }
  s["queues"] = std::move(queues);
  s["sources"] = std::move(sources);
  s["sinks"] = std::move(sinks);
  return s;
}

size_t port_of(const std::vector<std::string>& slots, const std::string& id,
               const std::string& what) {
  for (size_t i = 0; i < slots.size(); ++i)
    if (slots[i] == id) return i;
  throw std::logic_error("cannot serialize: channel " + id + " is not wired to its " + what);
}

}  // namespace

NetworkState NetworkDocument::state_or_initial() const {
  return state ? *state : initial_state(network);
}

NetworkDocument parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(e.what());
  }
  return parse_document_json(doc);
}

NetworkDocument load_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("parse error: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_document(text);
}

NetworkState parse_state(const XmasNetwork& ntk, std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(e.what());
  }
  return parse_state_json(ntk, doc);
}

NetworkState load_state(const XmasNetwork& ntk, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("parse error: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_state(ntk, text);
}

std::string serialize_document(const XmasNetwork& ntk, const NetworkState* state) {
  ordered doc;
  doc["alphabet"] = ntk.alphabet;
  ordered comps = ordered::array();
  for (const Component& c : ntk.components) {
    ordered cj;
    cj["id"] = c.id;
    cj["type"] = std::string(to_string(c.type));
    if (c.type == ComponentType::Queue) cj["capacity"] = c.capacity;
    if (!c.field.empty()) {
      ordered table = ordered::object();
      for (const auto& [tag, entry] : c.field[0]) {
        if (const int* branch = std::get_if<int>(&entry))
          table[tag] = *branch;
        else
          table[tag] = std::get<PacketTag>(entry);
      }
      cj["table"] = std::move(table);
    }
    comps.push_back(std::move(cj));
  }
  doc["components"] = std::move(comps);

  ordered chans = ordered::array();
  for (const Channel& ch : ntk.channels) {
    ordered cj;
    cj["id"] = ch.id;
    const Component& init = get_init_component(ntk, ch);
    const Component& target = get_target_component(ntk, ch);
    cj["init"] = ordered::array({ch.init, port_of(init.outs, ch.id, "initiator")});
    cj["target"] = ordered::array({ch.target, port_of(target.ins, ch.id, "target")});
    chans.push_back(std::move(cj));
  }
  doc["channels"] = std::move(chans);

  if (state) doc["state"] = render_state(ntk, *state);
  return doc.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace xmas
