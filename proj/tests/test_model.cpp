#include <doctest.h>

#include "helpers.hpp"
#include "xmas/model.hpp"

using namespace xmas;
using namespace xmas::testing;

TEST_CASE("port arities per component type") {
  CHECK(in_arity(ComponentType::Source) == 0);
  CHECK(out_arity(ComponentType::Source) == 1);
  CHECK(in_arity(ComponentType::Sink) == 1);
  CHECK(out_arity(ComponentType::Sink) == 0);
  CHECK(in_arity(ComponentType::Queue) == 1);
  CHECK(out_arity(ComponentType::Queue) == 1);
  CHECK(in_arity(ComponentType::Switch) == 1);
  CHECK(out_arity(ComponentType::Switch) == 2);
  CHECK(in_arity(ComponentType::Function) == 1);
  CHECK(out_arity(ComponentType::Function) == 1);
}

TEST_CASE("type names round-trip and resources are queue/source/sink") {
  for (ComponentType t : {ComponentType::Queue, ComponentType::Switch, ComponentType::Source,
                          ComponentType::Sink, ComponentType::Function})
    CHECK(component_type_from(to_string(t)) == t);
  CHECK_FALSE(component_type_from("router").has_value());
  CHECK(is_resource(ComponentType::Queue));
  CHECK(is_resource(ComponentType::Source));
  CHECK(is_resource(ComponentType::Sink));
  CHECK_FALSE(is_resource(ComponentType::Switch));
  CHECK_FALSE(is_resource(ComponentType::Function));
}

TEST_CASE("wiring accessors resolve ids and ports") {
  XmasNetwork n = make_rb();
  const Component* sw = find_component(n, "sw");
  REQUIRE(sw != nullptr);
  CHECK(find_component(n, "nope") == nullptr);
  const Channel* c2 = find_channel(n, "c2");
  REQUIRE(c2 != nullptr);
  CHECK(find_channel(n, "nope") == nullptr);

  CHECK(get_in_channel(n, *sw, 0).id == "c1");
  CHECK(get_out_channel(n, *sw, 0).id == "c2");
  CHECK(get_out_channel(n, *sw, 1).id == "c3");
  CHECK_THROWS_AS(get_out_channel(n, *sw, 2), StructuralError);
  CHECK_THROWS_AS(get_in_channel(n, *find_component(n, "src"), 0), StructuralError);

  CHECK(get_init_component(n, *c2).id == "sw");
  CHECK(get_target_component(n, *c2).id == "q1");
  CHECK(component_index(n, *sw) == 2);
  CHECK(channel_index(n, *c2) == 2);
}

TEST_CASE("table lookup by tag") {
  XmasNetwork n = make_rb();
  const Component& sw = *find_component(n, "sw");
  auto red = apply_field(0, sw, "red");
  REQUIRE(red.has_value());
  CHECK(std::get<int>(*red) == 0);
  auto blue = apply_field(0, sw, "blue");
  REQUIRE(blue.has_value());
  CHECK(std::get<int>(*blue) == 1);
  CHECK_FALSE(apply_field(0, sw, "green").has_value());
  CHECK_FALSE(apply_field(1, sw, "red").has_value());
  const Component& src = *find_component(n, "src");
  CHECK_FALSE(apply_field(0, src, "red").has_value());
}

TEST_CASE("the routing fixture and its variants validate cleanly") {
  CHECK(validate_network(make_rb()).ok());
  CHECK(validate_network(make_chain()).ok());
  CHECK(validate_network(make_fn_chain()).ok());
  CHECK(validate_network(make_loop()).ok());
}

TEST_CASE("dangling channel endpoint is a reference-integrity finding only") {
  XmasNetwork n = make_rb();
  n.channels[1].init = "zz";  // c1 now initiated by nothing
  ValidationReport r = validate_network(n);
  CHECK(r.violates_exactly({Clause::ReferenceIntegrity}));
}

TEST_CASE("unwired port slot is a reference-integrity finding") {
  XmasNetwork n = make_rb();
  n.components[2].outs = {"c2", "c3", ""};  // a hole behind the real ports
  ValidationReport r = validate_network(n);
  // the hole also breaks the switch's declared arity
  CHECK(r.violates(Clause::ReferenceIntegrity));
}

TEST_CASE("wrong port count is a port-arity finding only") {
  XmasNetwork n = make_rb();
  n.components.push_back(make_comp("snk3", ComponentType::Sink, {"c6"}, {}));
  n.channels.push_back(make_chan("c6", "sw", "snk3"));
  n.components[2].outs.push_back("c6");  // a third switch output
  ValidationReport r = validate_network(n);
  CHECK(r.violates_exactly({Clause::PortArity}));
}

TEST_CASE("queue capacity below one is a port-arity finding") {
  XmasNetwork n = make_rb();
  n.components[1].capacity = 0;
  CHECK(validate_network(n).violates_exactly({Clause::PortArity}));
}

TEST_CASE("input slot pointing at a foreign channel is an invertibility finding only") {
  XmasNetwork n = make_rb();
  // a second sink claiming c4 as its input while c4 still targets snk1
  n.components.push_back(make_comp("imp", ComponentType::Sink, {"c4"}, {}));
  ValidationReport r = validate_network(n);
  CHECK(r.violates_exactly({Clause::InvertibleIns}));
}

TEST_CASE("output slot pointing at a foreign channel is an invertibility finding only") {
  XmasNetwork n = make_rb();
  n.components.push_back(make_comp("imp", ComponentType::Source, {}, {"c0"}));
  ValidationReport r = validate_network(n);
  CHECK(r.violates_exactly({Clause::InvertibleOuts}));
}

TEST_CASE("channel absent from its target's inputs is its own finding") {
  XmasNetwork n = make_rb();
  // u2 feeds q0 through c6, but q0 never lists c6
  n.components.push_back(make_comp("u2", ComponentType::Source, {}, {"c6"}));
  n.channels.push_back(make_chan("c6", "u2", "q0"));
  ValidationReport r = validate_network(n);
  CHECK(r.violates_exactly({Clause::ChannelKnownByTarget}));
}

TEST_CASE("channel absent from its initiator's outputs is its own finding") {
  XmasNetwork n = make_rb();
  n.components.push_back(make_comp("u3", ComponentType::Sink, {"c7"}, {}));
  n.channels.push_back(make_chan("c7", "q1", "u3"));
  ValidationReport r = validate_network(n);
  CHECK(r.violates_exactly({Clause::ChannelKnownByInit}));
}

TEST_CASE("duplicate ids are a uniqueness finding only") {
  XmasNetwork n = make_rb();
  n.channels.push_back(make_chan("c2", "sw", "q1"));
  ValidationReport r = validate_network(n);
  CHECK(r.violates_exactly({Clause::UniqueIds}));

  XmasNetwork m = make_rb();
  m.components.push_back(make_comp("q1", ComponentType::Queue, {"c2"}, {"c4"}));
  CHECK(validate_network(m).violates(Clause::UniqueIds));
}

TEST_CASE("incomplete table is a totality finding only") {
  XmasNetwork n = make_rb();
  n.components[2].field[0].erase("blue");
  ValidationReport r = validate_network(n);
  CHECK(r.violates_exactly({Clause::TableTotality}));
}

TEST_CASE("missing table entirely is a totality finding") {
  XmasNetwork n = make_rb();
  n.components[2].field.clear();
  CHECK(validate_network(n).violates_exactly({Clause::TableTotality}));
}

TEST_CASE("function result outside the alphabet is a totality finding") {
  XmasNetwork n = make_fn_chain();
  n.components[2].field[0]["red"] = PacketTag("green");
  CHECK(validate_network(n).violates_exactly({Clause::TableTotality}));
}

TEST_CASE("non-binary switch branch is its own finding") {
  XmasNetwork n = make_rb();
  n.components[2].field[0]["blue"] = 7;
  ValidationReport r = validate_network(n);
  CHECK(r.violates_exactly({Clause::SwitchTableBinary}));

  XmasNetwork m = make_rb();
  m.components[2].field[0]["blue"] = PacketTag("red");  // a tag where a branch belongs
  CHECK(validate_network(m).violates_exactly({Clause::SwitchTableBinary}));
}

TEST_CASE("finding text names clause, subject and port") {
  XmasNetwork n = make_rb();
  n.components[1].capacity = 0;
  ValidationReport r = validate_network(n);
  REQUIRE(r.findings.size() == 1);
  std::string text = to_text(r.findings[0]);
  CHECK(text.find("clause=(b)") != std::string::npos);
  CHECK(text.find("q0") != std::string::npos);
}

TEST_CASE("clause letters span a to i") {
  CHECK(clause_letter(Clause::ReferenceIntegrity) == 'a');
  CHECK(clause_letter(Clause::SwitchTableBinary) == 'i');
  CHECK(clause_name(Clause::InvertibleIns) == "invertible-ins");
}
