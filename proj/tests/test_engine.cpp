#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "xmas/engine.hpp"
#include "xmas/obligations.hpp"
#include "xmas/rng.hpp"

using namespace xmas;
using namespace xmas::testing;

namespace {

std::vector<std::string> fired_ids(const TraceEvent& ev) {
  std::vector<std::string> out;
  for (const FiredTransfer& f : ev.fired) out.push_back(f.channel);
  return out;
}

StepSuccess step_ok(const XmasNetwork& n, const NetworkState& st) {
  auto result = step(n, st);
  REQUIRE(std::holds_alternative<StepSuccess>(result));
  return std::get<StepSuccess>(std::move(result));
}

}  // namespace

TEST_CASE("a packet moves through the switch into its branch queue in one cycle") {
  XmasNetwork n = make_rb();
  NetworkState st = state_with_queue(n, "q0", {"red"});
  StepSuccess s = step_ok(n, st);
  // the dequeue from q0 and the enqueue into q1 are one simultaneous transfer
  // pair: both c1 and c2 fire
  CHECK(fired_ids(s.event) == std::vector<std::string>{"c1", "c2"});
  CHECK(s.state.queues.at("q0").empty());
  CHECK(s.state.queues.at("q1") == std::deque<PacketTag>{"red"});
  CHECK(s.state.queues.at("q2").empty());
  CHECK(s.state.cycle == 1);
}

TEST_CASE("nothing fires in an empty network, only the cycle counter moves") {
  XmasNetwork n = make_rb();
  NetworkState st = initial_state(n);
  StepSuccess s = step_ok(n, st);
  CHECK(s.event.fired.empty());
  NetworkState expect = st;
  expect.cycle = 1;
  CHECK(s.state == expect);
}

TEST_CASE("a full queue refuses the enqueue even while it dequeues") {
  XmasNetwork n = make_rb();
  NetworkState st = state_with_queue(n, "q0", {"red", "blue"});
  script_source(st, "src", {"red"});
  StepSuccess s = step_ok(n, st);
  // q0 is at capacity, so c0 waits although a slot opens this very cycle
  CHECK(fired_ids(s.event) == std::vector<std::string>{"c1", "c2"});
  CHECK(s.state.queues.at("q0") == std::deque<PacketTag>{"blue"});
  CHECK(s.state.sources.at("src").position == 0);
}

TEST_CASE("a non-full queue enqueues and dequeues in the same cycle") {
  XmasNetwork n = make_rb();
  NetworkState st = state_with_queue(n, "q0", {"red"});
  script_source(st, "src", {"blue"});
  StepSuccess s = step_ok(n, st);
  CHECK(fired_ids(s.event) == std::vector<std::string>{"c0", "c1", "c2"});
  CHECK(s.state.queues.at("q0") == std::deque<PacketTag>{"blue"});
  CHECK(s.state.queues.at("q1") == std::deque<PacketTag>{"red"});
  CHECK(s.state.sources.at("src").position == 1);
}

TEST_CASE("sources advance only on transfer and sinks record what they consume") {
  // a sink script is a per-consumption budget: one true entry accepts one
  // packet, exhaustion refuses from then on
  XmasNetwork n = make_chain(1);
  NetworkState st = state_with_queue(n, "q0", {"red"});
  script_source(st, "src", {"blue"});
  script_sink(st, "snk", {true});
  // cycle 0: q0 full blocks the source, snk takes red
  StepSuccess s0 = step_ok(n, st);
  CHECK(fired_ids(s0.event) == std::vector<std::string>{"k1"});
  CHECK(s0.state.sources.at("src").position == 0);
  CHECK(s0.state.sinks.at("snk").consumed == std::vector<PacketTag>{"red"});
  CHECK(s0.state.sinks.at("snk").position == 1);
  // cycle 1: blue enters the freed queue
  StepSuccess s1 = step_ok(n, s0.state);
  CHECK(fired_ids(s1.event) == std::vector<std::string>{"k0"});
  CHECK(s1.state.queues.at("q0") == std::deque<PacketTag>{"blue"});
  CHECK(s1.state.sources.at("src").position == 1);
  // cycle 2: the sink's budget is spent, blue has nowhere to go
  StepSuccess s2 = step_ok(n, s1.state);
  CHECK(s2.event.fired.empty());
  auto q = detect_quiescence(n, s2.state);
  REQUIRE(std::holds_alternative<Quiescence>(q));
  CHECK(std::get<Quiescence>(q) == Quiescence::Stuck);
}

TEST_CASE("stepping a combinational loop reports the cyclic keys") {
  XmasNetwork n = make_loop();
  NetworkState st = initial_state(n);
  auto result = step(n, st);
  REQUIRE(std::holds_alternative<EvalError>(result));
  const EvalError& e = std::get<EvalError>(result);
  CHECK(e.cycle == 0);
  CHECK(e.keys.size() == 6);
}

TEST_CASE("a scripted run drains the fixture and sorts packets to their sinks") {
  XmasNetwork n = make_rb();
  NetworkState st = initial_state(n);
  script_source(st, "src", {"red", "blue"});
  RunResult r = run(n, st, 10);
  CHECK(r.status == RunStatus::Drained);
  CHECK(r.final_state.cycle <= 10);
  for (const auto& [id, q] : r.final_state.queues) CHECK(q.empty());
  CHECK(r.final_state.sinks.at("snk1").consumed == std::vector<PacketTag>{"red"});
  CHECK(r.final_state.sinks.at("snk2").consumed == std::vector<PacketTag>{"blue"});
  CHECK(conservation_check(n, r.trace, st, r.final_state));
}

TEST_CASE("a silent source never counts as drained") {
  XmasNetwork n = make_rb();
  NetworkState st = initial_state(n);
  RunResult r = run(n, st, 5);
  CHECK(r.status == RunStatus::MaxCycles);
  CHECK(r.trace.size() == 5);
  for (const TraceEvent& ev : r.trace) CHECK(ev.fired.empty());
}

TEST_CASE("running a loop network surfaces the evaluation error") {
  XmasNetwork n = make_loop();
  RunResult r = run(n, initial_state(n), 5);
  CHECK(r.status == RunStatus::Error);
  CHECK(r.trace.empty());
  CHECK_FALSE(r.error_keys.empty());
}

TEST_CASE("quiescence: drained needs empty queues and finished scripts") {
  XmasNetwork n = make_rb();
  NetworkState st = initial_state(n);
  script_source(st, "src", {"red"});
  st.sources.at("src").position = 1;
  auto q = detect_quiescence(n, st);
  REQUIRE(std::holds_alternative<Quiescence>(q));
  CHECK(std::get<Quiescence>(q) == Quiescence::Drained);

  // same queues, script not yet finished
  st.sources.at("src").position = 0;
  q = detect_quiescence(n, st);
  CHECK(std::get<Quiescence>(q) == Quiescence::Active);

  // silent mode blocks the drained verdict forever
  NetworkState silent = initial_state(n);
  q = detect_quiescence(n, silent);
  CHECK(std::get<Quiescence>(q) == Quiescence::Active);
}

TEST_CASE("quiescence: no fire with work pending is stuck") {
  XmasNetwork n = make_rb();
  NetworkState st = state_with_queue(n, "q0", {"red", "red"});
  st.queues.at("q1") = {"red", "red"};
  script_source(st, "src", {"red"});
  script_sink(st, "snk1", {false});
  auto q = detect_quiescence(n, st);
  REQUIRE(std::holds_alternative<Quiescence>(q));
  CHECK(std::get<Quiescence>(q) == Quiescence::Stuck);

  NetworkState mid = state_with_queue(n, "q0", {"red"});
  q = detect_quiescence(n, mid);
  CHECK(std::get<Quiescence>(q) == Quiescence::Active);
}

TEST_CASE("quiescence refuses seeded oracles") {
  XmasNetwork n = make_rb();
  NetworkState st = initial_state(n);
  st.sources.at("src").mode = OracleMode::Seeded;
  reseed_oracles(n, st, 1);
  CHECK_THROWS_AS(detect_quiescence(n, st), std::invalid_argument);
}

TEST_CASE("the capacity-one variant stalls two cycles in") {
  XmasNetwork n = make_rb();
  n.components[3].capacity = 1;  // q1
  NetworkState st = initial_state(n);
  script_source(st, "src", {"red", "red"});
  script_sink(st, "snk1", {false});
  RunResult r = run(n, st, 10);
  CHECK(r.status == RunStatus::Stuck);
  REQUIRE(r.stall_cycle.has_value());
  CHECK(*r.stall_cycle == 2);
  CHECK(r.final_state.queues.at("q1") == std::deque<PacketTag>{"red"});
  CHECK(r.final_state.queues.at("q0") == std::deque<PacketTag>{"red"});
}

TEST_CASE("conservation holds on real traces and rejects tampered ones") {
  XmasNetwork n = make_rb();
  NetworkState st = initial_state(n);
  script_source(st, "src", {"red", "blue", "red"});
  RunResult r = run(n, st, 15);
  REQUIRE(r.status == RunStatus::Drained);
  CHECK(conservation_check(n, r.trace, st, r.final_state));

  // dropping one consumption record must break the balance
  auto tampered = r.trace;
  for (auto& ev : tampered) {
    auto it = std::find_if(ev.fired.begin(), ev.fired.end(),
                           [](const FiredTransfer& f) { return f.channel == "c4"; });
    if (it != ev.fired.end()) {
      ev.fired.erase(it);
      break;
    }
  }
  CHECK_FALSE(conservation_check(n, tampered, st, r.final_state));

  CHECK(conservation_check(n, {}, st, st));  // empty run balances trivially
}

TEST_CASE("conservation tracks retagging through function components") {
  XmasNetwork n = make_fn_chain();
  NetworkState st = initial_state(n);
  script_source(st, "src", {"red", "red", "blue"});
  RunResult r = run(n, st, 20);
  REQUIRE(r.status == RunStatus::Drained);
  CHECK(r.final_state.sinks.at("snk").consumed ==
        std::vector<PacketTag>{"blue", "blue", "red"});
  CHECK(conservation_check(n, r.trace, st, r.final_state));
}

TEST_CASE("queues preserve arrival order") {
  XmasNetwork n = make_chain(3);
  NetworkState st = initial_state(n);
  script_source(st, "src", {"red", "blue", "blue", "red"});
  RunResult r = run(n, st, 20);
  REQUIRE(r.status == RunStatus::Drained);
  CHECK(r.final_state.sinks.at("snk").consumed ==
        std::vector<PacketTag>{"red", "blue", "blue", "red"});
}

TEST_CASE("applying fired transfers is order-independent") {
  XmasNetwork n = make_rb();
  NetworkState st = state_with_queue(n, "q0", {"red"});
  script_source(st, "src", {"blue"});
  StepSuccess s = step_ok(n, st);
  REQUIRE(s.event.fired.size() == 3);
  NetworkState reference = apply_transfers(n, st, s.event.fired);
  std::mt19937_64 rng(mix64(77));
  std::vector<FiredTransfer> shuffled = s.event.fired;
  for (int i = 0; i < 100; ++i) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(apply_transfers(n, st, shuffled) == reference);
  }
}

TEST_CASE("capacity is safe across random runs") {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    GenParams params;
    params.seed = seed;
    XmasNetwork n = gen_random_network(params);
    NetworkState st = gen_random_state(n, seed + 1000);
    RunResult r = run(n, st, 10);
    REQUIRE(r.status != RunStatus::Error);
    for (const TraceEvent& ev : r.trace)
      for (const auto& [qid, contents] : ev.queues_after) {
        const Component* q = find_component(n, qid);
        REQUIRE(q != nullptr);
        CHECK(contents.size() <= static_cast<size_t>(q->capacity));
      }
  }
}

TEST_CASE("deterministic runs reproduce byte for byte") {
  XmasNetwork n = make_rb();
  NetworkState st = initial_state(n);
  script_source(st, "src", {"red", "blue", "red"});
  RunResult a = run(n, st, 15);
  RunResult b = run(n, st, 15);
  CHECK(a.trace == b.trace);
  CHECK(a.final_state == b.final_state);
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i)
    CHECK(trace_line(a.trace[i]) == trace_line(b.trace[i]));
}

TEST_CASE("seeded oracles reproduce per seed and differ across seeds") {
  XmasNetwork n = make_chain(2);
  NetworkState st = initial_state(n);
  st.sources.at("src").mode = OracleMode::Seeded;
  st.sources.at("src").probability = 0.5;
  st.sinks.at("snk").mode = OracleMode::Seeded;
  st.sinks.at("snk").probability = 0.5;

  NetworkState s1 = st, s2 = st, s3 = st;
  reseed_oracles(n, s1, 42);
  reseed_oracles(n, s2, 42);
  reseed_oracles(n, s3, 43);
  RunResult r1 = run(n, s1, 50);
  RunResult r2 = run(n, s2, 50);
  RunResult r3 = run(n, s3, 50);
  CHECK(r1.trace == r2.trace);
  CHECK(r1.final_state == r2.final_state);
  CHECK(r1.status == RunStatus::MaxCycles);  // seeded never drains
  // different seed, different history (holds for this seed pair)
  CHECK(r1.trace != r3.trace);
  // something actually flowed
  CHECK_FALSE(r1.final_state.sinks.at("snk").consumed.empty());
}

TEST_CASE("trace lines render cycle, fired pairs and queue occupancy") {
  XmasNetwork n = make_rb();
  NetworkState st = state_with_queue(n, "q0", {"red"});
  StepSuccess s = step_ok(n, st);
  CHECK(trace_line(s.event) ==
        "cycle=0 fired=[(c1,red),(c2,red)] queues={q0:[],q1:[red],q2:[]}");
}

TEST_CASE("hand-built transfer lists cannot overflow a queue") {
  XmasNetwork n = make_chain(1);
  NetworkState st = state_with_queue(n, "q0", {"red"});
  std::vector<FiredTransfer> bogus = {{"k0", "blue"}};
  CHECK_THROWS_AS(apply_transfers(n, st, bogus), std::logic_error);
}
