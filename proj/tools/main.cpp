#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "xmas/engine.hpp"
#include "xmas/eval.hpp"
#include "xmas/json_io.hpp"
#include "xmas/model.hpp"
#include "xmas/obligations.hpp"

namespace {

using namespace xmas;

constexpr int kOk = 0;
constexpr int kActive = 1;
constexpr int kCheckFailed = 1;
constexpr int kFindings = 2;
constexpr int kParse = 3;
constexpr int kUnknownChannel = 4;
constexpr int kEvalCycle = 5;
constexpr int kStuck = 6;
constexpr int kUsage = 64;

void print_findings(const ValidationReport& report) {
  for (const Finding& f : report.findings) std::cout << to_text(f) << "\n";
}

std::string cycle_line(const std::vector<SignalKey>& keys, const XmasNetwork& ntk) {
  std::string out = "ERROR: combinatorial cycle via ";
  for (size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ',';
    out += to_text(keys[i], ntk);
  }
  return out;
}

// Loads and validates; on failure prints and fills `rc`.
std::optional<NetworkDocument> load_checked(const std::string& path, int& rc) {
  NetworkDocument doc;
  try {
    doc = load_document(path);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    rc = kParse;
    return std::nullopt;
  }
  ValidationReport report = validate_network(doc.network);
  if (!report.ok()) {
    print_findings(report);
    rc = kFindings;
    return std::nullopt;
  }
  return doc;
}

std::optional<NetworkState> pick_state(const NetworkDocument& doc, const std::string& state_path,
                                       int& rc) {
  if (state_path.empty()) return doc.state_or_initial();
  try {
    return load_state(doc.network, state_path);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    rc = kParse;
    return std::nullopt;
  }
}

int cmd_validate(const std::string& path) {
  NetworkDocument doc;
  try {
    doc = load_document(path);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kParse;
  }
  ValidationReport report = validate_network(doc.network);
  if (!report.ok()) {
    print_findings(report);
    return kFindings;
  }
  std::cout << "ok\n";
  return kOk;
}

int cmd_eval(const std::string& path, const std::string& channel, const std::string& signal,
             const std::string& state_path) {
  int rc = kOk;
  auto doc = load_checked(path, rc);
  if (!doc) return rc;
  const XmasNetwork& ntk = doc->network;
  auto st = pick_state(*doc, state_path, rc);
  if (!st) return rc;

  size_t lo = 0, hi = ntk.channels.size();
  if (!channel.empty()) {
    const Channel* ch = find_channel(ntk, channel);
    if (!ch) {
      std::cerr << "unknown channel '" << channel << "'\n";
      return kUnknownChannel;
    }
    lo = channel_index(ntk, *ch);
    hi = lo + 1;
  }

  SignalAssignment a = eval_all(ntk, *st);
  std::vector<std::pair<SignalKey, std::string>> lines;
  bool hit_error = false;
  for (size_t ci = lo; ci < hi; ++ci) {
    for (SignalFlag f : {SignalFlag::Irdy, SignalFlag::Trdy, SignalFlag::Data}) {
      if (!signal.empty() && signal != to_string(f)) continue;
      std::string text = f == SignalFlag::Data ? to_text(a.data[ci]) : to_text(a.wire(ci, f));
      bool err = f == SignalFlag::Data ? is_error(a.data[ci]) : is_error(a.wire(ci, f));
      hit_error |= err;
      lines.emplace_back(SignalKey{ci, f}, std::move(text));
    }
  }
  if (hit_error) {
    std::cout << cycle_line(a.cycle_keys, ntk) << "\n";
    return kEvalCycle;
  }
  bool single = lines.size() == 1;
  for (auto& [key, text] : lines) {
    if (!single) std::cout << ntk.channels[key.channel].id << " " << to_string(key.flag) << ": ";
    std::cout << text << "\n";
  }
  return kOk;
}

int cmd_run(const std::string& path, const std::string& state_path, uint64_t cycles,
            const std::string& trace_path, std::optional<uint64_t> seed, bool quiet) {
  int rc = kOk;
  auto doc = load_checked(path, rc);
  if (!doc) return rc;
  const XmasNetwork& ntk = doc->network;
  auto st = pick_state(*doc, state_path, rc);
  if (!st) return rc;
  if (seed) reseed_oracles(ntk, *st, *seed);

  RunResult r = run(ntk, *st, cycles);
  std::string trace_text;
  for (const TraceEvent& ev : r.trace) {
    std::string line = trace_line(ev);
    if (!quiet) std::cout << line << "\n";
    trace_text += line;
    trace_text += '\n';
  }
  if (!trace_path.empty()) write_file_atomic(trace_path, trace_text);

  switch (r.status) {
    case RunStatus::Drained:
      std::cout << "status=drained cycles=" << r.final_state.cycle << "\n";
      return kOk;
    case RunStatus::MaxCycles:
      std::cout << "status=active cycles=" << r.final_state.cycle << "\n";
      return kActive;
    case RunStatus::Stuck:
      std::cout << "status=stuck stall_cycle=" << *r.stall_cycle << "\n";
      return kStuck;
    case RunStatus::Error:
      std::cout << cycle_line(r.error_keys, ntk) << "\n";
      return kEvalCycle;
  }
  return kOk;
}

struct CheckTally {
  size_t runs = 0;
  size_t failures = 0;
};

void record(std::array<CheckTally, 4>& tally, const std::array<ObligationReport, 4>& reports,
            const XmasNetwork& ntk, const NetworkState& st, const std::string& label,
            const std::string& out_dir, size_t& witness_count) {
  for (size_t i = 0; i < 4; ++i) {
    const ObligationReport& rep = reports[i];
    ++tally[i].runs;
    if (rep.passed) continue;
    ++tally[i].failures;
    std::filesystem::path wpath =
        std::filesystem::path(out_dir) /
        ("witness-" + std::to_string(witness_count++) + "-" +
         std::string(to_string(rep.obligation)) + ".json");
    write_file_atomic(wpath, serialize_document(ntk, &st));
    std::cout << "FAIL " << to_string(rep.obligation) << " on " << label;
    if (rep.witness)
      std::cout << " at " << rep.witness->channel_id << "." << to_string(rep.witness->key.flag)
                << " value " << rep.witness->value_text;
    std::cout << " witness=" << wpath.string() << "\n";
  }
}

int cmd_check(const std::string& path, size_t random_count, uint64_t seed,
              const std::string& out_dir) {
  std::array<CheckTally, 4> tally{};
  size_t witness_count = 0;

  if (!path.empty()) {
    int rc = kOk;
    auto doc = load_checked(path, rc);
    if (!doc) return rc;
    const XmasNetwork& ntk = doc->network;
    std::vector<std::pair<std::string, NetworkState>> states;
    if (doc->state) states.emplace_back("embedded state", *doc->state);
    states.emplace_back("empty state", gen_random_state(ntk, seed, StateFill::AllEmpty));
    states.emplace_back("full state", gen_random_state(ntk, seed, StateFill::AllFull));
    states.emplace_back("random state", gen_random_state(ntk, seed, StateFill::Random));
    for (auto& [label, st] : states)
      record(tally, check_all_obligations(ntk, st), ntk, st, label, out_dir, witness_count);
  } else {
    for (size_t i = 0; i < random_count; ++i) {
      GenParams params;
      params.seed = seed + i;
      XmasNetwork ntk = gen_random_network(params);
      NetworkState st = gen_random_state(ntk, seed + i);
      record(tally, check_all_obligations(ntk, st), ntk, st, "seed " + std::to_string(seed + i),
             out_dir, witness_count);
    }
  }

  size_t total = 0, failed = 0;
  for (size_t i = 0; i < 4; ++i) {
    std::cout << to_string(static_cast<Obligation>(i)) << ": runs=" << tally[i].runs
              << " failures=" << tally[i].failures << "\n";
    total += tally[i].runs;
    failed += tally[i].failures;
  }
  std::cout << "checks=" << total << " failures=" << failed << "\n";
  return failed == 0 ? kOk : kCheckFailed;
}

int cmd_gen(uint64_t seed, std::optional<size_t> size, const std::string& out_path) {
  GenParams params;
  params.seed = seed;
  if (size) {
    params.min_components = *size;
    params.max_components = *size;
  }
  XmasNetwork ntk = gen_random_network(params);
  std::string text = serialize_document(ntk);
  if (out_path.empty())
    std::cout << text;
  else
    write_file_atomic(out_path, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xMAS network simulator and checker"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check the wellformedness clauses of a network");
  std::string validate_path;
  validate->add_option("file", validate_path, "network document")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate channel signals against a state");
  std::string eval_path, eval_channel, eval_signal, eval_state;
  eval->add_option("file", eval_path, "network document")->required();
  eval->add_option("--channel", eval_channel, "restrict to one channel id");
  eval->add_option("--signal", eval_signal, "restrict to one signal")
      ->check(CLI::IsMember({"irdy", "trdy", "data"}));
  eval->add_option("--state", eval_state, "state document replacing the embedded one");

  auto* run_cmd = app.add_subcommand("run", "Simulate cycles until quiescence");
  std::string run_path, run_state, run_trace;
  uint64_t run_cycles = 1000;
  std::optional<uint64_t> run_seed;
  bool run_quiet = false;
  run_cmd->add_option("file", run_path, "network document")->required();
  run_cmd->add_option("--state", run_state, "state document replacing the embedded one");
  run_cmd->add_option("--cycles", run_cycles, "cycle budget");
  run_cmd->add_option("--trace", run_trace, "write the trace to this file");
  run_cmd->add_option("--seed", run_seed, "re-seed every seeded oracle from this base");
  run_cmd->add_flag("--quiet", run_quiet, "suppress per-cycle trace lines on stdout");

  auto* check = app.add_subcommand("check", "Run the four routing obligations");
  std::string check_path, check_out = ".";
  size_t check_random = 0;
  uint64_t check_seed = 1;
  check->add_option("file", check_path, "network document");
  check->add_option("--random", check_random, "check this many generated network/state pairs");
  check->add_option("--seed", check_seed, "base seed for generation");
  check->add_option("--out", check_out, "directory for witness files");

  auto* gen = app.add_subcommand("gen", "Emit a random valid network document");
  uint64_t gen_seed = 0;
  std::optional<size_t> gen_size;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--size", gen_size, "exact component count");
  gen->add_option("--out", gen_out, "output file (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(validate_path);
    if (app.got_subcommand(eval)) return cmd_eval(eval_path, eval_channel, eval_signal, eval_state);
    if (app.got_subcommand(run_cmd))
      return cmd_run(run_path, run_state, run_cycles, run_trace, run_seed, run_quiet);
    if (app.got_subcommand(check)) {
      if (check_path.empty() && check_random == 0) {
        std::cerr << "check needs a file or --random N\n";
        return kUsage;
      }
      if (!check_path.empty() && check_random != 0) {
        std::cerr << "check takes a file or --random N, not both\n";
        return kUsage;
      }
      return cmd_check(check_path, check_random, check_seed, check_out);
    }
    if (app.got_subcommand(gen)) return cmd_gen(gen_seed, gen_size, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
  return kUsage;
}
