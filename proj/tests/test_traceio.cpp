#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "ngon/trace_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

using namespace ngon;
using nlohmann::json;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start < text.size()) {
    const size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out += '\n';
  }
  return out;
}

// Re-emits `text` with `edit` applied to the JSON record on `line`.
template <typename Edit>
std::string mutate_line(const std::string& text, size_t line, Edit edit) {
  std::vector<std::string> lines = split_lines(text);
  json j = json::parse(lines.at(line));
  edit(j);
  lines.at(line) = j.dump();
  return join_lines(lines);
}

std::string error_text(const std::string& trace_text) {
  try {
    parse_trace(trace_text);
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

Trace sample_trace() {
  SimParams p;
  p.n = 5;
  p.seed = 3;
  p.fairness_window = default_fairness_window(5);
  p.max_rounds = default_max_rounds(5);
  return run(random_config(5, 3), p);
}

}  // namespace

TEST_CASE("traces survive the round trip exactly") {
  SUBCASE("round robin run") {
    const Trace t = sample_trace();
    REQUIRE_FALSE(t.rounds.empty());
    const std::string text = emit_trace(t);
    CHECK(emit_trace(t) == text);  // serialization is deterministic
    CHECK(traces_equal(parse_trace(text), t));
  }
  SUBCASE("random subsets with randomized frames, budget exhausted") {
    SimParams p;
    p.n = 7;
    p.seed = 21;
    p.scheduler = SchedulerKind::RandomSubset;
    p.randomize_frames = true;
    p.fairness_window = default_fairness_window(7);
    p.max_rounds = 2;
    const Trace t = run(random_config(7, 21), p);
    REQUIRE(t.outcome.kind == OutcomeKind::MaxRoundsExceeded);
    CHECK(traces_equal(parse_trace(emit_trace(t)), t));
  }
  SUBCASE("a zero-round trace") {
    SimParams p;
    p.n = 2;
    p.fairness_window = default_fairness_window(2);
    p.max_rounds = default_max_rounds(2);
    const Trace t = run({Vec2d(0, 0), Vec2d(1, 1)}, p);
    CHECK(t.rounds.empty());
    CHECK(traces_equal(parse_trace(emit_trace(t)), t));
  }
  SUBCASE("a scripted run keeps its script") {
    SimParams p;
    p.n = 5;
    p.scheduler = SchedulerKind::Scripted;
    p.script = {{0, 1, 2}, {3, 4}};
    p.fairness_window = default_fairness_window(5);
    p.max_rounds = default_max_rounds(5);
    const Trace t = run(random_config(5, 8), p);
    const Trace back = parse_trace(emit_trace(t));
    CHECK(traces_equal(back, t));
    CHECK(back.params.script == p.script);
  }
}

TEST_CASE("malformed traces are rejected with the offending line") {
  const Trace t = sample_trace();
  const std::string good = emit_trace(t);
  const std::vector<std::string> lines = split_lines(good);
  REQUIRE(lines.size() >= 4);  // header, two rounds, outcome

  SUBCASE("empty input") { CHECK_THROWS_AS(parse_trace(""), InputError); }
  SUBCASE("garbage is reported with its line number") {
    std::vector<std::string> bad = lines;
    bad[1] = "not json";
    const std::string msg = error_text(join_lines(bad));
    CHECK(msg.find("trace line 2") != std::string::npos);
  }
  SUBCASE("the header must come first") {
    std::vector<std::string> bad(lines.begin() + 1, lines.end());
    CHECK_THROWS_AS(parse_trace(join_lines(bad)), InputError);
  }
  SUBCASE("a missing header field is an error") {
    CHECK_THROWS_AS(parse_trace(mutate_line(good, 0, [](json& j) { j.erase("n"); })),
                    InputError);
  }
  SUBCASE("unknown scheduler names are rejected") {
    CHECK_THROWS_AS(
        parse_trace(mutate_line(good, 0, [](json& j) { j["scheduler"] = "alphabetical"; })),
        InputError);
  }
  SUBCASE("unknown phase names are rejected") {
    CHECK_THROWS_AS(
        parse_trace(mutate_line(good, 1, [](json& j) { j["phase"] = "flying"; })),
        InputError);
  }
  SUBCASE("unknown outcome names are rejected") {
    CHECK_THROWS_AS(parse_trace(mutate_line(good, lines.size() - 1,
                                            [](json& j) { j["outcome"] = "sideways"; })),
                    InputError);
  }
  SUBCASE("rounds must be consecutive") {
    CHECK_THROWS_AS(parse_trace(mutate_line(good, 2, [](json& j) { j["round"] = 9; })),
                    InputError);
  }
  SUBCASE("activation sets must be nonempty and in range") {
    CHECK_THROWS_AS(
        parse_trace(mutate_line(good, 1, [](json& j) { j["activated"] = json::array(); })),
        InputError);
    CHECK_THROWS_AS(
        parse_trace(mutate_line(good, 1, [](json& j) { j["activated"] = {99}; })),
        InputError);
  }
  SUBCASE("every round carries all robot positions") {
    CHECK_THROWS_AS(
        parse_trace(mutate_line(good, 1, [](json& j) { j["positions"].erase(0); })),
        InputError);
  }
  SUBCASE("the outcome must be last and unique") {
    std::vector<std::string> bad = lines;
    bad.push_back(lines.back());
    CHECK_THROWS_AS(parse_trace(join_lines(bad)), InputError);

    std::vector<std::string> truncated(lines.begin(), lines.end() - 1);
    CHECK_THROWS_AS(parse_trace(join_lines(truncated)), InputError);
  }
}

TEST_CASE("run configurations parse with defaults") {
  const RunConfig cfg = parse_run_config(R"({"n": 7})");
  CHECK(cfg.params.n == 7);
  CHECK(cfg.params.seed == 0);
  CHECK(cfg.params.scheduler == SchedulerKind::RoundRobin);
  CHECK(cfg.params.fairness_window == 7);
  CHECK(cfg.params.max_rounds == 350);
  CHECK_FALSE(cfg.params.randomize_frames);
  CHECK_FALSE(cfg.positions.has_value());
  CHECK(cfg.extent == 10.0);
  CHECK(cfg.min_sep == 0.05);
}

TEST_CASE("run configurations round trip") {
  RunConfig cfg;
  cfg.params.n = 5;
  cfg.params.seed = 77;
  cfg.params.scheduler = SchedulerKind::RandomSubset;
  cfg.params.fairness_window = 6;
  cfg.params.max_rounds = 120;
  cfg.params.randomize_frames = true;
  SUBCASE("with explicit positions the generator knobs are dropped") {
    cfg.extent = 4.0;
    cfg.min_sep = 0.1;
    cfg.positions = PointSeqd{Vec2d(0.25, 0), Vec2d(1, 1), Vec2d(2, 0.5), Vec2d(3, 3),
                              Vec2d(0.125, 2)};
    const RunConfig back = parse_run_config(emit_run_config(cfg));
    CHECK(params_equal(back.params, cfg.params));
    REQUIRE(back.positions.has_value());
    CHECK(configs_equal(*back.positions, *cfg.positions));
    CHECK(back.extent == 10.0);
    CHECK(back.min_sep == 0.05);
  }
  SUBCASE("without positions the generator knobs survive") {
    cfg.extent = 4.0;
    cfg.min_sep = 0.1;
    const RunConfig back = parse_run_config(emit_run_config(cfg));
    CHECK(params_equal(back.params, cfg.params));
    CHECK_FALSE(back.positions.has_value());
    CHECK(back.extent == cfg.extent);
    CHECK(back.min_sep == cfg.min_sep);
  }
  SUBCASE("unset budgets come back as the defaults for n") {
    cfg.params.fairness_window = 0;
    cfg.params.max_rounds = 0;
    const RunConfig back = parse_run_config(emit_run_config(cfg));
    CHECK(back.params.fairness_window == default_fairness_window(5));
    CHECK(back.params.max_rounds == default_max_rounds(5));
  }
}

TEST_CASE("run configuration errors") {
  SUBCASE("n is required") { CHECK_THROWS_AS(parse_run_config("{}"), InputError); }
  SUBCASE("unknown fields are named") {
    try {
      parse_run_config(R"({"n": 5, "bogus": 1})");
      FAIL("expected an InputError");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
  }
  SUBCASE("positions must match n") {
    CHECK_THROWS_AS(parse_run_config(R"({"n": 5, "positions": [[0, 0]]})"), InputError);
  }
  SUBCASE("scheduler names are checked") {
    CHECK_THROWS_AS(parse_run_config(R"({"n": 5, "scheduler": "alphabetical"})"),
                    InputError);
  }
  SUBCASE("scripts parse") {
    const RunConfig cfg = parse_run_config(
        R"({"n": 5, "scheduler": "scripted", "script": [[0, 1], [2, 3, 4]]})");
    CHECK(cfg.params.scheduler == SchedulerKind::Scripted);
    REQUIRE(cfg.params.script.size() == 2);
    CHECK(cfg.params.script[0] == std::vector<int>{0, 1});
    CHECK(cfg.params.script[1] == std::vector<int>{2, 3, 4});
  }
  SUBCASE("invalid json") {
    CHECK_THROWS_AS(parse_run_config("{"), InputError);
  }
}

TEST_CASE("position resolution") {
  RunConfig cfg;
  cfg.params.n = 5;
  cfg.params.seed = 13;
  SUBCASE("explicit positions pass through untouched") {
    cfg.positions = PointSeqd{Vec2d(0, 0), Vec2d(1, 0), Vec2d(2, 1), Vec2d(0, 3),
                              Vec2d(4, 4)};
    CHECK(configs_equal(resolve_positions(cfg), *cfg.positions));
  }
  SUBCASE("generated positions are reproducible") {
    const PointSeqd a = resolve_positions(cfg);
    const PointSeqd b = resolve_positions(cfg);
    CHECK(configs_equal(a, b));
    CHECK(configs_equal(a, random_config(5, 13, cfg.extent, cfg.min_sep)));
  }
}

TEST_CASE("scheduler and phase names") {
  CHECK(std::string(to_string(SchedulerKind::RoundRobin)) == "roundrobin");
  CHECK(std::string(to_string(SchedulerKind::RandomSubset)) == "random");
  CHECK(std::string(to_string(SchedulerKind::Scripted)) == "scripted");
  for (SchedulerKind k : {SchedulerKind::RoundRobin, SchedulerKind::RandomSubset,
                          SchedulerKind::Scripted}) {
    CHECK(scheduler_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(scheduler_from_string("alphabetical"), InputError);

  for (Phase ph : {Phase::Arbitrary, Phase::OnCircle, Phase::Oriented, Phase::NGon}) {
    CHECK(phase_from_string(to_string(ph)) == ph);
  }
  CHECK_THROWS_AS(phase_from_string("flying"), InputError);

  CHECK(std::string(to_string(OutcomeKind::Converged)) == "converged");
  CHECK(std::string(to_string(OutcomeKind::MaxRoundsExceeded)) == "budget_exceeded");
}

TEST_CASE("atomic text files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ngon_traceio_test";
  fs::create_directories(dir);
  const fs::path file = dir / "trace.jsonl";
  const std::string payload = "line one\nline two\n";
  write_text_atomic(file, payload);
  CHECK(read_text(file) == payload);
  CHECK_FALSE(fs::exists(file.string() + ".tmp"));
  write_text_atomic(file, "replaced\n");
  CHECK(read_text(file) == "replaced\n");
  CHECK_THROWS_AS(read_text(dir / "missing.jsonl"), InputError);
  fs::remove_all(dir);
}
