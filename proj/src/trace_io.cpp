#include "ngon/trace_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

namespace ngon {

using nlohmann::json;

const char* to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::RoundRobin: return "roundrobin";
    case SchedulerKind::RandomSubset: return "random";
    case SchedulerKind::Scripted: return "scripted";
  }
  return "unknown";
}

const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Converged: return "converged";
    case OutcomeKind::MaxRoundsExceeded: return "budget_exceeded";
  }
  return "unknown";
}

SchedulerKind scheduler_from_string(const std::string& s) {
  if (s == "roundrobin") return SchedulerKind::RoundRobin;
  if (s == "random") return SchedulerKind::RandomSubset;
  if (s == "scripted") return SchedulerKind::Scripted;
  throw InputError("unknown scheduler '" + s + "' (expected roundrobin, random, or scripted)");
}

Phase phase_from_string(const std::string& s) {
  if (s == "arbitrary") return Phase::Arbitrary;
  if (s == "on_circle") return Phase::OnCircle;
  if (s == "oriented") return Phase::Oriented;
  if (s == "ngon") return Phase::NGon;
  throw InputError("unknown phase '" + s + "'");
}

namespace {

json points_to_json(const PointSeqd& pts) {
  json arr = json::array();
  for (const Vec2d& p : pts) arr.push_back(json::array({p.x(), p.y()}));
  return arr;
}

PointSeqd points_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw InputError(where + ": expected an array of [x, y] pairs");
  PointSeqd pts;
  pts.reserve(arr.size());
  for (const json& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw InputError(where + ": expected an array of [x, y] pairs");
    }
    pts.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return pts;
}

json script_to_json(const std::vector<std::vector<int>>& script) {
  json arr = json::array();
  for (const auto& entry : script) arr.push_back(json(entry));
  return arr;
}

std::vector<std::vector<int>> script_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw InputError(where + ": expected an array of activation sets");
  std::vector<std::vector<int>> script;
  for (const json& e : arr) {
    if (!e.is_array()) throw InputError(where + ": expected an array of activation sets");
    std::vector<int> entry;
    for (const json& v : e) {
      if (!v.is_number_integer()) {
        throw InputError(where + ": activation sets must hold integer robot indices");
      }
      entry.push_back(v.get<int>());
    }
    script.push_back(std::move(entry));
  }
  return script;
}

json header_to_json(const Trace& trace) {
  const SimParams& p = trace.params;
  json h{{"type", "header"},
         {"n", p.n},
         {"seed", p.seed},
         {"scheduler", to_string(p.scheduler)},
         {"fairness_window", p.fairness_window},
         {"max_rounds", p.max_rounds},
         {"eps_angle", p.tol.eps_angle},
         {"eps_pos", p.tol.eps_pos},
         {"randomize_frames", p.randomize_frames},
         {"initial", points_to_json(trace.initial)}};
  if (p.scheduler == SchedulerKind::Scripted) h["script"] = script_to_json(p.script);
  return h;
}

const json& require(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

int require_int(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer()) throw InputError(where + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

double require_double(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) throw InputError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

std::string require_string(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) throw InputError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

bool require_bool(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_boolean()) throw InputError(where + ": field '" + key + "' must be a boolean");
  return v.get<bool>();
}

}  // namespace

std::string emit_trace(const Trace& trace) {
  std::ostringstream out;
  out << header_to_json(trace).dump() << '\n';
  for (const RoundRecord& rec : trace.rounds) {
    const json r{{"type", "round"},
                 {"round", rec.round},
                 {"activated", json(rec.activated)},
                 {"positions", points_to_json(rec.after)},
                 {"phase", to_string(rec.phase)}};
    out << r.dump() << '\n';
  }
  const json o{{"type", "outcome"},
               {"outcome", to_string(trace.outcome.kind)},
               {"rounds", trace.outcome.rounds}};
  out << o.dump() << '\n';
  return out.str();
}

Trace parse_trace(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::pair<int, json>> records;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      records.emplace_back(lineno, json::parse(line));
    } catch (const json::exception& e) {
      throw InputError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (records.empty()) throw InputError("trace is empty");

  const auto where = [](int ln) { return "trace line " + std::to_string(ln); };

  const auto& [hline, header] = records.front();
  if (require_string(header, "type", where(hline)) != "header") {
    throw InputError(where(hline) + ": first record must be the header");
  }
  Trace trace;
  SimParams& p = trace.params;
  p.n = require_int(header, "n", where(hline));
  {
    const json& seed = require(header, "seed", where(hline));
    if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
      throw InputError(where(hline) + ": field 'seed' must be an integer");
    }
    p.seed = seed.get<std::uint64_t>();
  }
  p.scheduler = scheduler_from_string(require_string(header, "scheduler", where(hline)));
  p.fairness_window = require_int(header, "fairness_window", where(hline));
  p.max_rounds = require_int(header, "max_rounds", where(hline));
  p.tol.eps_angle = require_double(header, "eps_angle", where(hline));
  p.tol.eps_pos = require_double(header, "eps_pos", where(hline));
  p.randomize_frames = require_bool(header, "randomize_frames", where(hline));
  if (p.scheduler == SchedulerKind::Scripted) {
    p.script = script_from_json(require(header, "script", where(hline)),
                                where(hline) + ": field 'script'");
  }
  trace.initial = points_from_json(require(header, "initial", where(hline)),
                                   where(hline) + ": field 'initial'");
  if (static_cast<int>(trace.initial.size()) != p.n) {
    throw InputError(where(hline) + ": field 'initial' must hold n positions");
  }

  bool outcome_seen = false;
  PointSeqd prev = trace.initial;
  for (size_t r = 1; r < records.size(); ++r) {
    const auto& [ln, rec] = records[r];
    const std::string type = require_string(rec, "type", where(ln));
    if (outcome_seen) throw InputError(where(ln) + ": record after the outcome");
    if (type == "round") {
      RoundRecord round;
      round.round = require_int(rec, "round", where(ln));
      if (round.round != static_cast<int>(trace.rounds.size())) {
        throw InputError(where(ln) + ": round numbers must be consecutive from 0");
      }
      const json& act = require(rec, "activated", where(ln));
      if (!act.is_array() || act.empty()) {
        throw InputError(where(ln) + ": field 'activated' must be a nonempty array");
      }
      for (const json& v : act) {
        if (!v.is_number_integer()) {
          throw InputError(where(ln) + ": field 'activated' must hold integer robot indices");
        }
        const int i = v.get<int>();
        if (i < 0 || i >= p.n) {
          throw InputError(where(ln) + ": activated robot " + std::to_string(i) +
                           " is out of range");
        }
        round.activated.push_back(i);
      }
      round.after = points_from_json(require(rec, "positions", where(ln)),
                                     where(ln) + ": field 'positions'");
      if (static_cast<int>(round.after.size()) != p.n) {
        throw InputError(where(ln) + ": field 'positions' must hold n positions");
      }
      round.phase = phase_from_string(require_string(rec, "phase", where(ln)));
      round.before = prev;
      prev = round.after;
      trace.rounds.push_back(std::move(round));
    } else if (type == "outcome") {
      const std::string o = require_string(rec, "outcome", where(ln));
      if (o == "converged") {
        trace.outcome.kind = OutcomeKind::Converged;
      } else if (o == "budget_exceeded") {
        trace.outcome.kind = OutcomeKind::MaxRoundsExceeded;
      } else {
        throw InputError(where(ln) + ": unknown outcome '" + o + "'");
      }
      trace.outcome.rounds = require_int(rec, "rounds", where(ln));
      outcome_seen = true;
    } else {
      throw InputError(where(ln) + ": unknown record type '" + type + "'");
    }
  }
  if (!outcome_seen) throw InputError("trace has no outcome record");
  return trace;
}

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("run config: ") + e.what());
  }
  if (!j.is_object()) throw InputError("run config: expected a JSON object");

  static const std::vector<std::string> known{
      "n",         "seed",       "scheduler", "fairness_window", "max_rounds",
      "eps_angle", "eps_pos",    "randomize_frames", "positions", "extent",
      "min_sep",   "script"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InputError("run config: unknown field '" + key + "'");
    }
  }

  RunConfig cfg;
  SimParams& p = cfg.params;
  p.n = require_int(j, "n", "run config");
  if (j.contains("seed")) {
    const json& seed = j["seed"];
    if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
      throw InputError("run config: field 'seed' must be an integer");
    }
    p.seed = seed.get<std::uint64_t>();
  }
  if (j.contains("scheduler")) {
    p.scheduler = scheduler_from_string(require_string(j, "scheduler", "run config"));
  }
  p.fairness_window = j.contains("fairness_window")
                          ? require_int(j, "fairness_window", "run config")
                          : default_fairness_window(p.n);
  p.max_rounds = j.contains("max_rounds") ? require_int(j, "max_rounds", "run config")
                                          : default_max_rounds(p.n);
  if (j.contains("eps_angle")) p.tol.eps_angle = require_double(j, "eps_angle", "run config");
  if (j.contains("eps_pos")) p.tol.eps_pos = require_double(j, "eps_pos", "run config");
  if (j.contains("randomize_frames")) {
    p.randomize_frames = require_bool(j, "randomize_frames", "run config");
  }
  if (j.contains("script")) {
    p.script = script_from_json(j["script"], "run config: field 'script'");
  }
  if (j.contains("positions")) {
    cfg.positions = points_from_json(j["positions"], "run config: field 'positions'");
    if (static_cast<int>(cfg.positions->size()) != p.n) {
      throw InputError("run config: field 'positions' must hold exactly n positions");
    }
  }
  if (j.contains("extent")) cfg.extent = require_double(j, "extent", "run config");
  if (j.contains("min_sep")) cfg.min_sep = require_double(j, "min_sep", "run config");
  return cfg;
}

std::string emit_run_config(const RunConfig& cfg) {
  const SimParams& p = cfg.params;
  json j{{"n", p.n},
         {"seed", p.seed},
         {"scheduler", to_string(p.scheduler)},
         {"eps_angle", p.tol.eps_angle},
         {"eps_pos", p.tol.eps_pos},
         {"randomize_frames", p.randomize_frames}};
  // Zero means "use the default for n"; leave it to the reader.
  if (p.fairness_window > 0) j["fairness_window"] = p.fairness_window;
  if (p.max_rounds > 0) j["max_rounds"] = p.max_rounds;
  if (!p.script.empty()) j["script"] = script_to_json(p.script);
  if (cfg.positions) {
    j["positions"] = points_to_json(*cfg.positions);
  } else {
    j["extent"] = cfg.extent;
    j["min_sep"] = cfg.min_sep;
  }
  return j.dump(2) + "\n";
}

PointSeqd resolve_positions(const RunConfig& cfg) {
  if (cfg.positions) return *cfg.positions;
  return random_config(cfg.params.n, cfg.params.seed, cfg.extent, cfg.min_sep);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write to " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace ngon
