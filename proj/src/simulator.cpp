#include "ngon/simulator.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

namespace ngon {

int default_fairness_window(int n) { return n; }

int default_max_rounds(int n) { return 50 * n; }

void validate(const SimParams& params) {
  if (!is_supported_n(params.n)) {
    throw UnsupportedNError("simulation: robot count " + std::to_string(params.n) +
                            " is not supported (2, 3, or a prime >= 5)");
  }
  if (params.fairness_window < 1) {
    throw PreconditionError("simulation: fairness window must be at least 1");
  }
  if (params.max_rounds < 1) {
    throw PreconditionError("simulation: round budget must be at least 1");
  }
  if (!params.tol.valid()) {
    throw PreconditionError("simulation: tolerances must be finite and positive");
  }
  if (params.scheduler == SchedulerKind::Scripted && params.script.empty()) {
    throw PreconditionError("simulation: scripted scheduler needs a nonempty script");
  }
}

bool configs_equal(const PointSeqd& a, const PointSeqd& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!points_equal(a[i], b[i])) return false;
  }
  return true;
}

bool params_equal(const SimParams& a, const SimParams& b) {
  return a.n == b.n && a.seed == b.seed && a.scheduler == b.scheduler &&
         a.fairness_window == b.fairness_window && a.max_rounds == b.max_rounds &&
         a.randomize_frames == b.randomize_frames && a.tol.eps_angle == b.tol.eps_angle &&
         a.tol.eps_pos == b.tol.eps_pos && a.script == b.script;
}

bool traces_equal(const Trace& a, const Trace& b) {
  if (!params_equal(a.params, b.params) || !configs_equal(a.initial, b.initial)) return false;
  if (a.rounds.size() != b.rounds.size()) return false;
  for (size_t i = 0; i < a.rounds.size(); ++i) {
    const RoundRecord& x = a.rounds[i];
    const RoundRecord& y = b.rounds[i];
    if (x.round != y.round || x.activated != y.activated || x.phase != y.phase ||
        !configs_equal(x.before, y.before) || !configs_equal(x.after, y.after)) {
      return false;
    }
  }
  return a.outcome.kind == b.outcome.kind && a.outcome.rounds == b.outcome.rounds;
}

namespace {

class RoundRobinScheduler final : public Scheduler {
 public:
  RoundRobinScheduler(int n, int fairness_window) : n_(n) {
    if (fairness_window < n) {
      throw PreconditionError(
          "round-robin scheduler activates one robot per round and cannot honor a fairness "
          "window of " +
          std::to_string(fairness_window) + " with " + std::to_string(n) + " robots");
    }
  }

  std::vector<int> next() override {
    const int r = pos_;
    pos_ = (pos_ + 1) % n_;
    return {r};
  }

 private:
  int n_;
  int pos_ = 0;
};

class RandomSubsetScheduler final : public Scheduler {
 public:
  RandomSubsetScheduler(int n, int fairness_window, std::uint64_t seed)
      : n_(n), window_(fairness_window), rng_(seed), last_(static_cast<size_t>(n), -1) {}

  std::vector<int> next() override {
    std::vector<int> act;
    while (act.empty()) {
      act.clear();
      for (int i = 0; i < n_; ++i) {
        if (coin_(rng_)) act.push_back(i);
      }
    }
    // Robots idle for window - 1 rounds are forced in, which keeps every
    // window of `window_` consecutive rounds covered.
    for (int i = 0; i < n_; ++i) {
      if (t_ - last_[static_cast<size_t>(i)] >= window_ - 1 &&
          std::find(act.begin(), act.end(), i) == act.end()) {
        act.push_back(i);
      }
    }
    std::sort(act.begin(), act.end());
    for (int i : act) last_[static_cast<size_t>(i)] = t_;
    ++t_;
    return act;
  }

 private:
  int n_;
  int window_;
  std::mt19937_64 rng_;
  std::bernoulli_distribution coin_{0.5};
  std::vector<int> last_;
  int t_ = 0;
};

class ScriptedScheduler final : public Scheduler {
 public:
  explicit ScriptedScheduler(std::vector<std::vector<int>> script) : script_(std::move(script)) {
    if (script_.empty()) throw PreconditionError("scripted scheduler: empty script");
  }

  std::vector<int> next() override {
    const std::vector<int>& entry = script_[pos_ % script_.size()];
    ++pos_;
    if (entry.empty()) {
      throw FairnessError("scripted scheduler: empty activation set at step " +
                          std::to_string(pos_ - 1));
    }
    return entry;
  }

 private:
  std::vector<std::vector<int>> script_;
  size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<Scheduler> make_scheduler(const SimParams& params) {
  switch (params.scheduler) {
    case SchedulerKind::RoundRobin:
      return std::make_unique<RoundRobinScheduler>(params.n, params.fairness_window);
    case SchedulerKind::RandomSubset:
      return std::make_unique<RandomSubsetScheduler>(params.n, params.fairness_window,
                                                     params.seed);
    case SchedulerKind::Scripted:
      return std::make_unique<ScriptedScheduler>(params.script);
  }
  throw PreconditionError("make_scheduler: unknown scheduler kind");
}

SimilarityFrame<double> draw_frame(const SimParams& params, int round, int robot) {
  std::seed_seq seq{static_cast<std::uint32_t>(params.seed),
                    static_cast<std::uint32_t>(params.seed >> 32),
                    static_cast<std::uint32_t>(round), static_cast<std::uint32_t>(robot),
                    0x9e3779b9u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> angle(0.0, two_pi_v<double>);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  SimilarityFrame<double> f;
  f.rotation = angle(rng);
  f.scale = scale(rng);
  f.translation = Vec2d(shift(rng), shift(rng));
  f.reflected = (rng() & 1u) != 0;
  return f;
}

PointSeqd step(const PointSeqd& config, const std::vector<int>& activated,
               const SimParams& params, int round) {
  validate(params);
  if (static_cast<int>(config.size()) != params.n) {
    throw PreconditionError("step: configuration size does not match the robot count");
  }
  check_distinct(config, params.tol.eps_pos);
  if (activated.empty()) {
    throw ModelViolationError("step: empty activation set");
  }
  std::set<int> seen;
  for (int i : activated) {
    if (i < 0 || i >= params.n) {
      throw ModelViolationError("step: activated robot " + std::to_string(i) +
                                " is out of range");
    }
    if (!seen.insert(i).second) {
      throw ModelViolationError("step: robot " + std::to_string(i) + " activated twice");
    }
  }

  PointSeqd next = config;
  for (int i : activated) {
    const Vec2d& self = config[static_cast<size_t>(i)];
    if (!params.randomize_frames) {
      next[static_cast<size_t>(i)] = decide_move(config, self, params.tol).target;
      continue;
    }
    const SimilarityFrame<double> frame = draw_frame(params, round, i);
    const PointSeqd local = to_local(frame, config);
    const Vec2d local_self = local[static_cast<size_t>(i)];
    const MoveDecisiond d = decide_move(local, local_self, params.tol);
    // A stay decision is an exact copy of the local position; keep the
    // exact global position instead of round-tripping it through the
    // frame.
    if (points_equal(d.target, local_self)) continue;
    next[static_cast<size_t>(i)] = from_local(frame, d.target);
  }
  check_distinct(next, params.tol.eps_pos);
  return next;
}

Trace run(const PointSeqd& initial, const SimParams& params) {
  validate(params);
  if (static_cast<int>(initial.size()) != params.n) {
    throw PreconditionError("run: initial configuration size does not match the robot count");
  }
  check_distinct(initial, params.tol.eps_pos);

  Trace trace;
  trace.params = params;
  trace.initial = initial;
  if (classify(initial, params.n, params.tol) == Phase::NGon) {
    trace.outcome = {OutcomeKind::Converged, 0};
    return trace;
  }

  std::unique_ptr<Scheduler> sched = make_scheduler(params);
  PointSeqd config = initial;
  for (int t = 0; t < params.max_rounds; ++t) {
    RoundRecord rec;
    rec.round = t;
    rec.activated = sched->next();
    rec.before = config;
    rec.after = step(config, rec.activated, params, t);
    rec.phase = classify(rec.after, params.n, params.tol);
    config = rec.after;
    trace.rounds.push_back(std::move(rec));
    if (trace.rounds.back().phase == Phase::NGon) {
      trace.outcome = {OutcomeKind::Converged, t + 1};
      return trace;
    }
  }
  trace.outcome = {OutcomeKind::MaxRoundsExceeded, params.max_rounds};
  return trace;
}

bool fairness_ok(const Trace& trace) {
  const int n = trace.params.n;
  const int window = trace.params.fairness_window;
  const int rounds = static_cast<int>(trace.rounds.size());
  for (int start = 0; start + window <= rounds; ++start) {
    std::set<int> seen;
    for (int t = start; t < start + window; ++t) {
      for (int i : trace.rounds[static_cast<size_t>(t)].activated) seen.insert(i);
    }
    if (static_cast<int>(seen.size()) != n) return false;
  }
  return true;
}

PointSeqd random_config(int n, std::uint64_t seed, double extent, double min_sep) {
  if (n < 2) throw PreconditionError("random_config: need at least two robots");
  if (!(extent > 0.0) || !(min_sep > 0.0) || min_sep >= extent) {
    throw PreconditionError("random_config: extent and separation out of range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, extent);
  const double angle_floor = 1e-3;

  for (int attempt = 0; attempt < 1000; ++attempt) {
    PointSeqd pts;
    pts.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pts.emplace_back(coord(rng), coord(rng));

    bool ok = true;
    for (size_t i = 0; i < pts.size() && ok; ++i) {
      for (size_t j = i + 1; j < pts.size() && ok; ++j) {
        ok = (pts[i] - pts[j]).norm() >= min_sep;
      }
    }
    if (!ok) continue;

    const Circled sec = smallest_enclosing_circle(pts);
    std::vector<double> theta;
    theta.reserve(pts.size());
    for (const Vec2d& p : pts) {
      const Vec2d rel = p - sec.center;
      if (rel.norm() < min_sep) {
        ok = false;
        break;
      }
      theta.push_back(normalize_angle(std::atan2(rel.y(), rel.x())));
    }
    if (!ok) continue;

    // Robots move radially onto the enclosing circle, so their polar
    // angles must stay separated for the walk to be collision-free.
    std::sort(theta.begin(), theta.end());
    for (size_t i = 0; i < theta.size() && ok; ++i) {
      const double next = (i + 1 < theta.size()) ? theta[i + 1]
                                                 : theta[0] + two_pi_v<double>;
      ok = next - theta[i] >= angle_floor;
    }
    if (!ok) continue;
    return pts;
  }
  throw GenerationError("random_config: could not draw a well-separated configuration");
}

}  // namespace ngon
