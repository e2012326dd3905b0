#pragma once

#include "ngon/common.hpp"
#include "ngon/geometry.hpp"
#include "ngon/protocol.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace ngon {

enum class SchedulerKind { RoundRobin, RandomSubset, Scripted };

enum class OutcomeKind { Converged, MaxRoundsExceeded };

struct SimParams {
  int n = 5;
  std::uint64_t seed = 0;
  SchedulerKind scheduler = SchedulerKind::RoundRobin;
  int fairness_window = 0;  // rounds; every robot must act in any such window
  int max_rounds = 0;
  bool randomize_frames = false;
  Toleranced tol{};
  std::vector<std::vector<int>> script{};  // Scripted only: activation sets per round
};

/// Default budgets: a window of n rounds and 50 * n rounds total.
int default_fairness_window(int n);
int default_max_rounds(int n);

/// Throws when any field is out of range for a run.
void validate(const SimParams& params);

struct RoundRecord {
  int round = 0;
  std::vector<int> activated;
  PointSeqd before;
  PointSeqd after;
  Phase phase = Phase::Arbitrary;  // classification of `after`
};

struct Outcome {
  OutcomeKind kind = OutcomeKind::MaxRoundsExceeded;
  int rounds = 0;  // rounds executed when formed, or the exhausted budget
};

struct Trace {
  SimParams params;
  PointSeqd initial;
  std::vector<RoundRecord> rounds;
  Outcome outcome;
};

bool configs_equal(const PointSeqd& a, const PointSeqd& b);
bool params_equal(const SimParams& a, const SimParams& b);
bool traces_equal(const Trace& a, const Trace& b);

/// Activation source.  next() yields the robots that act this round.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::vector<int> next() = 0;
};

std::unique_ptr<Scheduler> make_scheduler(const SimParams& params);

/// The local frame robot `robot` perceives the world through in round
/// `round`.  Derived from (seed, round, robot) alone so an oblivious
/// re-computation sees the same frame.
SimilarityFrame<double> draw_frame(const SimParams& params, int round, int robot);

/// One synchronous round: every activated robot observes `config`,
/// decides in its own frame, and moves; everyone else holds still.
PointSeqd step(const PointSeqd& config, const std::vector<int>& activated,
               const SimParams& params, int round);

/// Full run until the polygon forms or the budget runs out.
Trace run(const PointSeqd& initial, const SimParams& params);

/// Audits that every complete fairness window activates every robot.
bool fairness_ok(const Trace& trace);

/// Random configuration in [0, extent]^2 with pairwise separation at
/// least min_sep and enough angular spread around its enclosing circle
/// for the radial moves to stay collision-free.
PointSeqd random_config(int n, std::uint64_t seed, double extent = 10.0,
                        double min_sep = 0.05);

}  // namespace ngon
