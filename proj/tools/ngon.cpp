#include "ngon/election.hpp"
#include "ngon/protocol.hpp"
#include "ngon/render.hpp"
#include "ngon/simulator.hpp"
#include "ngon/trace_io.hpp"
#include "ngon/words.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitBudgetExceeded = 2;
constexpr int kExitNotApplicable = 3;

std::string format_point(const ngon::Vec2d& p) {
  std::ostringstream out;
  out << std::setprecision(12) << "(" << p.x() << ", " << p.y() << ")";
  return out.str();
}

std::string phase_timeline(const ngon::Trace& trace) {
  std::ostringstream out;
  if (trace.rounds.empty()) {
    out << "ngon at start";
    return out.str();
  }
  ngon::Phase current = trace.rounds.front().phase;
  int count = 0;
  bool first = true;
  const auto flush = [&]() {
    if (!first) out << " -> ";
    out << ngon::to_string(current) << " x" << count;
    first = false;
  };
  for (const ngon::RoundRecord& rec : trace.rounds) {
    if (rec.phase == current) {
      ++count;
      continue;
    }
    flush();
    current = rec.phase;
    count = 1;
  }
  flush();
  return out.str();
}

struct SimulateOptions {
  std::string config_path;
  std::string out_path = "trace.jsonl";
  std::uint64_t seed = 0;
  std::string scheduler;
  int fairness_window = 0;
  int max_rounds = 0;
  double eps_angle = 0;
  double eps_pos = 0;
  bool frames = false;
  bool no_frames = false;
};

struct FlagPresence {
  CLI::Option* seed = nullptr;
  CLI::Option* scheduler = nullptr;
  CLI::Option* fairness_window = nullptr;
  CLI::Option* max_rounds = nullptr;
  CLI::Option* eps_angle = nullptr;
  CLI::Option* eps_pos = nullptr;
  CLI::Option* frames = nullptr;
  CLI::Option* no_frames = nullptr;
};

void apply_overrides(ngon::SimParams& params, const SimulateOptions& opt,
                     const FlagPresence& given) {
  if (given.seed->count() > 0) params.seed = opt.seed;
  if (given.scheduler->count() > 0) {
    params.scheduler = ngon::scheduler_from_string(opt.scheduler);
  }
  if (given.fairness_window->count() > 0) params.fairness_window = opt.fairness_window;
  if (given.max_rounds->count() > 0) params.max_rounds = opt.max_rounds;
  if (given.eps_angle->count() > 0) params.tol.eps_angle = opt.eps_angle;
  if (given.eps_pos->count() > 0) params.tol.eps_pos = opt.eps_pos;
  if (given.frames->count() > 0) params.randomize_frames = true;
  if (given.no_frames->count() > 0) params.randomize_frames = false;
}

int run_simulate(const SimulateOptions& opt, const FlagPresence& given) {
  ngon::RunConfig cfg = ngon::parse_run_config(ngon::read_text(opt.config_path));
  apply_overrides(cfg.params, opt, given);
  ngon::validate(cfg.params);

  const ngon::PointSeqd initial = ngon::resolve_positions(cfg);
  const ngon::Trace trace = ngon::run(initial, cfg.params);
  ngon::write_text_atomic(opt.out_path, ngon::emit_trace(trace));

  std::cout << "n: " << cfg.params.n << "\n"
            << "scheduler: " << ngon::to_string(cfg.params.scheduler) << " (seed "
            << cfg.params.seed << ")\n"
            << "phases: " << phase_timeline(trace) << "\n"
            << "trace: " << opt.out_path << "\n";
  if (trace.outcome.kind == ngon::OutcomeKind::Converged) {
    std::cout << "outcome: converged after " << trace.outcome.rounds << " rounds\n";
    return kExitOk;
  }
  std::cout << "outcome: budget of " << trace.outcome.rounds << " rounds exceeded\n";
  return kExitBudgetExceeded;
}

int run_lyndon(const std::vector<double>& letters, double eps) {
  ngon::Toleranced tol;
  tol.eps_angle = eps;
  if (!tol.valid()) throw ngon::InputError("lyndon: eps must be finite and positive");

  const ngon::Wordd w{std::vector<double>(letters)};
  std::cout << "length: " << w.size() << "\n";
  if (w.empty()) {
    std::cout << "lyndon: false\n"
              << "primitive: n/a (empty word)\n"
              << "minimal: n/a (empty word)\n";
    return kExitOk;
  }
  std::cout << std::boolalpha;
  std::cout << "lyndon: " << ngon::is_lyndon(w, tol) << "\n";
  std::cout << "primitive: " << ngon::is_primitive(w, tol) << "\n";
  const auto witness = ngon::minimality_witness(w, tol);
  if (witness) {
    std::cout << "minimal: false (rotation " << *witness << " precedes the word)\n";
  } else {
    std::cout << "minimal: true\n";
  }
  return kExitOk;
}

int run_elect(const std::string& config_path, const FlagPresence& given,
              const SimulateOptions& opt) {
  ngon::RunConfig cfg = ngon::parse_run_config(ngon::read_text(config_path));
  if (given.seed->count() > 0) cfg.params.seed = opt.seed;
  if (given.eps_angle->count() > 0) cfg.params.tol.eps_angle = opt.eps_angle;
  if (given.eps_pos->count() > 0) cfg.params.tol.eps_pos = opt.eps_pos;
  const ngon::Toleranced& tol = cfg.params.tol;

  const ngon::PointSeqd pts = ngon::resolve_positions(cfg);
  const int n = cfg.params.n;
  const ngon::Phase phase = ngon::classify(pts, n, tol);

  if (phase == ngon::Phase::NGon) {
    std::cout << "configuration is already a regular " << n << "-gon; no election needed\n";
    return kExitNotApplicable;
  }
  if (n == 3) {
    const auto t = ngon::analyze_triangle(pts, tol);
    if (t.kind == ngon::TriangleKind::Equilateral) {
      std::cout << "equilateral triangle; no election needed\n";
      return kExitNotApplicable;
    }
    std::cout << "case: " << ngon::to_string(t.kind) << "\n"
              << "leader: robot " << t.leader << " at "
              << format_point(pts[static_cast<size_t>(t.leader)]) << "\n";
    return kExitOk;
  }
  if (phase != ngon::Phase::OnCircle) {
    std::cerr << "error: election needs all robots on a common circle (configuration is "
              << ngon::to_string(phase) << ")\n";
    return kExitInputError;
  }

  const auto cc = ngon::make_circle_configuration(pts, tol, true);
  const auto rep = ngon::election_report(cc, tol);
  std::cout << "circle: center " << format_point(cc.circle.center) << " radius "
            << std::setprecision(12) << cc.circle.radius << "\n"
            << "forward holder: rank " << rep.holders.forward_rank << " at "
            << format_point(rep.holders.forward_position) << "\n"
            << "backward holder: rank " << rep.holders.backward_rank << " at "
            << format_point(rep.holders.backward_position) << "\n"
            << "arc sizes: " << rep.arc_from_forward.size() << " and "
            << rep.arc_from_backward.size() << "\n"
            << "leader: rank " << rep.leader_rank << " at " << format_point(rep.leader)
            << "\n";
  return kExitOk;
}

int run_render(const std::string& trace_path, const std::string& out_dir, int every) {
  const ngon::Trace trace = ngon::parse_trace(ngon::read_text(trace_path));
  const int frames = ngon::render_trace(trace, out_dir, every);
  std::cout << "wrote " << frames << " frames to " << out_dir << "\n";
  return kExitOk;
}

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto parse_one = [](const std::string& s) {
    try {
      size_t pos = 0;
      const std::uint64_t v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ngon::InputError("batch: bad seed value '" + s + "'");
    }
  };
  const size_t dots = text.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t lo = parse_one(text.substr(0, dots));
    const std::uint64_t hi = parse_one(text.substr(dots + 2));
    if (hi < lo) throw ngon::InputError("batch: empty seed range '" + text + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) seeds.push_back(parse_one(item));
  }
  if (seeds.empty()) throw ngon::InputError("batch: no seeds in '" + text + "'");
  return seeds;
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> ns;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      size_t pos = 0;
      const int v = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      ns.push_back(v);
    } catch (const std::exception&) {
      throw ngon::InputError("batch: bad robot count '" + item + "'");
    }
  }
  if (ns.empty()) throw ngon::InputError("batch: no robot counts given");
  return ns;
}

struct BatchOptions {
  std::string n_list;
  std::string seeds = "0..9";
  std::string scheduler = "roundrobin";
  int fairness_window = 0;
  int max_rounds = 0;
  bool frames = false;
  double eps_angle = 1e-9;
  double eps_pos = 1e-9;
  double extent = 10.0;
  double min_sep = 0.05;
  std::string out_path = "batch.jsonl";
};

int run_batch(const BatchOptions& opt) {
  const std::vector<int> ns = parse_n_list(opt.n_list);
  for (int n : ns) {
    if (!ngon::is_supported_n(n)) {
      throw ngon::InputError("batch: robot count " + std::to_string(n) +
                             " is not supported (2, 3, or a prime >= 5)");
    }
  }
  const std::vector<std::uint64_t> seeds = parse_seed_range(opt.seeds);
  const ngon::SchedulerKind kind = ngon::scheduler_from_string(opt.scheduler);
  if (kind == ngon::SchedulerKind::Scripted) {
    throw ngon::InputError("batch: scripted runs need per-run scripts; use simulate");
  }

  std::ostringstream rows;
  bool all_converged = true;
  for (int n : ns) {
    std::vector<int> rounds_when_converged;
    int converged = 0;
    for (std::uint64_t seed : seeds) {
      ngon::SimParams params;
      params.n = n;
      params.seed = seed;
      params.scheduler = kind;
      params.fairness_window =
          opt.fairness_window > 0 ? opt.fairness_window : ngon::default_fairness_window(n);
      params.max_rounds = opt.max_rounds > 0 ? opt.max_rounds : ngon::default_max_rounds(n);
      params.randomize_frames = opt.frames;
      params.tol.eps_angle = opt.eps_angle;
      params.tol.eps_pos = opt.eps_pos;
      ngon::validate(params);

      const ngon::PointSeqd initial = ngon::random_config(n, seed, opt.extent, opt.min_sep);
      const ngon::Trace trace = ngon::run(initial, params);
      const bool ok = trace.outcome.kind == ngon::OutcomeKind::Converged;
      if (ok) {
        ++converged;
        rounds_when_converged.push_back(trace.outcome.rounds);
      } else {
        all_converged = false;
      }
      rows << "{\"n\": " << n << ", \"seed\": " << seed << ", \"scheduler\": \""
           << ngon::to_string(kind) << "\", \"outcome\": \""
           << ngon::to_string(trace.outcome.kind) << "\", \"rounds\": "
           << trace.outcome.rounds << "}\n";
    }
    std::sort(rounds_when_converged.begin(), rounds_when_converged.end());
    std::cout << "n = " << n << ": " << converged << "/" << seeds.size() << " converged";
    if (!rounds_when_converged.empty()) {
      const size_t m = rounds_when_converged.size();
      std::cout << ", rounds min/median/max = " << rounds_when_converged.front() << "/"
                << rounds_when_converged[m / 2] << "/" << rounds_when_converged.back();
    }
    std::cout << "\n";
  }
  ngon::write_text_atomic(opt.out_path, rows.str());
  std::cout << "rows: " << opt.out_path << "\n";
  return all_converged ? kExitOk : kExitBudgetExceeded;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circle formation protocol: simulator, word predicates, election, rendering"};
  app.require_subcommand(1);

  SimulateOptions sim_opt;
  FlagPresence sim_given;
  CLI::App* sim = app.add_subcommand("simulate", "Run the protocol from a JSON run config");
  sim->add_option("--config", sim_opt.config_path, "Run config JSON file")->required();
  sim->add_option("--out", sim_opt.out_path, "Trace output path (JSON Lines)");
  sim_given.seed = sim->add_option("--seed", sim_opt.seed, "Scheduler and frame seed")
                       ->envname("NGON_SEED");
  sim_given.scheduler =
      sim->add_option("--scheduler", sim_opt.scheduler, "roundrobin, random, or scripted");
  sim_given.fairness_window =
      sim->add_option("--fairness-window", sim_opt.fairness_window, "Fairness window in rounds");
  sim_given.max_rounds = sim->add_option("--max-rounds", sim_opt.max_rounds, "Round budget");
  sim_given.eps_angle = sim->add_option("--eps-angle", sim_opt.eps_angle, "Angle tolerance");
  sim_given.eps_pos = sim->add_option("--eps-pos", sim_opt.eps_pos, "Position tolerance");
  sim_given.frames = sim->add_flag("--frames", sim_opt.frames, "Randomize robot frames");
  sim_given.no_frames =
      sim->add_flag("--no-frames", sim_opt.no_frames, "Identity frames for every robot");

  std::vector<double> lyndon_letters;
  double lyndon_eps = 1e-9;
  CLI::App* lyn = app.add_subcommand("lyndon", "Word predicates for a sequence of letters");
  lyn->add_option("letters", lyndon_letters, "Letters of the word");
  lyn->add_option("--eps", lyndon_eps, "Letter equality band");

  std::string elect_config;
  CLI::App* ele = app.add_subcommand("elect", "Leader election for a configuration");
  ele->add_option("--config", elect_config, "Run config JSON file")->required();
  FlagPresence ele_given;
  SimulateOptions ele_opt;
  ele_given.seed = ele->add_option("--seed", ele_opt.seed, "Seed for generated positions")
                       ->envname("NGON_SEED");
  ele_given.eps_angle = ele->add_option("--eps-angle", ele_opt.eps_angle, "Angle tolerance");
  ele_given.eps_pos = ele->add_option("--eps-pos", ele_opt.eps_pos, "Position tolerance");

  std::string render_trace_path, render_out_dir;
  int render_every = 1;
  CLI::App* ren = app.add_subcommand("render", "Render a trace to SVG frames");
  ren->add_option("--trace", render_trace_path, "Trace file (JSON Lines)")->required();
  ren->add_option("--out", render_out_dir, "Output directory")->required();
  ren->add_option("--every", render_every, "Keep every k-th round")
      ->check(CLI::PositiveNumber);

  BatchOptions batch_opt;
  CLI::App* bat = app.add_subcommand("batch", "Run many seeds and robot counts");
  bat->add_option("--n", batch_opt.n_list, "Robot counts, comma separated")->required();
  bat->add_option("--seeds", batch_opt.seeds, "Seed list '0,1,2' or range '0..19'");
  bat->add_option("--scheduler", batch_opt.scheduler, "roundrobin or random");
  bat->add_option("--fairness-window", batch_opt.fairness_window,
                  "Fairness window (0 = one per robot count)");
  bat->add_option("--max-rounds", batch_opt.max_rounds, "Round budget (0 = 50 per robot)");
  bat->add_flag("--frames", batch_opt.frames, "Randomize robot frames");
  bat->add_option("--eps-angle", batch_opt.eps_angle, "Angle tolerance");
  bat->add_option("--eps-pos", batch_opt.eps_pos, "Position tolerance");
  bat->add_option("--extent", batch_opt.extent, "Side of the square the start is drawn from");
  bat->add_option("--min-sep", batch_opt.min_sep, "Minimum pairwise separation");
  bat->add_option("--out", batch_opt.out_path, "Summary rows output path (JSON Lines)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_opt, sim_given);
    if (lyn->parsed()) return run_lyndon(lyndon_letters, lyndon_eps);
    if (ele->parsed()) return run_elect(elect_config, ele_given, ele_opt);
    if (ren->parsed()) return run_render(render_trace_path, render_out_dir, render_every);
    if (bat->parsed()) return run_batch(batch_opt);
  } catch (const ngon::NotApplicableError& e) {
    std::cerr << "not applicable: " << e.what() << "\n";
    return kExitNotApplicable;
  } catch (const ngon::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
