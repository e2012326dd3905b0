#pragma once

#include "ngon/election.hpp"
#include "ngon/geometry.hpp"
#include "ngon/protocol.hpp"
#include "ngon/words.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

// Test-side generators and reference implementations.  The reference
// code here is written from the definitions alone and shares nothing
// with the library internals, so agreement is meaningful.
namespace ngon::testing {

using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Reference word predicates.

inline int ref_compare(double a, double b, double eps) {
  if (std::abs(a - b) <= eps) return 0;
  return a < b ? -1 : 1;
}

inline int ref_lex(const std::vector<double>& u, const std::vector<double>& v, double eps) {
  const size_t m = std::min(u.size(), v.size());
  for (size_t i = 0; i < m; ++i) {
    const int c = ref_compare(u[i], v[i], eps);
    if (c != 0) return c;
  }
  if (u.size() == v.size()) return 0;
  return u.size() < v.size() ? -1 : 1;
}

inline std::vector<double> ref_rotate(const std::vector<double>& w, size_t k) {
  std::vector<double> out;
  out.reserve(w.size());
  for (size_t i = 0; i < w.size(); ++i) out.push_back(w[(i + k) % w.size()]);
  return out;
}

inline bool ref_is_lyndon(const std::vector<double>& w, double eps) {
  if (w.empty()) return false;
  for (size_t k = 1; k < w.size(); ++k) {
    if (ref_lex(w, ref_rotate(w, k), eps) >= 0) return false;
  }
  return true;
}

inline bool ref_is_primitive(const std::vector<double>& w, double eps) {
  const size_t n = w.size();
  for (size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (size_t i = d; i < n && periodic; ++i) periodic = ref_compare(w[i], w[i - d], eps) == 0;
    if (periodic) return false;
  }
  return true;
}

inline bool ref_is_minimal(const std::vector<double>& w, double eps) {
  for (size_t k = 1; k < w.size(); ++k) {
    if (ref_lex(w, ref_rotate(w, k), eps) > 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Reference smallest enclosing circle by exhaustion over supports.

inline bool ref_encloses(const Circled& c, const PointSeqd& pts, double slack) {
  for (const Vec2d& p : pts) {
    if ((p - c.center).norm() > c.radius + slack) return false;
  }
  return true;
}

inline Circled ref_smallest_circle(const PointSeqd& pts) {
  const double slack = 1e-9;
  Circled best{pts[0], std::numeric_limits<double>::infinity()};
  const size_t n = pts.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      const Vec2d center = (pts[i] + pts[j]) / 2.0;
      const Circled c{center, (pts[i] - center).norm()};
      if (c.radius < best.radius && ref_encloses(c, pts, slack)) best = c;
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      for (size_t k = j + 1; k < n; ++k) {
        const Vec2d u = pts[j] - pts[i];
        const Vec2d v = pts[k] - pts[i];
        const double cross = u.x() * v.y() - u.y() * v.x();
        if (std::abs(cross) < 1e-12) continue;
        const double bu = u.squaredNorm() / 2.0;
        const double bv = v.squaredNorm() / 2.0;
        const Vec2d rel((bu * v.y() - bv * u.y()) / cross, (bv * u.x() - bu * v.x()) / cross);
        const Vec2d center = pts[i] + rel;
        const double radius =
            std::max({(pts[i] - center).norm(), (pts[j] - center).norm(),
                      (pts[k] - center).norm()});
        const Circled c{center, radius};
        if (c.radius < best.radius && ref_encloses(c, pts, slack)) best = c;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Generators.

inline std::vector<double> random_word(Rng& rng, size_t min_len, size_t max_len,
                                       const std::vector<double>& alphabet) {
  std::uniform_int_distribution<size_t> len(min_len, max_len);
  std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
  std::vector<double> w(len(rng));
  for (double& x : w) x = alphabet[pick(rng)];
  return w;
}

/// n positive gaps summing to a full turn, pairwise separated by at
/// least min_letter_sep.
inline std::vector<double> random_gaps(Rng& rng, int n, double min_letter_sep) {
  std::uniform_real_distribution<double> raw(0.2, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> g(static_cast<size_t>(n));
    double sum = 0;
    for (double& x : g) {
      x = raw(rng);
      sum += x;
    }
    for (double& x : g) x *= two_pi_v<double> / sum;
    bool ok = true;
    for (size_t i = 0; i < g.size() && ok; ++i) {
      for (size_t j = i + 1; j < g.size() && ok; ++j) {
        ok = std::abs(g[i] - g[j]) >= min_letter_sep;
      }
    }
    if (ok) return g;
  }
  throw GenerationError("random_gaps: separation unreachable");
}

inline Vec2d on_circle(const Circled& c, double theta) {
  return c.center + c.radius * Vec2d(std::cos(theta), std::sin(theta));
}

inline Circled random_circle(Rng& rng) {
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> rad(0.5, 5.0);
  return {Vec2d(coord(rng), coord(rng)), rad(rng)};
}

struct CirclePointsFixture {
  PointSeqd points;       // input order is a random shuffle
  Circled circle;
  std::vector<double> gaps_clockwise;  // as laid out, starting from start_theta
  double start_theta = 0;
};

/// Robots on a random circle whose clockwise gap sequence is exactly
/// `gaps` (up to the rounding of cos/sin placement).
inline CirclePointsFixture circle_points_from_gaps(Rng& rng, const std::vector<double>& gaps) {
  CirclePointsFixture fx;
  fx.circle = random_circle(rng);
  std::uniform_real_distribution<double> ang(0.0, two_pi_v<double>);
  fx.start_theta = ang(rng);
  fx.gaps_clockwise = gaps;
  double theta = fx.start_theta;
  for (size_t i = 0; i < gaps.size(); ++i) {
    fx.points.push_back(on_circle(fx.circle, theta));
    theta -= gaps[i];
  }
  std::shuffle(fx.points.begin(), fx.points.end(), rng);
  return fx;
}

inline CirclePointsFixture random_on_circle(Rng& rng, int n, double min_letter_sep = 1e-3) {
  return circle_points_from_gaps(rng, random_gaps(rng, n, min_letter_sep));
}

inline PointSeqd regular_polygon(const Circled& c, int n, double theta0) {
  PointSeqd pts;
  for (int k = 0; k < n; ++k) {
    pts.push_back(on_circle(c, theta0 + k * two_pi_v<double> / n));
  }
  return pts;
}

struct OrientedFixture {
  PointSeqd points;
  Circled circle;
  Vec2d interior;
  Vec2d anchor;
  PointSeqd slots;          // all n final positions, [0] == anchor
  PointSeqd filled_slots;   // the slots already occupied by a robot
  PointSeqd free_robots;    // boundary robots off every slot
};

/// An oriented configuration: `filled` of the n-1 non-anchor slots are
/// already occupied, the remaining boundary robots sit at angles clear
/// of every slot, and the interior robot fixes the anchor ray.
inline OrientedFixture make_oriented(Rng& rng, int n, int filled) {
  OrientedFixture fx;
  fx.circle = random_circle(rng);
  std::uniform_real_distribution<double> ang(0.0, two_pi_v<double>);
  const double theta0 = ang(rng);
  const double alpha = two_pi_v<double> / n;
  for (int k = 0; k < n; ++k) fx.slots.push_back(on_circle(fx.circle, theta0 + k * alpha));
  fx.anchor = fx.slots[0];

  std::vector<int> slot_ids(static_cast<size_t>(n - 1));
  std::iota(slot_ids.begin(), slot_ids.end(), 1);
  std::shuffle(slot_ids.begin(), slot_ids.end(), rng);
  slot_ids.resize(static_cast<size_t>(filled));
  for (int id : slot_ids) {
    fx.points.push_back(fx.slots[static_cast<size_t>(id)]);
    fx.filled_slots.push_back(fx.slots[static_cast<size_t>(id)]);
  }

  const int free_count = n - 1 - filled;
  std::vector<double> free_angles;
  while (static_cast<int>(free_angles.size()) < free_count) {
    const double t = ang(rng);
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      const double slot_t = theta0 + k * alpha;
      const double d = std::abs(normalize_angle(t - slot_t));
      ok = std::min(d, two_pi_v<double> - d) > 5e-3;
    }
    for (double other : free_angles) {
      if (!ok) break;
      const double d = std::abs(normalize_angle(t - other));
      ok = std::min(d, two_pi_v<double> - d) > 5e-3;
    }
    if (ok) free_angles.push_back(t);
  }
  for (double t : free_angles) {
    fx.points.push_back(on_circle(fx.circle, t));
    fx.free_robots.push_back(fx.points.back());
  }

  std::uniform_real_distribution<double> rho(0.2, 0.8);
  fx.interior = fx.circle.center + rho(rng) * fx.circle.radius *
                                       Vec2d(std::cos(theta0), std::sin(theta0));
  fx.points.push_back(fx.interior);
  std::shuffle(fx.points.begin(), fx.points.end(), rng);
  return fx;
}

inline SimilarityFrame<double> random_similarity(Rng& rng, bool allow_reflection = true) {
  std::uniform_real_distribution<double> ang(0.0, two_pi_v<double>);
  std::uniform_real_distribution<double> sc(0.5, 2.0);
  std::uniform_real_distribution<double> tr(-5.0, 5.0);
  SimilarityFrame<double> f;
  f.rotation = ang(rng);
  f.scale = sc(rng);
  f.translation = Vec2d(tr(rng), tr(rng));
  f.reflected = allow_reflection && (rng() & 1u) != 0;
  return f;
}

/// Index of the (exactly) matching point, or -1.
inline Index find_point(const PointSeqd& pts, const Vec2d& p) {
  for (size_t i = 0; i < pts.size(); ++i) {
    if (points_equal(pts[i], p)) return static_cast<Index>(i);
  }
  return -1;
}

inline Index find_point_near(const PointSeqd& pts, const Vec2d& p, double eps) {
  for (size_t i = 0; i < pts.size(); ++i) {
    if (points_close(pts[i], p, eps)) return static_cast<Index>(i);
  }
  return -1;
}

}  // namespace ngon::testing
