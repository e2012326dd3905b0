#pragma once

#include "ngon/common.hpp"
#include "ngon/election.hpp"
#include "ngon/geometry.hpp"
#include "ngon/words.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ngon {

enum class Phase { Arbitrary, OnCircle, Oriented, NGon };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::Arbitrary: return "arbitrary";
    case Phase::OnCircle: return "on_circle";
    case Phase::Oriented: return "oriented";
    case Phase::NGon: return "ngon";
  }
  return "unknown";
}

/// Gap slack, in radians, under which consecutive central angles count
/// as equal for phase classification and convergence.  Much looser than
/// Tolerance::eps_angle so that a formation whose last few moves landed
/// within floating-point reach of the target still classifies as formed.
inline constexpr double kGapTolerance = 1e-6;

/// A robot's move for one activation.  target equal to the robot's own
/// position (exact, coordinate-wise) means stay.
template <typename Scalar>
struct MoveDecision {
  Vec2<Scalar> target = Vec2<Scalar>::Zero();
};

using MoveDecisiond = MoveDecision<double>;

/// An oriented configuration: all robots but one on a circle, the last
/// one strictly inside but off the center, and the boundary point on the
/// ray from the center through it unoccupied.  That point anchors the
/// target polygon.
template <typename Scalar>
struct OrientedView {
  Circle<Scalar> circle;
  Index interior_index = -1;               // index into the observed positions
  Vec2<Scalar> interior = Vec2<Scalar>::Zero();
  Vec2<Scalar> anchor = Vec2<Scalar>::Zero();
  PointSeq<Scalar> final_positions;        // n slots on the circle, [0] == anchor
  PointSeq<Scalar> free_robots;            // boundary robots not yet on a slot
  PointSeq<Scalar> free_slots;             // unoccupied slots other than the anchor
  PointSeq<Scalar> elected;                // free robots allowed to move, at most two
  std::vector<std::pair<Vec2<Scalar>, Vec2<Scalar>>> assignments;  // robot -> slot
};

using OrientedViewd = OrientedView<double>;

/// The n target vertices on the circle, anchored at `anchor` and spaced
/// 2*pi/n apart.  anchor must lie on the boundary within tol.eps_pos.
template <typename Scalar>
PointSeq<Scalar> final_positions(const Circle<Scalar>& circle, const Vec2<Scalar>& anchor,
                                 Index n, const Tolerance<Scalar>& tol) {
  if (n < 5 || !is_prime(static_cast<int>(n))) {
    throw PreconditionError("final_positions: robot count must be a prime >= 5, got " +
                            std::to_string(n));
  }
  const Scalar theta0 = boundary_angle(circle, anchor, tol);
  PointSeq<Scalar> out;
  out.reserve(static_cast<size_t>(n));
  out.push_back(anchor);
  for (Index k = 1; k < n; ++k) {
    const Scalar t = theta0 + Scalar(k) * two_pi_v<Scalar> / Scalar(n);
    out.push_back(circle.center +
                  circle.radius * Vec2<Scalar>(std::cos(t), std::sin(t)));
  }
  return out;
}

/// Detects the oriented shape: returns the circle and the index of the
/// interior robot, or nullopt.  Two candidate interiors raise
/// ConsistencyError.
template <typename Scalar>
std::optional<std::pair<Circle<Scalar>, Index>> detect_oriented(const PointSeq<Scalar>& points,
                                                                const Tolerance<Scalar>& tol) {
  const Index n = static_cast<Index>(points.size());
  if (n < 4) return std::nullopt;

  std::optional<std::pair<Circle<Scalar>, Index>> found;
  PointSeq<Scalar> boundary;
  boundary.reserve(static_cast<size_t>(n - 1));
  for (Index cand = 0; cand < n; ++cand) {
    boundary.clear();
    for (Index i = 0; i < n; ++i) {
      if (i != cand) boundary.push_back(points[static_cast<size_t>(i)]);
    }
    const auto fit = fit_common_circle(boundary, tol);
    if (!fit) continue;
    const Vec2<Scalar> rel = points[static_cast<size_t>(cand)] - fit->center;
    const Scalar d = rel.norm();
    if (d >= fit->radius - tol.eps_pos) continue;  // not strictly inside
    if (d <= tol.eps_pos) continue;                // at the center, ray undefined
    const Vec2<Scalar> ray_point = fit->center + fit->radius * (rel / d);
    bool occupied = false;
    for (const auto& p : boundary) {
      if (points_close(p, ray_point, tol.eps_pos)) {
        occupied = true;
        break;
      }
    }
    if (occupied) continue;
    if (found) {
      throw ConsistencyError("detect_oriented: two distinct interior candidates");
    }
    found = {*fit, cand};
  }
  return found;
}

/// Builds the full oriented view: slots, free robots, the elected movers
/// and their slot assignments.  Raises PhaseError when the configuration
/// is not oriented.
template <typename Scalar>
OrientedView<Scalar> make_oriented_view(const PointSeq<Scalar>& points,
                                        const Tolerance<Scalar>& tol);

/// The free robots allowed to move this round: the closest free robot to
/// the anchor clockwise and the closest counterclockwise.  When they are
/// the same robot only that one is elected.
template <typename Scalar>
PointSeq<Scalar> elect_free_robots(const OrientedView<Scalar>& view,
                                   const Tolerance<Scalar>& tol) {
  if (view.free_robots.empty()) {
    throw PreconditionError("elect_free_robots: no free robots");
  }
  const auto closest = [&](bool clockwise) {
    size_t best = 0;
    Scalar best_angle = central_angle(view.circle, view.anchor, view.free_robots[0], clockwise,
                                      tol);
    for (size_t i = 1; i < view.free_robots.size(); ++i) {
      const Scalar a = central_angle(view.circle, view.anchor, view.free_robots[i], clockwise,
                                     tol);
      if (a < best_angle) {
        best_angle = a;
        best = i;
      }
    }
    return best;
  };
  const size_t cw = closest(true);
  const size_t ccw = closest(false);
  PointSeq<Scalar> elected;
  elected.push_back(view.free_robots[cw]);
  if (ccw != cw) elected.push_back(view.free_robots[ccw]);
  return elected;
}

/// Pairs each elected robot with the free slot it walks to: the
/// clockwise mover takes the clockwise-closest free slot, the
/// counterclockwise mover the counterclockwise-closest one.
template <typename Scalar>
std::vector<std::pair<Vec2<Scalar>, Vec2<Scalar>>> associate(const OrientedView<Scalar>& view,
                                                             const Tolerance<Scalar>& tol) {
  if (view.elected.empty()) throw PreconditionError("associate: no elected robots");
  if (view.free_slots.empty()) throw PreconditionError("associate: no free slots");

  const auto closest_slot = [&](bool clockwise) {
    size_t best = 0;
    Scalar best_angle = central_angle(view.circle, view.anchor, view.free_slots[0], clockwise,
                                      tol);
    for (size_t i = 1; i < view.free_slots.size(); ++i) {
      const Scalar a = central_angle(view.circle, view.anchor, view.free_slots[i], clockwise,
                                     tol);
      if (a < best_angle) {
        best_angle = a;
        best = i;
      }
    }
    return best;
  };

  std::vector<std::pair<Vec2<Scalar>, Vec2<Scalar>>> out;
  out.emplace_back(view.elected[0], view.free_slots[closest_slot(true)]);
  if (view.elected.size() == 2) {
    const size_t s = closest_slot(false);
    out.emplace_back(view.elected[1], view.free_slots[s]);
    if (points_equal(out[0].second, out[1].second)) {
      throw ConsistencyError("associate: both movers assigned the same slot");
    }
  }
  return out;
}

template <typename Scalar>
OrientedView<Scalar> make_oriented_view(const PointSeq<Scalar>& points,
                                        const Tolerance<Scalar>& tol) {
  const auto det = detect_oriented(points, tol);
  if (!det) throw PhaseError("make_oriented_view: configuration is not oriented");

  OrientedView<Scalar> view;
  view.circle = det->first;
  view.interior_index = det->second;
  view.interior = points[static_cast<size_t>(view.interior_index)];
  const Vec2<Scalar> rel = view.interior - view.circle.center;
  view.anchor = view.circle.center + view.circle.radius * rel.normalized();
  view.final_positions = final_positions(view.circle, view.anchor,
                                         static_cast<Index>(points.size()), tol);

  const auto on_slot = [&](const Vec2<Scalar>& p, size_t from) {
    for (size_t k = from; k < view.final_positions.size(); ++k) {
      if (points_close(p, view.final_positions[k], tol.eps_pos)) return true;
    }
    return false;
  };

  for (Index i = 0; i < static_cast<Index>(points.size()); ++i) {
    if (i == view.interior_index) continue;
    const Vec2<Scalar>& p = points[static_cast<size_t>(i)];
    if (!on_slot(p, 0)) view.free_robots.push_back(p);
  }
  for (size_t k = 1; k < view.final_positions.size(); ++k) {
    bool occupied = false;
    for (Index i = 0; i < static_cast<Index>(points.size()); ++i) {
      if (i == view.interior_index) continue;
      if (points_close(points[static_cast<size_t>(i)], view.final_positions[k], tol.eps_pos)) {
        occupied = true;
        break;
      }
    }
    if (!occupied) view.free_slots.push_back(view.final_positions[k]);
  }
  if (view.free_robots.size() != view.free_slots.size()) {
    throw ConsistencyError("make_oriented_view: free robots and free slots disagree (" +
                           std::to_string(view.free_robots.size()) + " vs " +
                           std::to_string(view.free_slots.size()) + ")");
  }
  if (!view.free_robots.empty()) {
    view.elected = elect_free_robots(view, tol);
    view.assignments = associate(view, tol);
  }
  return view;
}

/// Classification of an observed configuration for a supported robot
/// count.  The regular n-gon test uses the loose kGapTolerance band.
template <typename Scalar>
Phase classify(const PointSeq<Scalar>& points, Index n, const Tolerance<Scalar>& tol) {
  if (static_cast<Index>(points.size()) != n) {
    throw PreconditionError("classify: expected " + std::to_string(n) + " points, got " +
                            std::to_string(points.size()));
  }
  if (!is_supported_n(static_cast<int>(n))) {
    throw UnsupportedNError("classify: robot count " + std::to_string(n) +
                            " is not supported (2, 3, or a prime >= 5)");
  }
  check_distinct(points, tol.eps_pos);
  if (is_regular_ngon(points, tol, Scalar(kGapTolerance))) return Phase::NGon;
  if (n >= 5 && detect_oriented(points, tol)) return Phase::Oriented;
  if (n >= 3 && fit_common_circle(points, tol)) return Phase::OnCircle;
  return Phase::Arbitrary;
}

namespace detail {

template <typename Scalar>
bool occupied_at(const PointSeq<Scalar>& points, const Vec2<Scalar>& q, Scalar eps) {
  for (const auto& p : points) {
    if (points_close(p, q, eps)) return true;
  }
  return false;
}

}  // namespace detail

/// Move rule away from any recognized shape: walk radially out to the
/// smallest enclosing circle.  A robot already on the boundary stays, a
/// robot at the center steps half a radius along its local +x axis, and
/// a target already occupied slides around the boundary in small angular
/// steps until free.
template <typename Scalar>
MoveDecision<Scalar> gather_move(const PointSeq<Scalar>& observed, const Vec2<Scalar>& self,
                                 const Tolerance<Scalar>& tol) {
  const Index n = static_cast<Index>(observed.size());
  const Circle<Scalar> sec = smallest_enclosing_circle(observed);
  const Vec2<Scalar> rel = self - sec.center;
  const Scalar d = rel.norm();
  if (std::abs(d - sec.radius) <= tol.eps_pos) return {self};
  if (d <= tol.eps_pos) {
    return {self + Vec2<Scalar>(sec.radius / Scalar(2), Scalar(0))};
  }
  const Scalar theta = std::atan2(rel.y(), rel.x());
  const Scalar delta = two_pi_v<Scalar> / (Scalar(1000) * Scalar(n));
  const Index max_steps = 2000 * n;
  for (Index s = 0; s < max_steps; ++s) {
    const Scalar t = theta + Scalar(s) * delta;
    const Vec2<Scalar> target =
        sec.center + sec.radius * Vec2<Scalar>(std::cos(t), std::sin(t));
    if (!detail::occupied_at(observed, target, tol.eps_pos)) return {target};
  }
  throw ConsistencyError("gather_move: no free boundary point found");
}

/// Move rule for an oriented configuration.  Elected free robots walk to
/// their assigned slots; once every slot is filled the interior robot
/// finishes the polygon at the anchor; everyone else stays.
template <typename Scalar>
MoveDecision<Scalar> oriented_move(const PointSeq<Scalar>& observed, const Vec2<Scalar>& self,
                                   const Tolerance<Scalar>& tol) {
  const OrientedView<Scalar> view = make_oriented_view(observed, tol);
  if (view.free_robots.empty()) {
    if (points_close(self, view.interior, tol.eps_pos)) return {view.anchor};
    return {self};
  }
  for (const auto& [robot, slot] : view.assignments) {
    if (points_close(self, robot, tol.eps_pos)) return {slot};
  }
  return {self};
}

/// Full move rule for n >= 5 robots: stay on a formed polygon, play the
/// oriented rule, let the elected circle robot step halfway to the
/// center, or gather onto the enclosing circle.
template <typename Scalar>
MoveDecision<Scalar> ngon_move(const PointSeq<Scalar>& observed, const Vec2<Scalar>& self,
                               const Tolerance<Scalar>& tol) {
  const Index n = static_cast<Index>(observed.size());
  if (n < 5 || !is_prime(static_cast<int>(n))) {
    throw UnsupportedNError("ngon_move: robot count must be a prime >= 5, got " +
                            std::to_string(n));
  }
  switch (classify(observed, n, tol)) {
    case Phase::NGon:
      return {self};
    case Phase::Oriented:
      return oriented_move(observed, self, tol);
    case Phase::OnCircle: {
      const CircleConfiguration<Scalar> cc = make_circle_configuration(observed, tol, true);
      const Vec2<Scalar> leader = elect_on_circle(cc, tol);
      if (points_close(self, leader, tol.eps_pos)) {
        return {(cc.circle.center + self) / Scalar(2)};
      }
      return {self};
    }
    case Phase::Arbitrary:
      return gather_move(observed, self, tol);
  }
  throw ConsistencyError("ngon_move: unreachable phase");
}

/// Move rule for three robots: hold a formed triangle, otherwise the
/// elected robot walks to the apex completing an equilateral triangle on
/// the other two.  For collinear inputs the apex goes to the positive
/// side of the base oriented from its lexicographically smaller end.
template <typename Scalar>
MoveDecision<Scalar> triangle_move(const PointSeq<Scalar>& observed, const Vec2<Scalar>& self,
                                   const Tolerance<Scalar>& tol) {
  if (observed.size() != 3) throw PreconditionError("triangle_move: need exactly three points");
  if (is_regular_ngon(observed, tol, Scalar(kGapTolerance))) return {self};

  const TriangleElection<Scalar> t = analyze_triangle(observed, tol);
  if (t.kind == TriangleKind::Equilateral) return {self};
  const Vec2<Scalar>& leader = observed[static_cast<size_t>(t.leader)];
  if (!points_close(self, leader, tol.eps_pos)) return {self};

  PointSeq<Scalar> base;
  for (Index i = 0; i < 3; ++i) {
    if (i != t.leader) base.push_back(observed[static_cast<size_t>(i)]);
  }
  Vec2<Scalar> b1 = base[0];
  Vec2<Scalar> b2 = base[1];
  const Vec2<Scalar> edge0 = b2 - b1;
  const Scalar len = edge0.norm();
  const Scalar side = edge0.x() * (self - b1).y() - edge0.y() * (self - b1).x();

  Scalar sign;
  if (std::abs(side) <= tol.eps_pos * len) {
    if (b2.x() < b1.x() || (b2.x() == b1.x() && b2.y() < b1.y())) std::swap(b1, b2);
    sign = Scalar(1);
  } else {
    sign = side > Scalar(0) ? Scalar(1) : Scalar(-1);
  }
  const Vec2<Scalar> edge = b2 - b1;
  const Vec2<Scalar> perp(-edge.y(), edge.x());
  const Vec2<Scalar> apex =
      (b1 + b2) / Scalar(2) + sign * (std::sqrt(Scalar(3)) / Scalar(2)) * perp;
  return {apex};
}

/// Complete protocol: the move a robot computes from what it observes.
/// Two robots always stay, three play the triangle rule, five or more
/// the polygon rule.
template <typename Scalar>
MoveDecision<Scalar> decide_move(const PointSeq<Scalar>& observed, const Vec2<Scalar>& self,
                                 const Tolerance<Scalar>& tol) {
  const Index n = static_cast<Index>(observed.size());
  if (n < 2) throw PreconditionError("decide_move: need at least two robots");
  if (!is_supported_n(static_cast<int>(n))) {
    throw UnsupportedNError("decide_move: robot count " + std::to_string(n) +
                            " is not supported (2, 3, or a prime >= 5)");
  }
  if (!detail::occupied_at(observed, self, tol.eps_pos)) {
    throw PreconditionError("decide_move: self is not among the observed positions");
  }
  if (n == 2) return {self};
  if (n == 3) return triangle_move(observed, self, tol);
  return ngon_move(observed, self, tol);
}

}  // namespace ngon
