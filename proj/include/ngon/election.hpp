#pragma once

#include "ngon/common.hpp"
#include "ngon/geometry.hpp"
#include "ngon/words.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ngon {

/// Robots on a common circle in scan order.  order[i] is followed by
/// order[(i+1) % n] in the scan orientation, and gaps[i] is the central
/// angle between them, so the gaps sum to 2*pi.
template <typename Scalar>
struct CircleConfiguration {
  Circle<Scalar> circle;
  PointSeq<Scalar> order;
  Word<Scalar> gaps;
  bool clockwise = true;
};

using CircleConfigurationd = CircleConfiguration<double>;

template <typename Scalar>
CircleConfiguration<Scalar> make_circle_configuration(const PointSeq<Scalar>& points,
                                                      const Tolerance<Scalar>& tol,
                                                      bool clockwise = true) {
  const Index n = static_cast<Index>(points.size());
  if (n < 3) throw PreconditionError("make_circle_configuration: need at least three points");
  const auto fit = fit_common_circle(points, tol);
  if (!fit) throw GeometryError("make_circle_configuration: points are not on a common circle");

  const std::vector<Index> idx = circular_order(*fit, points, clockwise, tol);
  CircleConfiguration<Scalar> cc;
  cc.circle = *fit;
  cc.clockwise = clockwise;
  cc.order.reserve(static_cast<size_t>(n));
  for (Index i : idx) cc.order.push_back(points[static_cast<size_t>(i)]);

  Scalar sum = Scalar(0);
  for (Index i = 0; i < n; ++i) {
    const Scalar gap = central_angle(cc.circle, cc.order[static_cast<size_t>(i)],
                                     cc.order[static_cast<size_t>((i + 1) % n)], clockwise, tol);
    if (!(gap > Scalar(0))) {
      throw DegeneracyError("make_circle_configuration: zero gap between adjacent robots");
    }
    cc.gaps.append(gap);
    sum += gap;
  }
  if (std::abs(sum - two_pi_v<Scalar>) > Scalar(n) * tol.eps_angle) {
    throw ConsistencyError("make_circle_configuration: gaps do not sum to a full turn");
  }
  return cc;
}

/// Reading of the gap word as seen by the robot of 1-based rank `start`
/// in the scan order: its own outgoing gap first, then onward around the
/// circle.  The backward reading is the reversal, the word the robot
/// sees scanning against the orientation.
template <typename Scalar>
Word<Scalar> string_of_angles(const CircleConfiguration<Scalar>& cc, Index start, bool forward) {
  const Index n = cc.gaps.size();
  if (start < 1 || start > n) {
    throw RangeError("string_of_angles: rank " + std::to_string(start) +
                     " out of range for " + std::to_string(n) + " robots");
  }
  const Word<Scalar> fwd = rotation(cc.gaps, start);
  return forward ? fwd : fwd.reversed();
}

/// The two robots whose readings are Lyndon words: exactly one robot has
/// a Lyndon forward reading and exactly one a Lyndon backward reading,
/// and they are distinct.  Ranks are 1-based into cc.order.
template <typename Scalar>
struct LyndonHolders {
  Index forward_rank = 0;
  Index backward_rank = 0;
  Vec2<Scalar> forward_position = Vec2<Scalar>::Zero();
  Vec2<Scalar> backward_position = Vec2<Scalar>::Zero();
};

using LyndonHoldersd = LyndonHolders<double>;

namespace detail {

template <typename Scalar>
bool all_letters_equal(const Word<Scalar>& w, const Tolerance<Scalar>& tol) {
  for (Index i = 0; i < w.size(); ++i) {
    for (Index j = i + 1; j < w.size(); ++j) {
      if (compare_letters(w[i], w[j], tol) != Ordering::EQ) return false;
    }
  }
  return true;
}

}  // namespace detail

template <typename Scalar>
LyndonHolders<Scalar> lyndon_holders(const CircleConfiguration<Scalar>& cc,
                                     const Tolerance<Scalar>& tol) {
  const Index n = cc.gaps.size();
  if (n < 5 || !is_prime(static_cast<int>(n))) {
    throw PreconditionError("lyndon_holders: robot count must be a prime >= 5, got " +
                            std::to_string(n));
  }
  if (detail::all_letters_equal(cc.gaps, tol)) {
    throw NotApplicableError("lyndon_holders: configuration is a regular n-gon");
  }

  std::vector<Index> fwd, bwd;
  for (Index r = 1; r <= n; ++r) {
    if (is_lyndon(string_of_angles(cc, r, true), tol)) fwd.push_back(r);
    if (is_lyndon(string_of_angles(cc, r, false), tol)) bwd.push_back(r);
  }
  if (fwd.size() != 1 || bwd.size() != 1) {
    throw ConsistencyError(
        "lyndon_holders: expected exactly one holder per direction, got " +
        std::to_string(fwd.size()) + " forward and " + std::to_string(bwd.size()) +
        " backward; letters too close to the tolerance band can cause this");
  }
  if (fwd[0] == bwd[0]) {
    throw ConsistencyError("lyndon_holders: forward and backward holders coincide");
  }
  LyndonHolders<Scalar> h;
  h.forward_rank = fwd[0];
  h.backward_rank = bwd[0];
  h.forward_position = cc.order[static_cast<size_t>(fwd[0] - 1)];
  h.backward_position = cc.order[static_cast<size_t>(bwd[0] - 1)];
  return h;
}

/// Election summary: the holders split the remaining n-2 robots into the
/// two open arcs between them; with n prime exactly one arc holds an odd
/// count, and the leader is its middle robot.
template <typename Scalar>
struct ElectionReport {
  LyndonHolders<Scalar> holders;
  std::vector<Index> arc_from_forward;   // ranks strictly between forward and backward holder
  std::vector<Index> arc_from_backward;  // ranks strictly between backward and forward holder
  Index leader_rank = 0;                 // 1-based into cc.order
  Vec2<Scalar> leader = Vec2<Scalar>::Zero();
};

using ElectionReportd = ElectionReport<double>;

template <typename Scalar>
ElectionReport<Scalar> election_report(const CircleConfiguration<Scalar>& cc,
                                       const Tolerance<Scalar>& tol) {
  const Index n = cc.gaps.size();
  ElectionReport<Scalar> rep;
  rep.holders = lyndon_holders(cc, tol);

  const auto walk = [&](Index from, Index to) {
    std::vector<Index> ranks;
    for (Index r = from % n + 1; r != to; r = r % n + 1) ranks.push_back(r);
    return ranks;
  };
  rep.arc_from_forward = walk(rep.holders.forward_rank, rep.holders.backward_rank);
  rep.arc_from_backward = walk(rep.holders.backward_rank, rep.holders.forward_rank);

  const size_t c1 = rep.arc_from_forward.size();
  const size_t c2 = rep.arc_from_backward.size();
  if (c1 + c2 != static_cast<size_t>(n - 2) || (c1 % 2) == (c2 % 2)) {
    throw ConsistencyError("election_report: arc counts do not split n-2 with one odd side");
  }
  const std::vector<Index>& odd = (c1 % 2 == 1) ? rep.arc_from_forward : rep.arc_from_backward;
  rep.leader_rank = odd[odd.size() / 2];
  rep.leader = cc.order[static_cast<size_t>(rep.leader_rank - 1)];
  return rep;
}

/// Single elected robot among robots on a common circle, n prime >= 5.
template <typename Scalar>
Vec2<Scalar> elect_on_circle(const CircleConfiguration<Scalar>& cc,
                             const Tolerance<Scalar>& tol) {
  return election_report(cc, tol).leader;
}

enum class TriangleKind { Equilateral, Collinear, Isosceles, Scalene };

inline const char* to_string(TriangleKind k) {
  switch (k) {
    case TriangleKind::Equilateral: return "equilateral";
    case TriangleKind::Collinear: return "collinear";
    case TriangleKind::Isosceles: return "isosceles";
    case TriangleKind::Scalene: return "scalene";
  }
  return "unknown";
}

/// Triangle election result.  leader is a 0-based index into the input,
/// or -1 for the equilateral case, which elects nobody.
template <typename Scalar>
struct TriangleElection {
  TriangleKind kind = TriangleKind::Equilateral;
  Index leader = -1;
};

using TriangleElectiond = TriangleElection<double>;

/// Interior angle at vertex i of the triangle (a, b, c), in [0, pi].
template <typename Scalar>
Scalar interior_angle(const Vec2<Scalar>& at, const Vec2<Scalar>& u, const Vec2<Scalar>& v) {
  const Vec2<Scalar> p = u - at;
  const Vec2<Scalar> q = v - at;
  const Scalar cross = p.x() * q.y() - p.y() * q.x();
  return std::atan2(std::abs(cross), p.dot(q));
}

template <typename Scalar>
TriangleElection<Scalar> analyze_triangle(const PointSeq<Scalar>& points,
                                          const Tolerance<Scalar>& tol) {
  if (points.size() != 3) throw PreconditionError("analyze_triangle: need exactly three points");
  check_distinct(points, tol.eps_pos);

  const Vec2<Scalar>& a = points[0];
  const Vec2<Scalar>& b = points[1];
  const Vec2<Scalar>& c = points[2];

  bool collinear = false;
  for (Index i = 0; i < 3 && !collinear; ++i) {
    const Vec2<Scalar>& p = points[static_cast<size_t>(i)];
    const Vec2<Scalar>& q = points[static_cast<size_t>((i + 1) % 3)];
    const Vec2<Scalar>& r = points[static_cast<size_t>((i + 2) % 3)];
    const Vec2<Scalar> e = r - q;
    const Scalar len = e.norm();
    const Scalar dist = std::abs(e.x() * (p - q).y() - e.y() * (p - q).x()) / len;
    collinear = dist <= tol.eps_pos;
  }
  if (collinear) {
    for (Index i = 0; i < 3; ++i) {
      const Vec2<Scalar>& p = points[static_cast<size_t>(i)];
      const Vec2<Scalar>& q = points[static_cast<size_t>((i + 1) % 3)];
      const Vec2<Scalar>& r = points[static_cast<size_t>((i + 2) % 3)];
      if ((q - p).dot(r - p) < Scalar(0)) return {TriangleKind::Collinear, i};
    }
    throw ConsistencyError("analyze_triangle: collinear points with no middle point");
  }

  const Scalar angles[3] = {interior_angle(a, b, c), interior_angle(b, a, c),
                            interior_angle(c, a, b)};
  std::vector<std::pair<Index, Index>> equal_pairs;
  for (Index i = 0; i < 3; ++i) {
    for (Index j = i + 1; j < 3; ++j) {
      if (std::abs(angles[i] - angles[j]) <= tol.eps_angle) equal_pairs.emplace_back(i, j);
    }
  }
  if (equal_pairs.size() >= 2) return {TriangleKind::Equilateral, -1};
  if (equal_pairs.size() == 1) {
    const Index apex = 3 - equal_pairs[0].first - equal_pairs[0].second;
    return {TriangleKind::Isosceles, apex};
  }
  Index best = 0;
  for (Index i = 1; i < 3; ++i) {
    if (angles[i] < angles[best]) best = i;
  }
  return {TriangleKind::Scalene, best};
}

/// Leader among three robots.  Equilateral triangles elect nobody and
/// raise NotApplicableError.
template <typename Scalar>
Vec2<Scalar> elect_three(const PointSeq<Scalar>& points, const Tolerance<Scalar>& tol) {
  const TriangleElection<Scalar> t = analyze_triangle(points, tol);
  if (t.kind == TriangleKind::Equilateral) {
    throw NotApplicableError("elect_three: equilateral triangle elects no robot");
  }
  return points[static_cast<size_t>(t.leader)];
}

}  // namespace ngon
