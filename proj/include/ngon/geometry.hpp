#pragma once

#include "ngon/common.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <type_traits>
#include <utility>
#include <vector>

namespace ngon {

template <typename Scalar>
struct Circle {
  Vec2<Scalar> center = Vec2<Scalar>::Zero();
  Scalar radius = Scalar(0);
};

using Circled = Circle<double>;

/// Similarity map from the global frame into a robot's local frame:
///   local = scale * R(rotation) * F * global + translation
/// where F flips the y axis when reflected is set.  scale must stay
/// positive so the map is invertible.
template <typename Scalar>
struct SimilarityFrame {
  Scalar rotation = Scalar(0);
  Scalar scale = Scalar(1);
  Vec2<Scalar> translation = Vec2<Scalar>::Zero();
  bool reflected = false;

  bool is_identity() const {
    return rotation == Scalar(0) && scale == Scalar(1) && translation.x() == Scalar(0) &&
           translation.y() == Scalar(0) && !reflected;
  }

  Eigen::Matrix<Scalar, 2, 2> linear() const {
    Eigen::Matrix<Scalar, 2, 2> m = Eigen::Rotation2D<Scalar>(rotation).toRotationMatrix();
    if (reflected) m.col(1) *= Scalar(-1);
    return Eigen::Matrix<Scalar, 2, 2>(scale * m);
  }

  Eigen::Matrix<Scalar, 2, 2> linear_inverse() const {
    if (!(scale > Scalar(0))) throw PreconditionError("SimilarityFrame: scale must be positive");
    Eigen::Matrix<Scalar, 2, 2> m = Eigen::Rotation2D<Scalar>(-rotation).toRotationMatrix();
    if (reflected) m.row(1) *= Scalar(-1);
    return Eigen::Matrix<Scalar, 2, 2>(m / scale);
  }
};

template <typename Scalar>
Vec2<Scalar> to_local(const SimilarityFrame<Scalar>& f, const Vec2<Scalar>& p) {
  if (!(f.scale > Scalar(0))) throw PreconditionError("SimilarityFrame: scale must be positive");
  return f.linear() * p + f.translation;
}

template <typename Scalar>
Vec2<Scalar> from_local(const SimilarityFrame<Scalar>& f, const Vec2<Scalar>& p) {
  return f.linear_inverse() * (p - f.translation);
}

template <typename Scalar>
PointSeq<Scalar> to_local(const SimilarityFrame<Scalar>& f, const PointSeq<Scalar>& pts) {
  PointSeq<Scalar> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(to_local(f, p));
  return out;
}

namespace detail {

template <typename Scalar>
bool sec_contains(const Circle<Scalar>& c, const Vec2<Scalar>& p) {
  const Scalar d2 = (p - c.center).squaredNorm();
  const Scalar r2 = c.radius * c.radius;
  return d2 <= r2 * (Scalar(1) + Scalar(1e-12)) + Scalar(1e-30);
}

template <typename Scalar>
Circle<Scalar> diametral_circle(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  const Vec2<Scalar> center = (a + b) / Scalar(2);
  return {center, std::max((a - center).norm(), (b - center).norm())};
}

/// Circumcircle of a non-degenerate triangle; the diametral circle of
/// the farthest pair when the points are (near) collinear.
template <typename Scalar>
Circle<Scalar> circle_through(const Vec2<Scalar>& a, const Vec2<Scalar>& b,
                              const Vec2<Scalar>& c) {
  const Vec2<Scalar> u = b - a;
  const Vec2<Scalar> v = c - a;
  const Scalar cross = u.x() * v.y() - u.y() * v.x();
  const Scalar scale = u.norm() * v.norm();
  if (std::abs(cross) <= Scalar(1e-12) * scale) {
    Circle<Scalar> best = diametral_circle(a, b);
    for (const Circle<Scalar>& cand : {diametral_circle(a, c), diametral_circle(b, c)}) {
      if (cand.radius > best.radius) best = cand;
    }
    return best;
  }
  const Scalar bu = u.squaredNorm() / Scalar(2);
  const Scalar bv = v.squaredNorm() / Scalar(2);
  const Vec2<Scalar> rel((bu * v.y() - bv * u.y()) / cross, (bv * u.x() - bu * v.x()) / cross);
  const Vec2<Scalar> center = a + rel;
  const Scalar radius = std::max({(a - center).norm(), (b - center).norm(), (c - center).norm()});
  return {center, radius};
}

}  // namespace detail

/// Smallest circle containing all points, by randomized incremental
/// insertion over a fixed shuffle, so the result is deterministic for a
/// given input sequence.
template <typename Scalar>
Circle<Scalar> smallest_enclosing_circle(const PointSeq<Scalar>& points) {
  if (points.empty()) {
    throw PreconditionError("smallest_enclosing_circle: need at least one point");
  }
  PointSeq<Scalar> pts = points;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::shuffle(pts.begin(), pts.end(), rng);

  const Index n = static_cast<Index>(pts.size());
  Circle<Scalar> c{pts[0], Scalar(0)};
  for (Index i = 1; i < n; ++i) {
    if (detail::sec_contains(c, pts[static_cast<size_t>(i)])) continue;
    c = {pts[static_cast<size_t>(i)], Scalar(0)};
    for (Index j = 0; j < i; ++j) {
      if (detail::sec_contains(c, pts[static_cast<size_t>(j)])) continue;
      c = detail::diametral_circle(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)]);
      for (Index k = 0; k < j; ++k) {
        if (detail::sec_contains(c, pts[static_cast<size_t>(k)])) continue;
        c = detail::circle_through(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)],
                                   pts[static_cast<size_t>(k)]);
      }
    }
  }
  return c;
}

/// Least-squares circle through all points, accepted only when every
/// point sits on it within tol.eps_pos.  Returns nullopt when no common
/// circle exists at that tolerance or the fit degenerates.
template <typename Scalar>
std::optional<Circle<Scalar>> fit_common_circle(const PointSeq<Scalar>& points,
                                                const Tolerance<Scalar>& tol) {
  const Index n = static_cast<Index>(points.size());
  if (n < 3) throw PreconditionError("fit_common_circle: need at least three points");

  Vec2<Scalar> centroid = Vec2<Scalar>::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= Scalar(n);

  Eigen::Matrix<Scalar, Eigen::Dynamic, 3> m(n, 3);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rhs(n);
  for (Index i = 0; i < n; ++i) {
    const Vec2<Scalar> q = points[static_cast<size_t>(i)] - centroid;
    m(i, 0) = Scalar(2) * q.x();
    m(i, 1) = Scalar(2) * q.y();
    m(i, 2) = Scalar(1);
    rhs(i) = q.squaredNorm();
  }
  const Eigen::Matrix<Scalar, 3, 1> sol = m.colPivHouseholderQr().solve(rhs);
  const Vec2<Scalar> rel(sol(0), sol(1));
  const Scalar r2 = sol(2) + rel.squaredNorm();
  if (!std::isfinite(r2) || r2 <= Scalar(0)) return std::nullopt;
  const Scalar radius = std::sqrt(r2);
  if (radius <= tol.eps_pos) return std::nullopt;
  const Circle<Scalar> c{centroid + rel, radius};
  for (const auto& p : points) {
    if (std::abs((p - c.center).norm() - c.radius) > tol.eps_pos) return std::nullopt;
  }
  return c;
}

/// Polar angle of p around the circle center, in [0, 2*pi).  p must lie
/// on the boundary within tol.eps_pos.
template <typename Scalar>
Scalar boundary_angle(const Circle<Scalar>& c, const Vec2<Scalar>& p,
                      const Tolerance<Scalar>& tol) {
  if (c.radius <= tol.eps_pos) throw GeometryError("boundary_angle: degenerate circle");
  const Vec2<Scalar> d = p - c.center;
  if (std::abs(d.norm() - c.radius) > tol.eps_pos) {
    throw GeometryError("boundary_angle: point is not on the circle");
  }
  return normalize_angle(std::atan2(d.y(), d.x()));
}

/// Angle swept at the center going from a to b in the given orientation,
/// in [0, 2*pi).  Both points must lie on the boundary within
/// tol.eps_pos.
template <typename Scalar>
Scalar central_angle(const Circle<Scalar>& c, const Vec2<Scalar>& a, const Vec2<Scalar>& b,
                     bool clockwise, const Tolerance<Scalar>& tol) {
  const Scalar ta = boundary_angle(c, a, tol);
  const Scalar tb = boundary_angle(c, b, tol);
  if (points_equal(a, b)) return Scalar(0);
  const Scalar ccw = normalize_angle(tb - ta);
  return clockwise ? normalize_angle(-ccw) : ccw;
}

/// Indices of the points in scan order around the circle, starting from
/// the point with the smallest polar angle.  All points must lie on the
/// boundary; coincident points are rejected.
template <typename Scalar>
std::vector<Index> circular_order(const Circle<Scalar>& c, const PointSeq<Scalar>& points,
                                  bool clockwise, const Tolerance<Scalar>& tol) {
  const Index n = static_cast<Index>(points.size());
  if (n < 1) throw PreconditionError("circular_order: need at least one point");
  check_distinct(points, tol.eps_pos);

  std::vector<Scalar> theta(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    theta[static_cast<size_t>(i)] = boundary_angle(c, points[static_cast<size_t>(i)], tol);
  }
  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Scalar ta = theta[static_cast<size_t>(a)];
    const Scalar tb = theta[static_cast<size_t>(b)];
    return ta != tb ? ta < tb : a < b;
  });
  if (clockwise && n > 1) {
    std::reverse(order.begin() + 1, order.end());
  }
  return order;
}

/// Regular n-gon test: a common circle exists and consecutive central
/// angles all equal 2*pi/n within gap_tol (default n * tol.eps_angle).
/// Two distinct points always form a regular 2-gon.
template <typename Scalar>
bool is_regular_ngon(const PointSeq<Scalar>& points, const Tolerance<Scalar>& tol,
                     std::optional<std::type_identity_t<Scalar>> gap_tol = std::nullopt) {
  const Index n = static_cast<Index>(points.size());
  if (n < 2) return false;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (points_close(points[static_cast<size_t>(i)], points[static_cast<size_t>(j)],
                       tol.eps_pos)) {
        return false;
      }
    }
  }
  if (n == 2) return true;

  const auto fit = fit_common_circle(points, tol);
  if (!fit) return false;
  const Scalar alpha = two_pi_v<Scalar> / Scalar(n);
  const Scalar gtol = gap_tol.value_or(Scalar(n) * tol.eps_angle);
  const std::vector<Index> order = circular_order(*fit, points, false, tol);
  for (Index m = 0; m < n; ++m) {
    const Vec2<Scalar>& a = points[static_cast<size_t>(order[static_cast<size_t>(m)])];
    const Vec2<Scalar>& b =
        points[static_cast<size_t>(order[static_cast<size_t>((m + 1) % n)])];
    const Scalar gap = central_angle(*fit, a, b, false, tol);
    if (std::abs(gap - alpha) > gtol) return false;
  }
  return true;
}

}  // namespace ngon
