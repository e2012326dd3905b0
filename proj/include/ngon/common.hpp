#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ngon {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using PointSeq = std::vector<Vec2<Scalar>>;

using Vec2d = Vec2<double>;
using PointSeqd = PointSeq<double>;

using Index = std::ptrdiff_t;

template <typename Scalar>
inline constexpr Scalar pi_v = std::numbers::pi_v<Scalar>;

template <typename Scalar>
inline constexpr Scalar two_pi_v = Scalar(2) * std::numbers::pi_v<Scalar>;

/// Result of a tolerance-aware three-way comparison.  EQ means the two
/// values are within the comparison band of each other; it is not
/// transitive when distinct values cluster inside the band, so callers
/// that rely on a total preorder must keep distinct inputs separated by
/// more than twice the band.
enum class Ordering { LT, EQ, GT };

/// Comparison slacks used by every predicate in the library.  eps_angle
/// is the letter-equality band in radians, eps_pos the geometric
/// coincidence band in length units.  No predicate reads a hidden
/// global; the tolerance is always an explicit argument.
template <typename Scalar>
struct Tolerance {
  Scalar eps_angle = Scalar(1e-9);
  Scalar eps_pos = Scalar(1e-9);

  bool valid() const {
    return std::isfinite(eps_angle) && eps_angle > Scalar(0) &&
           std::isfinite(eps_pos) && eps_pos > Scalar(0);
  }
};

using Toleranced = Tolerance<double>;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct RangeError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct InvalidLetterError : Error { using Error::Error; };
struct DegeneracyError : Error { using Error::Error; };
struct GeometryError : Error { using Error::Error; };
struct NotApplicableError : Error { using Error::Error; };
struct UnsupportedNError : Error { using Error::Error; };
struct PhaseError : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct FairnessError : Error { using Error::Error; };
struct ModelViolationError : Error { using Error::Error; };
struct GenerationError : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// True for the robot counts the protocol supports: 2, 3, or a prime >= 5.
inline bool is_supported_n(int n) {
  return n == 2 || n == 3 || (n >= 5 && is_prime(n));
}

/// Reduce an angle to [0, 2*pi).
template <typename Scalar>
Scalar normalize_angle(Scalar a) {
  Scalar r = std::fmod(a, two_pi_v<Scalar>);
  if (r < Scalar(0)) r += two_pi_v<Scalar>;
  if (r >= two_pi_v<Scalar>) r = Scalar(0);
  return r;
}

template <typename Scalar>
bool points_equal(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() == b.x() && a.y() == b.y();
}

template <typename Scalar>
bool points_close(const Vec2<Scalar>& a, const Vec2<Scalar>& b, Scalar eps) {
  return (a - b).norm() <= eps;
}

/// Throws DegeneracyError when any two points coincide within eps.
template <typename Scalar>
void check_distinct(const PointSeq<Scalar>& points, Scalar eps) {
  const Index n = static_cast<Index>(points.size());
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (points_close(points[static_cast<size_t>(i)], points[static_cast<size_t>(j)], eps)) {
        throw DegeneracyError("coincident points at indices " + std::to_string(i) + " and " +
                              std::to_string(j));
      }
    }
  }
}

}  // namespace ngon
