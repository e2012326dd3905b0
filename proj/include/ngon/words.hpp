#pragma once

#include "ngon/common.hpp"

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

namespace ngon {

/// A finite word whose letters are real scalars.  Letters are compared
/// with the natural order on the reals, relaxed by the eps_angle band of
/// the tolerance passed to each predicate.
template <typename Scalar>
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Scalar> letters) : letters_(letters) {}
  explicit Word(std::vector<Scalar> letters) : letters_(std::move(letters)) {}

  static Word repeated(Scalar letter, Index count) {
    if (count < 0) throw RangeError("Word::repeated: negative count");
    return Word(std::vector<Scalar>(static_cast<size_t>(count), letter));
  }

  Index size() const { return static_cast<Index>(letters_.size()); }
  bool empty() const { return letters_.empty(); }

  Scalar operator[](Index i) const { return letters_[static_cast<size_t>(i)]; }

  const std::vector<Scalar>& letters() const { return letters_; }

  void append(Scalar letter) { letters_.push_back(letter); }

  Word reversed() const {
    return Word(std::vector<Scalar>(letters_.rbegin(), letters_.rend()));
  }

  /// Exact structural equality.  Tolerance-aware comparison goes through
  /// lex_compare.
  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

 private:
  std::vector<Scalar> letters_;
};

using Wordd = Word<double>;

/// Three-way letter comparison with equality band tol.eps_angle.
template <typename Scalar>
Ordering compare_letters(Scalar a, Scalar b, const Tolerance<Scalar>& tol) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidLetterError("compare_letters: non-finite letter");
  }
  if (std::abs(a - b) <= tol.eps_angle) return Ordering::EQ;
  return a < b ? Ordering::LT : Ordering::GT;
}

/// Lexicographic three-way comparison.  A proper prefix precedes the
/// longer word.
template <typename Scalar>
Ordering lex_compare(const Word<Scalar>& u, const Word<Scalar>& v, const Tolerance<Scalar>& tol) {
  const Index m = std::min(u.size(), v.size());
  for (Index i = 0; i < m; ++i) {
    const Ordering c = compare_letters(u[i], v[i], tol);
    if (c != Ordering::EQ) return c;
  }
  if (u.size() == v.size()) return Ordering::EQ;
  return u.size() < v.size() ? Ordering::LT : Ordering::GT;
}

/// j-th rotation, 1-based: rotation(w, 1) == w and rotation(w, j) moves
/// the first j-1 letters to the back.  j ranges over 1..max(1, |w|).
template <typename Scalar>
Word<Scalar> rotation(const Word<Scalar>& w, Index j) {
  const Index n = w.size();
  if (j < 1 || j > std::max<Index>(1, n)) {
    throw RangeError("rotation: index " + std::to_string(j) + " out of range for length " +
                     std::to_string(n));
  }
  if (n == 0) return w;
  std::vector<Scalar> out;
  out.reserve(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) out.push_back(w[(j - 1 + i) % n]);
  return Word<Scalar>(std::move(out));
}

/// k-fold concatenation of w with itself.
template <typename Scalar>
Word<Scalar> power(const Word<Scalar>& w, Index k) {
  if (k < 0) throw RangeError("power: negative exponent");
  std::vector<Scalar> out;
  out.reserve(static_cast<size_t>(k * w.size()));
  for (Index r = 0; r < k; ++r) {
    for (Index i = 0; i < w.size(); ++i) out.push_back(w[i]);
  }
  return Word<Scalar>(std::move(out));
}

/// A nonempty word is primitive when it is not a k-fold power, k >= 2,
/// of a shorter word, with letters identified by compare_letters.
template <typename Scalar>
bool is_primitive(const Word<Scalar>& w, const Tolerance<Scalar>& tol) {
  if (w.empty()) throw PreconditionError("is_primitive: empty word");
  const Index n = w.size();
  for (Index d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (Index i = d; i < n && periodic; ++i) {
      periodic = compare_letters(w[i], w[i - d], tol) == Ordering::EQ;
    }
    if (periodic) return false;
  }
  return true;
}

/// A nonempty word is minimal when it is <= every rotation of itself.
template <typename Scalar>
bool is_minimal(const Word<Scalar>& w, const Tolerance<Scalar>& tol) {
  if (w.empty()) throw PreconditionError("is_minimal: empty word");
  for (Index j = 1; j <= w.size(); ++j) {
    if (lex_compare(w, rotation(w, j), tol) == Ordering::GT) return false;
  }
  return true;
}

/// Smallest j in 1..|w| with rotation(w, j) strictly preceding w, or
/// nullopt when w is minimal.
template <typename Scalar>
std::optional<Index> minimality_witness(const Word<Scalar>& w, const Tolerance<Scalar>& tol) {
  if (w.empty()) throw PreconditionError("minimality_witness: empty word");
  for (Index j = 1; j <= w.size(); ++j) {
    if (lex_compare(w, rotation(w, j), tol) == Ordering::GT) return j;
  }
  return std::nullopt;
}

/// Lyndon predicate: nonempty and strictly smaller than every rotation
/// other than itself.  This implies primitivity and minimality.
template <typename Scalar>
bool is_lyndon(const Word<Scalar>& w, const Tolerance<Scalar>& tol) {
  if (w.empty()) return false;
  for (Index j = 2; j <= w.size(); ++j) {
    if (lex_compare(w, rotation(w, j), tol) != Ordering::LT) return false;
  }
  return true;
}

}  // namespace ngon
