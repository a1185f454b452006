#pragma once

#include <limits>
#include <string>
#include <vector>

namespace postaic {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (lo, hi) on the extended real line.
struct Interval {
  double lo;
  double hi;

  bool operator==(const Interval&) const = default;
};

/// Finite union of disjoint open intervals, always held in canonical form:
/// sorted, nonempty members, and gaps wider than the merge tolerance.
/// Endpoints themselves are treated as outside.
class IntervalUnion {
public:
  IntervalUnion() = default;  // empty set
  explicit IntervalUnion(std::vector<Interval> intervals);

  static IntervalUnion real_line() { return IntervalUnion({{-kInf, kInf}}); }
  static IntervalUnion empty_set() { return IntervalUnion(); }

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  std::size_t size() const noexcept { return intervals_.size(); }
  bool empty() const noexcept { return intervals_.empty(); }
  bool is_real_line() const noexcept;

  bool contains(double t) const;
  // 0 inside, otherwise the distance to the nearest member (inf when empty).
  double distance(double t) const;
  double infimum() const;
  double supremum() const;

  IntervalUnion intersect(const IntervalUnion& other) const;
  IntervalUnion unite(const IntervalUnion& other) const;
  IntervalUnion complement() const;
  // this ∩ (-inf, x] and this ∩ (x, inf); used by the truncated-normal code.
  IntervalUnion below(double x) const;
  IntervalUnion above(double x) const;

  std::string to_string() const;

  bool operator==(const IntervalUnion&) const = default;

private:
  std::vector<Interval> intervals_;
};

// Canonical form of an arbitrary list of intervals: drops lo >= hi, sorts, and
// merges overlaps plus gaps below 1e-12 * max(1, |endpoint|).
std::vector<Interval> canonicalize(std::vector<Interval> intervals);

inline IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b) { return a.intersect(b); }
inline bool contains(const IntervalUnion& u, double t) { return u.contains(t); }

}  // namespace postaic
