#include "postaic/interval_union.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace postaic {

namespace {

constexpr double kMergeTolerance = 1e-12;

bool mergeable(double left_hi, double right_lo) {
  if (right_lo <= left_hi) return true;
  const double scale = std::max(1.0, std::max(std::abs(left_hi), std::abs(right_lo)));
  return right_lo - left_hi < kMergeTolerance * scale;
}

}  // namespace

std::vector<Interval> canonicalize(std::vector<Interval> intervals) {
  std::erase_if(intervals, [](const Interval& iv) {
    return std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo < iv.hi);
  });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
  std::vector<Interval> out;
  out.reserve(intervals.size());
  for (const auto& iv : intervals) {
    if (!out.empty() && mergeable(out.back().hi, iv.lo))
      out.back().hi = std::max(out.back().hi, iv.hi);
    else
      out.push_back(iv);
  }
  return out;
}

IntervalUnion::IntervalUnion(std::vector<Interval> intervals)
    : intervals_(canonicalize(std::move(intervals))) {}

bool IntervalUnion::is_real_line() const noexcept {
  return intervals_.size() == 1 && intervals_[0].lo == -kInf && intervals_[0].hi == kInf;
}

bool IntervalUnion::contains(double t) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                             [](double v, const Interval& iv) { return v < iv.hi; });
  return it != intervals_.end() && it->lo < t && t < it->hi;
}

double IntervalUnion::distance(double t) const {
  double best = kInf;
  for (const auto& iv : intervals_) {
    if (iv.lo < t && t < iv.hi) return 0.0;
    best = std::min(best, std::min(std::abs(t - iv.lo), std::abs(t - iv.hi)));
  }
  return best;
}

double IntervalUnion::infimum() const { return intervals_.empty() ? kInf : intervals_.front().lo; }
double IntervalUnion::supremum() const { return intervals_.empty() ? -kInf : intervals_.back().hi; }

IntervalUnion IntervalUnion::intersect(const IntervalUnion& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  const auto& a = intervals_;
  const auto& b = other.intervals_;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi)
      ++i;
    else
      ++j;
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& other) const {
  std::vector<Interval> all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return IntervalUnion(std::move(all));
}

IntervalUnion IntervalUnion::complement() const {
  std::vector<Interval> out;
  double cursor = -kInf;
  for (const auto& iv : intervals_) {
    if (cursor < iv.lo) out.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < kInf) out.push_back({cursor, kInf});
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::below(double x) const { return intersect(IntervalUnion({{-kInf, x}})); }
IntervalUnion IntervalUnion::above(double x) const { return intersect(IntervalUnion({{x, kInf}})); }

std::string IntervalUnion::to_string() const {
  if (intervals_.empty()) return "{}";
  std::ostringstream os;
  os.precision(10);
  for (std::size_t k = 0; k < intervals_.size(); ++k)
    os << (k ? " U " : "") << '(' << intervals_[k].lo << ", " << intervals_[k].hi << ')';
  return os.str();
}

}  // namespace postaic
