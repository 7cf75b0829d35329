#pragma once

#include <span>
#include <vector>

#include "opjensen/types.hpp"

namespace opjensen {

/// A product of closed real intervals, the common domain of the scalar
/// functions and the container for tuple spectra.
class CubeDomain {
 public:
  struct Interval {
    double lo;
    double hi;
  };

  explicit CubeDomain(std::vector<Interval> intervals);

  int arity() const { return static_cast<int>(intervals_.size()); }
  const Interval& interval(int i) const { return intervals_[static_cast<std::size_t>(i)]; }
  const std::vector<Interval>& intervals() const { return intervals_; }

  /// Membership slack for coordinate i: atol * max(1, |lo|, |hi|).
  double membership_tol(int i, double atol) const;

  bool contains(std::span<const double> point, double atol) const;

  /// Projects a point onto the cube. Throws NumericalError if any coordinate
  /// sits further outside than the membership slack allows.
  std::vector<double> clamp(std::span<const double> point, double atol) const;

 private:
  std::vector<Interval> intervals_;
};

}  // namespace opjensen
