#include "opjensen/cube.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opjensen {

CubeDomain::CubeDomain(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw ValidationError("cube: needs at least one interval");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw ValidationError("cube: interval " + std::to_string(i + 1) + " has non-finite endpoint");
    if (iv.lo > iv.hi) {
      std::ostringstream os;
      os << "cube: interval " << i + 1 << " has lo > hi (" << iv.lo << " > " << iv.hi << ")";
      throw ValidationError(os.str());
    }
  }
}

double CubeDomain::membership_tol(int i, double atol) const {
  const auto& iv = intervals_[static_cast<std::size_t>(i)];
  return atol * std::max({1.0, std::fabs(iv.lo), std::fabs(iv.hi)});
}

bool CubeDomain::contains(std::span<const double> point, double atol) const {
  if (static_cast<int>(point.size()) != arity()) return false;
  for (int i = 0; i < arity(); ++i) {
    const auto& iv = intervals_[static_cast<std::size_t>(i)];
    const double eps = membership_tol(i, atol);
    if (point[static_cast<std::size_t>(i)] < iv.lo - eps ||
        point[static_cast<std::size_t>(i)] > iv.hi + eps)
      return false;
  }
  return true;
}

std::vector<double> CubeDomain::clamp(std::span<const double> point, double atol) const {
  if (static_cast<int>(point.size()) != arity())
    throw ValidationError("cube: point arity mismatch");
  std::vector<double> out(point.begin(), point.end());
  for (int i = 0; i < arity(); ++i) {
    const auto& iv = intervals_[static_cast<std::size_t>(i)];
    const double eps = membership_tol(i, atol);
    double& v = out[static_cast<std::size_t>(i)];
    if (v < iv.lo - eps || v > iv.hi + eps) {
      std::ostringstream os;
      os << "point coordinate " << i + 1 << " = " << v << " lies outside ["
         << iv.lo << ", " << iv.hi << "] beyond tolerance";
      throw NumericalError(os.str());
    }
    v = std::clamp(v, iv.lo, iv.hi);
  }
  return out;
}

}  // namespace opjensen
