#include "opjensen/rng.hpp"

#include <cmath>

namespace opjensen {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng Rng::substream(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed;
  const std::uint64_t h = splitmix64(s);
  s = h ^ (index + 0x9e3779b97f4a7c15ULL);
  return Rng(splitmix64(s));
}

double Rng::uniform01() {
  // 53 high bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

int Rng::uniform_int(int lo, int hi) {
  const double u = uniform01();
  const int span = hi - lo + 1;
  int v = lo + static_cast<int>(u * span);
  return v > hi ? hi : v;
}

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double a = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(a);
  has_cached_normal_ = true;
  return r * std::cos(a);
}

Complex Rng::cnormal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

}  // namespace opjensen
