#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "geomom/evaluate.hpp"

namespace geomom {

/// 64-bit linear congruential generator (Knuth's MMIX constants).
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Parameter domain: product of two finite unions of closed intervals. A single
/// rectangle is the common case; split patches (e.g. a helicoid that excludes
/// its axis) use more than one interval per parameter.
struct Domain {
  std::vector<Interval> u;
  std::vector<Interval> v;

  const std::vector<Interval>& axis(int i) const { return i == 0 ? u : v; }

  bool contains(const ParamPoint& p) const {
    auto in = [](const std::vector<Interval>& ivs, double x) {
      for (const auto& iv : ivs)
        if (iv.contains(x)) return true;
      return false;
    };
    return in(u, p.u) && in(v, p.v);
  }
};

inline constexpr double kSampleMargin = 0.05;

namespace detail {
inline double draw_on(const std::vector<Interval>& ivs, double margin, Lcg64& rng) {
  double total = 0.0;
  for (const auto& iv : ivs) total += iv.width() * (1.0 - 2.0 * margin);
  double t = rng.uniform() * total;
  for (const auto& iv : ivs) {
    const double w = iv.width() * (1.0 - 2.0 * margin);
    if (t <= w || &iv == &ivs.back()) return iv.lo + iv.width() * margin + std::min(t, w);
    t -= w;
  }
  return ivs.back().lo;
}
}  // namespace detail

/// Deterministic interior sample: each interval is shrunk by `margin` of its
/// width at both ends before drawing.
inline std::vector<ParamPoint> sample_points(const Domain& d, std::size_t count, std::uint64_t seed,
                                             double margin = kSampleMargin) {
  if (d.u.empty() || d.v.empty()) throw std::invalid_argument("empty parameter domain");
  Lcg64 rng(seed);
  std::vector<ParamPoint> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = detail::draw_on(d.u, margin, rng);
    const double v = detail::draw_on(d.v, margin, rng);
    pts.push_back({u, v});
  }
  return pts;
}

}  // namespace geomom
