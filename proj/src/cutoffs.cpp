#include "hwlab/cutoffs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hwlab {

namespace {
double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
}  // namespace

Transition transition(CutoffKind kind) {
  switch (kind) {
    case CutoffKind::minus: return {0.5, 1.5};
    case CutoffKind::plus: return {1.5, 2.5};
    case CutoffKind::base: break;
  }
  return {1.0, 2.5};
}

double cutoff_profile(CutoffKind kind, double z) {
  const auto [lo, hi] = transition(kind);
  return smoothstep((z - lo) / (hi - lo));
}

double cutoff_slope(CutoffKind kind) {
  const auto [lo, hi] = transition(kind);
  return 1.875 / (hi - lo);
}

RealField cutoff_field(const CutoffSpec& spec, const Grid& g) {
  if (!(spec.scale > 0.0)) throw std::invalid_argument("cutoff scale must be positive");
  const auto [lo, hi] = transition(spec.kind);
  const double a = spec.anchor + lo * spec.scale, b = spec.anchor + hi * spec.scale;
  if (a < g.point(0) || b > g.point(g.size() - 1)) throw std::domain_error("cutoff transition leaves the box");
  RealField out(g);
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = cutoff_profile(spec.kind, (g.point(j) - spec.anchor) / spec.scale);
  return out;
}

double cutoff_field_slope(const CutoffSpec& spec) { return cutoff_slope(spec.kind) / spec.scale; }

MovingCutoff two_wave_cutoff(CutoffKind kind, double x1, double x2, double t, double sigma, const Grid& g) {
  MovingCutoff mc;
  const double widening = (t + sigma) * (t + sigma);
  const double cap = std::min(g.length() / 8.0, sigma / 8.0);
  mc.capped = widening > cap;
  mc.spec.kind = kind;
  mc.spec.scale = std::min(widening, cap);
  mc.spec.anchor = 0.5 * (x1 + x2) - 1.5 * mc.spec.scale;
  return mc;
}

}  // namespace hwlab
