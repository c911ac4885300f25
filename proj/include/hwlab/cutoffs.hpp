#pragma once

#include "hwlab/field.hpp"

namespace hwlab {

// Nested smooth steps, each a quintic smoothstep (C2) across its transition:
//   minus [1/2, 3/2], base [1, 5/2], plus [3/2, 5/2]  ->  minus >= base >= plus.
// base vanishes for z <= 1 and equals 1 for z >= 3 as required of it; it already reaches 1
// at 5/2 so that it never drops below plus.
enum class CutoffKind { base, plus, minus };

struct Transition {
  double lo;
  double hi;
};

Transition transition(CutoffKind kind);
double cutoff_profile(CutoffKind kind, double z);
// sup |d/dz cutoff_profile|
double cutoff_slope(CutoffKind kind);

// x -> cutoff_profile(kind, (x - anchor) / scale)
struct CutoffSpec {
  CutoffKind kind = CutoffKind::base;
  double anchor = 0.0;
  double scale = 1.0;
};

// Throws std::domain_error when the transition leaves the box.
RealField cutoff_field(const CutoffSpec& spec, const Grid& g);
double cutoff_field_slope(const CutoffSpec& spec);  // cutoff_slope / scale

// The moving cutoff of the two-wave experiment: scale min((t+sigma)^2, cap) with
// cap = min(L/8, sigma/8), anchored so the nested family [scale/2, 5*scale/2] is centred
// on the midpoint of the two tracked waves.
struct MovingCutoff {
  CutoffSpec spec;
  bool capped = false;
};

MovingCutoff two_wave_cutoff(CutoffKind kind, double x1, double x2, double t, double sigma, const Grid& g);

}  // namespace hwlab
