#pragma once

#include <cstdint>
#include <random>

namespace hwlab {

// Reproducible generator: std::mt19937_64 (fully specified by the C++ standard) with
// hand-written transforms, since std:: distributions differ between library vendors.
//   uniform(): top 53 bits of one draw, scaled by 2^-53, in [0, 1).
//   normal():  Box-Muller on two uniforms, u1 mapped to (0, 1]; the sine branch is discarded.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace hwlab
