#pragma once

#include <cstddef>
#include <vector>

namespace hwlab {

// Uniform periodic grid on [-L/2, L/2). Index 0 sits at x = -L/2.
// Wavenumbers are stored in FFT order: 0, 1, ..., n/2-1, -n/2, ..., -1 (times 2*pi/L).
class Grid {
 public:
  Grid(std::size_t n, double length);

  std::size_t size() const { return n_; }
  double length() const { return length_; }
  double dx() const { return length_ / static_cast<double>(n_); }

  double point(std::size_t j) const { return -0.5 * length_ + static_cast<double>(j) * dx(); }
  double wavenumber(std::size_t m) const;
  std::size_t nyquist_index() const { return n_ / 2; }
  double max_wavenumber() const;
  // index of the point at -x_j
  std::size_t mirror(std::size_t j) const { return (n_ - j) % n_; }

  std::vector<double> points() const;
  std::vector<double> wavenumbers() const;

  bool operator==(const Grid&) const = default;

 private:
  std::size_t n_;
  double length_;
};

// Throws std::invalid_argument unless n is a power of two >= 4 and length > 0.
Grid make_grid(std::size_t n, double length);

}  // namespace hwlab
