#include "hwlab/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "hwlab/rng.hpp"
#include "hwlab/spectral.hpp"

namespace hwlab {

double normalization_constant(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("C(s) needs s in (0, 1)");
  using boost::math::quadrature::gauss_kronrod;
  using boost::math::quadrature::tanh_sinh;
  const double a = 1.0 + 2.0 * s;

  // [0, 1]: integrand ~ z^{1-2s}/2, integrable endpoint behaviour
  tanh_sinh<double> ts;
  const double inner = ts.integrate([a](double z) {
    if (z == 0.0) return 0.0;
    const double sinc = std::sin(0.5 * z) / (0.5 * z);
    return 0.5 * sinc * sinc * std::pow(z, 2.0 - a);
  }, 0.0, 1.0);

  // [1, inf): \int z^{-a} = 1/(2s), minus the oscillatory part taken period by period
  constexpr int periods = 400;
  const double two_pi = 2.0 * std::numbers::pi;
  auto osc = [a](double z) { return std::cos(z) * std::pow(z, -a); };
  double cos_part = gauss_kronrod<double, 61>::integrate(osc, 1.0, two_pi, 4, 1e-14);
  for (int k = 1; k < periods; ++k)
    cos_part += gauss_kronrod<double, 61>::integrate(osc, two_pi * k, two_pi * (k + 1), 4, 1e-14);
  // tail beyond A = 2*pi*periods by repeated integration by parts (sin A = 0, cos A = 1)
  const double A = two_pi * periods;
  cos_part += a * std::pow(A, -a - 1.0) - a * (a + 1.0) * (a + 2.0) * std::pow(A, -a - 3.0);

  const double half_line = inner + 1.0 / (2.0 * s) - cos_part;
  return 1.0 / (2.0 * half_line);
}

RealField fractional_derivative_integral(const RealField& f, double s, const IntegralOptions& opts) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("integral representation needs s in (0, 1)");
  const Grid& g = f.grid;
  const std::size_t n = g.size();
  // constants are annihilated by the second difference; decay is required of f - f(-L/2)
  const double level = f[0];
  RealField h = f;
  for (auto& v : h.values) v -= level;
  const double peak = max_abs(h);
  if (peak == 0.0) return RealField(g);
  if (std::max(std::abs(h[1]), std::abs(h[n - 1])) > opts.edge_threshold * peak)
    throw InsufficientDecay("field does not decay at the box edges");

  const double c = normalization_constant(s);
  const double dx = g.dx();
  const double e = 1.0 + 2.0 * s;
  const auto at = [&](long long j) -> double {
    return (j < 0 || j >= static_cast<long long>(n)) ? 0.0 : h[static_cast<std::size_t>(j)];
  };
  std::vector<double> weight(n + 1);
  for (std::size_t m = 1; m <= n; ++m) weight[m] = std::pow(m * dx, -e);

  RealField out(g);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<long long>(j);
    const double fx = h[j];
    const double f2 = (at(jj + 1) + at(jj - 1) - 2.0 * fx) / (dx * dx);
    double acc = f2 * std::pow(dx, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    double trap = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
      const auto mm = static_cast<long long>(m);
      const double val = (at(jj + mm) + at(jj - mm) - 2.0 * fx) * weight[m];
      trap += (m == 1 || m == n) ? 0.5 * val : val;
    }
    acc += trap * dx;
    acc += -2.0 * fx * std::pow(n * dx, -2.0 * s) / (2.0 * s);
    out[j] = -c * acc;
  }
  return out;
}

CommutatorDefect commutator_defect(const RealField& f, const Field& g) {
  CommutatorDefect d;
  const Field fc = to_complex(f);
  Field fg(g.grid), f_dg(g.grid);
  const Field dg = fractional_derivative(g, 1.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    fg[j] = fc[j] * g[j];
    f_dg[j] = fc[j] * dg[j];
  }
  d.numerator = l2_norm(fractional_derivative(fg, 1.0) - f_dg);
  d.derivative_sup = max_abs(derivative(f));
  d.g_norm = l2_norm(g);
  const double scale = std::max(max_abs(f), 1.0) * 1e-12;
  if (d.derivative_sup > scale && d.g_norm > 0.0) d.ratio = d.numerator / (d.derivative_sup * d.g_norm);
  return d;
}

CommutatorCorpus commutator_corpus(const Grid& g, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  CommutatorCorpus corpus;
  corpus.seed = seed;
  const double k = 2.0 * std::numbers::pi / g.length();
  const double width = g.length() / 8.0;
  auto envelope = [width](double x) { return std::exp(-0.5 * x * x / (width * width)); };
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> fa(17), fb(17);
    for (int m = 0; m <= 8; ++m) {
      fa[m] = rng.normal() / (1.0 + m);
      fb[m] = rng.normal() / (1.0 + m);
    }
    std::vector<cplx> gc(33);
    for (int m = -16; m <= 16; ++m) gc[m + 16] = cplx(rng.normal(), rng.normal()) / (1.0 + std::abs(m));
    RealField f = sample(g, [&](double x) {
      double v = 0.0;
      for (int m = 0; m <= 8; ++m) v += fa[m] * std::cos(m * k * x) + fb[m] * std::sin(m * k * x);
      return v * envelope(x);
    });
    Field gf = sample_complex(g, [&](double x) {
      cplx v = 0.0;
      for (int m = -16; m <= 16; ++m) v += gc[m + 16] * std::polar(1.0, m * k * x);
      return v * envelope(x);
    });
    const auto d = commutator_defect(f, gf);
    const double r = d.ratio.value_or(0.0);
    corpus.ratios.push_back(r);
    corpus.max_ratio = std::max(corpus.max_ratio, r);
  }
  return corpus;
}

}  // namespace hwlab
