#pragma once

// Slow references for the engines: exhaustive coset scans and grid scans of
// N_* along a line.

#include "emin/cm.hpp"
#include "emin/number_field.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace emin {

struct OracleConfig {
  int radius = 20;           // coefficient box for brute_force_m
  double window = 2.0;       // grid half-width for grid_min_nstar
  double resolution = 1e-3;  // grid step
  int samples = 1000;

  void validate() const {
    if (radius < 1) throw std::invalid_argument("oracle radius must be >= 1");
    if (!(resolution > 0)) throw std::invalid_argument("oracle resolution must be positive");
  }
};

/// min |N_K(x + sum c_j omega_j)| over |c_j| <= radius.
inline Rational brute_force_m(const FieldElement& x, int radius) {
  if (radius < 1) throw std::invalid_argument("radius must be >= 1");
  const std::size_t d = x.degree();
  std::vector<long> c(d, -radius);
  std::optional<Rational> best;
  while (true) {
    RationalVector y = x.coords();
    for (std::size_t j = 0; j < d; ++j) y[j] += c[j];
    Rational n = abs(norm_exact(x.field().element(std::move(y))));
    if (!best || n < *best) best = n;
    std::size_t j = 0;
    while (j < d) {
      if (++c[j] <= radius) break;
      c[j] = -radius;
      ++j;
    }
    if (j == d) break;
  }
  return *best;
}

struct GridMinimum {
  double value = 0;
  std::vector<double> argmin;  // per place of F
};

/// Grid scan of N_* on the line, theta_i on -window + k*resolution per place.
/// The factors of N_* depend on separate coordinates, so the grid minimum of
/// the product is the product of the per-coordinate grid minima.
inline GridMinimum grid_min_nstar(const SlopeLine& line, const CMData& cm, double window, double resolution) {
  if (!(resolution > 0) || !(window > 0)) throw std::invalid_argument("grid_min_nstar: bad window or resolution");
  std::vector<double> beta, phi;
  for (const auto& v : embed_real(line.beta)) beta.push_back(v.mid());
  if (line.phi)
    for (const auto& v : embed_real(*line.phi)) phi.push_back(v.mid());
  GridMinimum out;
  out.value = 1;
  const long steps = static_cast<long>(std::floor(2 * window / resolution + 0.5));
  for (std::size_t i = 0; i < cm.s(); ++i) {
    double re = cm.re_eta[i].mid(), im = cm.im_eta[i].mid();
    double best = std::numeric_limits<double>::infinity(), arg = 0;
    for (long k = 0; k <= steps; ++k) {
      double th = -window + static_cast<double>(k) * resolution;
      double y1, y2;
      if (line.phi) {
        y1 = phi[i] * th + beta[i];
        y2 = th;
      } else {
        y1 = th;
        y2 = beta[i];
      }
      double a = y1 + re * y2, b = im * y2;
      double f = a * a + b * b;
      if (f < best) {
        best = f;
        arg = th;
      }
    }
    out.value *= best;
    out.argmin.push_back(arg);
  }
  return out;
}

}  // namespace emin
