#pragma once

// Boxes in Kbar and enumeration of coset points x + O_K inside them.

#include "emin/number_field.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace emin {

/// {x in Kbar : |x_i - c_i| <= rho_i for all places i}. Complex places use the
/// modulus, so the region is a product of intervals and disks.
struct BoxRegion {
  std::vector<ComplexInterval> center;
  std::vector<Interval> radius;
  int r1 = 0;

  /// The canonical B_R: centre 0, every radius R.
  static BoxRegion ball(const NumberField& K, const Interval& R) {
    BoxRegion b;
    b.r1 = K.r1();
    for (std::size_t i = 0; i < K.places(); ++i) {
      b.center.emplace_back(Interval::point(0.0));
      b.radius.push_back(R);
    }
    return b;
  }
  static BoxRegion ball(const NumberField& K, double R) { return ball(K, Interval::point(R)); }

  std::size_t places() const { return center.size(); }
  int local_degree(std::size_t i) const { return static_cast<int>(i) < r1 ? 1 : 2; }

  Interval center_modulus(std::size_t i) const {
    return static_cast<int>(i) < r1 ? abs(center[i].re) : center[i].abs();
  }

  /// Upper bound for sup |N_Kbar| over the box: prod (|c_i| + rho_i)^{d_i}.
  Interval sup_norm() const {
    Interval n = Interval::point(1.0);
    for (std::size_t i = 0; i < places(); ++i) {
      Interval t = center_modulus(i) + radius[i];
      n = n * (local_degree(i) == 1 ? t : sqr(t));
    }
    return n;
  }
  /// Lower bound for inf |N_Kbar|: prod max(0, |c_i| - rho_i)^{d_i}.
  Interval inf_norm() const {
    Interval n = Interval::point(1.0);
    for (std::size_t i = 0; i < places(); ++i) {
      Interval t = max(center_modulus(i) - radius[i], Interval::point(0.0));
      n = n * (local_degree(i) == 1 ? t : sqr(t));
    }
    return n;
  }

  /// False only when the enclosure p is certainly disjoint from the box.
  bool may_contain(const EmbeddingPoint& p) const {
    for (std::size_t i = 0; i < places(); ++i) {
      Interval dist = static_cast<int>(i) < r1 ? abs(p.coords[i].re - center[i].re) : (p.coords[i] - center[i]).abs();
      if (mpfr_greater_p(dist.lo().get(), radius[i].hi().get())) return false;
    }
    return true;
  }
};

struct EnumerationStats {
  std::size_t scanned = 0;   // integer candidates examined
  std::size_t certified = 0; // candidates needing an interval check
};

namespace detail {

/// Real coordinates of Kbar: real places, then (Re, Im) per complex place.
struct RealCoordinateMap {
  std::size_t d = 0;
  std::vector<std::vector<double>> V;     // [coordinate][basis index]
  std::vector<std::vector<double>> Vinv;  // [basis index][coordinate]
};

inline std::vector<std::vector<double>> invert_double(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    double piv = a[c][c];
    if (piv == 0) throw std::domain_error("singular embedding matrix");
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= piv;
      inv[c][k] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      double f = a[r][c];
      if (f == 0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

inline RealCoordinateMap real_coordinate_map(const NumberField& K) {
  RealCoordinateMap m;
  m.d = static_cast<std::size_t>(K.degree());
  const auto& be = K.basis_embeddings_double();
  for (std::size_t i = 0; i < K.places(); ++i) {
    std::vector<double> re, im;
    for (std::size_t j = 0; j < m.d; ++j) {
      re.push_back(be[i][j].real());
      im.push_back(be[i][j].imag());
    }
    m.V.push_back(re);
    if (static_cast<int>(i) >= K.r1()) m.V.push_back(im);
  }
  m.Vinv = invert_double(m.V);
  return m;
}

}  // namespace detail

/// Points of x + O_K whose embeddings may lie in `box`, sorted by coordinates.
/// A point is left out only when its certified enclosure misses the box.
inline std::vector<FieldElement> enumerate_coset_in_box(const FieldElement& x, const BoxRegion& box,
                                                        EnumerationStats* stats = nullptr) {
  const NumberField K = x.field();
  const std::size_t d = static_cast<std::size_t>(K.degree());
  const auto map = detail::real_coordinate_map(K);

  RationalVector base(d);
  std::vector<double> basef(d);
  for (std::size_t j = 0; j < d; ++j) {
    base[j] = frac(x[j]);
    basef[j] = base[j].get_d();
  }

  // coordinate-wise target ranges in real coordinates
  std::vector<double> lo, hi, rad, cen;
  for (std::size_t i = 0; i < box.places(); ++i) {
    double r = box.radius[i].hi_d();
    if (static_cast<int>(i) < box.r1) {
      double c = box.center[i].re.mid();
      lo.push_back(c - r);
      hi.push_back(c + r);
    } else {
      double cr = box.center[i].re.mid(), ci = box.center[i].im.mid();
      lo.push_back(cr - r);
      hi.push_back(cr + r);
      lo.push_back(ci - r);
      hi.push_back(ci + r);
    }
  }
  std::vector<double> v0(d, 0.0);
  for (std::size_t m = 0; m < d; ++m)
    for (std::size_t j = 0; j < d; ++j) v0[m] += map.V[m][j] * basef[j];

  double scale = 1;
  for (std::size_t m = 0; m < d; ++m) scale = std::max({scale, std::abs(lo[m]), std::abs(hi[m]), std::abs(v0[m])});
  const double pad = 1e-7 * scale + 1e-9;

  std::vector<long> kmin(d), kmax(d);
  for (std::size_t j = 0; j < d; ++j) {
    double a = 0, b = 0;
    for (std::size_t m = 0; m < d; ++m) {
      double l = (lo[m] - v0[m]) * map.Vinv[j][m];
      double h = (hi[m] - v0[m]) * map.Vinv[j][m];
      a += std::min(l, h);
      b += std::max(l, h);
    }
    kmin[j] = static_cast<long>(std::floor(a - pad)) - 1;
    kmax[j] = static_cast<long>(std::ceil(b + pad)) + 1;
  }

  std::vector<FieldElement> out;
  std::size_t scanned = 0, certified = 0;
  std::vector<long> k(d);
  for (std::size_t j = 0; j + 1 < d; ++j) k[j] = kmin[j];

  auto evaluate_last = [&]() {
    // range for the last coordinate given the others
    std::vector<double> partial(d, 0.0);
    for (std::size_t m = 0; m < d; ++m) {
      partial[m] = v0[m];
      for (std::size_t j = 0; j + 1 < d; ++j) partial[m] += map.V[m][j] * static_cast<double>(k[j]);
    }
    double a = static_cast<double>(kmin[d - 1]), b = static_cast<double>(kmax[d - 1]);
    for (std::size_t m = 0; m < d; ++m) {
      double coef = map.V[m][d - 1];
      if (std::abs(coef) < 1e-300) {
        if (partial[m] < lo[m] - pad || partial[m] > hi[m] + pad) return;
        continue;
      }
      double t1 = (lo[m] - partial[m]) / coef, t2 = (hi[m] - partial[m]) / coef;
      a = std::max(a, std::min(t1, t2) - pad);
      b = std::min(b, std::max(t1, t2) + pad);
    }
    if (a > b) return;
    for (long kl = static_cast<long>(std::floor(a)); kl <= static_cast<long>(std::ceil(b)); ++kl) {
      ++scanned;
      // double pre-filter with a conservative margin, interval check on ambiguity
      std::vector<double> v(d);
      for (std::size_t m = 0; m < d; ++m) v[m] = partial[m] + map.V[m][d - 1] * static_cast<double>(kl);
      bool inside = true, outside = false;
      std::size_t m = 0;
      for (std::size_t i = 0; i < box.places(); ++i) {
        double r = box.radius[i].hi_d();
        double dist;
        double mag;
        if (static_cast<int>(i) < box.r1) {
          dist = std::abs(v[m] - box.center[i].re.mid());
          mag = std::abs(v[m]) + std::abs(box.center[i].re.mid());
          ++m;
        } else {
          dist = std::hypot(v[m] - box.center[i].re.mid(), v[m + 1] - box.center[i].im.mid());
          mag = std::abs(v[m]) + std::abs(v[m + 1]) + std::abs(box.center[i].re.mid()) + std::abs(box.center[i].im.mid());
          m += 2;
        }
        double err = 1e-9 * (1 + mag + r) + box.center[i].width() + box.radius[i].width();
        if (dist > r + err) {
          outside = true;
          break;
        }
        if (dist > r - err) inside = false;
      }
      if (outside) continue;
      RationalVector c = base;
      for (std::size_t j = 0; j + 1 < d; ++j) c[j] += k[j];
      c[d - 1] += kl;
      FieldElement y = K.element(std::move(c));
      if (!inside) {
        ++certified;
        if (!box.may_contain(embed(y))) continue;
      }
      out.push_back(std::move(y));
    }
  };

  if (d == 1) {
    evaluate_last();
  } else {
    while (true) {
      evaluate_last();
      std::size_t j = 0;
      while (j + 1 < d) {
        if (++k[j] <= kmax[j]) break;
        k[j] = kmin[j];
        ++j;
      }
      if (j + 1 >= d) break;
    }
  }
  std::sort(out.begin(), out.end());
  if (stats) {
    stats->scanned += scanned;
    stats->certified += certified;
  }
  return out;
}

}  // namespace emin
