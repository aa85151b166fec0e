#pragma once

// Certified isolation of the complex roots of a squarefree monic polynomial
// with rational coefficients.
//
// Approximations come from Aberth iteration (double, then MPFR); each
// approximation z_i is certified by the inclusion disk of radius
// d * |p(z_i) / prod_{j != i} (z_i - z_j)| evaluated in interval arithmetic.
// Pairwise disjoint disks contain exactly one root each. A disk centred on
// the real axis then holds a real root, a disk missing the axis a non-real one.

#include "emin/interval.hpp"
#include "emin/rational.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace emin {

/// Certified enclosure of a single root: the disk |z - center| <= radius.
struct RootEnclosure {
  bool real = false;
  Real center_re;
  Real center_im;  // zero for real roots
  Real radius;     // rounded up

  /// Axis-aligned box containing the disk.
  ComplexInterval box() const {
    Interval re, im;
    Real lo, hi;
    mpfr_sub(lo.get(), center_re.get(), radius.get(), MPFR_RNDD);
    mpfr_add(hi.get(), center_re.get(), radius.get(), MPFR_RNDU);
    re = Interval(lo, hi);
    if (real) {
      im = Interval::point(0.0);
    } else {
      mpfr_sub(lo.get(), center_im.get(), radius.get(), MPFR_RNDD);
      mpfr_add(hi.get(), center_im.get(), radius.get(), MPFR_RNDU);
      im = Interval(lo, hi);
    }
    return {re, im};
  }
};

/// All d roots: the r1 real ones (descending) followed by one representative
/// (positive imaginary part) of each of the r2 conjugate pairs.
struct RootSet {
  mpfr_prec_t precision = 0;
  int r1 = 0;
  int r2 = 0;
  std::vector<RootEnclosure> roots;  // size r1 + r2
};

namespace detail {

struct CApprox {
  Real re, im;
};

inline CApprox c_make(double r, double i) { return {Real::from_double(r), Real::from_double(i)}; }

inline CApprox c_sub(const CApprox& a, const CApprox& b) {
  CApprox r;
  mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}
inline CApprox c_add(const CApprox& a, const CApprox& b) {
  CApprox r;
  mpfr_add(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  return r;
}
inline CApprox c_mul(const CApprox& a, const CApprox& b) {
  CApprox r;
  Real t;
  mpfr_mul(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(r.re.get(), r.re.get(), t.get(), MPFR_RNDN);
  mpfr_mul(r.im.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(t.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), r.im.get(), t.get(), MPFR_RNDN);
  return r;
}
inline CApprox c_div(const CApprox& a, const CApprox& b) {
  Real den, t;
  mpfr_sqr(den.get(), b.re.get(), MPFR_RNDN);
  mpfr_sqr(t.get(), b.im.get(), MPFR_RNDN);
  mpfr_add(den.get(), den.get(), t.get(), MPFR_RNDN);
  CApprox conj{b.re, Real()};
  mpfr_neg(conj.im.get(), b.im.get(), MPFR_RNDN);
  CApprox r = c_mul(a, conj);
  mpfr_div(r.re.get(), r.re.get(), den.get(), MPFR_RNDN);
  mpfr_div(r.im.get(), r.im.get(), den.get(), MPFR_RNDN);
  return r;
}
inline double c_abs(const CApprox& a) { return std::hypot(a.re.to_double(), a.im.to_double()); }

/// p(z) and p'(z) by Horner.
inline void c_eval(const std::vector<Real>& coeffs, const CApprox& z, CApprox& p, CApprox& dp) {
  p = CApprox{Real(), Real()};
  dp = CApprox{Real(), Real()};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    dp = c_add(c_mul(dp, z), p);
    p = c_mul(p, z);
    mpfr_add(p.re.get(), p.re.get(), it->get(), MPFR_RNDN);
  }
}

inline std::vector<std::complex<double>> aberth_double(const RationalVector& f) {
  const int d = static_cast<int>(f.size()) - 1;
  std::vector<double> c(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) c[i] = f[i].get_d();
  double bound = 0;
  for (int i = 0; i < d; ++i) bound = std::max(bound, std::abs(c[i]));
  bound = 1 + bound;  // Cauchy bound
  std::vector<std::complex<double>> z(d);
  for (int k = 0; k < d; ++k) {
    double ang = 2 * M_PI * k / d + 0.4;
    z[k] = std::polar(0.5 * bound, ang);
  }
  auto eval = [&](std::complex<double> x, std::complex<double>& p, std::complex<double>& dp) {
    p = 0;
    dp = 0;
    for (int i = d; i >= 0; --i) {
      dp = dp * x + p;
      p = p * x + c[i];
    }
  };
  for (int iter = 0; iter < 500; ++iter) {
    double maxstep = 0;
    for (int k = 0; k < d; ++k) {
      std::complex<double> p, dp;
      eval(z[k], p, dp);
      if (p == 0.0) continue;
      std::complex<double> ratio = p / dp;
      std::complex<double> s = 0;
      for (int j = 0; j < d; ++j)
        if (j != k) s += 1.0 / (z[k] - z[j]);
      std::complex<double> step = ratio / (1.0 - ratio * s);
      z[k] -= step;
      maxstep = std::max(maxstep, std::abs(step) / (1 + std::abs(z[k])));
    }
    if (maxstep < 1e-15) break;
  }
  return z;
}

}  // namespace detail

/// Certified roots of the monic squarefree polynomial f (constant term first)
/// at the current working precision; throws PrecisionError when the
/// inclusion disks cannot be separated at this precision.
inline RootSet isolate_roots_at(const RationalVector& f) {
  using detail::CApprox;
  const int d = static_cast<int>(f.size()) - 1;
  const mpfr_prec_t prec = working_precision();
  RootSet out;
  out.precision = prec;
  if (d == 1) {
    RootEnclosure e;
    e.real = true;
    Rational root = -f[0];
    e.center_re = Real::from_q(root, MPFR_RNDN);
    Interval exact = Interval::from_q(root);
    // radius covers the rounding of the centre
    Real a, b;
    mpfr_sub(a.get(), e.center_re.get(), exact.lo().get(), MPFR_RNDU);
    mpfr_sub(b.get(), exact.hi().get(), e.center_re.get(), MPFR_RNDU);
    mpfr_max(e.radius.get(), a.get(), b.get(), MPFR_RNDU);
    out.r1 = 1;
    out.roots.push_back(std::move(e));
    return out;
  }

  std::vector<Real> coeffs;
  for (const auto& c : f) coeffs.push_back(Real::from_q(c, MPFR_RNDN));

  auto approx = detail::aberth_double(f);
  std::vector<CApprox> z;
  for (auto& a : approx) z.push_back(detail::c_make(a.real(), a.imag()));

  // Aberth in MPFR until the corrections fall below the working precision.
  const double target = std::ldexp(1.0, -static_cast<int>(prec) + 12);
  for (int iter = 0; iter < 200; ++iter) {
    double maxstep = 0;
    for (int k = 0; k < d; ++k) {
      CApprox p, dp;
      detail::c_eval(coeffs, z[k], p, dp);
      if (p.re.is_zero() && p.im.is_zero()) continue;
      CApprox ratio = detail::c_div(p, dp);
      CApprox s{Real(), Real()};
      for (int j = 0; j < d; ++j) {
        if (j == k) continue;
        CApprox one{Real::from_double(1.0), Real()};
        s = c_add(s, detail::c_div(one, detail::c_sub(z[k], z[j])));
      }
      CApprox one{Real::from_double(1.0), Real()};
      CApprox step = detail::c_div(ratio, detail::c_sub(one, detail::c_mul(ratio, s)));
      z[k] = detail::c_sub(z[k], step);
      maxstep = std::max(maxstep, detail::c_abs(step) / (1 + detail::c_abs(z[k])));
    }
    if (maxstep < target) break;
  }

  // Snap near-real approximations onto the axis and force exact conjugate pairs.
  const double real_tol = std::ldexp(1.0, -static_cast<int>(prec) / 2);
  std::vector<CApprox> reals, uppers;
  for (auto& x : z) {
    double im = x.im.to_double();
    double scale = 1 + detail::c_abs(x);
    if (std::abs(im) <= real_tol * scale) {
      mpfr_set_zero(x.im.get(), 1);
      reals.push_back(x);
    } else if (im > 0) {
      uppers.push_back(x);
    }
  }
  if (reals.size() + 2 * uppers.size() != static_cast<std::size_t>(d))
    throw PrecisionError("root approximations do not pair into conjugates");

  std::sort(reals.begin(), reals.end(),
            [](const CApprox& a, const CApprox& b) { return mpfr_greater_p(a.re.get(), b.re.get()); });
  std::sort(uppers.begin(), uppers.end(), [](const CApprox& a, const CApprox& b) {
    int c = mpfr_cmp(a.re.get(), b.re.get());
    if (c != 0) return c < 0;
    return mpfr_less_p(a.im.get(), b.im.get()) != 0;
  });

  std::vector<CApprox> all = reals;
  for (auto& u : uppers) all.push_back(u);
  for (auto& u : uppers) {
    CApprox c = u;
    mpfr_neg(c.im.get(), c.im.get(), MPFR_RNDN);
    all.push_back(c);
  }

  auto point = [](const CApprox& x) {
    return ComplexInterval(Interval(x.re, x.re), Interval(x.im, x.im));
  };
  std::vector<ComplexInterval> pts;
  for (auto& x : all) pts.push_back(point(x));
  std::vector<Interval> fq;
  for (const auto& c : f) fq.push_back(Interval::from_q(c));

  std::vector<Real> radius(d);
  for (int i = 0; i < d; ++i) {
    ComplexInterval val(fq[d]);
    for (int k = d - 1; k >= 0; --k) val = val * pts[i] + ComplexInterval(fq[k]);
    ComplexInterval prod(Interval::point(1.0));
    for (int j = 0; j < d; ++j)
      if (j != i) prod = prod * (pts[i] - pts[j]);
    Interval den = prod.abs2();
    if (!den.positive()) throw PrecisionError("coincident root approximations");
    Interval r = Interval::point(static_cast<double>(d)) * sqrt(val.abs2() / den);
    radius[i] = r.hi();
  }

  // Pairwise disjointness and real/non-real classification.
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Interval dist = (pts[i] - pts[j]).abs();
      Real sum;
      mpfr_add(sum.get(), radius[i].get(), radius[j].get(), MPFR_RNDU);
      if (!mpfr_greater_p(dist.lo().get(), sum.get())) throw PrecisionError("root inclusion disks overlap");
    }
  }
  const std::size_t nr = reals.size();
  for (std::size_t i = nr; i < nr + uppers.size(); ++i) {
    Real a;
    mpfr_abs(a.get(), all[i].im.get(), MPFR_RNDD);
    if (!mpfr_greater_p(a.get(), radius[i].get())) throw PrecisionError("complex root disk meets the real axis");
  }

  out.r1 = static_cast<int>(nr);
  out.r2 = static_cast<int>(uppers.size());
  for (std::size_t i = 0; i < nr + uppers.size(); ++i) {
    RootEnclosure e;
    e.real = i < nr;
    e.center_re = all[i].re;
    e.center_im = all[i].im;
    e.radius = radius[i];
    out.roots.push_back(std::move(e));
  }
  return out;
}

/// Certified roots, doubling precision from `start_bits` until the disks separate.
inline RootSet isolate_roots(const RationalVector& f, mpfr_prec_t start_bits) {
  for (mpfr_prec_t bits = start_bits; bits <= kMaxPrecisionBits; bits *= 2) {
    PrecisionGuard guard(bits);
    try {
      return isolate_roots_at(f);
    } catch (const PrecisionError&) {
    }
  }
  throw PrecisionError("root isolation did not certify within the precision budget");
}

/// Enclosures of all d roots with conjugates expanded (real ones first).
inline std::vector<ComplexInterval> all_root_boxes(const RootSet& rs) {
  std::vector<ComplexInterval> out;
  for (const auto& r : rs.roots) out.push_back(r.box());
  for (const auto& r : rs.roots)
    if (!r.real) out.push_back(r.box().conj());
  return out;
}

}  // namespace emin
