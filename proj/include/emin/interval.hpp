#pragma once

// Outward-rounded interval arithmetic on MPFR endpoints.
//
// Every operation rounds the lower endpoint toward -inf and the upper endpoint
// toward +inf, so an Interval always encloses the exact real result of the
// same computation on any points of the operands.

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

namespace emin {

/// Raised when a certified computation cannot reach the requested accuracy
/// within the precision budget.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr mpfr_prec_t kMaxPrecisionBits = 8192;

inline mpfr_prec_t default_precision_bits() {
  static const mpfr_prec_t bits = [] {
    if (const char* env = std::getenv("EM_PRECISION_BITS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && v >= 64 && v <= kMaxPrecisionBits) return static_cast<mpfr_prec_t>(v);
    }
    return static_cast<mpfr_prec_t>(128);
  }();
  return bits;
}

namespace detail {
inline mpfr_prec_t& precision_slot() {
  thread_local mpfr_prec_t p = default_precision_bits();
  return p;
}
}  // namespace detail

inline mpfr_prec_t working_precision() { return detail::precision_slot(); }

/// Scoped override of the thread's working precision.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(mpfr_prec_t bits) : saved_(detail::precision_slot()) {
    detail::precision_slot() = bits;
  }
  ~PrecisionGuard() { detail::precision_slot() = saved_; }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  mpfr_prec_t saved_;
};

/// Owning wrapper around mpfr_t.
class Real {
 public:
  Real() : Real(working_precision()) {}
  explicit Real(mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real from_double(double x) {
    Real r(std::max<mpfr_prec_t>(working_precision(), 53));
    mpfr_set_d(r.v_, x, MPFR_RNDN);  // exact at >= 53 bits
    return r;
  }
  static Real from_q(const mpq_class& q, mpfr_rnd_t rnd) {
    Real r;
    mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
    return r;
  }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }
  /// Exact rational value of the (finite) endpoint.
  mpq_class to_q() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

 private:
  mpfr_t v_;
};

/// Closed real interval [lo, hi].
class Interval {
 public:
  Interval() : lo_(), hi_() {}
  Interval(Real lo, Real hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

  static Interval point(double x) {
    Real r = Real::from_double(x);
    return {r, r};
  }
  static Interval point(long x) { return point(static_cast<double>(x)); }
  static Interval from_q(const mpq_class& q) {
    return {Real::from_q(q, MPFR_RNDD), Real::from_q(q, MPFR_RNDU)};
  }
  static Interval hull(double a, double b) {
    return {Real::from_double(std::min(a, b)), Real::from_double(std::max(a, b))};
  }

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  double lo_d() const { return lo_.to_double(MPFR_RNDD); }
  double hi_d() const { return hi_.to_double(MPFR_RNDU); }
  double mid() const {
    Real m;
    mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m.to_double();
  }
  double width() const {
    Real w;
    mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return w.to_double(MPFR_RNDU);
  }
  bool contains(const mpq_class& q) const {
    return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
  }
  bool contains(const Interval& o) const {
    return mpfr_lessequal_p(lo_.get(), o.lo_.get()) && mpfr_greaterequal_p(hi_.get(), o.hi_.get());
  }
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool positive() const { return lo_.sign() > 0; }
  bool negative() const { return hi_.sign() < 0; }
  bool overlaps(const Interval& o) const {
    return mpfr_lessequal_p(lo_.get(), o.hi_.get()) && mpfr_lessequal_p(o.lo_.get(), hi_.get());
  }
  /// Certainly below: every point of *this is < every point of o.
  bool certainly_less(const Interval& o) const { return mpfr_less_p(hi_.get(), o.lo_.get()); }
  bool certainly_le(const Interval& o) const { return mpfr_lessequal_p(hi_.get(), o.lo_.get()); }
  bool certainly_less(const mpq_class& q) const { return mpfr_cmp_q(hi_.get(), q.get_mpq_t()) < 0; }
  bool certainly_greater(const mpq_class& q) const { return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) > 0; }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
    mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
    return r;
  }
  friend Interval operator-(const Interval& a) {
    Interval r;
    mpfr_neg(r.lo_.get(), a.hi_.get(), MPFR_RNDD);
    mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
    return r;
  }
  friend Interval operator*(const Interval& a, const Interval& b) {
    Interval r;
    Real t;
    mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
    mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
    bool first = true;
    for (auto x : as) {
      for (auto y : bs) {
        mpfr_mul(t.get(), x, y, MPFR_RNDD);
        if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
        mpfr_mul(t.get(), x, y, MPFR_RNDU);
        if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
        first = false;
      }
    }
    return r;
  }
  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw PrecisionError("interval division by an interval containing zero");
    Interval r;
    Real t;
    mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
    mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
    bool first = true;
    for (auto x : as) {
      for (auto y : bs) {
        mpfr_div(t.get(), x, y, MPFR_RNDD);
        if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
        mpfr_div(t.get(), x, y, MPFR_RNDU);
        if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
        first = false;
      }
    }
    return r;
  }
  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }
  Interval& operator*=(const Interval& o) { return *this = *this * o; }

  friend Interval abs(const Interval& a) {
    if (a.lo_.sign() >= 0) return a;
    if (a.hi_.sign() <= 0) return -a;
    Interval r;
    mpfr_set_zero(r.lo_.get(), 1);
    Real n;
    mpfr_neg(n.get(), a.lo_.get(), MPFR_RNDU);
    mpfr_max(r.hi_.get(), n.get(), a.hi_.get(), MPFR_RNDU);
    return r;
  }
  friend Interval sqr(const Interval& a) {
    Interval m = abs(a);
    Interval r;
    mpfr_sqr(r.lo_.get(), m.lo_.get(), MPFR_RNDD);
    mpfr_sqr(r.hi_.get(), m.hi_.get(), MPFR_RNDU);
    return r;
  }
  friend Interval sqrt(const Interval& a) {
    if (a.hi_.sign() < 0) throw std::domain_error("sqrt of a negative interval");
    Interval r;
    if (a.lo_.sign() <= 0) {
      mpfr_set_zero(r.lo_.get(), 1);
    } else {
      mpfr_sqrt(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    }
    mpfr_sqrt(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
  }
  friend Interval log(const Interval& a) {
    if (!a.positive()) throw PrecisionError("log of an interval not bounded away from zero");
    Interval r;
    mpfr_log(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_log(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
  }
  friend Interval exp(const Interval& a) {
    Interval r;
    mpfr_exp(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_exp(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
  }
  /// n-th root of a nonnegative interval.
  friend Interval root(const Interval& a, unsigned long n) {
    if (a.hi_.sign() < 0) throw std::domain_error("root of a negative interval");
    Interval r;
    if (a.lo_.sign() <= 0) {
      mpfr_set_zero(r.lo_.get(), 1);
    } else {
      mpfr_rootn_ui(r.lo_.get(), a.lo_.get(), n, MPFR_RNDD);
    }
    mpfr_rootn_ui(r.hi_.get(), a.hi_.get(), n, MPFR_RNDU);
    return r;
  }
  /// Monotone increasing power x^y for x > 0, y >= 0 (used for D^{C F^2}).
  friend Interval pow(const Interval& x, const Interval& y) {
    if (!x.positive() || y.lo_.sign() < 0) throw std::domain_error("pow needs x > 0 and y >= 0");
    return exp(y * log(x));
  }
  friend Interval hull(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_min(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_max(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
  }
  friend Interval max(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_max(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_max(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
  }
  friend Interval min(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_min(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
    mpfr_min(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
    return r;
  }
  /// Widen by an absolute amount (both sides).
  Interval inflated(double eps) const {
    Interval r = *this;
    Real e = Real::from_double(eps);
    mpfr_sub(r.lo_.get(), r.lo_.get(), e.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), r.hi_.get(), e.get(), MPFR_RNDU);
    return r;
  }

 private:
  Real lo_;
  Real hi_;
};

/// Rectangular complex interval re + i*im.
struct ComplexInterval {
  Interval re;
  Interval im;

  ComplexInterval() : re(Interval::point(0.0)), im(Interval::point(0.0)) {}
  ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
  explicit ComplexInterval(Interval r) : re(std::move(r)), im(Interval::point(0.0)) {}

  friend ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexInterval operator*(const Interval& s, const ComplexInterval& b) {
    return {s * b.re, s * b.im};
  }
  ComplexInterval conj() const { return {re, -im}; }
  /// |z|^2
  Interval abs2() const { return sqr(re) + sqr(im); }
  Interval abs() const { return sqrt(abs2()); }
  double width() const { return std::max(re.width(), im.width()); }
};

}  // namespace emin
