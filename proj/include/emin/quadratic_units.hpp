#pragma once

// Fundamental unit of a real quadratic field from the continued fraction of
// the larger conjugate of a generator omega with O_K = Z + Z*omega.

#include "emin/number_field.hpp"

#include <stdexcept>

namespace emin {

namespace detail {

/// Integer floor((P + sqrt(D)) / Q) for non-square D > 0 and Q != 0.
inline Integer cf_floor(const Integer& P, const Integer& Q, const Integer& s) {
  Integer num = P + s;
  Integer r;
  if (Q > 0) {
    mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
    return r;
  }
  Integer aq = -Q;
  mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), aq.get_mpz_t());
  return -r - 1;
}

/// omega with {1, omega} a Z-basis of O_K, in integral-basis coordinates.
inline FieldElement complementary_generator(const NumberField& K) {
  const RationalVector one = K.one().coords();
  Integer a = one[0].get_num(), b = one[1].get_num();
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (g != 1 && g != -1) throw InputError("1 is not primitive in the integral basis");
  // a*s + b*t = g, so omega = (-t, s)/g completes the unimodular matrix
  return K.element({Rational(-t * g), Rational(s * g)});
}

}  // namespace detail

/// The fundamental unit eps > 1 (in the first real embedding) of a real
/// quadratic field, in integral-basis coordinates.
inline FieldElement real_quadratic_fundamental_unit(const NumberField& K) {
  if (K.degree() != 2 || K.r1() != 2) throw InputError("fundamental units are only computed for real quadratic fields");
  FieldElement omega = detail::complementary_generator(K);
  // omega^2 - T omega + N0 = 0
  const Integer T = trace_exact(omega).get_num();
  const Integer N0 = norm_exact(omega).get_num();
  const Integer D = T * T - 4 * N0;
  Integer s;
  mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());
  if (s * s == D) throw InputError("field is not a real quadratic field");

  // the larger conjugate of omega is (T + sqrt D)/2
  Integer P = T, Q = 2;
  Integer p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  for (int step = 0; step < 100000; ++step) {
    Integer a = detail::cf_floor(P, Q, s);
    Integer p = a * p_prev + p_prev2;
    Integer q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    Integer n = p * p - T * p * q + N0 * q * q;
    if (n == 1 || n == -1) {
      FieldElement u = Rational(p) * K.one() - Rational(q) * omega;
      FieldElement eps = inverse(u);
      if (embed(eps).coords[0].re.negative()) eps = -eps;
      if (!embed(eps).coords[0].re.certainly_greater(Rational(1))) eps = inverse(eps);
      return eps;
    }
    P = a * Q - P;
    Integer num = D - P * P;
    if (num % Q != 0) throw std::logic_error("continued fraction recurrence lost divisibility");
    Q = num / Q;
  }
  throw std::runtime_error("fundamental unit search did not terminate");
}

/// K with its fundamental unit filled in when none was supplied.
inline NumberField with_quadratic_unit(const NumberField& K) {
  if (K.degree() != 2 || K.r1() != 2 || !K.unit_coords().empty()) return K;
  NumberField::Options o;
  o.integral_basis = K.integral_basis();
  o.units = {real_quadratic_fundamental_unit(K).coords()};
  o.label = K.label();
  o.torsion = K.torsion();
  std::vector<Integer> mp;
  for (const auto& c : K.min_poly()) mp.push_back(c.get_num());
  return NumberField::create(mp, o);
}

}  // namespace emin
