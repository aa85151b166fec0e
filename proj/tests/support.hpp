#pragma once

#include "emin/emin.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

namespace emt {

using namespace emin;

inline std::string field_path(const std::string& name) { return std::string(EMIN_FIELDS_DIR) + "/" + name + ".json"; }

inline NumberField field(const std::string& name) { return load_field(field_path(name)); }

inline const UnitLattice& lattice(const std::string& name) {
  static std::map<std::string, UnitLattice> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, UnitLattice(field(name))).first;
  return it->second;
}

inline NumberField poly_field(std::vector<long> coeffs) {
  std::vector<Integer> c;
  for (long v : coeffs) c.push_back(Integer(v));
  return NumberField::create(c);
}

inline FieldElement elem(const NumberField& K, std::vector<Rational> c) { return K.element(std::move(c)); }

/// Discriminant of a monic polynomial from the Sylvester resultant with its
/// derivative.
inline Rational poly_discriminant(const RationalVector& f) {
  RationalVector g = poly::derivative(f);
  const int m = poly::degree(f), n = poly::degree(g);
  const int size = m + n;
  RationalMatrix S(size, RationalVector(size, Rational(0)));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) S[r][r + k] = f[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) S[n + r][r + k] = g[n - k];
  Rational res = linalg::determinant(S);
  if ((m * (m - 1) / 2) % 2) res = -res;
  return res;
}

/// Random element with coordinates a/q, |a| <= span.
inline FieldElement random_element(const NumberField& K, std::mt19937_64& rng, int q, int span) {
  std::uniform_int_distribution<int> dist(-span, span);
  RationalVector c;
  for (int j = 0; j < K.degree(); ++j) {
    Rational v(dist(rng), q);
    v.canonicalize();
    c.push_back(v);
  }
  return K.element(std::move(c));
}

}  // namespace emt
