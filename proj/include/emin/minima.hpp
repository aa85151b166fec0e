#pragma once

// Euclidean minima: exact m_K(x) at rational points, upper bounds for m at
// points of Kbar.

#include "emin/box.hpp"
#include "emin/unit_lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace emin {

/// 2^{-d} |D_K|, the global upper bound on M(K).
inline Rational bayer_bound(const NumberField& K) {
  Rational b(K.abs_discriminant());
  b /= pow(Rational(2), static_cast<unsigned long>(K.degree()));
  return b;
}

struct MinimumResult {
  Rational value;
  FieldElement witness;        // y in x + O_K with |N(y)| = value
  std::size_t scanned = 0;     // lattice candidates examined
  std::size_t orbit_size = 0;  // classes in the G-orbit of x mod O_K
  double box_radius = 0;       // final enumeration radius (upper endpoint)
};

/// x reduced to coordinates in [0, 1).
inline FieldElement reduce_mod_ok(const FieldElement& x) {
  RationalVector c = x.coords();
  for (auto& v : c) v = frac(v);
  return x.field().element(std::move(c));
}

struct OrbitEntry {
  FieldElement cls;            // reduced representative
  std::vector<long> exponents; // cls = g x mod O_K with g = prod u_j^{e_j}
};

/// The G-orbit of x in K/O_K by breadth-first search over u_j^{+-1}.
inline std::vector<OrbitEntry> unit_orbit(const FieldElement& x, const UnitLattice& L) {
  const int r = L.rank();
  std::vector<OrbitEntry> out;
  std::map<RationalVector, std::size_t> seen;
  std::deque<std::size_t> queue;
  FieldElement z = reduce_mod_ok(x);
  out.push_back({z, std::vector<long>(r, 0)});
  seen.emplace(z.coords(), 0);
  queue.push_back(0);
  while (!queue.empty()) {
    std::size_t idx = queue.front();
    queue.pop_front();
    for (int j = 0; j < r; ++j) {
      for (int sgn : {1, -1}) {
        const FieldElement& u = sgn > 0 ? L.units()[j] : L.inverse_units()[j];
        FieldElement w = reduce_mod_ok(u * out[idx].cls);
        if (seen.count(w.coords())) continue;
        std::vector<long> e = out[idx].exponents;
        e[j] += sgn;
        seen.emplace(w.coords(), out.size());
        out.push_back({w, e});
        queue.push_back(out.size() - 1);
      }
    }
  }
  return out;
}

namespace detail {

/// Shift size used to break ties between witnesses: max |k_j|, then lex.
inline bool better_witness(const FieldElement& x, const FieldElement& a, const FieldElement& b) {
  auto key = [&](const FieldElement& y) {
    RationalVector k(y.degree());
    Rational m = 0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      k[j] = y[j] - x[j];
      m = std::max(m, Rational(abs(k[j])));
    }
    return std::make_pair(m, k);
  };
  return key(a) < key(b);
}

inline FieldElement centered(const FieldElement& z) {
  RationalVector c = z.coords();
  for (auto& v : c)
    if (v > Rational(1, 2)) v -= 1;
  return z.field().element(std::move(c));
}

}  // namespace detail

/// Exact m_K(x) = min over y in x + O_K of |N_K(y)|, with a witness.
inline MinimumResult m_rational(const FieldElement& x, const UnitLattice& L) {
  const NumberField& K = L.field();
  MinimumResult res;
  if (x.is_integral()) {
    res.value = 0;
    res.witness = K.zero();
    res.orbit_size = 1;
    return res;
  }
  auto orbit = unit_orbit(x, L);
  res.orbit_size = orbit.size();

  // initial upper bound from the centred representatives
  FieldElement first = detail::centered(orbit[0].cls);
  Rational best = abs(norm_exact(first));
  std::optional<FieldElement> best_y = first;
  auto map_back = [&](const OrbitEntry& o, const FieldElement& y) {
    std::vector<long> neg(o.exponents.size());
    for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -o.exponents[j];
    FieldElement v = L.unit_from_exponents(neg) * y;
    // v lies in x + O_K; keep it next to x
    return v;
  };
  auto consider = [&](const OrbitEntry& o, const FieldElement& y) {
    Rational n = abs(norm_exact(y));
    if (n > best) return;
    FieldElement v = map_back(o, y);
    if (n < best || !best_y || detail::better_witness(x, v, *best_y)) {
      best = n;
      best_y = v;
    }
  };
  for (const auto& o : orbit) consider(o, detail::centered(o.cls));

  const Interval C = L.compactness_constant();
  const unsigned long d = static_cast<unsigned long>(K.degree());
  for (const auto& o : orbit) {
    Interval R = C * root(Interval::from_q(std::min(best, bayer_bound(K))), d);
    R = Interval(R.hi(), R.hi());
    res.box_radius = std::max(res.box_radius, R.hi_d());
    EnumerationStats st;
    auto pts = enumerate_coset_in_box(o.cls, BoxRegion::ball(K, R), &st);
    res.scanned += st.scanned;
    for (const auto& y : pts) consider(o, y);
  }
  res.value = best;
  res.witness = *best_y;
  return res;
}

/// [0, u] with u a certified upper bound for m at the point p of Kbar.
inline Interval m_point_bounds(const EmbeddingPoint& p, const UnitLattice& L, int effort) {
  if (effort < 1) throw std::invalid_argument("effort must be >= 1");
  const NumberField& K = L.field();
  PrecisionGuard guard(std::max(p.precision, K.data()->base_precision));
  const unsigned long d = static_cast<unsigned long>(K.degree());
  Interval cap = Interval::from_q(bayer_bound(K));
  Interval radius = L.compactness_constant() * root(cap, d) * Interval::point(1.0 + 0.25 * (effort - 1));
  Real u = cap.hi();

  const int r = L.rank();
  std::vector<long> lo(r, -effort), hi(r, effort);
  auto visit = [&](const std::vector<long>& e) {
    EmbeddingPoint gp = r == 0 ? p : multiply(embed(L.unit_from_exponents(e)), p);
    BoxRegion box;
    box.r1 = K.r1();
    for (std::size_t i = 0; i < gp.places(); ++i) {
      box.center.push_back(gp.coords[i]);
      box.radius.push_back(radius);
    }
    for (const auto& y : enumerate_coset_in_box(K.zero(), box)) {
      EmbeddingPoint diff = add(gp, scale(embed(y), Interval::point(-1.0)));
      Interval n = abs(norm_kbar(diff));
      if (mpfr_less_p(n.hi().get(), u.get())) u = n.hi();
    }
  };
  if (r == 0)
    visit({});
  else
    detail::for_each_in_box(lo, hi, visit);
  return Interval(Real::from_double(0.0), u);
}

}  // namespace emin
