#pragma once

// The logarithmic unit lattice L(G) in W, the norm h0, Mahler measures, the
// size F_UK of a unit system, and reduction of points into a bounded box.
//
// G is the torsion-free group generated by the supplied fundamental units.

#include "emin/box.hpp"
#include "emin/number_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace emin {

using LogVector = std::vector<Interval>;

/// (log|u_i|)_{i in I}; throws if u is not a unit.
inline LogVector log_embed(const FieldElement& u) {
  Rational n = norm_exact(u);
  if (n != 1 && n != -1) throw std::invalid_argument("log_embed: input is not a unit");
  if (!u.is_integral()) throw std::invalid_argument("log_embed: input is not integral");
  for (mpfr_prec_t bits = std::max(working_precision(), u.field_data()->base_precision); bits <= kMaxPrecisionBits;
       bits *= 2) {
    EmbeddingPoint p = embed_at_precision(u, bits);
    PrecisionGuard guard(bits);
    LogVector w;
    bool ok = true;
    for (std::size_t i = 0; i < p.places(); ++i) {
      Interval m = p.modulus(i);
      if (!m.positive()) {
        ok = false;
        break;
      }
      w.push_back(log(m));
    }
    if (ok) return w;
  }
  throw PrecisionError("log_embed: precision budget exhausted");
}

/// h0(w) = 1/2 sum d_i |w_i|.
inline Interval h0(const LogVector& w, int r1) {
  Interval s = Interval::point(0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    Interval a = abs(w[i]);
    s = s + (static_cast<int>(i) < r1 ? a : a + a);
  }
  return s * Interval::point(0.5);
}

inline double h0_double(const std::vector<double>& w, int r1) {
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += (static_cast<int>(i) < r1 ? 1.0 : 2.0) * std::abs(w[i]);
  return 0.5 * s;
}

/// Logarithmic Mahler measure h0(L(u)).
inline Interval mahler(const FieldElement& u) { return h0(log_embed(u), u.field().r1()); }

/// The unit data of a field: the supplied fundamental units and their geometry.
class UnitLattice {
 public:
  UnitLattice() = default;
  explicit UnitLattice(NumberField K);

  const NumberField& field() const { return field_; }
  int rank() const { return static_cast<int>(units_.size()); }
  const std::vector<FieldElement>& units() const { return units_; }
  const std::vector<FieldElement>& inverse_units() const { return inverses_; }
  const std::vector<LogVector>& log_vectors() const { return logs_; }
  const std::vector<std::vector<double>>& log_vectors_double() const { return logs_double_; }
  const Interval& regulator() const { return regulator_; }
  /// F_UK: the r-th successive minimum of L(G) under h0 (0 for rank 0).
  const Interval& f_uk() const { return f_uk_; }
  const std::vector<Interval>& successive_minima() const { return minima_; }
  /// Exponent vectors realising the successive minima.
  const std::vector<std::vector<long>>& minima_exponents() const { return minima_exponents_; }
  /// Set when the lattice has rank 0 and F_UK is 0 by convention.
  bool rank_zero() const { return units_.empty(); }
  std::optional<int> torsion() const { return torsion_; }

  /// prod u_j^{e_j}, exactly.
  FieldElement unit_from_exponents(const std::vector<long>& e) const {
    FieldElement g = field_.one();
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      g = g * power(e[j] > 0 ? units_[j] : inverses_[j], std::labs(e[j]));
    }
    return g;
  }

  /// Double-precision embeddings of prod u_j^{e_j}.
  std::vector<std::complex<double>> unit_embedding_double(const std::vector<long>& e) const {
    std::vector<std::complex<double>> g(field_.places(), {1.0, 0.0});
    for (std::size_t j = 0; j < e.size(); ++j)
      for (std::size_t i = 0; i < g.size(); ++i) g[i] *= std::pow(unit_emb_double_[j][i], static_cast<double>(e[j]));
    return g;
  }

  /// Upper endpoint of e^{r F_UK / 2}, the compactness constant.
  Interval compactness_constant() const {
    if (rank() == 0) return Interval::point(1.0);
    Interval f(f_uk_.hi(), f_uk_.hi());
    return exp(Interval::point(0.5 * rank()) * f);
  }

 private:
  void compute_successive_minima();

  NumberField field_;
  std::vector<FieldElement> units_;
  std::vector<FieldElement> inverses_;
  std::vector<LogVector> logs_;
  std::vector<std::vector<double>> logs_double_;
  std::vector<std::vector<std::complex<double>>> unit_emb_double_;
  Interval regulator_;
  Interval f_uk_;
  std::vector<Interval> minima_;
  std::vector<std::vector<long>> minima_exponents_;
  std::optional<int> torsion_;
};

namespace detail {

/// Determinant of a small interval matrix by cofactor expansion.
inline Interval interval_det(const std::vector<std::vector<Interval>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return Interval::point(1.0);
  if (n == 1) return m[0][0];
  Interval det = Interval::point(0.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Interval>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Interval> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    Interval term = m[0][c] * interval_det(minor);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

inline std::vector<std::vector<double>> gram_inverse(const std::vector<std::vector<double>>& basis) {
  const std::size_t r = basis.size();
  std::vector<std::vector<double>> g(r, std::vector<double>(r, 0.0));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t i = 0; i < basis[a].size(); ++i) g[a][b] += basis[a][i] * basis[b][i];
  return invert_double(g);
}

/// Calls f(e) for every integer vector with |e_j| <= bound_j.
template <typename F>
void for_each_in_box(const std::vector<long>& lo, const std::vector<long>& hi, F&& f) {
  const std::size_t r = lo.size();
  std::vector<long> e = lo;
  if (r == 0) return;
  while (true) {
    f(e);
    std::size_t j = 0;
    while (j < r) {
      if (++e[j] <= hi[j]) break;
      e[j] = lo[j];
      ++j;
    }
    if (j == r) break;
  }
}

}  // namespace detail

inline UnitLattice::UnitLattice(NumberField K) : field_(std::move(K)) {
  units_ = field_.units();
  torsion_ = field_.torsion();
  const int r = static_cast<int>(units_.size());
  if (r != field_.unit_rank())
    throw InputError("field file supplies " + std::to_string(r) + " units but the unit rank is " +
                     std::to_string(field_.unit_rank()));
  for (const auto& u : units_) {
    inverses_.push_back(inverse(u));
    logs_.push_back(log_embed(u));
    std::vector<double> ld;
    for (const auto& v : logs_.back()) ld.push_back(v.mid());
    logs_double_.push_back(std::move(ld));
    EmbeddingPoint p = embed(u);
    std::vector<std::complex<double>> ed;
    for (const auto& c : p.coords) ed.emplace_back(c.re.mid(), c.im.mid());
    unit_emb_double_.push_back(std::move(ed));
  }
  if (r == 0) {
    regulator_ = Interval::point(1.0);
    f_uk_ = Interval::point(0.0);
    return;
  }
  std::vector<std::vector<Interval>> m(r, std::vector<Interval>(r));
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) m[a][b] = logs_[b][a];
  regulator_ = abs(detail::interval_det(m));
  if (!regulator_.positive()) throw InputError("supplied units are not multiplicatively independent");
  compute_successive_minima();
}

inline void UnitLattice::compute_successive_minima() {
  const int r = rank();
  const int r1 = field_.r1();
  const auto& B = logs_double_;
  double M = 0;
  for (const auto& b : B) M = std::max(M, h0_double(b, r1));
  auto ginv = detail::gram_inverse(B);
  std::vector<long> lo(r), hi(r);
  for (int j = 0; j < r; ++j) {
    long e = static_cast<long>(std::floor(std::sqrt(std::max(ginv[j][j], 0.0)) * 2 * M * (1 + 1e-9))) + 1;
    lo[j] = -e;
    hi[j] = e;
  }
  struct Cand {
    double value;
    std::vector<long> e;
  };
  std::vector<Cand> cands;
  detail::for_each_in_box(lo, hi, [&](const std::vector<long>& e) {
    bool zero = std::all_of(e.begin(), e.end(), [](long v) { return v == 0; });
    if (zero) return;
    std::vector<double> v(field_.places(), 0.0);
    for (int j = 0; j < r; ++j)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += static_cast<double>(e[j]) * B[j][i];
    double h = h0_double(v, r1);
    if (h <= M * (1 + 1e-9) + 1e-12) cands.push_back({h, e});
  });
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.e < b.e;
  });
  RationalMatrix chosen;
  for (const auto& c : cands) {
    RationalMatrix trial = chosen;
    RationalVector row;
    for (long v : c.e) row.push_back(Rational(v));
    trial.push_back(row);
    if (linalg::rank(trial) == trial.size()) {
      chosen = std::move(trial);
      LogVector w(field_.places(), Interval::point(0.0));
      for (int j = 0; j < r; ++j)
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = w[i] + Interval::point(static_cast<double>(c.e[j])) * logs_[j][i];
      minima_.push_back(h0(w, r1));
      minima_exponents_.push_back(c.e);
      if (static_cast<int>(chosen.size()) == r) break;
    }
  }
  f_uk_ = minima_.back();
}

/// Wrapper matching the operation name.
inline Interval f_uk(const UnitLattice& lattice) { return lattice.f_uk(); }

/// Result of moving a point into the compactness box by a unit.
template <typename Point>
struct Reduction {
  FieldElement g;               // the unit applied
  std::vector<long> exponents;  // g = prod u_j^{exponents_j}
  Point gx;
  Interval bound;               // e^{r F_UK / 2} |N(x)|^{1/d}
  bool certified = false;       // every |(gx)_i| <= bound, certified
};

namespace detail {

/// Integer vector e minimising h0(w - sum e_j b_j) over a box around the
/// real least-squares solution.
inline std::vector<long> nearest_unit_exponents(const UnitLattice& L, const std::vector<double>& w, long radius) {
  const int r = L.rank();
  const auto& B = L.log_vectors_double();
  auto ginv = gram_inverse(B);
  std::vector<double> rhs(r, 0.0);
  for (int j = 0; j < r; ++j)
    for (std::size_t i = 0; i < w.size(); ++i) rhs[j] += B[j][i] * w[i];
  std::vector<long> lo(r), hi(r);
  for (int j = 0; j < r; ++j) {
    double c = 0;
    for (int k = 0; k < r; ++k) c += ginv[j][k] * rhs[k];
    lo[j] = static_cast<long>(std::llround(c)) - radius;
    hi[j] = static_cast<long>(std::llround(c)) + radius;
  }
  std::vector<long> best;
  double best_h = std::numeric_limits<double>::infinity();
  for_each_in_box(lo, hi, [&](const std::vector<long>& e) {
    std::vector<double> v = w;
    for (int j = 0; j < r; ++j)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= static_cast<double>(e[j]) * B[j][i];
    double h = h0_double(v, L.field().r1());
    if (h < best_h || (h == best_h && e < best)) {
      best_h = h;
      best = e;
    }
  });
  return best;
}

inline std::vector<double> balanced_log(const std::vector<double>& logs, const NumberField& K, double log_norm) {
  std::vector<double> w(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) w[i] = logs[i] - log_norm / K.degree();
  return w;
}

inline bool certify_bound(const EmbeddingPoint& gx, const Interval& bound) {
  for (std::size_t i = 0; i < gx.places(); ++i)
    if (!mpfr_lessequal_p(gx.modulus(i).hi().get(), bound.lo().get())) return false;
  return true;
}

}  // namespace detail

/// Finds g in G with |(gx)_i| <= e^{r F_UK/2} |N(x)|^{1/d} for all places,
/// certified with interval upper bounds.
inline Reduction<FieldElement> reduce_point(const FieldElement& x, const UnitLattice& L) {
  Rational n = abs(norm_exact(x));
  if (n == 0) throw std::invalid_argument("reduce_point: zero norm");
  const NumberField& K = L.field();
  const int r = L.rank();
  Reduction<FieldElement> out;
  out.bound = L.compactness_constant() * root(Interval::from_q(n), static_cast<unsigned long>(K.degree()));
  if (r == 0) {
    // one place carrying the whole degree: |x_1|^d = |N(x)|
    out.g = K.one();
    out.gx = x;
    out.certified = true;
    return out;
  }
  EmbeddingPoint p = embed(x);
  std::vector<double> logs;
  for (std::size_t i = 0; i < p.places(); ++i) logs.push_back(std::log(p.modulus(i).mid()));
  std::vector<double> w = detail::balanced_log(logs, K, std::log(n.get_d()));
  for (long radius = 1; radius <= 6; ++radius) {
    std::vector<long> e = detail::nearest_unit_exponents(L, w, radius);
    std::vector<long> neg(e.size());
    for (std::size_t j = 0; j < e.size(); ++j) neg[j] = -e[j];
    FieldElement g = L.unit_from_exponents(neg);
    FieldElement gx = g * x;
    for (mpfr_prec_t bits = K.data()->base_precision; bits <= 1024; bits *= 2) {
      PrecisionGuard guard(bits);
      Interval bound = L.compactness_constant() * root(Interval::from_q(n), static_cast<unsigned long>(K.degree()));
      if (detail::certify_bound(embed_at_precision(gx, bits), bound)) {
        out.g = g;
        out.exponents = neg;
        out.gx = gx;
        out.bound = bound;
        out.certified = true;
        return out;
      }
    }
  }
  throw PrecisionError("reduce_point: could not certify the compactness bound");
}

/// Same reduction for a point of Kbar given by an enclosure.
inline Reduction<EmbeddingPoint> reduce_point(const EmbeddingPoint& x, const UnitLattice& L) {
  const NumberField& K = L.field();
  PrecisionGuard guard(std::max(x.precision, K.data()->base_precision));
  Interval n = abs(norm_kbar(x));
  if (!n.positive()) throw std::invalid_argument("reduce_point: norm not bounded away from zero");
  Reduction<EmbeddingPoint> out;
  Interval bound = L.compactness_constant() * root(n, static_cast<unsigned long>(K.degree()));
  out.bound = bound;
  if (L.rank() == 0) {
    out.g = K.one();
    out.gx = x;
    out.certified = true;
    return out;
  }
  std::vector<double> logs;
  for (std::size_t i = 0; i < x.places(); ++i) logs.push_back(std::log(x.modulus(i).mid()));
  std::vector<double> w = detail::balanced_log(logs, K, std::log(n.mid()));
  for (long radius = 1; radius <= 6; ++radius) {
    std::vector<long> e = detail::nearest_unit_exponents(L, w, radius);
    std::vector<long> neg(e.size());
    for (std::size_t j = 0; j < e.size(); ++j) neg[j] = -e[j];
    FieldElement g = L.unit_from_exponents(neg);
    EmbeddingPoint gx = multiply(embed(g), x);
    if (detail::certify_bound(gx, bound)) {
      out.g = g;
      out.exponents = neg;
      out.gx = gx;
      out.certified = true;
      return out;
    }
  }
  out.g = K.one();
  out.gx = x;
  out.certified = false;
  return out;
}

/// Number of roots of unity in K: nonzero algebraic integers with every
/// |sigma_i| <= 1 are exactly the roots of unity.
inline int torsion_order(const NumberField& K) {
  if (K.r1() > 0) return 2;
  auto pts = enumerate_coset_in_box(K.zero(), BoxRegion::ball(K, Interval::point(1.0)));
  int count = 0;
  for (const auto& z : pts) {
    if (z.is_zero()) continue;
    Rational n = norm_exact(z);
    if (n != 1 && n != -1) continue;
    // confirm finite order exactly
    FieldElement p = z;
    for (int k = 1; k <= 4 * K.degree() * K.degree() + 2; ++k) {
      if (p == K.one()) {
        ++count;
        break;
      }
      p = p * z;
    }
  }
  return count;
}

}  // namespace emin
