#pragma once

// Estimating M(K): lower bounds from rational points of small denominator,
// upper bounds by subdividing the unit cube of integral-basis coordinates.

#include "emin/minima.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <queue>
#include <set>
#include <vector>

namespace emin {

struct SweepResult {
  Rational value;                       // max of m over the classes scanned
  std::vector<FieldElement> witnesses;  // one representative per argmax orbit
  std::map<int, Rational> per_denominator;
  std::size_t classes = 0;              // classes with exact denominator in [2, qmax]
  std::size_t orbits = 0;               // distinct +-G orbits evaluated
};

/// Calls f(x) for every class x in q^{-1} O_K / O_K, coordinates a/q, a in [0,q)^d.
template <typename F>
void for_each_class(const NumberField& K, int q, F&& f) {
  const int d = K.degree();
  std::vector<long> a(d, 0);
  while (true) {
    RationalVector c(d);
    for (int j = 0; j < d; ++j) c[j] = Rational(a[j], q);
    for (auto& v : c) v.canonicalize();
    f(K.element(std::move(c)));
    int j = 0;
    while (j < d) {
      if (++a[j] < q) break;
      a[j] = 0;
      ++j;
    }
    if (j == d) break;
  }
}

/// max m_K(x) over x in q^{-1} O_K / O_K, 2 <= q <= qmax, one evaluation per orbit.
inline SweepResult denominator_sweep(const UnitLattice& L, int qmax) {
  if (qmax < 2) throw std::invalid_argument("qmax must be >= 2");
  const NumberField& K = L.field();
  SweepResult out;
  out.value = 0;
  std::set<RationalVector> seen;
  for (int q = 2; q <= qmax; ++q) {
    Rational best_q = 0;
    for_each_class(K, q, [&](const FieldElement& x) {
      if (x.denominator() != q) return;
      ++out.classes;
      if (seen.count(x.coords())) return;
      for (const auto& o : unit_orbit(x, L)) {
        seen.insert(o.cls.coords());
        seen.insert(reduce_mod_ok(-o.cls).coords());
      }
      ++out.orbits;
      Rational m = m_rational(x, L).value;
      best_q = std::max(best_q, m);
      if (m > out.value) {
        out.value = m;
        out.witnesses.clear();
      }
      if (m == out.value) out.witnesses.push_back(x);
    });
    out.per_denominator[q] = best_q;
  }
  return out;
}

/// exp(exp(exp(e3))) kept in log space.
struct TowerBound {
  double e3 = 1;      // D_K^{C F^2}
  double log_e3 = 0;  // C F^2 log D_K
};

inline TowerBound complexity_q(const UnitLattice& L, double C) {
  if (!(C > 0)) throw std::invalid_argument("C must be positive");
  double F = L.f_uk().hi_d();
  TowerBound t;
  t.log_e3 = C * F * F * std::log(L.field().abs_discriminant().get_d());
  t.e3 = std::exp(t.log_e3);
  return t;
}

/// (2 q D^{1/d} e^{rF/2} + 1)^d, upper endpoint.
inline double enumeration_count_bound(const UnitLattice& L, int q) {
  if (q < 1) throw std::invalid_argument("q must be >= 1");
  const NumberField& K = L.field();
  const unsigned long d = static_cast<unsigned long>(K.degree());
  Interval R = root(Interval::from_q(Rational(K.abs_discriminant())), d) * L.compactness_constant();
  Interval v = Interval::point(2.0 * q) * R + Interval::point(1.0);
  Interval p = Interval::point(1.0);
  for (unsigned long i = 0; i < d; ++i) p = p * v;
  return p.hi_d();
}

/// |q^{-1} O_K cap B_R| with R = D^{1/d} e^{rF/2}, counted coset by coset.
inline std::size_t enumeration_count(const UnitLattice& L, int q) {
  const NumberField& K = L.field();
  const unsigned long d = static_cast<unsigned long>(K.degree());
  Interval R = root(Interval::from_q(Rational(K.abs_discriminant())), d) * L.compactness_constant();
  BoxRegion box = BoxRegion::ball(K, R);
  std::size_t n = 0;
  for_each_class(K, q, [&](const FieldElement& x) { n += enumerate_coset_in_box(x, box).size(); });
  return n;
}

// ---------------------------------------------------------------------------
// Branch and bound.

struct SearchOptions {
  double tol = 1e-3;
  int max_depth = 40;
  int qmax = 8;
  std::size_t max_boxes = 4'000'000;
  int unit_radius = -1;         // exponent window for certificates; -1 picks by rank
  std::size_t keep_certificates = 200'000;
  int threads = 1;
};

/// A cell of the unit cube: prod_j [n_j, n_j + 1] / 2^{k_j}.
struct Cell {
  std::vector<std::int64_t> num;
  std::vector<int> level;
  int depth = 0;
  double bound = 0;  // certified upper bound for m over the cell
  std::vector<long> cert_exponents;  // certificate behind `bound`, empty for the global bound
  std::vector<long> cert_y;

  Rational lower(std::size_t j) const {
    Rational v(Integer(static_cast<long>(num[j])), Integer(1) << level[j]);
    v.canonicalize();
    return v;
  }
  Rational width(std::size_t j) const {
    Rational v(Integer(1), Integer(1) << level[j]);
    v.canonicalize();
    return v;
  }
  RationalVector center() const {
    RationalVector c(num.size());
    for (std::size_t j = 0; j < num.size(); ++j) {
      c[j] = Rational(Integer(static_cast<long>(2 * num[j] + 1)), Integer(1) << (level[j] + 1));
      c[j].canonicalize();
    }
    return c;
  }
  bool contains(const RationalVector& x) const {
    for (std::size_t j = 0; j < num.size(); ++j)
      if (x[j] < lower(j) || x[j] > lower(j) + width(j)) return false;
    return true;
  }
};

/// Every x in the cell has |N(g x - y)| <= bound, hence m(x) <= bound.
struct Certificate {
  Cell cell;
  std::vector<long> exponents;  // g
  RationalVector y;             // y in O_K
};

struct SearchResult {
  Rational lo;
  double hi = 0;
  std::vector<FieldElement> witnesses;
  bool converged = false;
  int depth_reached = 0;
  std::size_t boxes_processed = 0;
  std::size_t boxes_discarded = 0;
  std::size_t boxes_frozen = 0;
  SweepResult sweep;
  std::vector<Certificate> certificates;            // sample of discarded cells
  std::vector<std::pair<double, double>> trace;     // (lo, hi) after each step
  double seconds = 0;
};

namespace detail {

struct CellCompare {
  bool operator()(const Cell& a, const Cell& b) const { return a.bound < b.bound; }
};

class CertificateSearch {
 public:
  CertificateSearch(const UnitLattice& L, int unit_radius) : L_(L), K_(L.field()) {
    d_ = static_cast<std::size_t>(K_.degree());
    places_ = K_.places();
    map_ = real_coordinate_map(K_);
    const auto& be = K_.basis_embeddings_double();
    emb_ = be;
    bits_ = K_.data()->base_precision;
    auto table = K_.data()->table(bits_);
    PrecisionGuard guard(bits_);
    abs_basis_.assign(places_, std::vector<Interval>(d_));
    abs_basis_d_.assign(places_, std::vector<double>(d_));
    for (std::size_t i = 0; i < places_; ++i)
      for (std::size_t j = 0; j < d_; ++j) {
        const auto& z = table->basis[i][j];
        abs_basis_[i][j] = static_cast<int>(i) < K_.r1() ? abs(z.re) : z.abs();
        abs_basis_d_[i][j] = abs_basis_[i][j].hi_d();
      }
    const int r = L.rank();
    if (unit_radius < 0) unit_radius = r <= 1 ? 4 : (r == 2 ? 2 : 1);
    std::vector<long> lo(r, -unit_radius), hi(r, unit_radius);
    if (r == 0) {
      units_.push_back({});
      unit_emb_.push_back(std::vector<std::complex<double>>(places_, {1.0, 0.0}));
    } else {
      for_each_in_box(lo, hi, [&](const std::vector<long>& e) {
        units_.push_back(e);
        unit_emb_.push_back(L.unit_embedding_double(e));
      });
    }
  }

  double edge_extent(std::size_t j) const {
    double s = 0;
    for (std::size_t i = 0; i < places_; ++i) s += std::norm(emb_[i][j]);
    return std::sqrt(s);
  }

  struct Found {
    double estimate = std::numeric_limits<double>::infinity();
    std::size_t unit = 0;
    std::vector<long> y;
  };

  Found search(const Cell& cell) const {
    std::vector<double> c(d_), half(d_);
    for (std::size_t j = 0; j < d_; ++j) {
      double w = std::ldexp(1.0, -cell.level[j]);
      c[j] = static_cast<double>(cell.num[j]) * w + 0.5 * w;
      half[j] = 0.5 * w;
    }
    std::vector<std::complex<double>> cd(places_, {0.0, 0.0});
    std::vector<double> rho(places_, 0.0);
    for (std::size_t i = 0; i < places_; ++i)
      for (std::size_t j = 0; j < d_; ++j) {
        cd[i] += c[j] * emb_[i][j];
        rho[i] += abs_basis_d_[i][j] * half[j];
      }
    Found best;
    std::vector<double> target(d_), t(d_);
    std::vector<std::complex<double>> gc(places_);
    std::vector<double> s(places_);
    std::vector<long> base(d_), y(d_);
    for (std::size_t u = 0; u < units_.size(); ++u) {
      std::size_t m = 0;
      for (std::size_t i = 0; i < places_; ++i) {
        gc[i] = unit_emb_[u][i] * cd[i];
        s[i] = std::abs(unit_emb_[u][i]) * rho[i];
        target[m++] = gc[i].real();
        if (static_cast<int>(i) >= K_.r1()) target[m++] = gc[i].imag();
      }
      for (std::size_t j = 0; j < d_; ++j) {
        t[j] = 0;
        for (std::size_t k = 0; k < d_; ++k) t[j] += map_.Vinv[j][k] * target[k];
        base[j] = static_cast<long>(std::floor(t[j])) - 1;
      }
      // neighbours floor(t) - 1 .. floor(t) + 2 in every coordinate
      std::vector<int> off(d_, 0);
      while (true) {
        for (std::size_t j = 0; j < d_; ++j) y[j] = base[j] + off[j];
        double val = 1;
        for (std::size_t i = 0; i < places_; ++i) {
          std::complex<double> yi(0.0, 0.0);
          for (std::size_t j = 0; j < d_; ++j) yi += static_cast<double>(y[j]) * emb_[i][j];
          double a = std::abs(gc[i] - yi) + s[i];
          val *= static_cast<int>(i) < K_.r1() ? a : a * a;
        }
        if (val < best.estimate) {
          best.estimate = val;
          best.unit = u;
          best.y = y;
        }
        std::size_t j = 0;
        while (j < d_) {
          if (++off[j] < 4) break;
          off[j] = 0;
          ++j;
        }
        if (j == d_) break;
      }
    }
    return best;
  }

  /// Certified upper endpoint of sup over the cell of |N(g x - y)|.
  double certify(const Cell& cell, const Found& f) const {
    PrecisionGuard guard(bits_);
    FieldElement center = K_.element(cell.center());
    FieldElement yv = K_.element(to_rational(f.y));
    EmbeddingPoint cp = embed_at_precision(center, bits_);
    EmbeddingPoint gp = unit_point(f.unit);
    EmbeddingPoint yp = embed_at_precision(yv, bits_);
    Interval bound = Interval::point(1.0);
    for (std::size_t i = 0; i < places_; ++i) {
      Interval rho = Interval::point(0.0);
      for (std::size_t j = 0; j < d_; ++j) rho = rho + abs_basis_[i][j] * Interval::from_q(cell.width(j) / 2);
      Interval a;
      Interval gmod;
      if (static_cast<int>(i) < K_.r1()) {
        a = abs(gp.coords[i].re * cp.coords[i].re - yp.coords[i].re);
        gmod = abs(gp.coords[i].re);
      } else {
        a = (gp.coords[i] * cp.coords[i] - yp.coords[i]).abs();
        gmod = gp.coords[i].abs();
      }
      Interval t = a + gmod * rho;
      bound = bound * (static_cast<int>(i) < K_.r1() ? t : sqr(t));
    }
    return bound.hi_d();
  }

  const std::vector<long>& unit_exponents(std::size_t u) const { return units_[u]; }

 private:
  static RationalVector to_rational(const std::vector<long>& v) {
    RationalVector r;
    for (long x : v) r.push_back(Rational(x));
    return r;
  }

  EmbeddingPoint unit_point(std::size_t u) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = unit_cache_.find(u);
    if (it != unit_cache_.end()) return it->second;
    EmbeddingPoint p = embed_at_precision(L_.unit_from_exponents(units_[u]), bits_);
    unit_cache_.emplace(u, p);
    return p;
  }

  const UnitLattice& L_;
  NumberField K_;
  std::size_t d_ = 0, places_ = 0;
  RealCoordinateMap map_;
  std::vector<std::vector<std::complex<double>>> emb_;
  std::vector<std::vector<Interval>> abs_basis_;
  std::vector<std::vector<double>> abs_basis_d_;
  std::vector<std::vector<long>> units_;
  std::vector<std::vector<std::complex<double>>> unit_emb_;
  mpfr_prec_t bits_ = 128;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::size_t, EmbeddingPoint> unit_cache_;
};

}  // namespace detail

/// Certified enclosure lo <= M(K) <= hi by subdivision of the unit cube.
inline SearchResult branch_and_bound_M(const UnitLattice& L, const SearchOptions& opt) {
  if (!(opt.tol > 0)) throw std::invalid_argument("tol must be positive");
  auto t0 = std::chrono::steady_clock::now();
  const NumberField& K = L.field();
  const std::size_t d = static_cast<std::size_t>(K.degree());
  SearchResult res;
  res.sweep = denominator_sweep(L, std::max(2, opt.qmax));
  res.lo = res.sweep.value;
  res.witnesses = res.sweep.witnesses;
  std::set<RationalVector> evaluated;
  for (int q = 2; q <= opt.qmax; ++q)
    for_each_class(K, q, [&](const FieldElement& x) { evaluated.insert(x.coords()); });

  detail::CertificateSearch search(L, opt.unit_radius);
  std::vector<double> extent(d);
  for (std::size_t j = 0; j < d; ++j) extent[j] = search.edge_extent(j);

  const double global = Interval::from_q(bayer_bound(K)).hi_d();
  std::priority_queue<Cell, std::vector<Cell>, detail::CellCompare> queue;
  Cell root;
  root.num.assign(d, 0);
  root.level.assign(d, 0);
  root.bound = global;
  queue.push(root);
  double frozen_max = -1;

  auto lo_d = [&]() { return Interval::from_q(res.lo).lo_d(); };
  auto current_hi = [&]() {
    double h = std::max(lo_d(), frozen_max);
    if (!queue.empty()) h = std::max(h, queue.top().bound);
    return h;
  };
  auto gap_ok = [&](double hi) { return Rational(hi) - res.lo <= Rational(opt.tol); };

  while (!queue.empty()) {
    if (res.boxes_processed >= opt.max_boxes) break;
    double hi = current_hi();
    res.trace.emplace_back(lo_d(), hi);
    if (gap_ok(hi)) break;
    Cell cell = queue.top();
    queue.pop();
    ++res.boxes_processed;
    if (Rational(cell.bound) < res.lo) {
      ++res.boxes_discarded;
      continue;
    }
    if (cell.depth >= opt.max_depth) {
      frozen_max = std::max(frozen_max, cell.bound);
      ++res.boxes_frozen;
      continue;
    }
    std::size_t axis = 0;
    double longest = -1;
    for (std::size_t j = 0; j < d; ++j) {
      double e = extent[j] * std::ldexp(1.0, -cell.level[j]);
      if (e > longest) {
        longest = e;
        axis = j;
      }
    }
    for (int half = 0; half < 2; ++half) {
      Cell child = cell;
      child.depth = cell.depth + 1;
      child.level[axis] = cell.level[axis] + 1;
      child.num[axis] = 2 * cell.num[axis] + half;
      res.depth_reached = std::max(res.depth_reached, child.depth);

      RationalVector c = child.center();
      FieldElement cx = K.element(c);
      if (cx.denominator() <= opt.qmax && !evaluated.count(reduce_mod_ok(cx).coords())) {
        evaluated.insert(reduce_mod_ok(cx).coords());
        Rational m = m_rational(cx, L).value;
        if (m > res.lo) {
          res.lo = m;
          res.witnesses = {reduce_mod_ok(cx)};
        } else if (m == res.lo) {
          res.witnesses.push_back(reduce_mod_ok(cx));
        }
      }

      auto found = search.search(child);
      if (std::isfinite(found.estimate)) {
        double b = search.certify(child, found);
        if (b < child.bound) {
          child.bound = b;
          child.cert_exponents = search.unit_exponents(found.unit);
          child.cert_y = found.y;
        }
      }
      if (Rational(child.bound) < res.lo) {
        ++res.boxes_discarded;
        if (res.certificates.size() < opt.keep_certificates && !child.cert_y.empty()) {
          RationalVector y;
          for (long v : child.cert_y) y.push_back(Rational(v));
          res.certificates.push_back({child, child.cert_exponents, std::move(y)});
        }
        continue;
      }
      queue.push(std::move(child));
    }
  }
  res.hi = current_hi();
  res.trace.emplace_back(lo_d(), res.hi);
  res.converged = gap_ok(res.hi);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace emin
