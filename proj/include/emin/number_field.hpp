#pragma once

// Exact arithmetic in a number field K and certified embeddings into
// K ⊗ R = R^{r1} ⊕ C^{r2}.
//
// Elements are stored as rational coordinate vectors over the integral basis
// (omega_1..omega_d), so membership in O_K and denominators are coordinate-wise
// integrality checks. Places are indexed real roots first (descending), then
// one representative per complex pair (positive imaginary part, ascending real
// part); place i has local degree d_i = 1 (real) or 2 (complex).

#include "emin/interval.hpp"
#include "emin/rational.hpp"
#include "emin/roots.hpp"

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace emin {

class NumberField;
class FieldElement;

/// Certified enclosure of (sigma_i(x))_{i in I}; real places carry a zero
/// imaginary part.
struct EmbeddingPoint {
  std::vector<ComplexInterval> coords;
  int r1 = 0;
  mpfr_prec_t precision = 0;

  std::size_t places() const { return coords.size(); }
  int local_degree(std::size_t i) const { return static_cast<int>(i) < r1 ? 1 : 2; }
  /// |x_i| as an interval.
  Interval modulus(std::size_t i) const {
    return static_cast<int>(i) < r1 ? abs(coords[i].re) : coords[i].abs();
  }
  double max_width() const {
    double w = 0;
    for (const auto& c : coords) w = std::max(w, c.width());
    return w;
  }
};

namespace detail {

struct EmbeddingTable {
  mpfr_prec_t precision = 0;
  RootSet roots;
  std::vector<std::vector<ComplexInterval>> basis;  // [place][basis index]
};

struct FieldData {
  int degree = 0;
  int r1 = 0;
  int r2 = 0;
  std::string label;
  RationalVector min_poly;                          // monic, constant first
  RationalMatrix basis;                             // column j = omega_j in power coordinates
  RationalMatrix basis_inv;                         // power -> integral coordinates
  std::vector<std::vector<RationalVector>> structure;  // omega_j * omega_k in integral coordinates
  RationalVector one;                               // coordinates of 1
  Integer discriminant;
  std::vector<RationalVector> fundamental_units;
  std::optional<int> torsion;
  mpfr_prec_t base_precision = 128;
  std::vector<std::vector<std::complex<double>>> basis_double;  // [place][basis index]

  mutable std::mutex cache_mutex;
  mutable std::map<mpfr_prec_t, std::shared_ptr<const EmbeddingTable>> tables;

  std::shared_ptr<const EmbeddingTable> table(mpfr_prec_t bits) const;
};

}  // namespace detail

/// Exact element of K in integral-basis coordinates.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(std::shared_ptr<const detail::FieldData> field, RationalVector coords)
      : field_(std::move(field)), coords_(std::move(coords)) {}

  const RationalVector& coords() const { return coords_; }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  std::size_t degree() const { return coords_.size(); }
  NumberField field() const;
  const std::shared_ptr<const detail::FieldData>& field_data() const { return field_; }

  /// Smallest q >= 1 with q x in O_K.
  Integer denominator() const { return denominator_lcm(coords_); }
  bool is_integral() const { return denominator() == 1; }
  bool is_zero() const {
    for (const auto& c : coords_)
      if (c != 0) return false;
    return true;
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.coords_ == b.coords_; }
  friend bool operator<(const FieldElement& a, const FieldElement& b) { return a.coords_ < b.coords_; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    a.check_same(b);
    RationalVector c = a.coords_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coords_[i];
    return {a.field_, std::move(c)};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    a.check_same(b);
    RationalVector c = a.coords_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coords_[i];
    return {a.field_, std::move(c)};
  }
  friend FieldElement operator-(const FieldElement& a) {
    RationalVector c = a.coords_;
    for (auto& v : c) v = -v;
    return {a.field_, std::move(c)};
  }
  friend FieldElement operator*(const Rational& s, const FieldElement& a) {
    RationalVector c = a.coords_;
    for (auto& v : c) v *= s;
    return {a.field_, std::move(c)};
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);

  void check_same(const FieldElement& o) const {
    if (field_ != o.field_) throw std::invalid_argument("field mismatch");
  }

 private:
  std::shared_ptr<const detail::FieldData> field_;
  RationalVector coords_;
};

/// Handle to an immutable number field; cheap to copy, safe to share.
class NumberField {
 public:
  NumberField() = default;
  explicit NumberField(std::shared_ptr<const detail::FieldData> d) : data_(std::move(d)) {}

  struct Options {
    std::optional<RationalMatrix> integral_basis;  // columns = basis elements in power coordinates
    std::vector<RationalVector> units;             // integral-basis coordinates
    std::string label;
    std::optional<int> torsion;
    bool allow_degree_one = false;
  };

  /// Validates and builds a field from a monic integer minimal polynomial
  /// (constant term first).
  static NumberField create(const std::vector<Integer>& min_poly, Options opts);
  static NumberField create(const std::vector<Integer>& min_poly) { return create(min_poly, Options{}); }

  int degree() const { return data_->degree; }
  int r1() const { return data_->r1; }
  int r2() const { return data_->r2; }
  std::size_t places() const { return static_cast<std::size_t>(data_->r1 + data_->r2); }
  int local_degree(std::size_t i) const { return static_cast<int>(i) < data_->r1 ? 1 : 2; }
  int unit_rank() const { return data_->r1 + data_->r2 - 1; }
  const Integer& discriminant() const { return data_->discriminant; }
  Integer abs_discriminant() const { return abs(data_->discriminant); }
  const std::string& label() const { return data_->label; }
  const RationalVector& min_poly() const { return data_->min_poly; }
  const RationalMatrix& integral_basis() const { return data_->basis; }
  const std::vector<RationalVector>& unit_coords() const { return data_->fundamental_units; }
  std::optional<int> torsion() const { return data_->torsion; }
  const std::shared_ptr<const detail::FieldData>& data() const { return data_; }

  /// Certified roots at `bits` of working precision (cached).
  const RootSet& roots(mpfr_prec_t bits) const { return data_->table(bits)->roots; }
  /// Double-precision sigma_i(omega_j), for fast searches that are certified afterwards.
  const std::vector<std::vector<std::complex<double>>>& basis_embeddings_double() const {
    return data_->basis_double;
  }

  FieldElement element(RationalVector coords) const {
    if (coords.size() != static_cast<std::size_t>(degree()))
      throw std::invalid_argument("coordinate vector has wrong length");
    for (auto& c : coords) c.canonicalize();
    return {data_, std::move(coords)};
  }
  FieldElement zero() const { return {data_, RationalVector(degree(), Rational(0))}; }
  FieldElement one() const { return {data_, data_->one}; }
  FieldElement rational(const Rational& q) const { return q * one(); }
  FieldElement basis_element(std::size_t j) const {
    RationalVector c(degree(), Rational(0));
    c[j] = 1;
    return {data_, std::move(c)};
  }
  FieldElement from_power_coords(const RationalVector& p) const {
    return {data_, linalg::apply(data_->basis_inv, p)};
  }
  RationalVector to_power_coords(const FieldElement& x) const { return linalg::apply(data_->basis, x.coords()); }
  std::vector<FieldElement> units() const {
    std::vector<FieldElement> out;
    for (const auto& u : data_->fundamental_units) out.push_back({data_, u});
    return out;
  }

  friend bool operator==(const NumberField& a, const NumberField& b) { return a.data_ == b.data_; }

 private:
  std::shared_ptr<const detail::FieldData> data_;
};

inline NumberField FieldElement::field() const { return NumberField(field_); }

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  a.check_same(b);
  const auto& st = a.field_->structure;
  const std::size_t d = a.coords_.size();
  RationalVector c(d, Rational(0));
  for (std::size_t j = 0; j < d; ++j) {
    if (a.coords_[j] == 0) continue;
    for (std::size_t k = 0; k < d; ++k) {
      if (b.coords_[k] == 0) continue;
      Rational s = a.coords_[j] * b.coords_[k];
      const auto& jk = st[j][k];
      for (std::size_t l = 0; l < d; ++l)
        if (jk[l] != 0) c[l] += s * jk[l];
    }
  }
  return {a.field_, std::move(c)};
}

/// Matrix of multiplication by x: column k holds the coordinates of x * omega_k.
inline RationalMatrix multiplication_matrix(const FieldElement& x) {
  const auto& st = x.field_data()->structure;
  const std::size_t d = x.degree();
  RationalMatrix m(d, RationalVector(d, Rational(0)));
  for (std::size_t j = 0; j < d; ++j) {
    if (x[j] == 0) continue;
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = 0; l < d; ++l)
        if (st[j][k][l] != 0) m[l][k] += x[j] * st[j][k][l];
  }
  return m;
}

/// Signed N_K(x), exactly, as det of the multiplication matrix.
inline Rational norm_exact(const FieldElement& x) {
  if (x.is_zero()) return 0;
  return linalg::determinant(multiplication_matrix(x));
}

/// Tr_K(x), exactly.
inline Rational trace_exact(const FieldElement& x) {
  RationalMatrix m = multiplication_matrix(x);
  Rational t = 0;
  for (std::size_t i = 0; i < m.size(); ++i) t += m[i][i];
  return t;
}

inline FieldElement mul(const FieldElement& x, const FieldElement& y) { return x * y; }

inline FieldElement inverse(const FieldElement& x) {
  if (x.is_zero()) throw std::domain_error("inverse of zero");
  RationalMatrix inv = linalg::inverse(multiplication_matrix(x));
  return {x.field_data(), linalg::apply(inv, x.field_data()->one)};
}

/// x^e for any integer e (negative powers through the exact inverse).
inline FieldElement power(const FieldElement& x, long e) {
  FieldElement base = e < 0 ? inverse(x) : x;
  unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  FieldElement r = x.field().one();
  while (n) {
    if (n & 1u) r = r * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return r;
}

namespace detail {

inline std::shared_ptr<const EmbeddingTable> FieldData::table(mpfr_prec_t bits) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = tables.find(bits);
    if (it != tables.end()) return it->second;
  }
  auto t = std::make_shared<EmbeddingTable>();
  t->precision = bits;
  t->roots = isolate_roots(min_poly, bits);
  PrecisionGuard guard(bits);
  std::vector<ComplexInterval> root_boxes;
  for (const auto& r : t->roots.roots) root_boxes.push_back(r.box());
  const std::size_t nplaces = root_boxes.size();
  t->basis.assign(nplaces, std::vector<ComplexInterval>(degree));
  for (std::size_t i = 0; i < nplaces; ++i) {
    // powers of the root
    std::vector<ComplexInterval> pw(degree);
    pw[0] = ComplexInterval(Interval::point(1.0));
    for (int k = 1; k < degree; ++k) pw[k] = pw[k - 1] * root_boxes[i];
    for (int j = 0; j < degree; ++j) {
      ComplexInterval acc;
      for (int k = 0; k < degree; ++k) {
        if (basis[k][j] == 0) continue;
        acc = acc + Interval::from_q(basis[k][j]) * pw[k];
      }
      if (i < static_cast<std::size_t>(t->roots.r1)) acc.im = Interval::point(0.0);
      t->basis[i][j] = acc;
    }
  }
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto [it, inserted] = tables.emplace(bits, std::move(t));
  return it->second;
}

inline std::vector<FieldElement> units_from_coords(const std::shared_ptr<const FieldData>& d) {
  std::vector<FieldElement> out;
  for (const auto& u : d->fundamental_units) out.emplace_back(d, u);
  return out;
}

/// True when f (monic, squarefree, integer) has a proper monic integer factor;
/// decided from certified root enclosures and exact trial division.
inline bool has_rational_factor(const RationalVector& f, mpfr_prec_t start_bits) {
  const int d = static_cast<int>(f.size()) - 1;
  for (mpfr_prec_t bits = start_bits; bits <= kMaxPrecisionBits; bits *= 2) {
    RootSet rs = isolate_roots(f, bits);
    PrecisionGuard guard(std::max(bits, rs.precision));
    std::vector<ComplexInterval> roots = all_root_boxes(rs);
    bool ambiguous = false;
    for (int k = 1; k <= d / 2; ++k) {
      std::vector<int> idx(k);
      for (int i = 0; i < k; ++i) idx[i] = i;
      while (true) {
        std::vector<ComplexInterval> prod{ComplexInterval(Interval::point(1.0))};
        for (int i : idx) {
          std::vector<ComplexInterval> next(prod.size() + 1);
          for (std::size_t a = 0; a < prod.size(); ++a) {
            next[a + 1] = next[a + 1] + prod[a];
            next[a] = next[a] - prod[a] * roots[i];
          }
          prod = std::move(next);
        }
        bool candidate = true;
        bool unique = true;
        RationalVector g;
        for (const auto& c : prod) {
          Integer lo = ceil(c.re.lo().to_q());
          Integer hi = floor(c.re.hi().to_q());
          if (lo > hi || !c.im.contains_zero()) {
            candidate = false;
            break;
          }
          if (lo != hi) unique = false;
          g.push_back(Rational(lo));
        }
        if (candidate) {
          if (!unique) {
            ambiguous = true;
          } else if (poly::mod(f, g).empty()) {
            return true;
          }
        }
        // next combination
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == d - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
    if (!ambiguous) return false;
  }
  throw PrecisionError("irreducibility test inconclusive within the precision budget");
}

}  // namespace detail

inline NumberField NumberField::create(const std::vector<Integer>& min_poly, Options opts) {
  auto data = std::make_shared<detail::FieldData>();
  const int d = static_cast<int>(min_poly.size()) - 1;
  if (d < 1 || (d < 2 && !opts.allow_degree_one)) throw InputError("minimal polynomial must have degree >= 2");
  if (min_poly.back() != 1) throw InputError("minimal polynomial must be monic");
  data->degree = d;
  data->label = opts.label;
  data->torsion = opts.torsion;
  data->base_precision = default_precision_bits();
  for (const auto& c : min_poly) data->min_poly.push_back(Rational(c));

  if (d > 1) {
    poly::Poly g = poly::gcd(data->min_poly, poly::derivative(data->min_poly));
    if (poly::degree(g) > 0) throw InputError("minimal polynomial is reducible (repeated factor)");
    if (detail::has_rational_factor(data->min_poly, data->base_precision))
      throw InputError("minimal polynomial is reducible over Q");
  }

  data->basis = opts.integral_basis ? *opts.integral_basis : linalg::identity(d);
  if (data->basis.size() != static_cast<std::size_t>(d))
    throw InputError("integral basis must have d elements");
  for (const auto& row : data->basis)
    if (row.size() != static_cast<std::size_t>(d)) throw InputError("integral basis must be d x d");
  try {
    data->basis_inv = linalg::inverse(data->basis);
  } catch (const std::domain_error&) {
    throw InputError("integral basis matrix is not invertible");
  }

  // omega_j * omega_k reduced modulo the minimal polynomial
  std::vector<poly::Poly> cols(d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) cols[j].push_back(data->basis[k][j]);
    poly::trim(cols[j]);
  }
  data->structure.assign(d, std::vector<RationalVector>(d));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      poly::Poly p = poly::mod(poly::mul(cols[j], cols[k]), data->min_poly);
      p.resize(d, Rational(0));
      RationalVector c = linalg::apply(data->basis_inv, p);
      for (const auto& v : c)
        if (v.get_den() != 1) throw InputError("integral basis does not span a ring (non-integral product)");
      data->structure[j][k] = std::move(c);
    }
  }
  RationalVector e1(d, Rational(0));
  e1[0] = 1;
  data->one = linalg::apply(data->basis_inv, e1);
  for (const auto& v : data->one)
    if (v.get_den() != 1) throw InputError("1 is not in the span of the integral basis");

  // discriminant of the basis: det(Tr(omega_j omega_k))
  {
    RationalMatrix tr(d, RationalVector(d));
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) tr[j][k] = trace_exact(FieldElement(data, data->structure[j][k]));
    Rational disc = linalg::determinant(tr);
    data->discriminant = disc.get_num();
  }

  const RootSet& rs = data->table(data->base_precision)->roots;
  data->r1 = rs.r1;
  data->r2 = rs.r2;
  {
    auto t = data->table(data->base_precision);
    data->basis_double.assign(t->basis.size(), std::vector<std::complex<double>>(d));
    for (std::size_t i = 0; i < t->basis.size(); ++i)
      for (int j = 0; j < d; ++j) data->basis_double[i][j] = {t->basis[i][j].re.mid(), t->basis[i][j].im.mid()};
  }

  for (const auto& u : opts.units) {
    if (u.size() != static_cast<std::size_t>(d)) throw InputError("unit coordinate vector has wrong length");
    FieldElement x(data, u);
    if (!x.is_integral()) throw InputError("unit is not in O_K");
    Rational n = norm_exact(x);
    if (n != 1 && n != -1) throw InputError("unit does not have norm +-1");
    data->fundamental_units.push_back(u);
  }
  if (!data->torsion && data->r1 > 0) data->torsion = 2;
  return NumberField(std::move(data));
}

/// Validating entry point for user-supplied fields.
inline NumberField parse_field(const std::vector<Integer>& min_poly, std::optional<RationalMatrix> integral_basis,
                               std::vector<RationalVector> units, std::string label = {}) {
  NumberField::Options o;
  o.integral_basis = std::move(integral_basis);
  o.units = std::move(units);
  o.label = std::move(label);
  return NumberField::create(min_poly, std::move(o));
}

/// Embedding at the current working precision, without a width target.
inline EmbeddingPoint embed_at_precision(const FieldElement& x, mpfr_prec_t bits) {
  const auto& fd = *x.field_data();
  auto table = fd.table(bits);
  PrecisionGuard guard(bits);
  EmbeddingPoint p;
  p.r1 = table->roots.r1;
  p.precision = bits;
  const std::size_t nplaces = table->basis.size();
  // rational multiples of 1 embed exactly
  RationalVector pc = linalg::apply(fd.basis, x.coords());
  bool scalar = true;
  for (std::size_t k = 1; k < pc.size(); ++k)
    if (pc[k] != 0) scalar = false;
  for (std::size_t i = 0; i < nplaces; ++i) {
    if (scalar) {
      p.coords.emplace_back(Interval::from_q(pc[0]));
      continue;
    }
    ComplexInterval acc;
    for (std::size_t j = 0; j < x.degree(); ++j) {
      if (x[j] == 0) continue;
      acc = acc + Interval::from_q(x[j]) * table->basis[i][j];
    }
    if (static_cast<int>(i) < p.r1) acc.im = Interval::point(0.0);
    p.coords.push_back(std::move(acc));
  }
  return p;
}

/// Certified enclosure of sigma(x) with every coordinate width <= tol.
inline EmbeddingPoint embed(const FieldElement& x, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("embed: tol must be positive");
  for (mpfr_prec_t bits = std::max(working_precision(), x.field_data()->base_precision); bits <= kMaxPrecisionBits;
       bits *= 2) {
    EmbeddingPoint p = embed_at_precision(x, bits);
    if (p.max_width() <= tol) return p;
  }
  throw PrecisionError("embed: precision budget exhausted before reaching the requested width");
}

/// Embedding at the field's working precision (no width target).
inline EmbeddingPoint embed(const FieldElement& x) {
  return embed_at_precision(x, std::max(working_precision(), x.field_data()->base_precision));
}

/// N_Kbar(p) = prod_{real} x_i * prod_{complex} |x_i|^2.
inline Interval norm_kbar(const EmbeddingPoint& p) {
  PrecisionGuard guard(std::max(p.precision, working_precision()));
  Interval n = Interval::point(1.0);
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (static_cast<int>(i) < p.r1)
      n = n * p.coords[i].re;
    else
      n = n * p.coords[i].abs2();
  }
  return n;
}

/// Componentwise product theta * p in Kbar.
inline EmbeddingPoint multiply(const EmbeddingPoint& a, const EmbeddingPoint& b) {
  PrecisionGuard guard(std::max(a.precision, b.precision));
  EmbeddingPoint r;
  r.r1 = a.r1;
  r.precision = std::max(a.precision, b.precision);
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    ComplexInterval c = a.coords[i] * b.coords[i];
    if (static_cast<int>(i) < r.r1) c.im = Interval::point(0.0);
    r.coords.push_back(std::move(c));
  }
  return r;
}

/// Real scalar multiple s * p.
inline EmbeddingPoint scale(const EmbeddingPoint& p, const Interval& s) {
  EmbeddingPoint r = p;
  for (auto& c : r.coords) c = s * c;
  return r;
}

inline EmbeddingPoint add(const EmbeddingPoint& a, const EmbeddingPoint& b) {
  PrecisionGuard guard(std::max(a.precision, b.precision));
  EmbeddingPoint r = a;
  for (std::size_t i = 0; i < a.coords.size(); ++i) r.coords[i] = a.coords[i] + b.coords[i];
  return r;
}

}  // namespace emin
