#pragma once

// CM fields K = F + eta F: the coordinate map rho, the norm form N_*, and
// closed-form minima of N_* on slope lines.

#include "emin/number_field.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace emin {

/// A totally real subfield F together with the image of its power-basis
/// generator in K.
struct Subfield {
  NumberField F;
  FieldElement generator_in_K;
};

/// F = Q inside K.
inline Subfield rational_subfield(const NumberField& K) {
  NumberField::Options o;
  o.allow_degree_one = true;
  o.label = "Q";
  NumberField Q = NumberField::create({Integer(0), Integer(1)}, o);
  return {Q, K.zero()};
}

struct CMData {
  NumberField K;
  NumberField F;
  FieldElement eta;
  FieldElement t;  // Tr_{K/F}(eta), in F
  FieldElement n;  // N_{K/F}(eta), in F
  RationalMatrix rho_matrix;      // columns: f_k, eta f_k in K-coordinates
  RationalMatrix rho_inverse;
  std::vector<FieldElement> f_images;  // integral basis of F mapped into K
  std::vector<std::size_t> k_place;    // K place above the F place i
  std::vector<Interval> re_eta, im_eta;

  std::size_t s() const { return static_cast<std::size_t>(F.degree()); }
};

/// The image in K of an element of F.
inline FieldElement lift_to_K(const FieldElement& f, const Subfield& sub) {
  const NumberField& K = sub.generator_in_K.field();
  RationalVector p = f.field().to_power_coords(f);
  FieldElement acc = K.zero();
  FieldElement pw = K.one();
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] != 0) acc = acc + p[k] * pw;
    pw = pw * sub.generator_in_K;
  }
  return acc;
}

inline CMData build_cm(const NumberField& K, const Subfield& sub, const FieldElement& eta) {
  const NumberField& F = sub.F;
  const std::size_t s = static_cast<std::size_t>(F.degree());
  if (K.r1() != 0) throw InputError("K is not totally complex");
  if (F.r1() != F.degree()) throw InputError("F is not totally real");
  if (static_cast<std::size_t>(K.degree()) != 2 * s) throw InputError("[K:F] must be 2");
  eta.check_same(K.zero());
  if (!eta.is_integral()) throw InputError("eta must lie in O_K");
  if (!(sub.generator_in_K.field() == K)) throw InputError("subfield generator is not an element of K");

  // the generator must satisfy the minimal polynomial of F
  {
    FieldElement acc = K.zero(), pw = K.one();
    for (const auto& c : F.min_poly()) {
      acc = acc + c * pw;
      pw = pw * sub.generator_in_K;
    }
    if (!acc.is_zero()) throw InputError("generator_in_K is not a root of the minimal polynomial of F");
  }

  CMData cm{K, F, eta, F.zero(), F.zero(), {}, {}, {}, {}, {}, {}};
  for (std::size_t k = 0; k < s; ++k) cm.f_images.push_back(lift_to_K(F.basis_element(k), sub));
  const std::size_t d = 2 * s;
  cm.rho_matrix.assign(d, RationalVector(d));
  for (std::size_t k = 0; k < s; ++k) {
    FieldElement a = cm.f_images[k];
    FieldElement b = eta * a;
    for (std::size_t row = 0; row < d; ++row) {
      cm.rho_matrix[row][k] = a[row];
      cm.rho_matrix[row][s + k] = b[row];
    }
  }
  try {
    cm.rho_inverse = linalg::inverse(cm.rho_matrix);
  } catch (const std::domain_error&) {
    throw InputError("eta lies in F (rho is singular)");
  }

  // eta^2 = t eta - n
  RationalVector c = linalg::apply(cm.rho_inverse, (eta * eta).coords());
  cm.n = -F.element(RationalVector(c.begin(), c.begin() + s));
  cm.t = F.element(RationalVector(c.begin() + s, c.end()));

  // match every real place of F with the K place restricting to it
  EmbeddingPoint gk = embed(sub.generator_in_K);
  EmbeddingPoint eta_p = embed(eta);
  const auto& froots = F.roots(F.data()->base_precision);
  for (std::size_t i = 0; i < s; ++i) {
    Interval fr = F.degree() == 1 ? Interval::point(0.0) : froots.roots[i].box().re;
    std::optional<std::size_t> match;
    for (std::size_t p = 0; p < K.places(); ++p) {
      if (!gk.coords[p].im.contains_zero()) continue;
      if (!gk.coords[p].re.overlaps(fr.inflated(1e-12))) continue;
      if (std::find(cm.k_place.begin(), cm.k_place.end(), p) != cm.k_place.end()) continue;
      match = p;
      break;
    }
    if (!match) throw InputError("could not match the places of F with the places of K");
    cm.k_place.push_back(*match);
    cm.re_eta.push_back(eta_p.coords[*match].re);
    cm.im_eta.push_back(eta_p.coords[*match].im);
    if (cm.im_eta.back().contains_zero()) throw InputError("Im eta is not bounded away from 0");
  }
  return cm;
}

/// x = y1 + eta y2 with y1, y2 in F.
inline std::pair<FieldElement, FieldElement> rho(const FieldElement& x, const CMData& cm) {
  RationalVector c = linalg::apply(cm.rho_inverse, x.coords());
  const std::size_t s = cm.s();
  return {cm.F.element(RationalVector(c.begin(), c.begin() + s)), cm.F.element(RationalVector(c.begin() + s, c.end()))};
}

/// Real embeddings of an element of F, in the order of the places of F.
inline std::vector<Interval> embed_real(const FieldElement& f) {
  EmbeddingPoint p = embed(f);
  std::vector<Interval> v;
  for (const auto& c : p.coords) v.push_back(c.re);
  return v;
}

/// prod_i ((y1_i + Re eta_i y2_i)^2 + (Im eta_i)^2 (y2_i)^2)
inline Interval n_star(const std::vector<Interval>& y1, const std::vector<Interval>& y2, const CMData& cm) {
  if (y1.size() != cm.s() || y2.size() != cm.s()) throw std::invalid_argument("n_star: vectors must have length s");
  Interval r = Interval::point(1.0);
  for (std::size_t i = 0; i < cm.s(); ++i) r = r * (sqr(y1[i] + cm.re_eta[i] * y2[i]) + sqr(cm.im_eta[i] * y2[i]));
  return r;
}

inline Interval n_star(const FieldElement& x, const CMData& cm) {
  auto [y1, y2] = rho(x, cm);
  return n_star(embed_real(y1), embed_real(y2), cm);
}

/// V^phi + (beta, 0) for finite phi; V^infinity + (0, beta) otherwise.
struct SlopeLine {
  std::optional<FieldElement> phi;  // empty for the slope infinity
  FieldElement beta;

  /// Normalises an offset (w1, w2) on a finite slope to (w1 - phi w2, 0).
  static SlopeLine finite(const FieldElement& phi, const FieldElement& w1, const FieldElement& w2) {
    return {phi, w1 - phi * w2};
  }
  static SlopeLine infinite(const FieldElement& beta) { return {std::nullopt, beta}; }
};

struct SlopeMinimum {
  FieldElement xi;             // parameter of the minimising point, in F
  Rational value;              // min of N_* on the line
  std::vector<double> factors; // per-place minima
};

inline SlopeMinimum slope_minimum(const SlopeLine& line, const CMData& cm) {
  const NumberField& F = cm.F;
  const FieldElement half = F.rational(Rational(1, 2));
  const FieldElement& beta = line.beta;
  FieldElement im2 = cm.n - Rational(1, 4) * cm.t * cm.t;  // (Im eta)^2 in every place
  SlopeMinimum out;
  Rational num = abs(norm_exact(im2 * beta * beta));
  std::vector<double> beta_d, phi_d;
  for (const auto& v : embed_real(beta)) beta_d.push_back(v.mid());
  if (line.phi) {
    const FieldElement& phi = *line.phi;
    FieldElement q = phi * phi + phi * cm.t + cm.n;
    out.xi = -((phi + half * cm.t) * beta) * inverse(q);
    out.value = num / abs(norm_exact(q));
    for (const auto& v : embed_real(phi)) phi_d.push_back(v.mid());
  } else {
    out.xi = -((half * cm.t) * beta);
    out.value = num;
  }
  for (std::size_t i = 0; i < cm.s(); ++i) {
    double re = cm.re_eta[i].mid(), im = cm.im_eta[i].mid();
    double f = im * im * beta_d[i] * beta_d[i];
    if (line.phi) f /= phi_d[i] * phi_d[i] + 2 * phi_d[i] * re + re * re + im * im;
    out.factors.push_back(f);
  }
  return out;
}

struct NuFloor {
  Rational nu;
  std::size_t line_index = 0;
  FieldElement xi;
};

inline NuFloor nu_floor(const std::vector<SlopeLine>& lines, const CMData& cm) {
  if (lines.empty()) throw std::invalid_argument("nu_floor: empty list of lines");
  NuFloor best;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    SlopeMinimum m = slope_minimum(lines[k], cm);
    if (k == 0 || m.value < best.nu) best = {m.value, k, m.xi};
  }
  return best;
}

}  // namespace emin
