#include "support.hpp"

#include <cmath>

using namespace emt;

namespace {

CMData gaussian_cm() {
  NumberField K = field("gaussian");
  return build_cm(K, rational_subfield(K), elem(K, {0, 1}));
}

CMData eisenstein_cm() {
  NumberField K = field("eisenstein");
  return build_cm(K, rational_subfield(K), elem(K, {0, 1}));
}

CMData zeta5_cm() {
  NumberField K = field("zeta5");
  return build_cm(K, load_subfield(field_path("zeta5_real"), K), elem(K, {0, 1, 0, 0}));
}

FieldElement q(const CMData& cm, Rational v) { return cm.F.rational(v); }

}  // namespace

TEST(BuildCM, Examples) {
  CMData g = gaussian_cm();
  EXPECT_EQ(g.t, q(g, 0));
  EXPECT_EQ(g.n, q(g, 1));
  CMData e = eisenstein_cm();
  EXPECT_EQ(e.t, q(e, -1));
  EXPECT_EQ(e.n, q(e, 1));
  NumberField K = field("eisenstein");
  EXPECT_THROW(build_cm(K, rational_subfield(K), K.rational(2)), InputError);
}

TEST(BuildCM, RejectsWrongShapes) {
  NumberField R = field("sqrt2");
  EXPECT_THROW(build_cm(R, rational_subfield(R), elem(R, {0, 1})), InputError);
  NumberField Z = field("zeta5");
  EXPECT_THROW(build_cm(Z, rational_subfield(Z), elem(Z, {0, 1, 0, 0})), InputError);
}

TEST(BuildCM, EmbeddingIdentities) {
  for (const CMData& cm : {gaussian_cm(), eisenstein_cm(), zeta5_cm()}) {
    auto t = embed_real(cm.t), n = embed_real(cm.n);
    for (std::size_t i = 0; i < cm.s(); ++i) {
      EXPECT_TRUE((cm.re_eta[i] + cm.re_eta[i]).overlaps(t[i]));
      EXPECT_TRUE((sqr(cm.re_eta[i]) + sqr(cm.im_eta[i])).overlaps(n[i]));
      EXPECT_FALSE(cm.im_eta[i].contains_zero());
    }
  }
}

TEST(Zeta5, RelativeTraceAndNorm) {
  CMData cm = zeta5_cm();
  // zeta + zeta^{-1} = phi - 1 and zeta zeta^{-1} = 1 with phi the generator of F
  EXPECT_EQ(cm.t, cm.F.element({-1, 1}));
  EXPECT_EQ(cm.n, cm.F.one());
}

TEST(Rho, Examples) {
  CMData g = gaussian_cm();
  auto [a, b] = rho(elem(g.K, {3, 4}), g);
  EXPECT_EQ(a, q(g, 3));
  EXPECT_EQ(b, q(g, 4));
  auto [c, d] = rho(g.K.rational(Rational(5, 7)), g);
  EXPECT_EQ(c, q(g, Rational(5, 7)));
  EXPECT_TRUE(d.is_zero());
  CMData e = eisenstein_cm();
  auto [y1, y2] = rho(elem(e.K, {1, 2}), e);  // sqrt(-3) = 1 + 2 zeta_3
  EXPECT_EQ(y1, q(e, 1));
  EXPECT_EQ(y2, q(e, 2));
}

TEST(Rho, Reconstructs) {
  std::mt19937_64 rng(51);
  CMData cm = zeta5_cm();
  for (int i = 0; i < 50; ++i) {
    FieldElement x = random_element(cm.K, rng, 1 + static_cast<int>(rng() % 5), 9);
    auto [y1, y2] = rho(x, cm);
    Subfield sub = load_subfield(field_path("zeta5_real"), cm.K);
    EXPECT_EQ(lift_to_K(y1, sub) + cm.eta * lift_to_K(y2, sub), x);
    EXPECT_EQ(x.is_integral(), y1.is_integral() && y2.is_integral());
  }
}

TEST(NStar, Examples) {
  CMData g = gaussian_cm();
  EXPECT_TRUE(n_star({Interval::point(3.0)}, {Interval::point(4.0)}, g).contains(Rational(25)));
  EXPECT_TRUE(n_star({Interval::point(0.0)}, {Interval::point(0.0)}, g).contains(Rational(0)));
  CMData e = eisenstein_cm();
  EXPECT_TRUE(n_star(elem(e.K, {0, 1}), e).contains(Rational(1)));
}

TEST(NStar, FactorizationIdentity) {
  std::mt19937_64 rng(52);
  for (const CMData& cm : {gaussian_cm(), eisenstein_cm(), zeta5_cm()}) {
    for (int i = 0; i < 300; ++i) {
      FieldElement x = random_element(cm.K, rng, 1 + static_cast<int>(rng() % 7), 25);
      Interval v = n_star(x, cm);
      EXPECT_TRUE(v.contains(abs(norm_exact(x))));
      EXPECT_LE(v.width(), 1e-9 * std::max(1.0, v.mid()));
    }
  }
}

TEST(NStar, PositiveDefinite) {
  CMData cm = eisenstein_cm();
  for (double a = -2; a <= 2; a += 0.25)
    for (double b = -2; b <= 2; b += 0.25) {
      Interval v = n_star({Interval::point(a)}, {Interval::point(b)}, cm);
      if (a == 0 && b == 0)
        EXPECT_TRUE(v.contains(Rational(0)));
      else
        EXPECT_TRUE(v.positive());
    }
}

TEST(SlopeMinimum, Examples) {
  CMData e = eisenstein_cm();
  SlopeMinimum m = slope_minimum({q(e, 0), q(e, 1)}, e);
  EXPECT_EQ(m.xi, q(e, Rational(1, 2)));
  EXPECT_EQ(m.value, Rational(3, 4));
  SlopeMinimum z = slope_minimum({q(e, 3), q(e, 0)}, e);
  EXPECT_EQ(z.value, 0);
  EXPECT_TRUE(z.xi.is_zero());
  CMData g = gaussian_cm();
  SlopeMinimum inf = slope_minimum(SlopeLine::infinite(q(g, 1)), g);
  EXPECT_TRUE(inf.xi.is_zero());
  EXPECT_EQ(inf.value, 1);
}

TEST(SlopeMinimum, NormalisedOffset) {
  CMData e = eisenstein_cm();
  SlopeLine line = SlopeLine::finite(q(e, 2), q(e, 5), q(e, 2));
  EXPECT_EQ(line.beta, q(e, 1));
}

TEST(SlopeMinimum, AgreesWithGrid) {
  std::mt19937_64 rng(53);
  for (const CMData& cm : {eisenstein_cm(), gaussian_cm(), zeta5_cm()}) {
    for (int i = 0; i < 20; ++i) {
      auto rnd = [&]() {
        RationalVector c;
        for (std::size_t k = 0; k < cm.s(); ++k) {
          Rational v(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3));
          v.canonicalize();
          c.push_back(v);
        }
        return cm.F.element(c);
      };
      SlopeLine line = (i % 4 == 0) ? SlopeLine::infinite(rnd()) : SlopeLine{rnd(), rnd()};
      SlopeMinimum m = slope_minimum(line, cm);
      GridMinimum g = grid_min_nstar(line, cm, 40.0, 1e-3);
      // grid error per factor is at most (leading coefficient) * (res/2)^2
      EXPECT_NEAR(g.value, m.value.get_d(), 1e-4 * std::max(1.0, m.value.get_d()));
      EXPECT_GE(g.value + 1e-12, m.value.get_d());
    }
  }
}

TEST(SlopeMinimum, PerFactorMinimizer) {
  CMData cm = zeta5_cm();
  SlopeLine line{cm.F.element({1, 1}), cm.F.element({2, -1})};
  SlopeMinimum m = slope_minimum(line, cm);
  auto xi = embed_real(m.xi), phi = embed_real(*line.phi), beta = embed_real(line.beta);
  double prod = 1;
  for (std::size_t i = 0; i < cm.s(); ++i) {
    double re = cm.re_eta[i].mid(), im = cm.im_eta[i].mid();
    auto f = [&](double th) {
      double a = phi[i].mid() * th + beta[i].mid() + re * th, b = im * th;
      return a * a + b * b;
    };
    double x = xi[i].mid();
    EXPECT_LT(f(x), f(x + 1e-4));
    EXPECT_LT(f(x), f(x - 1e-4));
    EXPECT_NEAR(f(x), m.factors[i], 1e-9);
    prod *= f(x);
  }
  EXPECT_NEAR(prod, m.value.get_d(), 1e-9);
}

TEST(NuFloor, Examples) {
  CMData e = eisenstein_cm();
  NuFloor nu = nu_floor({{q(e, 0), q(e, 1)}, {q(e, 0), q(e, 2)}}, e);
  EXPECT_EQ(nu.nu, Rational(3, 4));
  EXPECT_EQ(nu.line_index, 0u);
  EXPECT_EQ(nu_floor({{q(e, 0), q(e, 1)}, {q(e, 1), q(e, 0)}}, e).nu, 0);
  SlopeLine one{q(e, 2), q(e, 3)};
  EXPECT_EQ(nu_floor({one}, e).nu, slope_minimum(one, e).value);
  EXPECT_THROW(nu_floor({}, e), std::invalid_argument);
}
