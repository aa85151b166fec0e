#include "support.hpp"

#include <cmath>

using namespace emt;

namespace {

double sum_weighted(const LogVector& w, int r1) {
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) s += (static_cast<int>(i) < r1 ? 1 : 2) * w[i].mid();
  return s;
}

}  // namespace

TEST(LogEmbed, Examples) {
  NumberField K = field("sqrt2");
  LogVector w = log_embed(elem(K, {1, 1}));
  EXPECT_NEAR(w[0].mid(), std::log(1 + std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(w[1].mid(), -std::log(1 + std::sqrt(2.0)), 1e-12);
  LogVector m = log_embed(K.rational(-1));
  EXPECT_TRUE(m[0].contains(Rational(0)));
  EXPECT_TRUE(m[1].contains(Rational(0)));
  LogVector sq = log_embed(elem(K, {3, 2}));
  EXPECT_NEAR(sq[0].mid(), 2 * w[0].mid(), 1e-12);
  EXPECT_THROW(log_embed(elem(K, {1, 2})), std::invalid_argument);
}

TEST(H0, Examples) {
  LogVector w{Interval::point(0.881374), Interval::point(-0.881374)};
  EXPECT_NEAR(h0(w, 2).mid(), 0.881374, 1e-12);
  LogVector z{Interval::point(0.0), Interval::point(0.0)};
  EXPECT_EQ(h0(z, 2).mid(), 0.0);
  LogVector neg{Interval::point(-0.881374), Interval::point(0.881374)};
  EXPECT_EQ(h0(w, 2).mid(), h0(neg, 2).mid());
}

TEST(H0, PositivePartForm) {
  // on W, h0 equals the sum of d_i w_i over positive coordinates
  const UnitLattice& L = lattice("cubic49");
  for (const auto& w : L.log_vectors()) {
    double pos = 0;
    for (const auto& v : w) pos += std::max(0.0, v.mid());
    EXPECT_NEAR(h0(w, 3).mid(), pos, 1e-12);
  }
}

TEST(Mahler, Examples) {
  NumberField K = field("sqrt2");
  EXPECT_NEAR(mahler(elem(K, {1, 1})).mid(), 0.881374, 1e-6);
  EXPECT_TRUE(mahler(K.rational(-1)).contains(Rational(0)));
  EXPECT_NEAR(mahler(power(elem(K, {1, 1}), 3)).mid(), 2.644121, 1e-6);
}

TEST(Mahler, RootsOfUnityHaveZeroHeight) {
  NumberField K = field("zeta5");
  FieldElement zeta = elem(K, {0, 1, 0, 0});
  EXPECT_TRUE(mahler(zeta).contains(Rational(0)));
  EXPECT_TRUE(mahler(K.units()[0]).positive());
}

TEST(FUK, Examples) {
  EXPECT_NEAR(lattice("sqrt2").f_uk().mid(), 0.881374, 1e-6);
  EXPECT_NEAR(lattice("sqrt3").f_uk().mid(), 1.316958, 1e-6);
  EXPECT_TRUE(lattice("gaussian").rank_zero());
  EXPECT_EQ(lattice("gaussian").f_uk().mid(), 0.0);
}

TEST(FUK, CubicIsLastSuccessiveMinimum) {
  const UnitLattice& L = lattice("cubic49");
  ASSERT_EQ(L.successive_minima().size(), 2u);
  EXPECT_LE(L.successive_minima()[0].mid(), L.successive_minima()[1].mid());
  // every unit with small exponents has h0 at least the first minimum
  for (long a = -4; a <= 4; ++a)
    for (long b = -4; b <= 4; ++b) {
      if (a == 0 && b == 0) continue;
      double h = mahler(L.unit_from_exponents({a, b})).mid();
      EXPECT_GE(h + 1e-9, L.successive_minima()[0].mid());
    }
  EXPECT_GT(L.f_uk().lo_d(), 0.0);
  EXPECT_TRUE(std::isfinite(L.f_uk().hi_d()));
}

TEST(Regulator, KnownValues) {
  EXPECT_NEAR(lattice("sqrt2").regulator().mid(), std::log(1 + std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(lattice("sqrt5").regulator().mid(), std::log((1 + std::sqrt(5.0)) / 2), 1e-12);
  EXPECT_NEAR(lattice("cubic49").regulator().mid(), 0.5254, 1e-3);
  EXPECT_TRUE(lattice("cubic49").regulator().positive());
}

TEST(Regulator, DeterminantOfDroppedPlace) {
  const UnitLattice& L = lattice("cubic49");
  const auto& v = L.log_vectors();
  double det = v[0][0].mid() * v[1][1].mid() - v[0][1].mid() * v[1][0].mid();
  EXPECT_NEAR(L.regulator().mid(), std::abs(det), 1e-12);
}

TEST(QuadraticUnits, ContinuedFraction) {
  struct Case {
    std::vector<long> poly;
    double log_eps;
  };
  for (const Case& c : std::vector<Case>{{{-2, 0, 1}, std::log(1 + std::sqrt(2.0))},
                                         {{-3, 0, 1}, std::log(2 + std::sqrt(3.0))},
                                         {{-7, 0, 1}, std::log(8 + 3 * std::sqrt(7.0))},
                                         {{-1, -1, 1}, std::log((1 + std::sqrt(5.0)) / 2)},
                                         {{-3, -1, 1}, std::log((3 + std::sqrt(13.0)) / 2)},
                                         {{-94, 0, 1}, std::log(2143295 + 221064 * std::sqrt(94.0))}}) {
    NumberField K = with_quadratic_unit(poly_field(c.poly));
    ASSERT_EQ(K.units().size(), 1u);
    FieldElement eps = K.units()[0];
    EXPECT_EQ(abs(norm_exact(eps)), 1);
    EXPECT_NEAR(log_embed(eps)[0].mid(), c.log_eps, 1e-9);
  }
}

TEST(ReducePoint, Examples) {
  const UnitLattice& L = lattice("sqrt2");
  const NumberField& K = L.field();
  auto r = reduce_point(elem(K, {7, 5}), L);
  ASSERT_TRUE(r.certified);
  EXPECT_TRUE(r.gx == K.one() || r.gx == K.rational(-1));
  EXPECT_EQ(r.g, inverse(power(elem(K, {1, 1}), 3)));
  EXPECT_NEAR(r.bound.mid(), std::exp(0.5 * 0.881374), 1e-5);

  auto h = reduce_point(elem(K, {Rational(1, 2), 0}), L);
  EXPECT_EQ(h.g, K.one());
  EXPECT_EQ(h.gx, elem(K, {Rational(1, 2), 0}));
  EXPECT_NEAR(h.bound.mid(), 0.5 * std::exp(0.5 * std::log(1 + std::sqrt(2.0))), 1e-9);  // 0.77689
}

TEST(ReducePoint, CompactnessProperty) {
  std::mt19937_64 rng(21);
  for (const char* name : {"sqrt2", "sqrt3", "sqrt5", "cubic49", "gaussian", "zeta5"}) {
    const UnitLattice& L = lattice(name);
    const NumberField& K = L.field();
    for (int i = 0; i < 60; ++i) {
      int q = 1 + static_cast<int>(rng() % 8);
      FieldElement x = random_element(K, rng, q, 40);
      if (x.is_zero()) continue;
      // push far from the box first
      if (L.rank() > 0) x = L.unit_from_exponents(std::vector<long>(L.rank(), static_cast<long>(rng() % 7) - 3)) * x;
      auto r = reduce_point(x, L);
      ASSERT_TRUE(r.certified) << name;
      EXPECT_EQ(abs(norm_exact(r.gx)), abs(norm_exact(x)));
      EmbeddingPoint p = embed(r.gx);
      if (L.rank() == 0) {
        // one place, bound attained: |x_1|^d = |N(x)|
        EXPECT_EQ(p.places(), 1u);
        EXPECT_TRUE(p.modulus(0).overlaps(r.bound));
        continue;
      }
      for (std::size_t k = 0; k < p.places(); ++k) EXPECT_TRUE(p.modulus(k).certainly_le(r.bound));
    }
  }
}

TEST(ReducePoint, EmbeddingPointInput) {
  const UnitLattice& L = lattice("sqrt3");
  const NumberField& K = L.field();
  auto r = reduce_point(embed(elem(K, {97, 56})), L);  // (2 + sqrt3)^4
  ASSERT_TRUE(r.certified);
  for (std::size_t k = 0; k < r.gx.places(); ++k) EXPECT_TRUE(r.gx.modulus(k).certainly_le(r.bound));
  EXPECT_THROW(reduce_point(K.zero(), L), std::invalid_argument);
}

TEST(Properties, UnitsLieInW) {
  std::mt19937_64 rng(22);
  for (const char* name : {"sqrt2", "cubic49", "zeta5"}) {
    const UnitLattice& L = lattice(name);
    for (int i = 0; i < 30; ++i) {
      std::vector<long> e;
      for (int j = 0; j < L.rank(); ++j) e.push_back(static_cast<long>(rng() % 9) - 4);
      LogVector w = log_embed(L.unit_from_exponents(e));
      EXPECT_NEAR(sum_weighted(w, L.field().r1()), 0.0, 1e-9);
    }
  }
}

TEST(Properties, MahlerTriangle) {
  std::mt19937_64 rng(23);
  const UnitLattice& L = lattice("cubic49");
  for (int i = 0; i < 50; ++i) {
    std::vector<long> a{static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 7) - 3};
    std::vector<long> b{static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 7) - 3};
    FieldElement u = L.unit_from_exponents(a), v = L.unit_from_exponents(b);
    EXPECT_LE(mahler(u * v).lo_d(), (mahler(u) + mahler(v)).hi_d());
  }
}

TEST(Torsion, Counts) {
  EXPECT_EQ(torsion_order(field("gaussian")), 4);
  EXPECT_EQ(torsion_order(field("eisenstein")), 6);
  EXPECT_EQ(torsion_order(field("zeta5")), 10);
  EXPECT_EQ(torsion_order(field("sqrt2")), 2);
}

TEST(UnitLattice, RankMismatchRejected) {
  EXPECT_THROW(UnitLattice(poly_field({1, -2, -1, 1})), InputError);
}
