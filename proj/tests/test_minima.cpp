#include "support.hpp"

using namespace emt;

TEST(Enumerate, Examples) {
  NumberField K = field("sqrt2");
  auto pts = enumerate_coset_in_box(K.zero(), BoxRegion::ball(K, 1.5));
  std::vector<FieldElement> expect{elem(K, {-1, 0}), elem(K, {0, -1}), elem(K, {0, 0}), elem(K, {0, 1}), elem(K, {1, 0})};
  std::sort(expect.begin(), expect.end());
  EXPECT_EQ(pts, expect);

  auto origin = enumerate_coset_in_box(K.zero(), BoxRegion::ball(K, 0.5));
  ASSERT_EQ(origin.size(), 1u);
  EXPECT_TRUE(origin[0].is_zero());

  auto half = enumerate_coset_in_box(elem(K, {Rational(1, 2), 0}), BoxRegion::ball(K, 1.0));
  std::vector<FieldElement> h{elem(K, {Rational(-1, 2), 0}), elem(K, {Rational(1, 2), 0})};
  EXPECT_EQ(half, h);
}

TEST(Enumerate, AgreesWithExhaustiveScan) {
  std::mt19937_64 rng(31);
  for (const char* name : {"sqrt3", "cubic49", "eisenstein"}) {
    NumberField K = field(name);
    for (int i = 0; i < 10; ++i) {
      FieldElement x = random_element(K, rng, 1 + static_cast<int>(rng() % 5), 3);
      double R = 0.55 + static_cast<double>(rng() % 40) / 10.0;  // off the lattice of squared moduli
      auto pts = enumerate_coset_in_box(x, BoxRegion::ball(K, R));
      // scan a coefficient box wide enough for R
      const int span = 12;
      std::size_t expected = 0;
      std::vector<long> c(K.degree(), -span);
      while (true) {
        RationalVector y = x.coords();
        for (int j = 0; j < K.degree(); ++j) y[j] += c[j];
        EmbeddingPoint p = embed(K.element(y));
        bool inside = true;
        for (std::size_t k = 0; k < p.places(); ++k) inside = inside && p.modulus(k).mid() <= R;
        if (inside) ++expected;
        int j = 0;
        while (j < K.degree()) {
          if (++c[j] <= span) break;
          c[j] = -span;
          ++j;
        }
        if (j == K.degree()) break;
      }
      EXPECT_EQ(pts.size(), expected) << name << " R=" << R << " x=" << to_string(x[0]) << "," << to_string(x[1]);
    }
  }
}

TEST(MRational, HalfInSqrt2) {
  const UnitLattice& L = lattice("sqrt2");
  const NumberField& K = L.field();
  MinimumResult m = m_rational(elem(K, {Rational(1, 2), 0}), L);
  EXPECT_EQ(m.value, Rational(1, 4));
  EXPECT_EQ(m.witness, elem(K, {Rational(1, 2), 0}));
  EXPECT_EQ(brute_force_m(elem(K, {Rational(1, 2), 0}), 20), Rational(1, 4));
}

TEST(MRational, IntegralPoint) {
  const UnitLattice& L = lattice("sqrt2");
  MinimumResult m = m_rational(elem(L.field(), {3, -2}), L);
  EXPECT_EQ(m.value, 0);
  EXPECT_TRUE(m.witness.is_zero());
}

TEST(MRational, UnitMultipleOfHalf) {
  const UnitLattice& L = lattice("sqrt2");
  const NumberField& K = L.field();
  FieldElement x = elem(K, {1, 1}) * elem(K, {Rational(1, 2), 0});
  EXPECT_EQ(m_rational(x, L).value, Rational(1, 4));
  EXPECT_EQ(brute_force_m(x, 20), Rational(1, 4));
}

TEST(MRational, WitnessInCoset) {
  std::mt19937_64 rng(32);
  for (const char* name : {"sqrt5", "cubic49", "gaussian"}) {
    const UnitLattice& L = lattice(name);
    for (int i = 0; i < 30; ++i) {
      int q = 2 + static_cast<int>(rng() % 5);
      FieldElement x = random_element(L.field(), rng, q, 10);
      MinimumResult m = m_rational(x, L);
      EXPECT_TRUE((m.witness - x).is_integral() || x.is_integral());
      EXPECT_EQ(abs(norm_exact(m.witness)), m.value);
      Rational scaled = m.value * pow(Rational(x.denominator()), static_cast<unsigned long>(L.field().degree()));
      EXPECT_EQ(scaled.get_den(), 1);
      EXPECT_LE(m.value, bayer_bound(L.field()));
    }
  }
}

TEST(MRational, OracleEquivalence) {
  for (const char* name : {"sqrt2", "sqrt3", "sqrt5"}) {
    const UnitLattice& L = lattice(name);
    const NumberField& K = L.field();
    for (int q = 2; q <= 6; ++q)
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) {
          FieldElement x = elem(K, {Rational(a, q), Rational(b, q)});
          EXPECT_EQ(m_rational(x, L).value, brute_force_m(x, 20)) << name << " " << a << "/" << q << "," << b << "/" << q;
        }
  }
}

TEST(MRational, DistanceBound) {
  // m(x) <= prod over places of the distance-type bound ||z'||^d on orbit points
  std::mt19937_64 rng(33);
  const UnitLattice& L = lattice("sqrt3");
  for (int i = 0; i < 30; ++i) {
    FieldElement x = random_element(L.field(), rng, 5, 4);
    Rational m = m_rational(x, L).value;
    for (const auto& o : unit_orbit(x, L)) {
      for (const auto& y : enumerate_coset_in_box(o.cls, BoxRegion::ball(L.field(), 2.0))) {
        EmbeddingPoint p = embed(y);
        Interval mx = p.modulus(0);
        for (std::size_t k = 1; k < p.places(); ++k) mx = max(mx, p.modulus(k));
        EXPECT_LE(m.get_d(), (mx * mx).hi_d());
      }
    }
  }
}

TEST(MRational, UnitInvariance) {
  std::mt19937_64 rng(34);
  for (const char* name : {"sqrt2", "sqrt3", "cubic49"}) {
    const UnitLattice& L = lattice(name);
    for (int i = 0; i < 20; ++i) {
      FieldElement x = random_element(L.field(), rng, 2 + static_cast<int>(rng() % 5), 6);
      std::vector<long> e;
      for (int j = 0; j < L.rank(); ++j) e.push_back(static_cast<long>(rng() % 5) - 2);
      EXPECT_EQ(m_rational(L.unit_from_exponents(e) * x, L).value, m_rational(x, L).value);
    }
  }
}

TEST(MPointBounds, Examples) {
  const UnitLattice& L = lattice("sqrt2");
  const NumberField& K = L.field();
  Interval z = m_point_bounds(embed(K.zero()), L, 1);
  EXPECT_EQ(z.hi_d(), 0.0);
  Interval h = m_point_bounds(embed(elem(K, {Rational(1, 2), 0})), L, 3);
  EXPECT_LE(h.hi_d(), 0.25 + 1e-12);
  EXPECT_GE(h.hi_d(), 0.25 - 1e-12);
}

TEST(MPointBounds, IrrationalPointsAndMonotone) {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(-3, 3);
  for (const char* name : {"sqrt5", "gaussian", "cubic49"}) {
    const UnitLattice& L = lattice(name);
    const NumberField& K = L.field();
    for (int i = 0; i < 5; ++i) {
      EmbeddingPoint p;
      p.r1 = K.r1();
      p.precision = 128;
      for (std::size_t k = 0; k < K.places(); ++k)
        p.coords.emplace_back(Interval::point(u(rng)), static_cast<int>(k) < K.r1() ? Interval::point(0.0) : Interval::point(u(rng)));
      double prev = 1e300;
      for (int effort = 1; effort <= 3; ++effort) {
        double v = m_point_bounds(p, L, effort).hi_d();
        EXPECT_LE(v, prev);
        EXPECT_LE(Rational(v), bayer_bound(K));
        prev = v;
      }
    }
  }
}
