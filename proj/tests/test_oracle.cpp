#include "support.hpp"

using namespace emt;

namespace {

CMData eisenstein_cm() {
  NumberField K = field("eisenstein");
  return build_cm(K, rational_subfield(K), elem(K, {0, 1}));
}

}  // namespace

TEST(BruteForce, Examples) {
  NumberField K = field("sqrt2");
  EXPECT_EQ(brute_force_m(elem(K, {Rational(1, 2), 0}), 20), Rational(1, 4));
  EXPECT_EQ(brute_force_m(elem(K, {0, Rational(1, 2)}), 20), Rational(1, 2));
  EXPECT_EQ(brute_force_m(elem(K, {1, -1}), 1), 0);
  EXPECT_THROW(brute_force_m(K.one(), 0), std::invalid_argument);
}

TEST(BruteForce, RadiusMonotone) {
  std::mt19937_64 rng(61);
  NumberField K = field("sqrt3");
  for (int i = 0; i < 20; ++i) {
    FieldElement x = random_element(K, rng, 7, 30);
    Rational prev = brute_force_m(x, 1);
    for (int r = 2; r <= 8; r += 2) {
      Rational v = brute_force_m(x, r);
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(Grid, Examples) {
  CMData e = eisenstein_cm();
  GridMinimum g = grid_min_nstar({e.F.rational(0), e.F.rational(1)}, e, 2.0, 1e-3);
  EXPECT_NEAR(g.value, 0.75, 1e-6);
  ASSERT_EQ(g.argmin.size(), 1u);
  EXPECT_NEAR(g.argmin[0], 0.5, 1e-3);
  EXPECT_NEAR(grid_min_nstar({e.F.rational(0), e.F.rational(0)}, e, 2.0, 1e-3).value, 0.0, 1e-12);
  EXPECT_THROW(grid_min_nstar({e.F.rational(0), e.F.rational(1)}, e, 2.0, 0.0), std::invalid_argument);
}

TEST(Grid, RefinementShrinksGap) {
  CMData e = eisenstein_cm();
  SlopeLine line{e.F.rational(Rational(1, 3)), e.F.rational(Rational(2, 7))};
  double exact = slope_minimum(line, e).value.get_d();
  double coarse = grid_min_nstar(line, e, 2.0, 0.037).value - exact;
  double fine = grid_min_nstar(line, e, 2.0, 0.0185).value - exact;
  EXPECT_GE(coarse, -1e-12);
  EXPECT_GE(fine, -1e-12);
  EXPECT_LE(fine, coarse + 1e-12);
}

TEST(OracleConfig, Validation) {
  OracleConfig c;
  EXPECT_NO_THROW(c.validate());
  c.radius = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}
