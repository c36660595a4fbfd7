#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace l2alex;

namespace {

using LP = LaurentPolynomial;

const std::vector<std::string> kKnots = {"trefoil.pd", "figure_eight.pd", "unknot.pd", "cinquefoil.pd",
                                         "three_twist.pd", "stevedore.pd"};

Presentation pd_knot(const std::string& name) { return wirtinger(parse_pd(testing::data_file(name))); }

// First generator with nonzero abelianization, 1-based.
std::size_t usable_row(const Presentation& P) {
  const AbelianizationMap a = abelianization(P);
  for (std::size_t g = 0; g < P.rank(); ++g)
    if (a[g] != 0) return g + 1;
  return 0;
}

LP random_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> deg(0, 5), c(-4, 4);
  LP f;
  const int d = deg(rng);
  for (int e = 0; e <= d; ++e) f.add(e, c(rng));
  if (f.is_zero() || f.leading() == 0) f.add(d + 1, 1);
  return f;
}

}  // namespace

TEST_CASE("alexander_matrix examples") {
  const LaurentMatrix M = alexander_matrix(testing::trefoil_2gen());
  REQUIRE(M.size() == 1);
  REQUIRE(M[0].size() == 1);
  // Abelianized 1 - b + ab, and -1 + a - ba from the other row.
  CHECK(M[0][0].normalized() == LP::from_coefficients({1, -1, 1}));
  CHECK(alexander_matrix(testing::trefoil_2gen(), 2)[0][0].normalized() == LP::from_coefficients({1, -1, 1}));

  const LaurentMatrix U = alexander_matrix(testing::unknot_2gen());
  CHECK(U[0][0].normalized() == LP(1));

  const Presentation C = cable_presentation(testing::unknot_2gen(), {2, 3}, Word()).presentation;
  CHECK(alexander_polynomial(C) == LP::from_coefficients({1, -1, 1}));
}

TEST_CASE("alexander_polynomial examples") {
  CHECK(alexander_polynomial(testing::trefoil_wirtinger()) == LP::from_coefficients({1, -1, 1}));
  CHECK(alexander_polynomial(testing::trefoil_2gen()) == LP::from_coefficients({1, -1, 1}));
  CHECK(alexander_polynomial(testing::figure_eight_wirtinger()) == LP::from_coefficients({1, -3, 1}));
  CHECK(alexander_polynomial(testing::unknot_2gen()) == LP(1));
  CHECK(alexander_polynomial(pd_knot("unknot.pd")) == LP(1));
  const Presentation T = testing::trefoil_wirtinger();
  const Presentation granny = sum_presentation(T, T).presentation;
  CHECK(alexander_polynomial(granny) == LP::from_coefficients({1, -1, 1}) * LP::from_coefficients({1, -1, 1}));
  CHECK(format_laurent(alexander_polynomial(granny)) == "1 - 2*t + 3*t^2 - 2*t^3 + t^4");

  Presentation bad = testing::trefoil_2gen();
  bad.relators.clear();
  CHECK_THROWS_AS(alexander(bad), InputError);
  CHECK_THROWS_AS(alexander(T, 0), InputError);
  CHECK_THROWS_AS(alexander(T, 4), InputError);
  // lambda has trivial abelianization.
  const Presentation C = cable_presentation(testing::unknot_2gen(), {2, 3}, Word()).presentation;
  CHECK_THROWS_AS(alexander(C, static_cast<std::size_t>(C.generator_index("lambda")) + 1), InputError);
}

TEST_CASE("row choice changes the minor by a unit only") {
  for (const std::string& k : kKnots) {
    const Presentation P = pd_knot(k);
    const AlexanderResult r1 = alexander(P, 1);
    for (std::size_t i = 2; i <= P.rank(); ++i) {
      const AlexanderResult ri = alexander(P, i);
      CHECK(ri.polynomial == r1.polynomial);
      CHECK(ri.minor.normalized() == r1.minor.normalized());
      CHECK(ri.minor.terms().size() == r1.minor.terms().size());
    }
  }
  // Cable with generators of abelianization 3 (x) and 2 (g, h).
  const Presentation C = cable_presentation(testing::unknot_2gen(), {2, 3}, Word()).presentation;
  for (std::size_t i = 1; i <= C.rank(); ++i)
    if (abelianization(C)[i - 1] != 0) CHECK(alexander(C, i).polynomial == LP::from_coefficients({1, -1, 1}));
}

TEST_CASE("wirtinger Alexander polynomials are symmetric with value +-1 at t = 1") {
  for (const std::string& k : kKnots) {
    for (const Diagram& D : {parse_pd(testing::data_file(k)), mirror_diagram(parse_pd(testing::data_file(k)))}) {
      const LP d = alexander_polynomial(wirtinger(D));
      CHECK(abs(d.value_at_one()) == 1);
      CHECK(d.reflected().normalized() == d);
    }
  }
}

TEST_CASE("alexander_polynomial is invariant under random tietze sequences") {
  for (unsigned seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(seed);
    const Presentation P0 = seed % 3 == 0 ? testing::trefoil_wirtinger()
                            : seed % 3 == 1 ? testing::figure_eight_wirtinger()
                                            : pd_knot("three_twist.pd");
    const LP d0 = alexander_polynomial(P0);
    Presentation P = P0;
    for (int k = 0; k < 15; ++k) P = tietze_apply(P, random_move(P, rng));
    const std::size_t row = usable_row(P);
    REQUIRE(row > 0);
    CHECK(alexander(P, row).polynomial == d0);
  }
}

TEST_CASE("mahler_measure examples") {
  CHECK(mahler_measure(LP::from_coefficients({-2, 1})) == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(mahler_measure(LP::from_coefficients({1, -1, 1})) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(mahler_measure(LP(1)) == 1.0);
  CHECK(mahler_measure(LP(-3)) == 3.0);
  CHECK(mahler_measure(LP::from_coefficients({1, -3, 1})) == Catch::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-12));
  CHECK(mahler_measure(LP::from_coefficients({2, -5, 2})) == Catch::Approx(4.0).epsilon(1e-12));
  // Shifts are units.
  CHECK(mahler_measure(LP::from_coefficients({-2, 1}, -3)) == Catch::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(mahler_measure(LP()), InputError);
}

TEST_CASE("mahler_measure is multiplicative") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const LP f = random_poly(rng), g = random_poly(rng);
    const double mf = mahler_measure(f), mg = mahler_measure(g);
    CHECK(mahler_measure(f * g) == Catch::Approx(mf * mg).epsilon(1e-7));
    CHECK(mf >= std::abs(f.leading().convert_to<double>()) - 1e-12);
  }
}
