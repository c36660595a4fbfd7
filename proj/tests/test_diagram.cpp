#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace l2alex;

namespace {

// det(V - t V^T) by Laplace expansion; test-side oracle independent of Fox
// calculus.
LaurentPolynomial seifert_alexander(const std::vector<std::vector<int>>& V) {
  const std::size_t n = V.size();
  std::vector<std::vector<LaurentPolynomial>> M(n, std::vector<LaurentPolynomial>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      M[i][j] = LaurentPolynomial(V[i][j]) - LaurentPolynomial::monomial(1, V[j][i]);
  std::function<LaurentPolynomial(std::vector<std::vector<LaurentPolynomial>>)> det =
      [&](std::vector<std::vector<LaurentPolynomial>> m) -> LaurentPolynomial {
    if (m.size() == 1) return m[0][0];
    LaurentPolynomial s;
    for (std::size_t c = 0; c < m.size(); ++c) {
      std::vector<std::vector<LaurentPolynomial>> minor;
      for (std::size_t r = 1; r < m.size(); ++r) {
        minor.emplace_back();
        for (std::size_t k = 0; k < m.size(); ++k)
          if (k != c) minor.back().push_back(m[r][k]);
      }
      const LaurentPolynomial term = m[0][c] * det(minor);
      if (c % 2) s -= term; else s += term;
    }
    return s;
  };
  return det(M).normalized();
}

Diagram pd(const std::string& name) { return parse_pd(testing::data_file(name)); }

const std::vector<std::string> kKnots = {"trefoil.pd", "figure_eight.pd", "unknot.pd", "cinquefoil.pd",
                                         "three_twist.pd", "stevedore.pd"};

}  // namespace

TEST_CASE("parse_pd examples") {
  const Diagram D = parse_pd("X 1 4 2 5 / X 3 6 4 1 / X 5 2 6 3");
  CHECK(D.crossings.size() == 3);
  CHECK(D.edge_count() == 6);
  const Diagram U = parse_pd("X 1 1 2 2");
  CHECK(U.crossings.size() == 1);
  CHECK(U.edge_count() == 2);
  CHECK_THROWS_AS(parse_pd("X 1 2 3 4 / X 7 3 4 1"), InputError);
  CHECK_THROWS_AS(parse_pd(""), InputError);
  CHECK_THROWS_AS(parse_pd("X 1 2 x 4"), InputError);
  CHECK(pd("trefoil.pd").writhe() == 3);
  CHECK(pd("figure_eight.pd").writhe() == 0);
}

TEST_CASE("wirtinger examples") {
  const Presentation U = wirtinger(pd("unknot.pd"));
  CHECK(U.rank() == 2);
  REQUIRE(U.relators.size() == 1);
  const Word r = U.relators[0];
  CHECK((r == U.word("a B") || r == U.word("b A") || r == U.word("B a") || r == U.word("A b")));

  const Presentation T = testing::trefoil_wirtinger();
  CHECK(T.rank() == 3);
  CHECK(T.relators.size() == 2);
  for (const std::string& s : validate_wirtinger(T).relator_shapes) CHECK(s == "conjugation");
  CHECK(alexander_polynomial(T) == LaurentPolynomial::from_coefficients({1, -1, 1}));

  const Presentation F = testing::figure_eight_wirtinger();
  CHECK(F.rank() == 4);
  CHECK(F.relators.size() == 3);
  CHECK(alexander_polynomial(F) == LaurentPolynomial::from_coefficients({1, -3, 1}));

  CHECK_THROWS_AS(wirtinger(pd("hopf.pd")), InputError);
}

TEST_CASE("Alexander polynomials from PD agree with Seifert matrices") {
  CHECK(alexander_polynomial(testing::trefoil_wirtinger()) == seifert_alexander({{-1, 1}, {0, -1}}));
  CHECK(alexander_polynomial(testing::figure_eight_wirtinger()) == seifert_alexander({{-1, 1}, {0, 1}}));
  // Genus-one twist knots with Seifert matrix [[-1,1],[0,n]].
  CHECK(alexander_polynomial(wirtinger(pd("three_twist.pd"))) == seifert_alexander({{-1, 1}, {0, -2}}));
  CHECK(alexander_polynomial(wirtinger(pd("stevedore.pd"))) == seifert_alexander({{-1, 1}, {0, 2}}));
  CHECK(alexander_polynomial(wirtinger(pd("cinquefoil.pd"))) ==
        LaurentPolynomial::from_coefficients({1, -1, 1, -1, 1}));
}

TEST_CASE("wirtinger presentations have deficiency one and all-ones abelianization") {
  for (const std::string& k : kKnots) {
    for (const Diagram& D : {pd(k), mirror_diagram(pd(k))}) {
      const Presentation P = wirtinger(D);
      CHECK(P.deficiency() == 1);
      CHECK(validate_wirtinger(P).pass);
      for (long long v : abelianization(P).values) CHECK(v == 1);
    }
  }
}

TEST_CASE("longitude words have abelianization weight zero") {
  CHECK(wirtinger(parse_pd("X 1 1 2 2")).mark(MarkRole::longitude)->empty());
  for (const std::string& k : kKnots) {
    const Diagram D = pd(k);
    const Presentation P = wirtinger(D);
    CHECK(abelianization(P)(longitude_word(D)) == 0);
    CHECK(*P.mark(MarkRole::longitude) == longitude_word(D));
  }
}

TEST_CASE("trefoil longitude commutes with the meridian and the dropped relator holds") {
  const Diagram D = pd("trefoil.pd");
  const Presentation P = wirtinger(D);
  const auto b = find_torus_binding(P, 2, 3);
  REQUIRE(b);
  const Word mu = *P.mark(MarkRole::meridian), lambda = *P.mark(MarkRole::longitude);
  CHECK(b->image(commutator(mu, lambda)).empty());
  CHECK_FALSE(b->image(lambda).empty());

  const Presentation all = wirtinger(D, true);
  REQUIRE(all.relators.size() == 3);
  CHECK(abelianization(P)(all.relators.back()) == 0);
  CHECK(b->image(all.relators.back()).empty());
}

TEST_CASE("mirror presentation") {
  const MirrorResult U = mirror_presentation(testing::unknot_2gen());
  CHECK(U.presentation.generators == std::vector<std::string>{"G", "H"});
  CHECK(U.presentation.str(U.presentation.relators[0]) == "G H^-1");
  for (long long v : U.alpha.values) CHECK(v == -1);

  const Presentation T = testing::trefoil_wirtinger();
  const MirrorResult M = mirror_presentation(T);
  const MirrorResult MM = mirror_presentation(M.presentation);
  CHECK(MM.presentation == T);
  for (std::size_t i = 0; i < T.rank(); ++i) CHECK(MM.correspondence[M.correspondence[i]] == i);
  CHECK(alexander_polynomial(M.presentation) == alexander_polynomial(T));
  CHECK_THROWS_AS(mirror_presentation(testing::trefoil_2gen()), InputError);

  const Diagram D = pd("trefoil.pd");
  CHECK(mirror_diagram(D).writhe() == -3);
  CHECK(alexander_polynomial(wirtinger(mirror_diagram(D))) == alexander_polynomial(T));
}
