#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace l2alex;

namespace {

const std::vector<std::string> AB = {"a", "b"};

IntFreeRing ring(const std::string& text, std::span<const std::string> alphabet = AB) {
  const ComplexFreeRing x = parse_ring_element(text, alphabet);
  IntFreeRing out;
  for (const auto& [w, c] : x.terms()) out.add(w, static_cast<long long>(c.real()));
  return out;
}

OracleBinding trefoil_binding() {
  auto b = find_torus_binding(testing::trefoil_2gen(), 2, 3);
  REQUIRE(b);
  return *b;
}

ComplexFreeRing random_element(std::mt19937_64& rng, std::size_t k) {
  std::uniform_int_distribution<int> coef(-3, 3), terms(1, 4);
  ComplexFreeRing x;
  const int n = terms(rng);
  for (int i = 0; i < n; ++i) x.add(testing::random_word(rng, k, 5), std::complex<double>(coef(rng), 0));
  return x;
}

}  // namespace

TEST_CASE("fox_derivative defining rules") {
  const Word a = parse_word("a", AB), A = parse_word("A", AB);
  CHECK(fox_derivative(a, 0) == IntFreeRing(1LL));
  CHECK(fox_derivative(a, 1).is_zero());
  CHECK(fox_derivative(Word(), 0).is_zero());
  CHECK(fox_derivative(A, 0) == IntFreeRing(A, -1));
  CHECK(fox_derivative(parse_word("a b a B A B", AB), 0) == ring("1 + a b - a b a B A"));
}

TEST_CASE("fox_derivative product and inverse rules on random words") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const Word u = testing::random_word(rng, 3, 8), v = testing::random_word(rng, 3, 8);
    for (std::uint32_t g = 0; g < 3; ++g) {
      CHECK(fox_derivative(u * v, g) == fox_derivative(u, g) + IntFreeRing(u) * fox_derivative(v, g));
      CHECK(fox_derivative(u.inverse(), g) == -(IntFreeRing(u.inverse()) * fox_derivative(u, g)));
    }
  }
}

TEST_CASE("fox_matrix of the two-generator trefoil reduces in the group") {
  const Presentation P = testing::trefoil_2gen();
  const FoxMatrix F = fox_matrix(P);
  REQUIRE(F.rows() == 2);
  REQUIRE(F.cols() == 1);
  CHECK(F.entries[0][0] == ring("1 + a b - a b a B A"));
  CHECK(F.entries[1][0] == ring("a - a b a B - a b a B A B"));

  const OracleBinding b = trefoil_binding();
  CHECK(to_group_ring(F.entries[0][0], b) == to_group_ring(ring("1 - b + a b"), b));
  CHECK(to_group_ring(F.entries[1][0], b) == to_group_ring(ring("-1 + a - b a"), b));
  const FoxMatrix F1 = delete_row(F, 1);
  REQUIRE(F1.rows() == 1);
  CHECK(F1.row_labels == std::vector<std::string>{"b"});
  CHECK(to_group_ring(F1.entries[0][0], b) == to_group_ring(ring("-1 + a - b a"), b));
  CHECK_THROWS_AS(delete_row(F, 0), InputError);
  CHECK_THROWS_AS(delete_row(F, 3), InputError);
}

TEST_CASE("fox_matrix of the unknot") {
  const Presentation U = testing::unknot_2gen();
  const FoxMatrix F = fox_matrix(U);
  CHECK(F.entries[0][0] == IntFreeRing(1LL));
  CHECK(F.entries[1][0] == IntFreeRing(U.word("g H"), -1));
  const auto b = kb_binding(U);
  REQUIRE(b);
  CHECK(to_group_ring(F.entries[1][0], *b) == GroupRingElement::scalar(b->oracle, -1.0));
  CHECK(to_group_ring(delete_row(F, 1).entries[0][0], *b) == GroupRingElement::scalar(b->oracle, -1.0));

  Presentation empty;
  empty.generators = {"a", "b", "c"};
  const FoxMatrix E = fox_matrix(empty);
  CHECK(E.rows() == 3);
  CHECK(E.cols() == 0);
}

TEST_CASE("twist examples") {
  const AbelianizationMap ones{{1, 1}};
  const ComplexFreeRing x = twist(ring("1 - b + a b"), ones, 2.5);
  CHECK(x == parse_ring_element("1 - 2.5 b + 6.25 a b", AB));
  const IntFreeRing y = ring("1 - b + a b - 3 a B a");
  CHECK(twist(y, ones, 1.0) == parse_ring_element("1 - b + a b - 3 a B a", AB));
  CHECK_THROWS_AS(twist(y, ones, 0.0), InputError);
  CHECK_THROWS_AS(twist(y, ones, -1.0), InputError);

  const Presentation S = cable_presentation(testing::unknot_2gen(), {2, 3}, Word()).presentation;
  const Word lambda = S.word("lambda");
  CHECK(twist(IntFreeRing(lambda), abelianization(S), 7.0) == ComplexFreeRing(lambda));
}

TEST_CASE("twist is an algebra map and composes multiplicatively") {
  std::mt19937_64 rng(17);
  const AbelianizationMap alpha{{1, -2, 3}};
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexFreeRing x = random_element(rng, 3), y = random_element(rng, 3);
    const double t = 0.5 + 0.1 * (trial % 20), s = 1.7;
    const ComplexFreeRing lhs = twist(x * y, alpha, t), rhs = twist(x, alpha, t) * twist(y, alpha, t);
    for (const auto& [w, c] : lhs.terms()) CHECK(std::abs(c - rhs.coefficient(w)) <= 1e-9 * (1 + std::abs(c)));
    CHECK(lhs.size() == rhs.size());
    const ComplexFreeRing tt = twist(twist(x, alpha, t), alpha, s), ts = twist(x, alpha, t * s);
    for (const auto& [w, c] : tt.terms()) CHECK(std::abs(c - ts.coefficient(w)) <= 1e-9 * (1 + std::abs(c)));
  }
}

TEST_CASE("fundamental formula in the free ring") {
  for (const Presentation& P : {testing::trefoil_2gen(), testing::trefoil_wirtinger(), testing::figure_eight_wirtinger(),
                                torus_pattern_presentation({2, 5})}) {
    for (const Word& r : P.relators) CHECK(fox_expansion(P, r) == IntFreeRing(r) - IntFreeRing(1LL));
  }
}

TEST_CASE("fundamental formula residual vanishes in the group") {
  CHECK(fundamental_formula_residual(testing::trefoil_2gen(), trefoil_binding()).zero());
  const Presentation U = testing::unknot_2gen();
  const FormulaResidual ru = fundamental_formula_residual(U, *kb_binding(U));
  CHECK(ru.zero());
  CHECK_FALSE(ru.partial);
  const Presentation T = testing::trefoil_wirtinger();
  const auto bt = find_torus_binding(T, 2, 3);
  REQUIRE(bt);
  CHECK(fundamental_formula_residual(T, *bt).zero());
  for (const auto& r : abelianized_residual(testing::figure_eight_wirtinger())) CHECK(r.empty());
}
