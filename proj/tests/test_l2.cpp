#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "support.hpp"

using namespace l2alex;

namespace {

using K = KnotExpr;

// Independent fold over the tree with an explicit stack.
long long fold_exponent(const K::Ptr& root) {
  std::vector<std::pair<const K*, bool>> stack{{root.get(), false}};
  std::vector<long long> values;
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    if (!expanded) {
      stack.push_back({node, true});
      for (const auto& c : node->children) stack.push_back({c.get(), false});
      continue;
    }
    const long long torus = (std::abs(node->p) - 1) * static_cast<long long>(std::abs(node->q) - 1);
    switch (node->kind) {
      case K::Kind::unknot: values.push_back(0); break;
      case K::Kind::torus: values.push_back(node->kind == K::Kind::torus ? torus : 0); break;
      case K::Kind::sum: {
        const long long a = values.back();
        values.pop_back();
        values.back() += a;
        break;
      }
      case K::Kind::cable: values.back() = std::abs(node->p) * values.back() + torus; break;
      case K::Kind::mirror:
      case K::Kind::inverse: break;
    }
  }
  return values.back();
}

// Rewrites trivial pieces away; true if the tree collapses to the unknot.
// Beyond Cable(+-1, q, X) -> X and Sum(Unknot, X) -> X this needs the torus
// knots T(p, +-1), T(+-1, q) and T(+-1, 0), which are unknots, and
// Cable(p, q, Unknot) -> Torus(p, q).
bool rewrites_to_unknot(const K::Ptr& k) {
  switch (k->kind) {
    case K::Kind::unknot: return true;
    case K::Kind::torus: return std::abs(k->p) <= 1 || std::abs(k->q) <= 1;
    case K::Kind::sum: return rewrites_to_unknot(k->children[0]) && rewrites_to_unknot(k->children[1]);
    case K::Kind::cable:
      if (std::abs(k->p) == 1) return rewrites_to_unknot(k->children[0]);
      return rewrites_to_unknot(k->children[0]) && std::abs(k->q) <= 1;
    case K::Kind::mirror:
    case K::Kind::inverse: return rewrites_to_unknot(k->children[0]);
  }
  return false;
}

std::pair<int, int> random_pq(std::mt19937_64& rng) {
  static const int ps[] = {1, -1, 2, -2, 3, 5, -3};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(ps) - 1);
  std::uniform_int_distribution<int> qd(-9, 9);
  const int p = ps[pick(rng)];
  int q = qd(rng);
  while (std::gcd(p, q) != 1) q = qd(rng);
  return {p, q};
}

K::Ptr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 5 : 1);
  switch (kind(rng)) {
    case 0: return K::unknot();
    case 1: {
      const auto [p, q] = random_pq(rng);
      return K::torus(p, q);
    }
    case 2: return K::sum(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 3: {
      const auto [p, q] = random_pq(rng);
      return K::cable(p, q, random_tree(rng, depth - 1));
    }
    case 4: return K::mirror(random_tree(rng, depth - 1));
    default: return K::inverse(random_tree(rng, depth - 1));
  }
}

// Integer m minimizing |log a - log b - m log t|, with the residual.
std::pair<long long, double> unit_class_gap(double log_a, double log_b, double t) {
  const double m = std::round((log_a - log_b) / std::log(t));
  return {static_cast<long long>(m), std::abs(log_a - log_b - m * std::log(t))};
}

L2Params fast_params() {
  L2Params p;
  p.probe_radii = {};
  return p;
}

}  // namespace

TEST_CASE("exact_exponent examples") {
  CHECK(exact_exponent(*parse_knot_expr("torus(2,7)")) == 6);
  CHECK(exact_exponent(*parse_knot_expr("torus(3,4)")) == 6);
  CHECK(exact_exponent(*parse_knot_expr("torus(2,-1)")) == 0);
  CHECK(exact_exponent(*parse_knot_expr("sum(torus(2,3),torus(2,3))")) == 4);
  CHECK(exact_exponent(*parse_knot_expr("cable(2,3,torus(2,3))")) == 6);
  CHECK(exact_exponent(*parse_knot_expr("cable(-3,2,mirror(torus(2,5)))")) == 3 * 4 + 2);
  CHECK(exact_exponent(*parse_knot_expr("inverse(sum(torus(-2,3),unknot))")) == 2);
}

TEST_CASE("exact_value examples") {
  for (double t : {0.1, 0.5, 1.0, 2.0, 7.5}) CHECK(exact_value(*K::unknot(), t).value == 1.0);
  const L2Value v = exact_value(*K::torus(2, 3), 2.0);
  CHECK(v.value == 4.0);
  CHECK(v.exponent == 2);
  CHECK(v.log_value == Catch::Approx(2 * std::log(2.0)));
  CHECK(exact_value(*K::torus(2, 3), 0.5).value == 1.0);
  CHECK(exact_value(*K::torus(2, 7), 2.0).value == 64.0);
  CHECK_THROWS_AS(exact_value(*K::unknot(), 0.0), InputError);
  CHECK_THROWS_AS(exact_value(*K::unknot(), -1.0), InputError);
}

TEST_CASE("exact_exponent follows the sum and cable recursion on random trees") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const K::Ptr k = random_tree(rng, 4);
    const long long n = exact_exponent(*k);
    CHECK(n == fold_exponent(k));
    CHECK(n >= 0);
    CHECK(exact_value(*k, 1.0).value == 1.0);
    CHECK(exact_value(*k, 0.3).value == 1.0);
    CHECK(exact_exponent(*parse_knot_expr(format_knot_expr(*k))) == n);
  }
}

TEST_CASE("detect_unknot agrees with the trivial-piece rewrite") {
  CHECK(detect_unknot(*parse_knot_expr("cable(-1,5,unknot)")));
  CHECK_FALSE(detect_unknot(*parse_knot_expr("sum(unknot,torus(2,3))")));
  CHECK(detect_unknot(*parse_knot_expr("unknot")));
  CHECK(detect_unknot(*parse_knot_expr("cable(2,1,unknot)")));
  CHECK_FALSE(detect_unknot(*parse_knot_expr("cable(2,1,torus(2,3))")));
  std::mt19937_64 rng(103);
  int unknots = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const K::Ptr k = random_tree(rng, 4);
    CHECK(detect_unknot(*k) == rewrites_to_unknot(k));
    CHECK(detect_unknot(*k) == (exact_exponent(*k) == 0));
    unknots += detect_unknot(*k);
  }
  // Both outcomes are exercised.
  CHECK(unknots > 10);
  CHECK(unknots < 190);
}

TEST_CASE("mirror and inverse laws") {
  const MirrorInverseReport t23 = mirror_inverse_laws(K::torus(2, 3), 2.0);
  CHECK(t23.mirror.lhs == 1.0);
  CHECK(t23.mirror.rhs == 4.0);
  CHECK(t23.mirror.unit_exponent == 2);
  CHECK(t23.mirror.holds);
  CHECK(t23.inverse.holds);
  const MirrorInverseReport u = mirror_inverse_laws(K::unknot(), 5.0);
  CHECK(u.mirror.lhs == 1.0);
  CHECK(u.mirror.rhs == 1.0);
  CHECK(u.mirror.unit_exponent == 0);
  const MirrorInverseReport s = mirror_inverse_laws(parse_knot_expr("sum(torus(2,3),torus(2,5))"), 3.0);
  CHECK(s.mirror.unit_exponent == 6);
  CHECK(s.inverse.unit_exponent == 6);
  CHECK(s.mirror.holds);
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 50; ++trial) {
    const MirrorInverseReport r = mirror_inverse_laws(random_tree(rng, 3), 0.25 + trial * 0.1);
    CHECK(r.mirror.holds);
    CHECK(r.inverse.holds);
  }
  CHECK_THROWS_AS(mirror_inverse_laws(K::unknot(), 0.0), InputError);
}

TEST_CASE("knot expression grammar") {
  CHECK(format_knot_expr(*parse_knot_expr(" Cable( 2 , -3 , sum(unknot, torus(3,4)) ) ")) ==
        "cable(2,-3,sum(unknot,torus(3,4)))");
  for (const char* bad : {"", "torus(2,4)", "torus(2,3", "foo", "cable(0,1,unknot)", "unknot x", "sum(unknot)",
                          "torus(2,x)", "torus(99999999999,1)", "mirror()"}) {
    CHECK_THROWS_AS(parse_knot_expr(bad), InputError);
  }
  CHECK_THROWS_AS(exact_exponent(*parse_knot_expr("cable(46341,2,cable(46341,2,cable(46341,2,cable(46341,2,"
                                                  "torus(46341,46342))))))")),
                  InputError);
}

TEST_CASE("numeric path on the unknot is exactly one") {
  const Presentation U = testing::unknot_2gen();
  const auto b = kb_binding(U);
  REQUIRE(b);
  for (double t : {0.3, 1.0, 2.0, 5.0}) {
    for (bool pivots : {true, false}) {
      L2Params par;
      par.reduce_pivots = pivots;
      const L2Value v = l2_from_presentation(U, t, *b, par);
      CHECK(v.value == 1.0);
      REQUIRE(v.estimate);
      CHECK(v.estimate->exact);
      REQUIRE(v.probe);
      CHECK(v.probe->verdict == ProbeVerdict::no_evidence_of_kernel);
    }
  }
  CHECK_THROWS_AS(l2_from_presentation(U, 0.0, *b), InputError);
}

TEST_CASE("numeric path on the trefoil matches the torus formula") {
  const Presentation T = testing::trefoil_2gen();
  const auto b = find_torus_binding(T, 2, 3);
  REQUIRE(b);
  const L2Value v2 = l2_from_presentation(T, 2.0, *b, fast_params());
  CHECK(std::abs(v2.value - 4.0) <= 0.15 * 4.0);
  const L2Value vh = l2_from_presentation(T, 0.5, *b, fast_params());
  CHECK(std::abs(vh.value - 1.0) <= 0.15);
  CHECK(v2.normalization_exponent == 0);

  // A binding that does not kill the relator is refused.
  OracleBinding wrong = *b;
  wrong.images[0] = Word::generator(0);
  REQUIRE_FALSE(check_binding(T, wrong).homomorphism);
  CHECK_THROWS_AS(l2_from_presentation(T, 2.0, wrong), OracleError);
}

TEST_CASE("numeric path on the (2,3)-cable of the unknot") {
  const Presentation C = cable_presentation(testing::unknot_2gen(), {2, 3}, Word()).presentation;
  const OracleSearch s = find_oracle(C);
  REQUIRE(s.binding);
  const L2Value v = l2_from_presentation(C, 2.0, *s.binding, fast_params());
  CHECK(v.normalization_exponent == std::llabs(abelianization(C)[0]) - 1);
  CHECK(std::abs(v.value - 4.0) <= 0.15 * 4.0);
}

TEST_CASE("numeric value is a unit-class invariant of tietze moves") {
  const Presentation T = testing::trefoil_2gen();
  const auto b = find_torus_binding(T, 2, 3);
  REQUIRE(b);
  // Conjugation and inversion change the minor by units; the permutation
  // switches the deleted row from a to b.
  Presentation Q = T;
  for (const char* line : {"Ib 1 a", "Ia 1", "Ib 1 B", "III b a"}) Q = tietze_apply(Q, parse_move(line, Q));
  REQUIRE(Q.generators == std::vector<std::string>{"b", "a"});
  OracleBinding bq;
  bq.oracle = b->oracle;
  bq.images = {b->images[1], b->images[0]};
  REQUIRE(check_binding(Q, bq).homomorphism);
  for (double t : {0.5, 2.0}) {
    const L2Value v0 = l2_from_presentation(T, t, *b, fast_params());
    const L2Value v1 = l2_from_presentation(Q, t, bq, fast_params());
    const auto [m, gap] = unit_class_gap(v1.log_value, v0.log_value, t);
    CHECK(gap <= 0.15);
    CHECK(std::abs(m) <= 4);
  }
}

TEST_CASE("presentation_of builds marked presentations with the right Alexander polynomial") {
  const LaurentPolynomial tref = LaurentPolynomial::from_coefficients({1, -1, 1});
  CHECK(alexander_polynomial(presentation_of(*K::unknot())) == LaurentPolynomial(1));
  CHECK(alexander_polynomial(presentation_of(*K::torus(2, 3))) == tref);
  CHECK(alexander_polynomial(presentation_of(*K::mirror(K::torus(2, 3)))) == tref);
  CHECK(alexander_polynomial(presentation_of(*parse_knot_expr("sum(torus(2,3),inverse(torus(2,3)))"))) == tref * tref);
  CHECK(alexander_polynomial(presentation_of(*K::torus(3, 4))) == torus_alexander_polynomial(3, 4));
  CHECK(torus_alexander_polynomial(2, 5) == LaurentPolynomial::from_coefficients({1, -1, 1, -1, 1}));
  for (const char* e : {"torus(2,3)", "cable(2,5,torus(2,3))", "sum(torus(2,3),unknot)", "mirror(torus(3,4))"}) {
    const Presentation P = presentation_of(*parse_knot_expr(e));
    CHECK(P.deficiency() == 1);
    REQUIRE(P.mark(MarkRole::meridian));
    REQUIRE(P.mark(MarkRole::longitude));
    CHECK(std::llabs(abelianization(P)(*P.mark(MarkRole::meridian))) == 1);
    CHECK(abelianization(P)(*P.mark(MarkRole::longitude)) == 0);
  }
}
