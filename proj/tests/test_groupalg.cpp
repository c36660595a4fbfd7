#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "support.hpp"

using namespace l2alex;

namespace {

using Mat2 = Eigen::Matrix2cd;

// Reduced Burau representation of B3 at a generic complex parameter. It is
// faithful on B3, and <x, y | x^2 = y^3> ~ B3 via x = s1 s2 s1, y = s1 s2, so it
// decides the word problem of TorusAmalgam(2,3) independently of the syllable
// normal form.
struct Burau {
  Complex t{0.83, 0.61};
  Mat2 x, y;
  Burau() {
    Mat2 s1, s2;
    s1 << -t, 1, 0, 1;
    s2 << 1, 0, t, -t;
    x = s1 * s2 * s1;
    y = s1 * s2;
  }
  Mat2 eval(const Word& w) const {
    Mat2 m = Mat2::Identity();
    for (const Letter& l : w.letters()) {
      const Mat2& g = l.gen == 0 ? x : y;
      m = m * (l.sign > 0 ? g : Mat2(g.inverse()));
    }
    return m;
  }
  bool equal(const Word& u, const Word& v) const { return (eval(u) - eval(v)).norm() < 1e-8; }
};

GroupRingElement random_element(std::mt19937_64& rng, const OraclePtr& o, std::size_t k) {
  std::uniform_real_distribution<double> c(-2, 2);
  std::uniform_int_distribution<int> n(1, 4);
  GroupRingElement x(o);
  for (int i = n(rng); i > 0; --i) x.add(testing::random_word(rng, k, 5), Complex(c(rng), c(rng)));
  return x;
}

bool close(const GroupRingElement& a, const GroupRingElement& b, double tol = 1e-9) {
  GroupRingElement d = a - b;
  d.prune(tol);
  return d.is_zero();
}

Presentation two_gen(const std::string& g, const std::string& rels) {
  return parse_presentation("gens: " + g + "\nrels: " + rels + "\n");
}

}  // namespace

TEST_CASE("normal_form examples") {
  const auto F = NormalFormOracle::free({"a", "b"});
  CHECK(F.normal_form(parse_word("a b B", F.alphabet())) == Word::generator(0));
  const auto A = NormalFormOracle::free_abelian({"a", "b"});
  CHECK(A.normal_form(parse_word("b a", A.alphabet())) == parse_word("a b", A.alphabet()));
  CHECK(A.normal_form(parse_word("b A a B a", A.alphabet())) == Word::generator(0));
  const auto T = NormalFormOracle::torus_amalgam(2, 3);
  CHECK(T.normal_form(parse_word("x x", T.alphabet())) == T.normal_form(parse_word("y y y", T.alphabet())));
  CHECK(T.is_identity(parse_word("x x Y Y Y", T.alphabet())));
  CHECK_FALSE(T.is_identity(parse_word("x y X Y", T.alphabet())));
  CHECK_THROWS_AS(NormalFormOracle::torus_amalgam(2, 4), InputError);
  CHECK_THROWS_AS(NormalFormOracle::torus_amalgam(0, 3), InputError);
  CHECK_THROWS_AS(F.normal_form(Word::generator(2)), InputError);
}

TEST_CASE("normal_form is idempotent and respects products") {
  std::mt19937_64 rng(23);
  const std::vector<NormalFormOracle> oracles = {NormalFormOracle::free({"a", "b"}),
                                                 NormalFormOracle::free_abelian({"a", "b"}),
                                                 NormalFormOracle::torus_amalgam(2, 3),
                                                 NormalFormOracle::torus_amalgam(3, 5)};
  for (const auto& o : oracles) {
    for (int trial = 0; trial < 300; ++trial) {
      const Word u = testing::random_word(rng, 2, 12), v = testing::random_word(rng, 2, 12);
      const Word nu = o.normal_form(u);
      CHECK(o.normal_form(nu) == nu);
      CHECK(o.normal_form(u * v) == o.normal_form(nu * o.normal_form(v)));
      CHECK(o.is_identity(u * u.inverse()));
      CHECK(o.alpha(nu) == o.alpha(u));
    }
  }
}

TEST_CASE("torus amalgam normal form agrees with the Burau representation") {
  const auto T = NormalFormOracle::torus_amalgam(2, 3);
  const Burau rho;
  CHECK(rho.equal(parse_word("x x", T.alphabet()), parse_word("y y y", T.alphabet())));
  std::mt19937_64 rng(31);
  int equal_pairs = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Word u = testing::random_word(rng, 2, 10);
    Word v = testing::random_word(rng, 2, 10);
    // Half the pairs are equal in the group by construction.
    if (trial % 2) {
      const Word c = testing::random_word(rng, 2, 4);
      const Word r = trial % 4 == 1 ? parse_word("x x Y Y Y", T.alphabet()) : parse_word("Y Y Y x x", T.alphabet());
      v = u * c * r * c.inverse();
    }
    const bool nf_equal = T.normal_form(u) == T.normal_form(v);
    CHECK(nf_equal == rho.equal(u, v));
    equal_pairs += nf_equal;
  }
  CHECK(equal_pairs >= 1000);
}

TEST_CASE("kb_complete examples") {
  const Presentation U = two_gen("g h", "g H");
  const KbResult r = kb_complete(U);
  REQUIRE(r.completed);
  CHECK(r.system.confluent());
  const auto o = NormalFormOracle::rewriting(U.generators, r.system);
  CHECK(o.certified());
  CHECK(o.normal_form(U.word("h")) == U.word("g"));
  CHECK(o.normal_form(U.word("H")) == U.word("G"));
  CHECK(o.normal_form(U.word("h g H G")).empty());

  // Budget exhaustion yields the partial rules and an uncertified oracle.
  KbOptions tiny;
  tiny.max_rules = 6;
  const KbResult f = kb_complete(testing::trefoil_2gen(), tiny);
  CHECK_FALSE(f.completed);
  CHECK_FALSE(f.system.confluent());
  CHECK_FALSE(f.system.rules().empty());
  CHECK_FALSE(NormalFormOracle::rewriting(testing::trefoil_2gen().generators, f.system).certified());
  CHECK_FALSE(f.diagnostics.empty());
}

TEST_CASE("partial completion of the trefoil group is sound") {
  // <x, y | x^2 y^-3> does not complete under weighted shortlex within the
  // budget; every partial rule must still hold in the group.
  const Presentation T = two_gen("x y", "x x Y Y Y");
  KbOptions opt;
  opt.max_rules = 200;
  const KbResult r = kb_complete(T, opt);
  CHECK_FALSE(r.completed);
  CHECK_FALSE(NormalFormOracle::rewriting(T.generators, r.system).certified());
  const Burau rho;
  for (const Rule& rule : r.system.rules()) CHECK(rho.equal(from_codes(rule.lhs), from_codes(rule.rhs)));
  const auto o = NormalFormOracle::rewriting(T.generators, r.system);
  CHECK(o.is_identity(T.word("x x Y Y Y")));
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const Word u = testing::random_word(rng, 2, 10);
    CHECK(rho.equal(o.normal_form(u), u));
  }
}

TEST_CASE("completed rewriting systems reduce relators and agree with known oracles") {
  // Z^2 = <a, b | a b A B>.
  const Presentation Z2 = two_gen("a b", "a b A B");
  const auto b = kb_binding(Z2);
  REQUIRE(b);
  const auto ab = NormalFormOracle::free_abelian({"a", "b"});
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const Word u = testing::random_word(rng, 2, 10), v = testing::random_word(rng, 2, 10);
    CHECK((b->image(u) == b->image(v)) == (ab.normal_form(u) == ab.normal_form(v)));
  }
  for (const Presentation& P : {Z2, testing::unknot_2gen()}) {
    const auto bp = kb_binding(P);
    REQUIRE(bp);
    CHECK(check_binding(P, *bp).homomorphism);
    CHECK(check_binding(P, *bp).certified);
  }
}

TEST_CASE("group ring examples") {
  const OraclePtr F = make_oracle(NormalFormOracle::free({"a", "b"}));
  const Word g = Word::generator(0), b = Word::generator(1);
  const auto e = GroupRingElement::scalar(F, 1.0);
  CHECK(gr_mul(GroupRingElement::of_word(F, g), GroupRingElement::of_word(F, g.inverse())) == e);
  GroupRingElement x = e;
  x.add(b, -1.0);
  x.add(g * b, 1.0);
  CHECK(gr_mul(x, e) == x);
  CHECK(gr_mul(e, x) == x);

  const OraclePtr T = make_oracle(NormalFormOracle::torus_amalgam(2, 3));
  const auto tx = GroupRingElement::of_word(T, Word::generator(0)), ty = GroupRingElement::of_word(T, Word::generator(1));
  CHECK(tx * tx == ty * ty * ty);

  GroupRingElement s = GroupRingElement::scalar(F, 2.0);
  s.add(g, Complex(0, 1));
  GroupRingElement s_star = GroupRingElement::scalar(F, 2.0);
  s_star.add(g.inverse(), Complex(0, -1));
  CHECK(gr_star(s) == s_star);
  CHECK(gr_star(GroupRingElement::of_word(F, g)) * GroupRingElement::of_word(F, g) == e);

  const double t = 1.7;
  GroupRingElement tw = e;
  tw.add(g, -t);
  GroupRingElement tw_star = e;
  tw_star.add(g.inverse(), -t);
  CHECK(gr_star(tw) == tw_star);

  GroupRingElement tr = GroupRingElement::scalar(F, 2.0);
  tr.add(g, 3.0);
  CHECK(trace(tr) == Complex(2.0));
  CHECK(trace(GroupRingElement::of_word(F, g)) == Complex(0.0));
  CHECK(trace(GroupRingElement::of_word(T, Word::generator(0, 5))) == Complex(0.0));

  const OraclePtr F2 = make_oracle(NormalFormOracle::free({"a", "b"}));
  CHECK_THROWS_AS(gr_mul(e, GroupRingElement::scalar(F2, 1.0)), InputError);
  CHECK_THROWS_AS(trace(GroupRingMatrix(F, 2, 3)), InputError);
}

TEST_CASE("group ring axioms and involution laws") {
  std::mt19937_64 rng(47);
  for (const OraclePtr& o : {make_oracle(NormalFormOracle::free({"a", "b"})), make_oracle(NormalFormOracle::torus_amalgam(2, 3)),
                             make_oracle(NormalFormOracle::free_abelian({"a", "b"}))}) {
    for (int trial = 0; trial < 60; ++trial) {
      const auto x = random_element(rng, o, 2), y = random_element(rng, o, 2), z = random_element(rng, o, 2);
      CHECK(close((x * y) * z, x * (y * z)));
      CHECK(close(x * (y + z), x * y + x * z));
      CHECK(close((x + y) * z, x * z + y * z));
      CHECK(close(gr_star(x * y), gr_star(y) * gr_star(x)));
      CHECK(gr_star(gr_star(x)) == x);
      const Complex tss = trace(gr_star(x) * x);
      CHECK(std::abs(tss.imag()) < 1e-9);
      CHECK(std::abs(tss.real() - x.l2_norm_squared()) < 1e-9 * (1 + tss.real()));
      // trace(x y) = trace(y x) and <x, y> = trace(x y*).
      CHECK(std::abs(trace(x * y) - trace(y * x)) < 1e-9);
      CHECK(std::abs(inner(x, y) - trace(x * gr_star(y))) < 1e-9);
    }
  }
}

TEST_CASE("group ring matrices") {
  const OraclePtr F = make_oracle(NormalFormOracle::free({"a", "b"}));
  std::mt19937_64 rng(53);
  auto random_matrix = [&](std::size_t r, std::size_t c) {
    GroupRingMatrix M(F, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) M.at(i, j) = random_element(rng, F, 2);
    return M;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const GroupRingMatrix A = random_matrix(2, 3), B = random_matrix(3, 2);
    const GroupRingMatrix AB = A * B, BsAs = gr_star(B) * gr_star(A), ABs = gr_star(AB);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(close(ABs.at(i, j), BsAs.at(i, j)));
    CHECK(std::abs(trace(A * B) - trace(B * A)) < 1e-9);
    const GroupRingMatrix I = GroupRingMatrix::identity(F, 2, 3.0);
    CHECK(std::abs(trace(I) - Complex(6.0)) < 1e-12);
    const GroupRingMatrix D = block_matrix(A * B, I);
    CHECK(D.rows() == 4);
    CHECK(std::abs(trace(D) - trace(A * B) - 6.0) < 1e-9);
  }
  CHECK_THROWS_AS(random_matrix(2, 3) * random_matrix(2, 3), InputError);
}

TEST_CASE("ball examples and nesting") {
  const auto F = NormalFormOracle::free({"a", "b"});
  CHECK(ball(F, 0).elements.size() == 1);
  CHECK(ball(F, 1).elements.size() == 5);
  CHECK(ball(F, 2).elements.size() == 17);
  const auto Z = NormalFormOracle::free_abelian({"g"});
  const Ball B3 = ball(Z, 3);
  CHECK(B3.elements.size() == 7);
  for (int e = -3; e <= 3; ++e)
    CHECK(std::find(B3.elements.begin(), B3.elements.end(), Word::generator(0, e)) != B3.elements.end());
  CHECK(ball(NormalFormOracle::free_abelian({"a", "b"}), 2).elements.size() == 13);
  CHECK_THROWS_AS(ball(F, -1), InputError);

  for (const auto& o : {F, NormalFormOracle::torus_amalgam(2, 3)}) {
    std::size_t prev = 0;
    std::vector<Word> last;
    for (int r = 0; r <= 5; ++r) {
      const Ball B = ball(o, r);
      CHECK_FALSE(B.partial);
      CHECK(B.elements.size() > prev);
      CHECK(std::is_sorted(B.elements.begin(), B.elements.end()));
      CHECK(std::adjacent_find(B.elements.begin(), B.elements.end()) == B.elements.end());
      CHECK(std::includes(B.elements.begin(), B.elements.end(), last.begin(), last.end()));
      for (const Word& w : B.elements) CHECK(o.normal_form(w) == w);
      prev = B.elements.size();
      last = B.elements;
    }
  }
  // Free group of rank 2: 1 + 4 (3^r - 1) / 2 elements of length <= r.
  CHECK(ball(F, 5).elements.size() == 1 + 2 * (243 - 1));

  KbOptions tiny;
  tiny.max_rules = 6;
  const KbResult f = kb_complete(testing::trefoil_2gen(), tiny);
  CHECK(ball(NormalFormOracle::rewriting({"a", "b"}, f.system), 2).partial);
}
