#pragma once

#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "l2alex/abelianization.hpp"
#include "l2alex/diagram.hpp"
#include "l2alex/errors.hpp"
#include "l2alex/presentation.hpp"
#include "l2alex/tietze.hpp"

namespace l2alex {

struct CableSpec {
  int p = 1;
  int q = 0;
};

inline void check_cable_spec(const CableSpec& s) {
  if (s.p == 0) throw InputError("cable spec: p must be nonzero");
  if (std::gcd(s.p, s.q) != 1)
    throw InputError("cable spec: gcd(" + std::to_string(s.p) + "," + std::to_string(s.q) + ") != 1");
}

// Presentation plus the index of each input generator in the output.
struct Construction {
  Presentation presentation;
  std::vector<std::vector<std::size_t>> correspondence;
};

namespace detail {

inline std::string fresh_name(const std::set<std::string>& used, const std::string& base) {
  std::set<std::string> folded;
  for (const std::string& u : used) folded.insert(to_lower(u));
  if (!folded.count(to_lower(base))) return base;
  for (int i = 2;; ++i) {
    const std::string n = base + "_" + std::to_string(i);
    if (!folded.count(to_lower(n))) return n;
  }
}

// Appends the generators of Q to `out`, renaming on collision; returns the
// substitution sending Q's generators to their output indices.
inline std::vector<Word> append_generators(Presentation& out, const Presentation& Q,
                                           std::vector<std::size_t>& indices) {
  std::set<std::string> used(out.generators.begin(), out.generators.end());
  std::vector<Word> images;
  for (const std::string& g : Q.generators) {
    const std::string n = fresh_name(used, g);
    used.insert(n);
    indices.push_back(out.generators.size());
    images.push_back(Word::generator(static_cast<std::uint32_t>(out.generators.size())));
    out.generators.push_back(n);
  }
  return images;
}

inline Word knot_meridian(const Presentation& P) {
  if (auto m = P.mark(MarkRole::meridian)) return *m;
  if (P.wirtinger && P.rank() > 0) return Word::generator(static_cast<std::uint32_t>(P.rank() - 1));
  throw InputError("presentation has no meridian mark");
}

// Integers (r, s) with q r - p s = 1.
inline std::pair<long long, long long> bezout_qr_ps(long long p, long long q) {
  // Extended Euclid on (q, -p).
  long long old_r = q, r = -p, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const long long quo = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - quo * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - quo * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - quo * t);
  }
  // q*old_s + (-p)*old_t = old_r = +-1
  if (old_r < 0) {
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_s, old_t};
}

}  // namespace detail

// Connected sum. The relator identifying meridians is mu1 mu2^-1, with mu the
// marked meridians (the last generators when unmarked). The longitude of the
// sum is the product of the two longitudes.
inline Construction sum_presentation(const Presentation& P1, const Presentation& P2) {
  for (const Presentation* P : {&P1, &P2})
    if (!P->wirtinger && !P->mark(MarkRole::meridian))
      throw InputError("sum_presentation: inputs must be Wirtinger presentations or carry a meridian mark");
  Construction C;
  Presentation& S = C.presentation;
  C.correspondence.resize(2);
  auto im1 = detail::append_generators(S, P1, C.correspondence[0]);
  auto im2 = detail::append_generators(S, P2, C.correspondence[1]);
  for (const Word& r : P1.relators) S.relators.push_back(r.substitute(im1));
  for (const Word& r : P2.relators) S.relators.push_back(r.substitute(im2));
  const Word m1 = detail::knot_meridian(P1).substitute(im1);
  const Word m2 = detail::knot_meridian(P2).substitute(im2);
  S.relators.push_back(m1 * m2.inverse());
  S.marks[MarkRole::meridian] = m1;
  auto l1 = P1.mark(MarkRole::longitude), l2 = P2.mark(MarkRole::longitude);
  if (l1 && l2) S.marks[MarkRole::longitude] = l1->substitute(im1) * l2->substitute(im2);
  S.wirtinger = validate_wirtinger(S).pass;
  return C;
}

// <x, y, lambda | x^p y^-q lambda^-p, lambda y lambda^-1 y^-1>.
inline Presentation torus_pattern_presentation(const CableSpec& spec) {
  check_cable_spec(spec);
  Presentation P;
  P.generators = {"x", "y", "lambda"};
  const Word x = Word::generator(0), y = Word::generator(1), l = Word::generator(2);
  P.relators.push_back(x.pow(spec.p) * y.pow(-spec.q) * l.pow(-spec.p));
  P.relators.push_back(commutator(l, y));
  P.marks[MarkRole::core] = x;
  P.marks[MarkRole::meridian] = y;
  P.marks[MarkRole::longitude] = l;
  return P;
}

// The (p,q)-cable of C: generators a_1..a_k, x, lambda; relators r_1..r_{k-1},
// x^p m^-q lambda^-p, lambda^-1 W, with m the companion meridian. Marks on the
// output: core x, meridian x^r m^-s lambda^-r (q r - p s = 1), longitude
// x^p meridian^-pq.
inline Construction cable_presentation(const Presentation& PC, const CableSpec& spec, const Word& W) {
  check_cable_spec(spec);
  if (W.max_generator() > PC.rank()) throw InputError("cable_presentation: W uses an undeclared generator");
  const AbelianizationMap alpha = abelianization(PC);
  if (alpha(W) != 0)
    throw InputError("cable_presentation: W has abelianization weight " + std::to_string(alpha(W)) + ", expected 0");
  Construction C;
  Presentation& S = C.presentation;
  C.correspondence.resize(1);
  auto im = detail::append_generators(S, PC, C.correspondence[0]);
  std::set<std::string> used(S.generators.begin(), S.generators.end());
  const auto xi = static_cast<std::uint32_t>(S.rank());
  S.generators.push_back(detail::fresh_name(used, "x"));
  used.insert(S.generators.back());
  const auto li = static_cast<std::uint32_t>(S.rank());
  S.generators.push_back(detail::fresh_name(used, "lambda"));
  for (const Word& r : PC.relators) S.relators.push_back(r.substitute(im));
  const Word x = Word::generator(xi), lam = Word::generator(li);
  const Word m = detail::knot_meridian(PC).substitute(im);
  S.relators.push_back(x.pow(spec.p) * m.pow(-spec.q) * lam.pow(-spec.p));
  S.relators.push_back(lam.inverse() * W.substitute(im));
  const auto [r, s] = detail::bezout_qr_ps(spec.p, spec.q);
  const Word mu = x.pow(static_cast<int>(r)) * m.pow(static_cast<int>(-s)) * lam.pow(static_cast<int>(-r));
  S.marks[MarkRole::core] = x;
  S.marks[MarkRole::meridian] = mu;
  S.marks[MarkRole::longitude] = x.pow(spec.p) * mu.pow(-spec.p * spec.q);
  return C;
}

// Satellite with companion C and a pattern presentation carrying meridian mu
// and longitude lambda generators: the pattern's [lambda, mu] relator is
// dropped, lambda^-1 W is added, and mu is replaced by the companion meridian.
inline Construction satellite_presentation(const Presentation& PC, const Presentation& Ppat) {
  auto mu_mark = Ppat.mark(MarkRole::meridian), la_mark = Ppat.mark(MarkRole::longitude);
  if (!mu_mark || !la_mark) throw InputError("satellite_presentation: pattern lacks meridian/longitude marks");
  if (mu_mark->size() != 1 || (*mu_mark)[0].sign < 0 || la_mark->size() != 1 || (*la_mark)[0].sign < 0)
    throw InputError("satellite_presentation: pattern marks must be generators");
  const std::uint32_t mu = (*mu_mark)[0].gen, la = (*la_mark)[0].gen;
  auto W = PC.mark(MarkRole::longitude);
  if (!W) throw InputError("satellite_presentation: companion lacks a longitude mark");
  // Locate the [lambda, mu] relator.
  const Word lam = Word::generator(la), m = Word::generator(mu);
  int drop = -1;
  for (std::size_t j = 0; j < Ppat.relators.size() && drop < 0; ++j) {
    const Word c = Ppat.relators[j].cyclic_reduction();
    if (c.size() != 4) continue;
    for (std::size_t rot = 0; rot < 4 && drop < 0; ++rot) {
      const Word rc = c.subword(rot, 4 - rot) * c.prefix(rot);
      for (const Word& target : {commutator(lam, m), commutator(m, lam)})
        if (rc == target) drop = static_cast<int>(j);
    }
  }
  if (drop < 0) throw InputError("satellite_presentation: pattern has no lambda-mu commutator relator");
  Construction C;
  Presentation& S = C.presentation;
  C.correspondence.resize(2);
  auto imc = detail::append_generators(S, PC, C.correspondence[0]);
  const Word companion_meridian = detail::knot_meridian(PC).substitute(imc);
  // Pattern generators except mu.
  Presentation pat_rest;
  for (std::uint32_t g = 0; g < Ppat.rank(); ++g)
    if (g != mu) pat_rest.generators.push_back(Ppat.generators[g]);
  std::vector<std::size_t> rest_idx;
  auto imr = detail::append_generators(S, pat_rest, rest_idx);
  std::vector<Word> imp;
  for (std::uint32_t g = 0, k = 0; g < Ppat.rank(); ++g) {
    if (g == mu) {
      imp.push_back(companion_meridian);
      C.correspondence[1].push_back(static_cast<std::size_t>(-1));
    } else {
      imp.push_back(imr[k]);
      C.correspondence[1].push_back(rest_idx[k]);
      ++k;
    }
  }
  for (const Word& r : PC.relators) S.relators.push_back(r.substitute(imc));
  for (std::size_t j = 0; j < Ppat.relators.size(); ++j)
    if (static_cast<int>(j) != drop) S.relators.push_back(Ppat.relators[j].substitute(imp));
  S.relators.push_back(lam.substitute(imp).inverse() * W->substitute(imc));
  if (auto core = Ppat.mark(MarkRole::core)) S.marks[MarkRole::core] = core->substitute(imp);
  return C;
}

// Pattern presentation from a two-component diagram of P and a meridian curve
// M: M must run over m pattern strands on one arc and then under m strands.
// Result: pattern arc generators, lambda (the long over-arc of M), mu, with
// relators: pattern crossings (the last one dropped), mu^-1 a_m^e_m ... a_1^e_1,
// and [lambda, mu] last. Marks: meridian mu, longitude lambda.
inline Presentation pattern_presentation_q3(const Diagram& D, std::size_t meridian_component) {
  if (D.components.size() != 2)
    throw InputError("pattern_presentation_q3: expected 2 components, got " + std::to_string(D.components.size()));
  if (meridian_component > 1) throw InputError("pattern_presentation_q3: component index out of range");
  const auto& Mc = D.components[meridian_component];
  std::set<int> Mset(Mc.begin(), Mc.end());
  const ArcData A = arcs_of(D);
  const auto ends = detail::edge_ends(D);
  // Walk M, recording each crossing met as over (+) or under (-).
  struct Visit {
    std::size_t crossing;
    bool under;
  };
  std::vector<Visit> walk;
  for (int lab : Mc) {
    const auto& e = ends.at(lab);
    const Crossing& X = D.crossings[static_cast<std::size_t>(e.end_c)];
    const bool under = e.end_s == 0;
    const int other_in = under ? X.over_in : X.labels[0];
    if (Mset.count(other_in)) throw InputError("pattern_presentation_q3: meridian component crosses itself");
    walk.push_back({static_cast<std::size_t>(e.end_c), under});
  }
  // Rotate so the walk starts with the first over-crossing after an under one.
  const std::size_t n = walk.size();
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i)
    if (!walk[i].under && walk[(i + n - 1) % n].under) start = i;
  if (start == n) throw InputError("pattern_presentation_q3: meridian component must both over- and under-cross");
  std::vector<Visit> seq;
  for (std::size_t i = 0; i < n; ++i) seq.push_back(walk[(start + i) % n]);
  std::size_t m = 0;
  while (m < n && !seq[m].under) ++m;
  for (std::size_t i = m; i < n; ++i)
    if (!seq[i].under) throw InputError("pattern_presentation_q3: meridian component not alternating over/under in the required pattern");
  if (n != 2 * m) throw InputError("pattern_presentation_q3: meridian over- and under-crossing counts differ");
  // Generators: pattern arcs (ordered by smallest label), lambda, mu.
  std::vector<std::size_t> pattern_arc_index(A.arcs.size(), static_cast<std::size_t>(-1));
  Presentation Q;
  std::size_t lambda_arc = static_cast<std::size_t>(-1);
  for (std::size_t a = 0; a < A.arcs.size(); ++a) {
    if (Mset.count(A.arcs[a].front())) continue;
    pattern_arc_index[a] = Q.generators.size();
    Q.generators.push_back("a" + std::to_string(Q.generators.size() + 1));
  }
  {
    const Crossing& X0 = D.crossings[seq[0].crossing];
    lambda_arc = A.arc_of.at(X0.over_in);
  }
  const auto li = static_cast<std::uint32_t>(Q.rank());
  Q.generators.push_back("lambda");
  const auto mi = static_cast<std::uint32_t>(Q.rank());
  Q.generators.push_back("mu");
  auto gen_of_arc = [&](std::size_t arc) -> Word {
    if (arc == lambda_arc) return Word::generator(li);
    if (pattern_arc_index[arc] == static_cast<std::size_t>(-1))
      throw InputError("pattern_presentation_q3: meridian component must have a single over-arc");
    return Word::generator(static_cast<std::uint32_t>(pattern_arc_index[arc]));
  };
  // Pattern crossings: every crossing whose under-strand is on P.
  std::vector<Word> pattern_rels;
  for (const Crossing& X : D.crossings) {
    if (Mset.count(X.labels[0])) continue;
    const Word B = gen_of_arc(A.arc_of.at(X.over_in)).pow(X.sign);
    pattern_rels.push_back(B * gen_of_arc(A.arc_of.at(X.labels[0])) * B.inverse() *
                           gen_of_arc(A.arc_of.at(X.labels[2])).inverse());
  }
  if (pattern_rels.empty()) throw InputError("pattern_presentation_q3: no pattern crossings");
  pattern_rels.pop_back();
  Q.relators = pattern_rels;
  // Eliminating M's short arcs: lambda is conjugated successively by the
  // strands passing over M; the product is mu.
  Word w;
  for (std::size_t i = m; i < n; ++i) {
    const Crossing& X = D.crossings[seq[i].crossing];
    w = gen_of_arc(A.arc_of.at(X.over_in)).pow(X.sign) * w;
  }
  const Word mu = Word::generator(mi), lam = Word::generator(li);
  Q.relators.push_back(mu.inverse() * w);
  Q.relators.push_back(commutator(lam, mu));
  Q.marks[MarkRole::meridian] = mu;
  Q.marks[MarkRole::longitude] = lam;
  return Q;
}

}  // namespace l2alex
