#pragma once

#include <numeric>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "l2alex/abelianization.hpp"
#include "l2alex/errors.hpp"
#include "l2alex/presentation.hpp"

namespace l2alex {

namespace tietze {

struct InvertRelator {  // I_a
  std::size_t j;
};
struct ConjugateRelator {  // I_b: r_j -> w r_j w^-1
  std::size_t j;
  Word w;
};
struct MultiplyRelator {  // I_c: r_j -> r_j r_l^e
  std::size_t j;
  std::size_t l;
  int exponent = 1;
};
struct AddGenerator {  // II_W: new generator x, relator x w^-1
  std::string name;
  Word w;
};
struct RemoveGenerator {  // II_W^-1
  std::string name;
};
struct Permute {  // III: new generator i is old generator sigma[i]
  std::vector<std::size_t> sigma;
};

}  // namespace tietze

using TietzeMove = std::variant<tietze::InvertRelator, tietze::ConjugateRelator, tietze::MultiplyRelator,
                                tietze::AddGenerator, tietze::RemoveGenerator, tietze::Permute>;

struct WirtingerReport {
  int deficiency = 0;
  // Per relator: "conjugation", "degenerate" (two letters or a single
  // generator), "empty", or "other".
  std::vector<std::string> relator_shapes;
  bool shapes_ok = false;
  bool conjugacy_connected = false;
  bool pass = false;
  std::vector<std::string> flags;
};

namespace detail {

inline std::string relator_shape(const Word& r) {
  const Word c = r.cyclic_reduction();
  if (c.empty()) return "empty";
  if (c.size() == 1) return "degenerate";
  if (c.size() == 2) return (c[0].sign != c[1].sign && c[0].gen != c[1].gen) ? "degenerate" : "other";
  if (c.size() != 4) return "other";
  for (std::size_t rot = 0; rot < 4; ++rot) {
    const Letter& l0 = c[rot];
    const Letter& l1 = c[(rot + 1) % 4];
    const Letter& l2 = c[(rot + 2) % 4];
    const Letter& l3 = c[(rot + 3) % 4];
    if (cancels(l0, l2) && l1.sign == -l3.sign) return "conjugation";
  }
  return "other";
}

// Pairs of generators identified up to conjugacy by a relator.
inline void conjugacy_edges(const Word& r, std::vector<std::pair<std::uint32_t, std::uint32_t>>& out) {
  const Word c = r.cyclic_reduction();
  if (c.size() == 2 && c[0].sign != c[1].sign) {
    out.emplace_back(c[0].gen, c[1].gen);
    return;
  }
  if (c.size() != 4) return;
  for (std::size_t rot = 0; rot < 4; ++rot) {
    const Letter& l0 = c[rot];
    const Letter& l1 = c[(rot + 1) % 4];
    const Letter& l2 = c[(rot + 2) % 4];
    const Letter& l3 = c[(rot + 3) % 4];
    if (cancels(l0, l2) && l1.sign == -l3.sign) {
      out.emplace_back(l1.gen, l3.gen);
      return;
    }
  }
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// True if w is g_j g_i g_j^-1 or g_j^-1 g_i g_j with i != j.
inline bool permitted_conjugate(const Word& w) {
  return w.size() == 3 && cancels(w[0], w[2]) && w[1].sign > 0 && w[1].gen != w[0].gen;
}

}  // namespace detail

inline WirtingerReport validate_wirtinger(const Presentation& P) {
  WirtingerReport rep;
  rep.deficiency = P.deficiency();
  rep.shapes_ok = true;
  detail::UnionFind uf(P.rank());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t j = 0; j < P.relators.size(); ++j) {
    const std::string s = detail::relator_shape(P.relators[j]);
    rep.relator_shapes.push_back(s);
    if (s == "other") rep.shapes_ok = false;
    if (s == "empty" || (s == "degenerate" && P.relators[j].cyclic_reduction().size() == 1))
      rep.flags.push_back("relator " + std::to_string(j + 1) + " is " +
                          (s == "empty" ? "empty" : "a single generator"));
    detail::conjugacy_edges(P.relators[j], edges);
  }
  for (auto [a, b] : edges) uf.unite(a, b);
  rep.conjugacy_connected = true;
  for (std::size_t g = 1; g < P.rank(); ++g)
    if (uf.find(g) != uf.find(0)) rep.conjugacy_connected = false;
  rep.pass = rep.deficiency == 1 && rep.shapes_ok && rep.conjugacy_connected && P.rank() > 0;
  return rep;
}

namespace detail {

inline void check_relator_index(const Presentation& P, std::size_t j) {
  if (j >= P.relators.size())
    throw InputError("relator index " + std::to_string(j + 1) + " out of range (presentation has " +
                     std::to_string(P.relators.size()) + ")");
}

inline void check_word(const Presentation& P, const Word& w) {
  if (w.max_generator() > P.rank()) throw InputError("move word uses an undeclared generator");
}

// Position of a relator x w^-1 (up to inversion) defining generator x, or -1.
inline int defining_relator(const Presentation& P, std::uint32_t x) {
  for (std::size_t j = 0; j < P.relators.size(); ++j) {
    const Word& r = P.relators[j];
    if (r.occurrences(x) != 1) continue;
    for (const Word& cand : {r, r.inverse()}) {
      if (cand.size() == 4 && cand[0].gen == x && cand[0].sign > 0) {
        const Word w = cand.subword(1, 3).inverse();
        if (permitted_conjugate(w)) return static_cast<int>(j);
      }
    }
  }
  return -1;
}

}  // namespace detail

inline Presentation tietze_apply(const Presentation& P, const TietzeMove& move) {
  Presentation Q = P;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, tietze::InvertRelator>) {
          detail::check_relator_index(P, m.j);
          Q.relators[m.j] = P.relators[m.j].inverse();
        } else if constexpr (std::is_same_v<M, tietze::ConjugateRelator>) {
          detail::check_relator_index(P, m.j);
          detail::check_word(P, m.w);
          Q.relators[m.j] = m.w * P.relators[m.j] * m.w.inverse();
        } else if constexpr (std::is_same_v<M, tietze::MultiplyRelator>) {
          detail::check_relator_index(P, m.j);
          detail::check_relator_index(P, m.l);
          if (m.j == m.l) throw InputError("I_c requires two distinct relators");
          if (m.exponent != 1 && m.exponent != -1) throw InputError("I_c exponent must be +1 or -1");
          Q.relators[m.j] = P.relators[m.j] * P.relators[m.l].pow(m.exponent);
        } else if constexpr (std::is_same_v<M, tietze::AddGenerator>) {
          detail::check_word(P, m.w);
          if (!detail::is_identifier(m.name) || P.generator_index(m.name) >= 0)
            throw InputError("II_W: '" + m.name + "' is not a fresh identifier");
          if (!detail::permitted_conjugate(m.w))
            throw InputError("II_W: word must have the shape g_j g_i g_j^-1 or g_j^-1 g_i g_j");
          const auto x = static_cast<std::uint32_t>(P.rank());
          Q.generators.push_back(m.name);
          Q.relators.push_back(Word::generator(x) * m.w.inverse());
        } else if constexpr (std::is_same_v<M, tietze::RemoveGenerator>) {
          const int xi = P.generator_index(m.name);
          if (xi < 0) throw InputError("II_W^-1: unknown generator '" + m.name + "'");
          const auto x = static_cast<std::uint32_t>(xi);
          const int j = detail::defining_relator(P, x);
          if (j < 0) throw InputError("II_W^-1: no relator of the form " + m.name + " w^-1 with permitted w");
          for (std::size_t k = 0; k < P.relators.size(); ++k)
            if (static_cast<int>(k) != j && P.relators[k].uses(x))
              throw InputError("II_W^-1: generator '" + m.name + "' occurs in another relator");
          for (const auto& [role, w] : P.marks)
            if (w.uses(x)) throw InputError("II_W^-1: generator '" + m.name + "' occurs in a mark");
          Q.relators.erase(Q.relators.begin() + j);
          Q.generators.erase(Q.generators.begin() + xi);
          std::vector<Word> images;
          for (std::uint32_t g = 0; g < P.rank(); ++g)
            images.push_back(g < x ? Word::generator(g) : g == x ? Word() : Word::generator(g - 1));
          for (Word& r : Q.relators) r = r.substitute(images);
          for (auto& [role, w] : Q.marks) w = w.substitute(images);
        } else if constexpr (std::is_same_v<M, tietze::Permute>) {
          const std::size_t k = P.rank();
          std::vector<bool> seen(k, false);
          if (m.sigma.size() != k) throw InputError("III: permutation has the wrong length");
          for (std::size_t s : m.sigma) {
            if (s >= k || seen[s]) throw InputError("III: not a permutation");
            seen[s] = true;
          }
          std::vector<Word> images(k);
          for (std::size_t i = 0; i < k; ++i) {
            Q.generators[i] = P.generators[m.sigma[i]];
            images[m.sigma[i]] = Word::generator(static_cast<std::uint32_t>(i));
          }
          for (Word& r : Q.relators) r = r.substitute(images);
          for (auto& [role, w] : Q.marks) w = w.substitute(images);
        }
      },
      move);
  Q.wirtinger = P.wirtinger && validate_wirtinger(Q).pass;
  return Q;
}

// Move undoing `move` when applied to tietze_apply(P, move).
inline TietzeMove inverse_move(const Presentation& P, const TietzeMove& move) {
  return std::visit(
      [&](const auto& m) -> TietzeMove {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, tietze::InvertRelator>) {
          return m;
        } else if constexpr (std::is_same_v<M, tietze::ConjugateRelator>) {
          return tietze::ConjugateRelator{m.j, m.w.inverse()};
        } else if constexpr (std::is_same_v<M, tietze::MultiplyRelator>) {
          return tietze::MultiplyRelator{m.j, m.l, -m.exponent};
        } else if constexpr (std::is_same_v<M, tietze::AddGenerator>) {
          return tietze::RemoveGenerator{m.name};
        } else if constexpr (std::is_same_v<M, tietze::RemoveGenerator>) {
          const int xi = P.generator_index(m.name);
          const int j = xi < 0 ? -1 : detail::defining_relator(P, static_cast<std::uint32_t>(xi));
          if (j < 0) throw InputError("II_W^-1 not applicable");
          if (static_cast<std::size_t>(xi) + 1 != P.rank() || static_cast<std::size_t>(j) + 1 != P.relators.size())
            throw InputError("II_W^-1 of a non-final generator has no single-move inverse");
          Word r = P.relators[static_cast<std::size_t>(j)];
          if (r[0].gen != static_cast<std::uint32_t>(xi) || r[0].sign < 0) r = r.inverse();
          return tietze::AddGenerator{m.name, r.subword(1, 3).inverse()};
        } else {
          std::vector<std::size_t> inv(m.sigma.size());
          for (std::size_t i = 0; i < m.sigma.size(); ++i) inv[m.sigma[i]] = i;
          return tietze::Permute{inv};
        }
      },
      move);
}

inline std::string describe(const Presentation& P, const TietzeMove& move) {
  return std::visit(
      [&](const auto& m) -> std::string {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, tietze::InvertRelator>) {
          return "Ia " + std::to_string(m.j + 1);
        } else if constexpr (std::is_same_v<M, tietze::ConjugateRelator>) {
          return "Ib " + std::to_string(m.j + 1) + " " + P.str(m.w);
        } else if constexpr (std::is_same_v<M, tietze::MultiplyRelator>) {
          return std::string(m.exponent > 0 ? "Ic " : "Ic- ") + std::to_string(m.j + 1) + " " +
                 std::to_string(m.l + 1);
        } else if constexpr (std::is_same_v<M, tietze::AddGenerator>) {
          return "IIw " + m.name + " " + P.str(m.w);
        } else if constexpr (std::is_same_v<M, tietze::RemoveGenerator>) {
          return "IIw- " + m.name;
        } else {
          std::string s = "III";
          for (std::size_t i : m.sigma) s += " " + P.generators[i];
          return s;
        }
      },
      move);
}

// Script line grammar (1-based relator indices, generator names):
//   Ia j | Ib j <word> | Ic j l | Ic- j l | IIw name <word> | IIw- name | III <names in new order>
inline TietzeMove parse_move(const std::string& line, const Presentation& P) {
  std::istringstream in(line);
  std::string op;
  in >> op;
  auto index = [&]() -> std::size_t {
    long long v = 0;
    if (!(in >> v) || v < 1) throw InputError("tietze: expected a positive relator index in '" + line + "'");
    return static_cast<std::size_t>(v - 1);
  };
  auto rest = [&]() {
    std::string r;
    std::getline(in, r);
    return r;
  };
  if (op == "Ia") return tietze::InvertRelator{index()};
  if (op == "Ib") {
    const std::size_t j = index();
    return tietze::ConjugateRelator{j, P.word(rest())};
  }
  if (op == "Ic" || op == "Ic-") {
    const std::size_t j = index();
    const std::size_t l = index();
    return tietze::MultiplyRelator{j, l, op == "Ic" ? 1 : -1};
  }
  if (op == "IIw") {
    std::string name;
    if (!(in >> name)) throw InputError("tietze: IIw needs a name");
    return tietze::AddGenerator{name, P.word(rest())};
  }
  if (op == "IIw-") {
    std::string name;
    if (!(in >> name)) throw InputError("tietze: IIw- needs a name");
    return tietze::RemoveGenerator{name};
  }
  if (op == "III") {
    std::vector<std::size_t> sigma;
    std::string name;
    while (in >> name) {
      const int i = P.generator_index(name);
      if (i < 0) throw InputError("tietze: unknown generator '" + name + "'");
      sigma.push_back(static_cast<std::size_t>(i));
    }
    return tietze::Permute{sigma};
  }
  throw InputError("tietze: unknown move '" + op + "'");
}

// Draws a valid move at random. Relator growth from I_b/I_c is capped at
// `max_len` letters so long sequences stay tractable.
template <class Rng>
TietzeMove random_move(const Presentation& P, Rng& rng, std::size_t max_len = 120) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)); };
  const std::size_t k = P.rank();
  const std::size_t l = P.relators.size();
  for (int attempt = 0; attempt < 100; ++attempt) {
    switch (pick(6)) {
      case 0:
        if (l > 0) return tietze::InvertRelator{pick(l)};
        break;
      case 1:
        if (l > 0 && k > 0) {
          const std::size_t j = pick(l);
          Word w;
          const std::size_t len = 1 + pick(2);
          for (std::size_t i = 0; i < len; ++i)
            w.push_back({static_cast<std::uint32_t>(pick(k)), pick(2) ? 1 : -1});
          if (P.relators[j].size() + 2 * w.size() <= max_len) return tietze::ConjugateRelator{j, w};
        }
        break;
      case 2:
        if (l > 1) {
          const std::size_t j = pick(l);
          std::size_t m = pick(l - 1);
          if (m >= j) ++m;
          const int e = pick(2) ? 1 : -1;
          if (P.relators[j].size() + P.relators[m].size() <= max_len) return tietze::MultiplyRelator{j, m, e};
        }
        break;
      case 3:
        if (k > 1) {
          const auto i = static_cast<std::uint32_t>(pick(k));
          auto jj = static_cast<std::uint32_t>(pick(k - 1));
          if (jj >= i) ++jj;
          const int s = pick(2) ? 1 : -1;
          Word w = Word::from_letters(std::vector<Letter>{{jj, s}, {i, 1}, {jj, -s}});
          std::string name;
          for (std::size_t n = k;; ++n) {
            name = "t" + std::to_string(n);
            if (P.generator_index(name) < 0) break;
          }
          return tietze::AddGenerator{name, w};
        }
        break;
      case 4:
        for (std::size_t g = 0; g < k; ++g) {
          const std::size_t x = k - 1 - g;
          const int j = detail::defining_relator(P, static_cast<std::uint32_t>(x));
          if (j < 0) continue;
          bool elsewhere = false;
          for (std::size_t r = 0; r < l; ++r)
            if (static_cast<int>(r) != j && P.relators[r].uses(static_cast<std::uint32_t>(x))) elsewhere = true;
          for (const auto& [role, w] : P.marks)
            if (w.uses(static_cast<std::uint32_t>(x))) elsewhere = true;
          if (!elsewhere) return tietze::RemoveGenerator{P.generators[x]};
        }
        break;
      default: {
        std::vector<std::size_t> sigma(k);
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        return tietze::Permute{sigma};
      }
    }
  }
  return tietze::InvertRelator{0};
}

// Greedy elimination of generators occurring exactly once in some relator
// (a composite of Tietze moves). Generators in `keep` and those used by marks
// are preserved.
inline Presentation simplify(const Presentation& P, const std::set<std::string>& keep = {}) {
  Presentation Q = P;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < Q.relators.size() && !changed; ++j) {
      const Word r = Q.relators[j].cyclic_reduction();
      for (std::size_t pos = 0; pos < r.size() && !changed; ++pos) {
        const std::uint32_t x = r[pos].gen;
        if (r.occurrences(x) != 1 || keep.count(Q.generators[x])) continue;
        bool in_mark = false;
        for (const auto& [role, w] : Q.marks)
          if (w.uses(x)) in_mark = true;
        if (in_mark) continue;
        // r = u x^s v  =>  x = (v u)^{-s}
        const Word u = r.prefix(pos);
        const Word v = r.subword(pos + 1, r.size() - pos - 1);
        const Word value = (v * u).pow(-r[pos].sign);
        std::vector<Word> images;
        for (std::uint32_t g = 0; g < Q.rank(); ++g)
          images.push_back(g == x ? Word() : Word::generator(g < x ? g : g - 1));
        images[x] = value.substitute(images);
        Presentation R;
        R.generators = Q.generators;
        R.generators.erase(R.generators.begin() + x);
        for (std::size_t k = 0; k < Q.relators.size(); ++k) {
          if (k == j) continue;
          Word w = Q.relators[k].substitute(images).cyclic_reduction();
          if (!w.empty()) R.relators.push_back(w);
        }
        for (const auto& [role, w] : Q.marks) R.marks[role] = w.substitute(images);
        Q = std::move(R);
        changed = true;
      }
    }
  }
  Q.wirtinger = validate_wirtinger(Q).pass && P.wirtinger;
  return Q;
}

}  // namespace l2alex
