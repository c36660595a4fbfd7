#pragma once

#include <algorithm>
#include <deque>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "l2alex/errors.hpp"
#include "l2alex/presentation.hpp"
#include "l2alex/word.hpp"

namespace l2alex {

// Letter codes for string rewriting: generator g -> 2g, its inverse -> 2g+1.
using Code = std::uint32_t;
using CodeString = std::vector<Code>;

inline Code to_code(const Letter& l) { return 2 * l.gen + (l.sign < 0 ? 1u : 0u); }
inline Letter from_code(Code c) { return {c / 2, (c & 1u) ? -1 : 1}; }

inline CodeString to_codes(const Word& w) {
  CodeString s;
  s.reserve(w.size());
  for (const Letter& l : w.letters()) s.push_back(to_code(l));
  return s;
}

inline Word from_codes(const CodeString& s) {
  std::vector<Letter> raw;
  raw.reserve(s.size());
  for (Code c : s) raw.push_back(from_code(c));
  return Word::from_letters(raw);
}

// Formats a code string letter by letter, without free reduction.
inline std::string format_codes(const CodeString& s, std::span<const std::string> alphabet) {
  if (s.empty()) return "1";
  std::string out;
  for (Code c : s) {
    if (!out.empty()) out += ' ';
    out += format_word(Word::generator(from_code(c).gen, from_code(c).sign), alphabet);
  }
  return out;
}

// Weighted shortlex order on code strings: total weight, then length, then
// lexicographic by letter precedence.
struct ShortlexOrder {
  std::vector<int> weight;      // per code
  std::vector<int> precedence;  // per code: smaller = earlier

  static ShortlexOrder standard(std::size_t ngens) {
    ShortlexOrder o;
    for (Code c = 0; c < 2 * ngens; ++c) {
      o.weight.push_back(1);
      o.precedence.push_back(static_cast<int>(c));
    }
    return o;
  }

  // Generators listed in `order` (indices) first, each followed by its inverse.
  static ShortlexOrder with_precedence(std::size_t ngens, const std::vector<std::size_t>& order,
                                       const std::vector<int>& gen_weights = {}) {
    ShortlexOrder o = standard(ngens);
    if (order.size() != ngens) throw InputError("kb: precedence must list every generator once");
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      o.precedence.at(2 * order[rank]) = static_cast<int>(2 * rank);
      o.precedence.at(2 * order[rank] + 1) = static_cast<int>(2 * rank + 1);
    }
    if (!gen_weights.empty()) {
      if (gen_weights.size() != ngens) throw InputError("kb: one weight per generator required");
      for (std::size_t g = 0; g < ngens; ++g) {
        if (gen_weights[g] < 1) throw InputError("kb: weights must be positive");
        o.weight[2 * g] = o.weight[2 * g + 1] = gen_weights[g];
      }
    }
    return o;
  }

  long weight_of(const CodeString& s) const {
    long w = 0;
    for (Code c : s) w += weight[c];
    return w;
  }

  // True if a > b.
  bool greater(const CodeString& a, const CodeString& b) const {
    const long wa = weight_of(a), wb = weight_of(b);
    if (wa != wb) return wa > wb;
    if (a.size() != b.size()) return a.size() > b.size();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return precedence[a[i]] > precedence[b[i]];
    return false;
  }
};

struct Rule {
  CodeString lhs, rhs;
};

class RewritingSystem {
 public:
  RewritingSystem() = default;
  RewritingSystem(std::size_t ngens, std::vector<Rule> rules, ShortlexOrder order, bool confluent)
      : ngens_(ngens), rules_(std::move(rules)), order_(std::move(order)), confluent_(confluent) {
    index();
  }

  std::size_t generator_count() const { return ngens_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const ShortlexOrder& order() const { return order_; }
  bool confluent() const { return confluent_; }

  // Stack-based leftmost reduction: letters are pushed one at a time and any
  // rule whose left side is a suffix of the stack fires, its right side being
  // fed back into the input.
  CodeString reduce(const CodeString& in) const {
    CodeString out;
    out.reserve(in.size());
    std::vector<Code> pending(in.rbegin(), in.rend());
    while (!pending.empty()) {
      const Code c = pending.back();
      pending.pop_back();
      out.push_back(c);
      const auto& cand = by_last_[c];
      for (std::size_t ri : cand) {
        const Rule& r = rules_[ri];
        const std::size_t n = r.lhs.size();
        if (n > out.size()) continue;
        if (!std::equal(r.lhs.begin(), r.lhs.end(), out.end() - static_cast<std::ptrdiff_t>(n))) continue;
        out.resize(out.size() - n);
        for (auto it = r.rhs.rbegin(); it != r.rhs.rend(); ++it) pending.push_back(*it);
        break;
      }
    }
    return out;
  }

 private:
  void index() {
    by_last_.assign(2 * ngens_, {});
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      if (rules_[i].lhs.empty()) throw InputError("rewriting rule with empty left side");
      by_last_[rules_[i].lhs.back()].push_back(i);
    }
  }

  std::size_t ngens_ = 0;
  std::vector<Rule> rules_;
  ShortlexOrder order_;
  bool confluent_ = false;
  std::vector<std::vector<std::size_t>> by_last_;
};

struct KbOptions {
  std::size_t max_rules = 2000;
  std::size_t max_len = 40;
  std::optional<ShortlexOrder> order;
};

struct KbResult {
  bool completed = false;
  RewritingSystem system;  // confluent when completed; otherwise the partial rules
  std::string diagnostics;
};

namespace detail {

inline std::vector<std::pair<CodeString, CodeString>> critical_pairs(const Rule& a, const Rule& b) {
  // Overlaps: a suffix of a.lhs equals a prefix of b.lhs (proper, nonempty).
  std::vector<std::pair<CodeString, CodeString>> out;
  const std::size_t na = a.lhs.size(), nb = b.lhs.size();
  // Containments (k = na or k = nb) are handled by interreduction.
  for (std::size_t k = 1; k < std::min(na, nb); ++k) {
    if (!std::equal(a.lhs.end() - static_cast<std::ptrdiff_t>(k), a.lhs.end(), b.lhs.begin())) continue;
    // word = a.lhs + b.lhs[k:]
    CodeString u = a.rhs;
    u.insert(u.end(), b.lhs.begin() + static_cast<std::ptrdiff_t>(k), b.lhs.end());
    CodeString v(a.lhs.begin(), a.lhs.end() - static_cast<std::ptrdiff_t>(k));
    v.insert(v.end(), b.rhs.begin(), b.rhs.end());
    out.emplace_back(std::move(u), std::move(v));
  }
  return out;
}

inline bool contains(const CodeString& hay, const CodeString& needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

}  // namespace detail

// Knuth-Bendix completion under a weighted shortlex order. Inverse letters are
// separate symbols with the cancellation rules installed up front.
inline KbResult kb_complete(const Presentation& P, const KbOptions& opt = {}) {
  const std::size_t k = P.rank();
  const ShortlexOrder order = opt.order ? *opt.order : ShortlexOrder::standard(k);
  if (order.weight.size() != 2 * k) throw InputError("kb: order does not match the alphabet");
  std::vector<Rule> rules;
  std::vector<bool> alive;
  std::deque<std::pair<CodeString, CodeString>> queue;
  for (Code c = 0; c < 2 * k; ++c) {
    rules.push_back({{c, c ^ 1u}, {}});
    alive.push_back(true);
  }
  for (const Word& r : P.relators) {
    queue.emplace_back(to_codes(r), CodeString{});
    queue.emplace_back(to_codes(r.inverse()), CodeString{});
  }
  std::size_t deferred = 0;
  KbResult result;

  auto current = [&]() {
    std::vector<Rule> live;
    for (std::size_t i = 0; i < rules.size(); ++i)
      if (alive[i]) live.push_back(rules[i]);
    return live;
  };
  // Reduction with the live rules (rebuilt lazily).
  RewritingSystem rs(k, current(), order, false);
  bool dirty = false;
  auto reduce = [&](const CodeString& s) {
    if (dirty) {
      rs = RewritingSystem(k, current(), order, false);
      dirty = false;
    }
    return rs.reduce(s);
  };

  std::vector<std::pair<CodeString, CodeString>> overflow;
  while (!queue.empty()) {
    auto [u, v] = std::move(queue.front());
    queue.pop_front();
    u = reduce(u);
    v = reduce(v);
    if (u == v) continue;
    if (order.greater(v, u)) std::swap(u, v);
    if (u.size() > opt.max_len) {
      overflow.emplace_back(std::move(u), std::move(v));
      ++deferred;
      continue;
    }
    Rule nr{u, v};
    // Interreduce existing rules against the new one.
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (!alive[i]) continue;
      if (detail::contains(rules[i].lhs, nr.lhs)) {
        alive[i] = false;
        queue.emplace_back(rules[i].lhs, rules[i].rhs);
      }
    }
    rules.push_back(nr);
    alive.push_back(true);
    dirty = true;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (!alive[i]) continue;
      CodeString r2 = reduce(rules[i].rhs);
      if (r2 != rules[i].rhs) {
        rules[i].rhs = std::move(r2);
        dirty = true;
      }
    }
    std::size_t live = static_cast<std::size_t>(std::count(alive.begin(), alive.end(), true));
    if (live > opt.max_rules) {
      result.completed = false;
      result.system = RewritingSystem(k, current(), order, false);
      result.diagnostics = "rule budget exhausted (" + std::to_string(live) + " rules > " +
                           std::to_string(opt.max_rules) + ")";
      return result;
    }
    const std::size_t ni = rules.size() - 1;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (!alive[i]) continue;
      for (auto& cp : detail::critical_pairs(rules[ni], rules[i])) queue.push_back(std::move(cp));
      if (i != ni)
        for (auto& cp : detail::critical_pairs(rules[i], rules[ni])) queue.push_back(std::move(cp));
    }
  }
  std::vector<Rule> final_rules = current();
  RewritingSystem sys(k, final_rules, order, false);
  // Overflowed equations must be consequences of the final system.
  for (const auto& [u, v] : overflow) {
    if (sys.reduce(u) != sys.reduce(v)) {
      result.completed = false;
      result.system = sys;
      result.diagnostics = "length budget exhausted: an equation longer than " + std::to_string(opt.max_len) +
                           " letters remains unresolved";
      return result;
    }
  }
  // Certification pass: every critical pair of the final rules must resolve
  // and every relator must reduce to the identity.
  for (const Rule& a : final_rules) {
    for (const Rule& b : final_rules) {
      for (const auto& [u, v] : detail::critical_pairs(a, b)) {
        if (sys.reduce(u) != sys.reduce(v)) {
          result.completed = false;
          result.system = sys;
          result.diagnostics = "certification failed: unresolved critical pair";
          return result;
        }
      }
    }
  }
  for (const Word& r : P.relators) {
    if (!sys.reduce(to_codes(r)).empty()) {
      result.completed = false;
      result.system = sys;
      result.diagnostics = "certification failed: a relator does not reduce to the identity";
      return result;
    }
  }
  result.completed = true;
  result.system = RewritingSystem(k, final_rules, order, true);
  result.diagnostics = "confluent, " + std::to_string(final_rules.size()) + " rules";
  return result;
}

// Word-problem oracle for one of the supported group families.
class NormalFormOracle {
 public:
  enum class Kind { free, free_abelian, torus_amalgam, rewriting };

  static NormalFormOracle free(std::vector<std::string> alphabet) {
    NormalFormOracle o;
    o.kind_ = Kind::free;
    o.alphabet_ = std::move(alphabet);
    return o;
  }

  static NormalFormOracle free_abelian(std::vector<std::string> alphabet) {
    NormalFormOracle o;
    o.kind_ = Kind::free_abelian;
    o.alphabet_ = std::move(alphabet);
    return o;
  }

  // <x, y | x^p = y^q>, p, q >= 1 coprime.
  static NormalFormOracle torus_amalgam(int p, int q) {
    if (p < 1 || q < 1) throw InputError("torus amalgam: p and q must be positive");
    if (std::gcd(p, q) != 1) throw InputError("torus amalgam: gcd(p, q) must be 1");
    NormalFormOracle o;
    o.kind_ = Kind::torus_amalgam;
    o.alphabet_ = {"x", "y"};
    o.p_ = p;
    o.q_ = q;
    return o;
  }

  static NormalFormOracle rewriting(std::vector<std::string> alphabet, RewritingSystem rs) {
    if (rs.generator_count() != alphabet.size()) throw InputError("rewriting oracle: alphabet size mismatch");
    NormalFormOracle o;
    o.kind_ = Kind::rewriting;
    o.alphabet_ = std::move(alphabet);
    o.rs_ = std::make_shared<RewritingSystem>(std::move(rs));
    return o;
  }

  Kind kind() const { return kind_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  int p() const { return p_; }
  int q() const { return q_; }
  const RewritingSystem* rewriting_system() const { return rs_.get(); }

  // False only for a rewriting system whose confluence was not certified.
  bool certified() const { return kind_ != Kind::rewriting || rs_->confluent(); }

  std::string describe() const {
    switch (kind_) {
      case Kind::free: return "free(rank " + std::to_string(alphabet_.size()) + ")";
      case Kind::free_abelian: return "free-abelian(rank " + std::to_string(alphabet_.size()) + ")";
      case Kind::torus_amalgam: return "torus-amalgam(" + std::to_string(p_) + "," + std::to_string(q_) + ")";
      case Kind::rewriting:
        return std::string("rewriting(") + std::to_string(rs_->rules().size()) + " rules, " +
               (rs_->confluent() ? "confluent" : "partial") + ")";
    }
    return "?";
  }

  Word normal_form(const Word& w) const {
    if (w.max_generator() > alphabet_.size()) throw InputError("normal_form: word outside the oracle alphabet");
    switch (kind_) {
      case Kind::free: return w;
      case Kind::free_abelian: {
        std::vector<int> e(alphabet_.size(), 0);
        for (const Letter& l : w.letters()) e[l.gen] += l.sign;
        Word out;
        for (std::uint32_t g = 0; g < e.size(); ++g) out *= Word::generator(g, e[g]);
        return out;
      }
      case Kind::torus_amalgam: return torus_normal_form(w);
      case Kind::rewriting: return from_codes(rs_->reduce(to_codes(w)));
    }
    return w;
  }

  bool is_identity(const Word& w) const { return normal_form(w).empty(); }

  // Abelianization of the oracle group where it is canonical: x -> q, y -> p
  // for the torus amalgam, +1 per letter otherwise.
  long long alpha(const Word& w) const {
    long long s = 0;
    for (const Letter& l : w.letters())
      s += l.sign * (kind_ == Kind::torus_amalgam ? (l.gen == 0 ? q_ : p_) : 1);
    return s;
  }

 private:
  // z^m followed by alternating syllables x^a (0<a<p), y^b (0<b<q); z = x^p = y^q.
  Word torus_normal_form(const Word& w) const {
    long long m = 0;
    std::vector<std::pair<std::uint32_t, int>> syl;
    const int order[2] = {p_, q_};
    for (const Letter& l : w.letters()) {
      const int ord = order[l.gen];
      if (!syl.empty() && syl.back().first == l.gen) {
        int& e = syl.back().second;
        e += l.sign;
        if (e == ord) {
          syl.pop_back();
          ++m;
        } else if (e == 0) {
          syl.pop_back();
        }
      } else {
        if (l.sign > 0) {
          if (ord == 1) {
            ++m;
          } else {
            syl.emplace_back(l.gen, 1);
          }
        } else {
          --m;
          if (ord > 1) syl.emplace_back(l.gen, ord - 1);
        }
      }
    }
    Word out = Word::generator(0, static_cast<int>(m * p_));
    for (const auto& [g, e] : syl) out *= Word::generator(g, e);
    return out;
  }

  Kind kind_ = Kind::free;
  std::vector<std::string> alphabet_;
  int p_ = 0, q_ = 0;
  std::shared_ptr<const RewritingSystem> rs_;
};

struct Ball {
  std::vector<Word> elements;  // sorted shortlex
  bool partial = false;        // uncertified oracle: duplicates possible
};

// Distinct normal forms of words of length <= radius, by breadth-first search.
inline Ball ball(const NormalFormOracle& o, int radius, std::size_t max_elements = 50'000'000) {
  if (radius < 0) throw InputError("ball: radius must be nonnegative");
  Ball B;
  B.partial = !o.certified();
  std::unordered_set<Word, WordHash> seen;
  std::vector<Word> frontier{Word()};
  seen.insert(Word());
  const auto k = static_cast<std::uint32_t>(o.alphabet().size());
  for (int r = 0; r < radius; ++r) {
    std::vector<Word> next;
    for (const Word& g : frontier) {
      for (std::uint32_t gen = 0; gen < k; ++gen) {
        for (int s : {1, -1}) {
          Word h = g;
          h.push_back({gen, s});
          Word nf = o.normal_form(h);
          if (seen.insert(nf).second) {
            next.push_back(std::move(nf));
            if (seen.size() > max_elements) throw ResourceError("ball: more than " + std::to_string(max_elements) + " elements");
          }
        }
      }
    }
    frontier = std::move(next);
  }
  B.elements.assign(seen.begin(), seen.end());
  std::sort(B.elements.begin(), B.elements.end());
  return B;
}

}  // namespace l2alex
