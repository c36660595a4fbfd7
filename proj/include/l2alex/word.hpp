#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "l2alex/errors.hpp"

namespace l2alex {

struct Letter {
  std::uint32_t gen = 0;
  int sign = 1;  // +1 or -1

  Letter inverse() const { return {gen, -sign}; }
  // Shortlex rank: g1 < G1 < g2 < G2 < ...
  std::uint32_t rank() const { return 2 * gen + (sign < 0 ? 1u : 0u); }

  friend bool operator==(const Letter&, const Letter&) = default;
  friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
    return a.rank() <=> b.rank();
  }
};

inline bool cancels(const Letter& a, const Letter& b) {
  return a.gen == b.gen && a.sign == -b.sign;
}

// Freely reduced word in the free group on generators 0..k-1.
class Word {
 public:
  Word() = default;

  static Word generator(std::uint32_t g, int power = 1) {
    Word w;
    const int s = power < 0 ? -1 : 1;
    for (int i = 0; i < std::abs(power); ++i) w.letters_.push_back({g, s});
    return w;
  }

  // Takes ownership of an arbitrary letter sequence and reduces it.
  static Word from_letters(std::span<const Letter> raw) {
    Word w;
    w.letters_.reserve(raw.size());
    for (const Letter& l : raw) w.push_back(l);
    return w;
  }

  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }
  const Letter& back() const { return letters_.back(); }

  // Appends one letter, cancelling against the last letter if possible.
  void push_back(const Letter& l) {
    if (!letters_.empty() && cancels(letters_.back(), l)) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }

  Word inverse() const {
    Word w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
    return w;
  }

  Word& operator*=(const Word& other) {
    for (const Letter& l : other.letters_) push_back(l);
    return *this;
  }
  friend Word operator*(Word a, const Word& b) { return a *= b; }

  Word pow(int n) const {
    Word base = n < 0 ? inverse() : *this;
    Word out;
    for (int i = 0; i < std::abs(n); ++i) out *= base;
    return out;
  }

  Word prefix(std::size_t n) const {
    Word w;
    w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(n));
    return w;
  }

  Word subword(std::size_t pos, std::size_t len) const {
    Word w;
    w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                      letters_.begin() + static_cast<std::ptrdiff_t>(pos + len));
    return w;
  }

  int exponent_sum(std::uint32_t g) const {
    int s = 0;
    for (const Letter& l : letters_)
      if (l.gen == g) s += l.sign;
    return s;
  }

  bool uses(std::uint32_t g) const {
    return std::any_of(letters_.begin(), letters_.end(), [g](const Letter& l) { return l.gen == g; });
  }

  std::size_t occurrences(std::uint32_t g) const {
    return static_cast<std::size_t>(
        std::count_if(letters_.begin(), letters_.end(), [g](const Letter& l) { return l.gen == g; }));
  }

  std::uint32_t max_generator() const {
    std::uint32_t m = 0;
    for (const Letter& l : letters_) m = std::max(m, l.gen + 1);
    return m;
  }

  // Applies the homomorphism g_i -> images[i].
  Word substitute(std::span<const Word> images) const {
    Word out;
    for (const Letter& l : letters_) {
      if (l.gen >= images.size()) throw InputError("substitute: generator out of range");
      out *= l.sign > 0 ? images[l.gen] : images[l.gen].inverse();
    }
    return out;
  }

  // Cyclically reduced conjugate.
  Word cyclic_reduction() const {
    std::size_t lo = 0, hi = letters_.size();
    while (hi - lo >= 2 && cancels(letters_[lo], letters_[hi - 1])) {
      ++lo;
      --hi;
    }
    return subword(lo, hi - lo);
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (const Letter& l : letters_) {
      h ^= l.rank() + 1;
      h *= 1099511628211ull;
    }
    return h;
  }

  friend bool operator==(const Word&, const Word&) = default;
  // Shortlex.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(),
                                                  b.letters_.begin(), b.letters_.end());
  }

 private:
  std::vector<Letter> letters_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const { return w.hash(); }
};

inline Word free_reduce(std::span<const Letter> raw) { return Word::from_letters(raw); }

inline Word commutator(const Word& a, const Word& b) { return a * b * a.inverse() * b.inverse(); }

namespace detail {

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

inline std::string to_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline int find_name(std::span<const std::string> alphabet, std::string_view name) {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == name) return static_cast<int>(i);
  return -1;
}

// Resolves a bare token (no exponent) to a letter, or returns false.
inline bool resolve_token(std::span<const std::string> alphabet, std::string_view tok, Letter& out) {
  int i = find_name(alphabet, tok);
  if (i >= 0) {
    out = {static_cast<std::uint32_t>(i), 1};
    return true;
  }
  // Uppercase spelling of a lowercase-bearing name denotes the inverse.
  const std::string low = to_lower(tok);
  if (to_upper(tok) == tok) {
    for (std::size_t j = 0; j < alphabet.size(); ++j) {
      if (to_lower(alphabet[j]) == low && to_upper(alphabet[j]) != alphabet[j]) {
        out = {static_cast<std::uint32_t>(j), -1};
        return true;
      }
    }
  }
  return false;
}

}  // namespace detail

// Parses the word text format: whitespace-separated name tokens, an uppercase
// spelling for the inverse, optional `^n` integer exponents. A token that is not
// a name but is a run of one-letter names ("abAB") is split into letters.
// "1" and "" denote the identity.
inline Word parse_word(std::string_view text, std::span<const std::string> alphabet) {
  std::vector<Letter> raw;
  std::string spaced;
  for (char c : text) {
    if (c == '*' || c == '.' || c == '(' || c == ')') {
      if (c == '(' || c == ')') throw InputError("parse_word: parentheses are not supported");
      spaced += ' ';
    } else {
      spaced += c;
    }
  }
  std::istringstream in(spaced);
  std::string tok;
  while (in >> tok) {
    if (tok == "1") continue;
    std::string base = tok;
    int power = 1;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      base = tok.substr(0, caret);
      const std::string e = tok.substr(caret + 1);
      try {
        std::size_t used = 0;
        power = std::stoi(e, &used);
        if (used != e.size()) throw InputError("");
      } catch (...) {
        throw InputError("parse_word: malformed exponent in token '" + tok + "'");
      }
    }
    if (base.empty()) throw InputError("parse_word: malformed token '" + tok + "'");
    Letter l;
    if (detail::resolve_token(alphabet, base, l)) {
      for (int i = 0; i < std::abs(power); ++i) raw.push_back(power < 0 ? l.inverse() : l);
      continue;
    }
    // Split into single-character names.
    std::vector<Letter> split;
    for (char c : base) {
      Letter lc;
      if (!detail::resolve_token(alphabet, std::string_view(&c, 1), lc))
        throw InputError("parse_word: unknown generator '" + base + "'");
      split.push_back(lc);
    }
    if (power != 1) {
      if (split.size() != 1) throw InputError("parse_word: exponent on a multi-letter token '" + tok + "'");
    }
    for (int i = 0; i < std::abs(power); ++i)
      for (const Letter& lc : split) raw.push_back(power < 0 ? lc.inverse() : lc);
  }
  return free_reduce(raw);
}

// Spelling of an inverse generator: the uppercase name when that is unambiguous.
inline std::string inverse_name(std::span<const std::string> alphabet, std::uint32_t g) {
  const std::string& n = alphabet[g];
  const std::string up = detail::to_upper(n);
  if (up != n && detail::find_name(alphabet, up) < 0) {
    bool clash = false;
    for (const std::string& other : alphabet)
      if (&other != &n && detail::to_lower(other) == detail::to_lower(n) && detail::to_upper(other) != other)
        clash = true;
    if (!clash) return up;
  }
  return n + "^-1";
}

inline std::string format_word(const Word& w, std::span<const std::string> alphabet) {
  if (w.empty()) return "1";
  std::string out;
  for (const Letter& l : w.letters()) {
    if (!out.empty()) out += ' ';
    if (l.gen >= alphabet.size()) throw InputError("format_word: generator out of range");
    out += l.sign > 0 ? alphabet[l.gen] : inverse_name(alphabet, l.gen);
  }
  return out;
}

}  // namespace l2alex

template <>
struct std::hash<l2alex::Word> {
  std::size_t operator()(const l2alex::Word& w) const { return w.hash(); }
};
