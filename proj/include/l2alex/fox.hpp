#pragma once

#include <cmath>
#include <complex>
#include <cctype>
#include <cstdlib>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "l2alex/abelianization.hpp"
#include "l2alex/errors.hpp"
#include "l2alex/presentation.hpp"

namespace l2alex {

// Element of the group ring of the free group: finite map Word -> coefficient.
template <class C>
class FreeRingElement {
 public:
  using Coefficient = C;
  using Terms = std::map<Word, C>;

  FreeRingElement() = default;
  FreeRingElement(C c) {  // NOLINT: scalar embedding
    if (c != C(0)) terms_[Word()] = c;
  }
  FreeRingElement(const Word& w, C c = C(1)) {
    if (c != C(0)) terms_[w] = c;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  C coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? C(0) : it->second;
  }

  void add(const Word& w, C c) {
    if (c == C(0)) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second == C(0)) terms_.erase(it);
    }
  }

  FreeRingElement& operator+=(const FreeRingElement& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
  }
  FreeRingElement& operator-=(const FreeRingElement& o) {
    for (const auto& [w, c] : o.terms_) add(w, -c);
    return *this;
  }
  friend FreeRingElement operator+(FreeRingElement a, const FreeRingElement& b) { return a += b; }
  friend FreeRingElement operator-(FreeRingElement a, const FreeRingElement& b) { return a -= b; }
  friend FreeRingElement operator-(const FreeRingElement& a) { return FreeRingElement() - a; }

  friend FreeRingElement operator*(const FreeRingElement& a, const FreeRingElement& b) {
    FreeRingElement out;
    for (const auto& [u, cu] : a.terms_)
      for (const auto& [v, cv] : b.terms_) out.add(u * v, cu * cv);
    return out;
  }
  friend FreeRingElement operator*(C s, const FreeRingElement& a) {
    FreeRingElement out;
    for (const auto& [w, c] : a.terms_) out.add(w, s * c);
    return out;
  }

  friend bool operator==(const FreeRingElement&, const FreeRingElement&) = default;

 private:
  Terms terms_;
};

using IntFreeRing = FreeRingElement<long long>;
using ComplexFreeRing = FreeRingElement<std::complex<double>>;

namespace detail {

template <class C>
std::string format_coefficient(const C& c, bool& negative) {
  if constexpr (std::is_same_v<C, std::complex<double>>) {
    negative = false;
    if (c.imag() == 0.0) {
      negative = c.real() < 0;
      std::ostringstream os;
      os.precision(15);
      os << std::abs(c.real());
      return os.str();
    }
    std::ostringstream os;
    os.precision(15);
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    return os.str();
  } else {
    negative = c < 0;
    std::ostringstream os;
    os.precision(15);
    os << (c < 0 ? -c : c);
    return os.str();
  }
}

}  // namespace detail

// "1 + a b - a b a B A"
template <class C>
std::string format_ring_element(const FreeRingElement<C>& x, std::span<const std::string> alphabet) {
  if (x.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : x.terms()) {
    bool neg = false;
    std::string mag = detail::format_coefficient(c, neg);
    if (first) {
      out += neg ? "-" : "";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    if (w.empty()) {
      out += mag;
    } else {
      if (mag != "1") out += mag + " ";
      out += format_word(w, alphabet);
    }
  }
  return out;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// "(1.5-2i)", "(3i)", "2.5" -> complex.
inline std::complex<double> parse_coefficient(const std::string& t) {
  std::string s = t;
  if (!s.empty() && s.front() == '(') {
    if (s.back() != ')') throw InputError("malformed coefficient '" + t + "'");
    s = trim(s.substr(1, s.size() - 2));
  }
  if (s.empty()) throw InputError("empty coefficient");
  const char* str = s.c_str();
  char* end = nullptr;
  double re = std::strtod(str, &end);
  if (end == str) {
    if (s == "i" || s == "+i") return {0, 1};
    if (s == "-i") return {0, -1};
    throw InputError("malformed coefficient '" + t + "'");
  }
  if (*end == '\0') return {re, 0};
  if (*end == 'i' && end[1] == '\0') return {0, re};
  const char* rest = end;
  if (*rest != '+' && *rest != '-') throw InputError("malformed coefficient '" + t + "'");
  double im = 1.0;
  if ((rest[1] == 'i') && rest[2] == '\0') {
    im = *rest == '-' ? -1.0 : 1.0;
  } else {
    im = std::strtod(rest, &end);
    if (end == rest || *end != 'i' || end[1] != '\0') throw InputError("malformed coefficient '" + t + "'");
  }
  return {re, im};
}

}  // namespace detail

// Linear combination of words: "1 - 2 g + (0.5+1i) a b^-1". Terms are split at
// top-level '+'/'-'; each term is an optional coefficient then a word.
inline ComplexFreeRing parse_ring_element(std::string_view text, std::span<const std::string> alphabet) {
  std::vector<std::pair<int, std::string>> terms;
  std::string cur;
  int sign = 1, depth = 0;
  auto flush = [&](std::size_t at) {
    if (detail::trim(cur).empty()) {
      if (!terms.empty() || at != 0) throw InputError("ring element: empty term in '" + std::string(text) + "'");
    } else {
      terms.emplace_back(sign, detail::trim(cur));
    }
    cur.clear();
  };
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    const bool exponent_sign = k > 0 && text[k - 1] == '^';
    const bool float_sign = k > 1 && (text[k - 1] == 'e' || text[k - 1] == 'E') &&
                            (std::isdigit(static_cast<unsigned char>(text[k - 2])) || text[k - 2] == '.');
    if ((c == '+' || c == '-') && depth == 0 && !exponent_sign && !float_sign) {
      if (!detail::trim(cur).empty() || !terms.empty()) flush(k);
      sign = c == '-' ? -1 : 1;
      continue;
    }
    cur += c;
  }
  if (depth != 0) throw InputError("ring element: unbalanced parentheses");
  if (!detail::trim(cur).empty()) {
    terms.emplace_back(sign, detail::trim(cur));
  } else if (!terms.empty() || text.find_first_of("+-") != std::string_view::npos) {
    throw InputError("ring element: dangling sign in '" + std::string(text) + "'");
  }
  ComplexFreeRing out;
  for (const auto& [sg, t] : terms) {
    std::complex<double> c = 1.0;
    std::string rest = t;
    if (t.front() == '(') {
      const auto close = t.find(')');
      c = detail::parse_coefficient(t.substr(0, close + 1));
      rest = t.substr(close + 1);
    } else if (std::isdigit(static_cast<unsigned char>(t.front())) || t.front() == '.') {
      const char* str = t.c_str();
      char* end = nullptr;
      const double v = std::strtod(str, &end);
      c = v;
      rest = std::string(end);
    }
    rest = detail::trim(rest);
    if (!rest.empty() && rest.front() == '*') rest = detail::trim(rest.substr(1));
    out.add(parse_word(rest, alphabet), static_cast<double>(sg) * c);
  }
  return out;
}

// d(w)/d(g): sum over occurrences of g^{+1} of the prefix before it, minus the
// prefixes through each occurrence of g^{-1}.
inline IntFreeRing fox_derivative(const Word& w, std::uint32_t g) {
  IntFreeRing out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k].gen != g) continue;
    if (w[k].sign > 0) {
      out.add(w.prefix(k), 1);
    } else {
      out.add(w.prefix(k + 1), -1);
    }
  }
  return out;
}

template <class C>
struct FoxMatrixT {
  std::vector<std::string> row_labels;  // generators
  std::vector<std::string> col_labels;  // relators
  std::vector<std::vector<FreeRingElement<C>>> entries;  // [row][col]

  std::size_t rows() const { return entries.size(); }
  std::size_t cols() const { return col_labels.size(); }
};

using FoxMatrix = FoxMatrixT<long long>;

inline FoxMatrix fox_matrix(const Presentation& P) {
  FoxMatrix F;
  F.row_labels = P.generators;
  for (std::size_t j = 0; j < P.relators.size(); ++j) F.col_labels.push_back("r" + std::to_string(j + 1));
  F.entries.assign(P.rank(), std::vector<IntFreeRing>(P.relators.size()));
  for (std::uint32_t i = 0; i < P.rank(); ++i)
    for (std::size_t j = 0; j < P.relators.size(); ++j) F.entries[i][j] = fox_derivative(P.relators[j], i);
  return F;
}

// Deletes row i (1-based).
template <class C>
FoxMatrixT<C> delete_row(const FoxMatrixT<C>& F, std::size_t i) {
  if (i < 1 || i > F.rows())
    throw InputError("delete_row: index " + std::to_string(i) + " out of range 1.." + std::to_string(F.rows()));
  FoxMatrixT<C> out = F;
  out.row_labels.erase(out.row_labels.begin() + static_cast<std::ptrdiff_t>(i - 1));
  out.entries.erase(out.entries.begin() + static_cast<std::ptrdiff_t>(i - 1));
  return out;
}

// c [w] -> c t^alpha(w) [w].
template <class C>
ComplexFreeRing twist(const FreeRingElement<C>& x, const AbelianizationMap& alpha, double t) {
  if (!(t > 0)) throw InputError("twist: t must be positive");
  ComplexFreeRing out;
  for (const auto& [w, c] : x.terms())
    out.add(w, std::complex<double>(c) * std::pow(t, static_cast<double>(alpha(w))));
  return out;
}

template <class C>
FoxMatrixT<std::complex<double>> twist(const FoxMatrixT<C>& F, const AbelianizationMap& alpha, double t) {
  FoxMatrixT<std::complex<double>> out;
  out.row_labels = F.row_labels;
  out.col_labels = F.col_labels;
  for (const auto& row : F.entries) {
    out.entries.emplace_back();
    for (const auto& e : row) out.entries.back().push_back(twist(e, alpha, t));
  }
  return out;
}

// Sum_i (dr/dg_i)(g_i - 1) in the free ring; equals r - 1 there.
inline IntFreeRing fox_expansion(const Presentation& P, const Word& r) {
  IntFreeRing s;
  for (std::uint32_t i = 0; i < P.rank(); ++i)
    s += fox_derivative(r, i) * (IntFreeRing(Word::generator(i)) - IntFreeRing(1LL));
  return s;
}

// Image of a free-ring element in the group ring of H_1 modulo torsion: words
// go to their coordinate vectors under an integer kernel basis of the
// exponent-sum matrix.
using AbelianRingElement = std::map<std::vector<long long>, long long>;

inline AbelianRingElement abelianize(const IntFreeRing& x, const std::vector<IntVector>& basis) {
  AbelianRingElement out;
  for (const auto& [w, c] : x.terms()) {
    std::vector<long long> key;
    for (const IntVector& v : basis) {
      long long s = 0;
      for (const Letter& l : w.letters()) s += l.sign * v.at(l.gen);
      key.push_back(s);
    }
    auto& slot = out[key];
    slot += c;
    if (slot == 0) out.erase(key);
  }
  return out;
}

// Abelianized fundamental-formula residual for every relator; all entries are
// zero for a consistent Fox calculus. Necessary-only: it sees H_1, not G.
inline std::vector<AbelianRingElement> abelianized_residual(const Presentation& P) {
  const auto basis = integer_kernel(exponent_matrix(P), P.rank());
  std::vector<AbelianRingElement> out;
  for (const Word& r : P.relators) out.push_back(abelianize(fox_expansion(P, r), basis));
  return out;
}

}  // namespace l2alex
