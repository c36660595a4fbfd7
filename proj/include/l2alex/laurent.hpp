#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "l2alex/errors.hpp"

namespace l2alex {

using BigInt = boost::multiprecision::cpp_int;

// Integer Laurent polynomial in one variable t.
class LaurentPolynomial {
 public:
  using Terms = std::map<int, BigInt>;

  LaurentPolynomial() = default;
  LaurentPolynomial(long long c) {  // NOLINT: constant embedding
    if (c != 0) terms_[0] = c;
  }
  static LaurentPolynomial monomial(int e, BigInt c = 1) {
    LaurentPolynomial p;
    if (c != 0) p.terms_[e] = std::move(c);
    return p;
  }
  // c0 + c1 t + c2 t^2 + ...
  static LaurentPolynomial from_coefficients(std::initializer_list<long long> cs, int low = 0) {
    LaurentPolynomial p;
    int e = low;
    for (long long c : cs) p.add(e++, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int min_degree() const { return terms_.empty() ? 0 : terms_.begin()->first; }
  int max_degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
  BigInt coefficient(int e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? BigInt(0) : it->second;
  }
  BigInt leading() const { return terms_.empty() ? BigInt(0) : terms_.rbegin()->second; }

  void add(int e, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  LaurentPolynomial& operator+=(const LaurentPolynomial& o) {
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }
  LaurentPolynomial& operator-=(const LaurentPolynomial& o) {
    for (const auto& [e, c] : o.terms_) add(e, -c);
    return *this;
  }
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) { return a -= b; }
  friend LaurentPolynomial operator-(const LaurentPolynomial& a) { return LaurentPolynomial() - a; }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) out.add(ea + eb, ca * cb);
    return out;
  }
  friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

  LaurentPolynomial shifted(int k) const {
    LaurentPolynomial out;
    for (const auto& [e, c] : terms_) out.terms_[e + k] = c;
    return out;
  }

  // t -> t^-1.
  LaurentPolynomial reflected() const {
    LaurentPolynomial out;
    for (const auto& [e, c] : terms_) out.terms_[-e] = c;
    return out;
  }

  // t -> t^k (k != 0).
  LaurentPolynomial substituted_power(int k) const {
    if (k == 0) throw InputError("substituted_power: k must be nonzero");
    LaurentPolynomial out;
    for (const auto& [e, c] : terms_) out.add(e * k, c);
    return out;
  }

  // Unit-class representative: min degree 0, positive leading coefficient.
  LaurentPolynomial normalized() const {
    if (terms_.empty()) return *this;
    LaurentPolynomial out = shifted(-min_degree());
    if (out.leading() < 0) out = -out;
    return out;
  }

  BigInt value_at_one() const {
    BigInt s = 0;
    for (const auto& [e, c] : terms_) s += c;
    return s;
  }

  double evaluate(double t) const {
    double s = 0;
    for (const auto& [e, c] : terms_) s += c.convert_to<double>() * std::pow(t, e);
    return s;
  }

  // Coefficients c_min .. c_max as doubles (low to high).
  std::vector<double> dense_coefficients() const {
    std::vector<double> v;
    if (terms_.empty()) return v;
    v.assign(static_cast<std::size_t>(max_degree() - min_degree() + 1), 0.0);
    for (const auto& [e, c] : terms_) v[static_cast<std::size_t>(e - min_degree())] = c.convert_to<double>();
    return v;
  }

 private:
  Terms terms_;
};

// "1 - t + t^2", ascending degree; "0" for zero.
inline std::string format_laurent(const LaurentPolynomial& p, const std::string& var = "t") {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const bool neg = c < 0;
    const BigInt mag = neg ? BigInt(-c) : c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag << "*";
    os << var;
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

// Exact quotient a / b; throws if b does not divide a.
inline LaurentPolynomial exact_divide(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  if (b.is_zero()) throw InputError("exact_divide: division by zero");
  if (a.is_zero()) return a;
  // Ordinary long division after moving both to min degree 0.
  const LaurentPolynomial bb = b.shifted(-b.min_degree());
  LaurentPolynomial rem = a.shifted(-a.min_degree()), quo;
  const int db = bb.max_degree();
  const BigInt lb = bb.leading();
  while (!rem.is_zero() && rem.max_degree() >= db) {
    const BigInt lr = rem.leading();
    if (lr % lb != 0) throw InputError("exact_divide: not divisible");
    const auto term = LaurentPolynomial::monomial(rem.max_degree() - db, lr / lb);
    quo += term;
    rem -= term * bb;
  }
  if (!rem.is_zero()) throw InputError("exact_divide: not divisible");
  return quo.shifted(a.min_degree() - b.min_degree());
}

// Fraction-free (Bareiss) determinant of a square matrix of Laurent
// polynomials. Rows are cleared to ordinary polynomials first.
inline LaurentPolynomial bareiss_determinant(std::vector<std::vector<LaurentPolynomial>> m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw InputError("determinant: matrix is not square");
  if (n == 0) return LaurentPolynomial(1);
  int shift = 0;
  for (auto& row : m) {
    int low = 0;
    bool any = false;
    for (const auto& e : row) {
      if (e.is_zero()) continue;
      low = any ? std::min(low, e.min_degree()) : e.min_degree();
      any = true;
    }
    if (!any) return LaurentPolynomial();
    for (auto& e : row) e = e.shifted(-low);
    shift += low;
  }
  int sign = 1;
  LaurentPolynomial prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m[p][k].is_zero()) ++p;
      if (p == n) return LaurentPolynomial();
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = exact_divide(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
      m[i][k] = LaurentPolynomial();
    }
    prev = m[k][k];
  }
  LaurentPolynomial det = m[n - 1][n - 1].shifted(shift);
  return sign > 0 ? det : -det;
}

}  // namespace l2alex
