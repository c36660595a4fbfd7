#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <numeric>
#include <vector>

#include "l2alex/errors.hpp"
#include "l2alex/presentation.hpp"

namespace l2alex {

using IntVector = std::vector<long long>;

// Integer basis of the kernel of the exponent-sum matrix (relators x generators),
// i.e. of Hom(H_1, Z). Each vector is primitive with first nonzero entry positive.
inline std::vector<IntVector> integer_kernel(const std::vector<IntVector>& rows, std::size_t ncols) {
  using Q = boost::rational<long long>;
  std::vector<std::vector<Q>> m;
  for (const IntVector& r : rows) {
    std::vector<Q> qr(ncols);
    for (std::size_t c = 0; c < ncols; ++c) qr[c] = Q(r[c]);
    m.push_back(std::move(qr));
  }
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < ncols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == Q(0)) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    const Q inv = Q(1) / m[row][c];
    for (Q& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == Q(0)) continue;
      const Q f = m[r][c];
      for (std::size_t k = 0; k < ncols; ++k) m[r][k] -= f * m[row][k];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++row;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<IntVector> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Q> v(ncols, Q(0));
    v[f] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[static_cast<std::size_t>(pivot_col[r])] = -m[r][f];
    long long den = 1;
    for (const Q& x : v) den = std::lcm(den, x.denominator());
    IntVector iv(ncols);
    long long g = 0;
    for (std::size_t k = 0; k < ncols; ++k) {
      iv[k] = (v[k] * den).numerator();
      g = std::gcd(g, iv[k]);
    }
    for (long long& x : iv) x /= g;
    for (long long x : iv) {
      if (x == 0) continue;
      if (x < 0)
        for (long long& y : iv) y = -y;
      break;
    }
    basis.push_back(std::move(iv));
  }
  return basis;
}

inline std::vector<IntVector> exponent_matrix(const Presentation& P) {
  std::vector<IntVector> rows;
  for (const Word& r : P.relators) {
    IntVector row(P.rank(), 0);
    for (const Letter& l : r.letters()) row[l.gen] += l.sign;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct AbelianizationMap {
  IntVector values;

  long long operator()(const Word& w) const {
    long long s = 0;
    for (const Letter& l : w.letters()) s += l.sign * values.at(l.gen);
    return s;
  }
  long long operator[](std::size_t g) const { return values.at(g); }
  std::size_t size() const { return values.size(); }
  AbelianizationMap negated() const {
    AbelianizationMap a{values};
    for (long long& x : a.values) x = -x;
    return a;
  }
  friend bool operator==(const AbelianizationMap&, const AbelianizationMap&) = default;
};

// The surjection onto Z, sign fixed by a positive first nonzero value.
inline AbelianizationMap abelianization(const Presentation& P) {
  auto basis = integer_kernel(exponent_matrix(P), P.rank());
  if (basis.size() != 1)
    throw InputError("abelianization: free rank of H_1 is " + std::to_string(basis.size()) +
                     ", expected 1 for a knot-like presentation");
  return AbelianizationMap{std::move(basis.front())};
}

}  // namespace l2alex
