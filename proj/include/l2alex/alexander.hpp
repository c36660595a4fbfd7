#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "l2alex/abelianization.hpp"
#include "l2alex/errors.hpp"
#include "l2alex/fox.hpp"
#include "l2alex/laurent.hpp"
#include "l2alex/presentation.hpp"

namespace l2alex {

using LaurentMatrix = std::vector<std::vector<LaurentPolynomial>>;

// Image of a free-ring element under w -> t^alpha(w).
template <class C>
LaurentPolynomial abelianize_to_laurent(const FreeRingElement<C>& x, const AbelianizationMap& alpha) {
  LaurentPolynomial out;
  for (const auto& [w, c] : x.terms()) {
    if constexpr (std::is_integral_v<C>) {
      out.add(static_cast<int>(alpha(w)), BigInt(c));
    } else {
      throw InputError("abelianize_to_laurent: integer coefficients required");
    }
  }
  return out;
}

// Fox matrix with row `deleted_row` (1-based) removed, abelianized.
inline LaurentMatrix alexander_matrix(const Presentation& P, std::size_t deleted_row = 1) {
  const AbelianizationMap alpha = abelianization(P);
  const FoxMatrix F = delete_row(fox_matrix(P), deleted_row);
  LaurentMatrix M(F.rows(), std::vector<LaurentPolynomial>(F.cols()));
  for (std::size_t i = 0; i < F.rows(); ++i)
    for (std::size_t j = 0; j < F.cols(); ++j) M[i][j] = abelianize_to_laurent(F.entries[i][j], alpha);
  return M;
}

struct AlexanderResult {
  LaurentPolynomial polynomial;  // normalized
  LaurentPolynomial minor;       // raw determinant of the row-deleted minor
  long long alpha_deleted = 0;   // alpha of the deleted generator
};

// det F_{P,i} = Delta * (t^alpha(g_i) - 1)/(t - 1) up to units; the factor is
// divided out so presentations with non-meridian generators give Delta.
inline AlexanderResult alexander(const Presentation& P, std::size_t deleted_row = 1) {
  if (P.deficiency() != 1) throw InputError("alexander: deficiency-one presentation required");
  AlexanderResult r;
  const AbelianizationMap alpha = abelianization(P);
  if (deleted_row < 1 || deleted_row > P.rank()) throw InputError("alexander: row index out of range");
  r.alpha_deleted = alpha[deleted_row - 1];
  if (r.alpha_deleted == 0)
    throw InputError("alexander: deleted generator has trivial abelianization; choose another row");
  r.minor = bareiss_determinant(alexander_matrix(P, deleted_row));
  if (r.minor.is_zero()) throw InputError("alexander: zero determinant (presentation defect)");
  LaurentPolynomial cyclo;
  for (long long e = 0; e < std::llabs(r.alpha_deleted); ++e) cyclo.add(static_cast<int>(e), 1);
  r.polynomial = exact_divide(r.minor, cyclo).normalized();
  return r;
}

inline LaurentPolynomial alexander_polynomial(const Presentation& P) { return alexander(P).polynomial; }

// |lead| * prod max(1, |root|), roots from the companion matrix then polished
// by Newton steps.
inline double mahler_measure(const LaurentPolynomial& f) {
  if (f.is_zero()) throw InputError("mahler_measure: zero polynomial");
  const std::vector<double> c = f.dense_coefficients();  // low to high, c[0] != 0
  const std::size_t d = c.size() - 1;
  const double lead = c.back();
  double m = std::abs(lead);
  if (d == 0) return m;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 1; i < d; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < d; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -c[i] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw InputError("mahler_measure: eigenvalue iteration failed");
  auto eval = [&](std::complex<double> z, std::complex<double>& deriv) {
    std::complex<double> p = 0;
    deriv = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      deriv = deriv * z + p;
      p = p * z + c[i];
    }
    return p;
  };
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    std::complex<double> z = es.eigenvalues()[i];
    for (int it = 0; it < 8; ++it) {
      std::complex<double> dp;
      const std::complex<double> p = eval(z, dp);
      if (std::abs(p) <= 1e-12 * std::abs(lead) || dp == 0.0) break;
      const std::complex<double> z2 = z - p / dp;
      std::complex<double> dp2;
      if (std::abs(eval(z2, dp2)) >= std::abs(p)) break;
      z = z2;
    }
    m *= std::max(1.0, std::abs(z));
  }
  return m;
}

}  // namespace l2alex
