#pragma once

#include <algorithm>
#include <complex>
#include <cstdlib>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "l2alex/errors.hpp"
#include "l2alex/fox.hpp"
#include "l2alex/oracle.hpp"
#include "l2alex/presentation.hpp"

namespace l2alex {

using Complex = std::complex<double>;
using OraclePtr = std::shared_ptr<const NormalFormOracle>;

inline OraclePtr make_oracle(NormalFormOracle o) { return std::make_shared<const NormalFormOracle>(std::move(o)); }

// Finitely supported element of C[G]; keys are oracle normal forms.
class GroupRingElement {
 public:
  using Terms = std::unordered_map<Word, Complex, WordHash>;

  GroupRingElement() = default;
  explicit GroupRingElement(OraclePtr o) : oracle_(std::move(o)) {}

  static GroupRingElement scalar(OraclePtr o, Complex c) {
    GroupRingElement x(std::move(o));
    x.add_normal(Word(), c);
    return x;
  }

  static GroupRingElement of_word(OraclePtr o, const Word& w, Complex c = 1.0) {
    GroupRingElement x(std::move(o));
    x.add(w, c);
    return x;
  }

  const OraclePtr& oracle() const { return oracle_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // Adds c [w], normalizing w.
  void add(const Word& w, Complex c) { add_normal(oracle_->normal_form(w), c); }

  // Adds c [nf] where nf is already a normal form.
  void add_normal(const Word& nf, Complex c) {
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(nf, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  Complex coefficient(const Word& w) const {
    auto it = terms_.find(oracle_->normal_form(w));
    return it == terms_.end() ? Complex(0) : it->second;
  }

  double l1_norm() const {
    double s = 0;
    for (const auto& [w, c] : terms_) s += std::abs(c);
    return s;
  }

  double l2_norm_squared() const {
    double s = 0;
    for (const auto& [w, c] : terms_) s += std::norm(c);
    return s;
  }

  // Drops terms with |c| <= tol.
  void prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(it->second) <= tol) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
  }

  // Canonical listing, sorted by normal form.
  std::vector<std::pair<Word, Complex>> sorted_terms() const {
    std::vector<std::pair<Word, Complex>> v(terms_.begin(), terms_.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  }

  GroupRingElement& operator+=(const GroupRingElement& o) {
    check_same(o);
    for (const auto& [w, c] : o.terms_) add_normal(w, c);
    return *this;
  }
  GroupRingElement& operator-=(const GroupRingElement& o) {
    check_same(o);
    for (const auto& [w, c] : o.terms_) add_normal(w, -c);
    return *this;
  }
  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
  friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
  friend GroupRingElement operator*(Complex s, const GroupRingElement& a) {
    GroupRingElement out(a.oracle_);
    if (s == 0.0) return out;
    for (const auto& [w, c] : a.terms_) out.terms_.emplace(w, s * c);
    return out;
  }

  void check_same(const GroupRingElement& o) const {
    if (oracle_ != o.oracle_ && !(oracle_ == nullptr || o.oracle_ == nullptr))
      throw InputError("group ring: oracle mismatch");
  }

  // Exact equality of supports and coefficients.
  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) { return a.terms_ == b.terms_; }

 private:
  OraclePtr oracle_;
  Terms terms_;
};

inline GroupRingElement gr_mul(const GroupRingElement& x, const GroupRingElement& y) {
  x.check_same(y);
  const OraclePtr& o = x.oracle() ? x.oracle() : y.oracle();
  GroupRingElement out(o);
  for (const auto& [u, cu] : x.terms())
    for (const auto& [v, cv] : y.terms()) out.add(u * v, cu * cv);
  return out;
}

inline GroupRingElement operator*(const GroupRingElement& x, const GroupRingElement& y) { return gr_mul(x, y); }

inline GroupRingElement gr_star(const GroupRingElement& x) {
  GroupRingElement out(x.oracle());
  for (const auto& [w, c] : x.terms()) out.add(w.inverse(), std::conj(c));
  return out;
}

inline Complex trace(const GroupRingElement& x) {
  auto it = x.terms().find(Word());
  return it == x.terms().end() ? Complex(0) : it->second;
}

// <x, y> = trace(x y*) = sum_g x_g conj(y_g).
inline Complex inner(const GroupRingElement& x, const GroupRingElement& y) {
  const auto& small = x.size() <= y.size() ? x : y;
  const auto& large = x.size() <= y.size() ? y : x;
  Complex s = 0;
  for (const auto& [w, c] : small.terms()) {
    auto it = large.terms().find(w);
    if (it == large.terms().end()) continue;
    s += &small == &x ? c * std::conj(it->second) : it->second * std::conj(c);
  }
  return s;
}

inline std::string format_group_ring(const GroupRingElement& x) {
  ComplexFreeRing f;
  for (const auto& [w, c] : x.terms()) f.add(w, c);
  return format_ring_element(f, x.oracle()->alphabet());
}

// rows x cols matrix of group ring elements over one oracle.
class GroupRingMatrix {
 public:
  GroupRingMatrix() = default;
  GroupRingMatrix(OraclePtr o, std::size_t rows, std::size_t cols)
      : oracle_(std::move(o)), rows_(rows), cols_(cols), data_(rows * cols, GroupRingElement(oracle_)) {}

  static GroupRingMatrix identity(OraclePtr o, std::size_t n, Complex lambda = 1.0) {
    GroupRingMatrix m(o, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = GroupRingElement::scalar(o, lambda);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const OraclePtr& oracle() const { return oracle_; }
  GroupRingElement& at(std::size_t i, std::size_t j) { return data_.at(i * cols_ + j); }
  const GroupRingElement& at(std::size_t i, std::size_t j) const { return data_.at(i * cols_ + j); }

  void set(std::size_t i, std::size_t j, GroupRingElement x) {
    if (x.oracle() != oracle_) throw InputError("group ring matrix: oracle mismatch");
    at(i, j) = std::move(x);
  }

 private:
  OraclePtr oracle_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<GroupRingElement> data_;
};

inline GroupRingMatrix operator*(const GroupRingMatrix& A, const GroupRingMatrix& B) {
  if (A.cols() != B.rows()) throw InputError("group ring matrix: dimension mismatch");
  if (A.oracle() != B.oracle()) throw InputError("group ring matrix: oracle mismatch");
  GroupRingMatrix C(A.oracle(), A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = 0; k < B.cols(); ++k)
      for (std::size_t j = 0; j < A.cols(); ++j) C.at(i, k) += gr_mul(A.at(i, j), B.at(j, k));
  return C;
}

inline GroupRingMatrix operator+(const GroupRingMatrix& A, const GroupRingMatrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw InputError("group ring matrix: dimension mismatch");
  GroupRingMatrix C = A;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) C.at(i, j) += B.at(i, j);
  return C;
}

inline GroupRingMatrix operator*(Complex s, const GroupRingMatrix& A) {
  GroupRingMatrix C = A;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) C.at(i, j) = s * A.at(i, j);
  return C;
}

// Conjugate transpose with starred entries.
inline GroupRingMatrix gr_star(const GroupRingMatrix& A) {
  GroupRingMatrix S(A.oracle(), A.cols(), A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) S.at(j, i) = gr_star(A.at(i, j));
  return S;
}

inline Complex trace(const GroupRingMatrix& A) {
  if (A.rows() != A.cols()) throw InputError("trace: matrix is not square");
  Complex s = 0;
  for (std::size_t i = 0; i < A.rows(); ++i) s += trace(A.at(i, i));
  return s;
}

// Block matrix [[A, C], [0, B]] (C may be empty for block-diagonal).
inline GroupRingMatrix block_matrix(const GroupRingMatrix& A, const GroupRingMatrix& B,
                                    const std::optional<GroupRingMatrix>& C = std::nullopt) {
  GroupRingMatrix M(A.oracle(), A.rows() + B.rows(), A.cols() + B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) M.at(i, j) = A.at(i, j);
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) M.at(A.rows() + i, A.cols() + j) = B.at(i, j);
  if (C) {
    if (C->rows() != A.rows() || C->cols() != B.cols()) throw InputError("block_matrix: off-diagonal block shape");
    for (std::size_t i = 0; i < C->rows(); ++i)
      for (std::size_t j = 0; j < C->cols(); ++j) M.at(i, A.cols() + j) = C->at(i, j);
  }
  return M;
}

// Homomorphism from the free group on a presentation's generators into the
// oracle group, given by normal-form images of the generators.
struct OracleBinding {
  OraclePtr oracle;
  std::vector<Word> images;

  Word image(const Word& w) const { return oracle->normal_form(w.substitute(images)); }
};

struct BindingCheck {
  bool homomorphism = false;  // every relator maps to the identity
  bool certified = false;     // oracle confluence certified
  std::vector<std::size_t> failing_relators;
};

inline BindingCheck check_binding(const Presentation& P, const OracleBinding& b) {
  if (b.images.size() != P.rank()) throw InputError("binding: one image per generator required");
  BindingCheck c;
  c.certified = b.oracle->certified();
  for (std::size_t j = 0; j < P.relators.size(); ++j)
    if (!b.image(P.relators[j]).empty()) c.failing_relators.push_back(j);
  c.homomorphism = c.failing_relators.empty();
  return c;
}

template <class C>
GroupRingElement to_group_ring(const FreeRingElement<C>& x, const OracleBinding& b) {
  GroupRingElement out(b.oracle);
  for (const auto& [w, c] : x.terms()) out.add(w.substitute(b.images), Complex(c));
  return out;
}

template <class C>
GroupRingMatrix to_group_ring(const FoxMatrixT<C>& F, const OracleBinding& b) {
  GroupRingMatrix M(b.oracle, F.rows(), F.cols());
  for (std::size_t i = 0; i < F.rows(); ++i)
    for (std::size_t j = 0; j < F.cols(); ++j) M.at(i, j) = to_group_ring(F.entries[i][j], b);
  return M;
}

// Binding of a presentation to its own Knuth-Bendix oracle.
inline std::optional<OracleBinding> kb_binding(const Presentation& P, const KbOptions& opt = {},
                                               std::string* diagnostics = nullptr) {
  KbResult r = kb_complete(P, opt);
  if (diagnostics) *diagnostics = r.diagnostics;
  if (!r.completed) return std::nullopt;
  OracleBinding b;
  b.oracle = make_oracle(NormalFormOracle::rewriting(P.generators, std::move(r.system)));
  for (std::uint32_t g = 0; g < P.rank(); ++g) b.images.push_back(b.oracle->normal_form(Word::generator(g)));
  return b;
}

struct FormulaResidual {
  std::vector<GroupRingElement> residuals;  // one per relator
  bool partial = false;                     // oracle not certified: residuals may be unreduced
  bool zero() const {
    for (const auto& r : residuals)
      if (!r.is_zero()) return false;
    return true;
  }
};

// sum_i (dr/dg_i)(g_i - 1) for every relator, reduced in the oracle group.
inline FormulaResidual fundamental_formula_residual(const Presentation& P, const OracleBinding& b) {
  FormulaResidual out;
  out.partial = !b.oracle->certified();
  for (const Word& r : P.relators) out.residuals.push_back(to_group_ring(fox_expansion(P, r), b));
  return out;
}

// Surjectivity certificate: each oracle generator is reached as a product of
// at most `max_factors` images (and inverses). Returns false if not found.
inline bool binding_surjective(const OracleBinding& b, std::size_t max_factors = 6,
                               std::size_t max_elements = 200000) {
  const NormalFormOracle& o = *b.oracle;
  std::vector<Word> gens;
  for (const Word& w : b.images) {
    gens.push_back(w);
    gens.push_back(w.inverse());
  }
  std::unordered_set<Word, WordHash> need;
  for (std::uint32_t g = 0; g < o.alphabet().size(); ++g) need.insert(o.normal_form(Word::generator(g)));
  std::unordered_set<Word, WordHash> seen{Word()};
  std::vector<Word> frontier{Word()};
  for (std::size_t depth = 0; depth < max_factors && !need.empty(); ++depth) {
    std::vector<Word> next;
    for (const Word& u : frontier) {
      for (const Word& g : gens) {
        Word nf = o.normal_form(u * g);
        if (seen.insert(nf).second) {
          need.erase(nf);
          next.push_back(std::move(nf));
          if (seen.size() > max_elements) return need.empty();
        }
      }
    }
    frontier = std::move(next);
  }
  return need.empty();
}

// Searches for a surjective homomorphism from P's group onto the torus knot
// group <x,y | x^p = y^q> with generator images of length <= max_len whose
// oracle abelianization is proportional to P's. Returns nullopt if none.
inline std::optional<OracleBinding> find_torus_binding(const Presentation& P, int p, int q, int max_len = 3) {
  const AbelianizationMap alpha = abelianization(P);
  OracleBinding b;
  b.oracle = make_oracle(NormalFormOracle::torus_amalgam(p, q));
  const Ball B = ball(*b.oracle, max_len);
  const std::size_t k = P.rank();
  // Candidates per generator: alpha_oracle(image) = alpha_P(g) (scale 1).
  std::vector<std::vector<Word>> cand(k);
  for (std::size_t g = 0; g < k; ++g)
    for (const Word& w : B.elements)
      if (b.oracle->alpha(w) == alpha[g]) cand[g].push_back(w);
  // Relators become checkable once their largest generator is assigned.
  std::vector<std::vector<std::size_t>> check_at(k);
  for (std::size_t j = 0; j < P.relators.size(); ++j) {
    const std::uint32_t m = P.relators[j].max_generator();
    if (m > 0) check_at[m - 1].push_back(j);
  }
  b.images.assign(k, Word());
  std::size_t nodes = 0;
  std::function<bool(std::size_t)> search = [&](std::size_t g) -> bool {
    if (g == k) return binding_surjective(b);
    for (const Word& w : cand[g]) {
      if (++nodes > 5'000'000) return false;
      b.images[g] = w;
      bool ok = true;
      for (std::size_t j : check_at[g]) {
        std::vector<Word> imgs(b.images.begin(), b.images.begin() + static_cast<std::ptrdiff_t>(g + 1));
        if (!b.oracle->normal_form(P.relators[j].substitute(imgs)).empty()) {
          ok = false;
          break;
        }
      }
      if (ok && search(g + 1)) return true;
    }
    return false;
  };
  if (search(0)) return b;
  return std::nullopt;
}

}  // namespace l2alex
