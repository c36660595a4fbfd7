#pragma once

#include <complex>
#ifndef lapack_complex_double
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include <algorithm>
#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/cuthill_mckee_ordering.hpp>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "l2alex/errors.hpp"
#include "l2alex/group_ring.hpp"

namespace l2alex {

enum class FkMethod { series, ball };

inline std::string to_string(FkMethod m) { return m == FkMethod::series ? "series" : "ball"; }

inline FkMethod parse_fk_method(const std::string& s) {
  if (s == "series") return FkMethod::series;
  if (s == "ball") return FkMethod::ball;
  throw InputError("unknown fk method '" + s + "' (expected series or ball)");
}

struct FkEstimate {
  double log_value = 0;
  double value = 1;
  FkMethod method = FkMethod::series;
  int order = 0;       // series
  int radius = 0;      // ball
  double scaling = 0;  // series: s
  double cutoff = 0;   // ball: epsilon
  double tail_proxy = 0;
  std::optional<double> sigma_min;
  bool partial_oracle = false;
  bool kernel_suspected = false;
  bool exact = false;  // closed form, no truncation
  std::size_t size = 0;
  std::string caveat;
  std::vector<std::string> diagnostics;
};

struct SpectralHistogram {
  std::vector<double> edges;       // bin edges over [0, norm bound]
  std::vector<double> cumulative;  // estimate of F(lambda) at each edge, in [0, n]
  std::size_t samples = 0;
  bool partial_oracle = false;
};

enum class ProbeVerdict { no_evidence_of_kernel, kernel_suspected, inconclusive };

inline std::string to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::no_evidence_of_kernel: return "no-evidence-of-kernel";
    case ProbeVerdict::kernel_suspected: return "kernel-suspected";
    case ProbeVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ProbeRow {
  int radius = 0;
  double sigma_min = 0;
  double kernel_mass = 0;  // fraction of singular values below the threshold
};

struct PropertyIReport {
  std::vector<ProbeRow> rows;
  double threshold = 0;
  ProbeVerdict verdict = ProbeVerdict::inconclusive;
  bool partial_oracle = false;
};

// Allocation cap in bytes from L2ALEX_MAX_MEM_MB (default 2048).
inline std::size_t memory_budget_bytes() {
  std::size_t mb = 2048;
  if (const char* s = std::getenv("L2ALEX_MAX_MEM_MB")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0' || v == 0) throw InputError("L2ALEX_MAX_MEM_MB must be a positive integer");
    mb = static_cast<std::size_t>(v);
  }
  return mb * 1024 * 1024;
}

inline void check_memory(double bytes, const std::string& what) {
  const double cap = static_cast<double>(memory_budget_bytes());
  if (bytes > cap)
    throw ResourceError(what + " needs about " + std::to_string(static_cast<long long>(bytes / 1048576)) +
                        " MB, above the L2ALEX_MAX_MEM_MB cap of " + std::to_string(static_cast<long long>(cap / 1048576)) +
                        " MB");
}

// Schur-type bound on ||R_A||: the larger of the maximal row and column sums
// of coefficient 1-norms.
inline double op_norm_bound(const GroupRingMatrix& A) {
  double best = 0;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < A.cols(); ++j) s += A.at(i, j).l1_norm();
    best = std::max(best, s);
  }
  for (std::size_t j = 0; j < A.cols(); ++j) {
    double s = 0;
    for (std::size_t i = 0; i < A.rows(); ++i) s += A.at(i, j).l1_norm();
    best = std::max(best, s);
  }
  return best;
}

namespace detail {

inline bool is_zero_matrix(const GroupRingMatrix& A) {
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (!A.at(i, j).is_zero()) return false;
  return true;
}

// c if A = c Id with c a scalar multiple of e.
inline std::optional<Complex> scalar_identity(const GroupRingMatrix& A) {
  if (A.rows() != A.cols() || A.rows() == 0) return std::nullopt;
  std::optional<Complex> c;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const GroupRingElement& x = A.at(i, j);
      if (i != j) {
        if (!x.is_zero()) return std::nullopt;
        continue;
      }
      if (x.size() != 1 || !x.terms().begin()->first.empty()) return std::nullopt;
      const Complex v = x.terms().begin()->second;
      if (c && *c != v) return std::nullopt;
      c = v;
    }
  }
  return c;
}

inline void check_square(const GroupRingMatrix& A, const char* who) {
  if (A.rows() != A.cols()) throw InputError(std::string(who) + ": square matrix required");
  if (!A.oracle()) throw InputError(std::string(who) + ": matrix has no oracle");
}

inline FkEstimate trivial_estimate(const GroupRingMatrix& A, FkMethod m) {
  FkEstimate e;
  e.method = m;
  e.size = A.rows();
  e.partial_oracle = !A.oracle()->certified();
  return e;
}

// Scalar and zero operators have closed forms shared by both estimators.
inline bool closed_form(const GroupRingMatrix& A, FkEstimate& e) {
  if (detail::is_zero_matrix(A)) {
    e.log_value = 0;
    e.value = 1;
    e.kernel_suspected = true;
    e.exact = true;
    e.sigma_min = 0.0;
    e.diagnostics.push_back("zero operator: determinant convention 1, kernel-suspected");
    return true;
  }
  if (auto c = scalar_identity(A)) {
    e.log_value = static_cast<double>(A.rows()) * std::log(std::abs(*c));
    e.value = std::pow(std::abs(*c), static_cast<double>(A.rows()));
    e.exact = true;
    e.sigma_min = std::abs(*c);
    e.diagnostics.push_back("scalar operator: closed form |c|^n");
    return true;
  }
  return false;
}

// Group elements reached from e by right multiplication with a fixed list of
// multipliers, interned as dense ids with a lazily filled product table.
class ElementTable {
 public:
  // `per_element` charges storage held elsewhere per interned element (dense
  // vectors indexed by id); interning throws once the cap would be exceeded.
  ElementTable(const NormalFormOracle& o, std::vector<Word> multipliers, std::size_t cap_bytes = 0,
               std::size_t per_element = 0)
      : oracle_(o), mults_(std::move(multipliers)), cap_(cap_bytes), per_element_(per_element) {
    intern(Word());
  }

  std::uint32_t size() const { return static_cast<std::uint32_t>(words_.size()); }
  std::size_t multiplier_count() const { return mults_.size(); }
  const Word& word(std::uint32_t id) const { return words_[id]; }

  std::uint32_t mul(std::uint32_t id, std::uint32_t m) {
    const std::size_t k = static_cast<std::size_t>(id) * mults_.size() + m;
    if (table_[k] == kUnset) {
      const std::uint32_t to = intern(oracle_.normal_form(words_[id] * mults_[m]));
      table_[k] = to;
    }
    return table_[k];
  }

  std::size_t bytes() const { return bytes_; }

 private:
  static constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t intern(Word nf) {
    auto [it, inserted] = ids_.try_emplace(nf, static_cast<std::uint32_t>(words_.size()));
    if (inserted) {
      // Word stored twice (list and index) plus hash node and table row.
      bytes_ += 2 * nf.size() * sizeof(Letter) + 160 + 4 * mults_.size() + per_element_;
      if (cap_ > 0 && bytes_ > cap_)
        throw ResourceError("group support reached " + std::to_string(words_.size()) +
                            " elements, above the L2ALEX_MAX_MEM_MB cap; lower the order or radius");
      words_.push_back(std::move(nf));
      table_.resize(words_.size() * mults_.size(), kUnset);
    }
    return it->second;
  }

  const NormalFormOracle& oracle_;
  std::vector<Word> mults_;
  std::vector<Word> words_;
  std::unordered_map<Word, std::uint32_t, WordHash> ids_;
  std::vector<std::uint32_t> table_;
  std::size_t cap_ = 0, per_element_ = 0, bytes_ = 0;
};

// Sparse form of a square group ring matrix for right multiplication of row
// vectors: (v C)_j = sum_i v_i c_ij.
struct SparseRightOp {
  struct Term {
    std::uint32_t col;
    std::uint32_t mult;
    Complex coeff;
  };
  std::vector<std::vector<Term>> rows;
  std::vector<Word> multipliers;

  explicit SparseRightOp(const GroupRingMatrix& C) : rows(C.rows()) {
    std::unordered_map<Word, std::uint32_t, WordHash> mid;
    for (std::size_t i = 0; i < C.rows(); ++i) {
      for (std::size_t j = 0; j < C.cols(); ++j) {
        for (const auto& [w, c] : C.at(i, j).sorted_terms()) {
          auto [it, inserted] = mid.try_emplace(w, static_cast<std::uint32_t>(multipliers.size()));
          if (inserted) multipliers.push_back(w);
          rows[i].push_back({static_cast<std::uint32_t>(j), it->second, c});
        }
      }
    }
  }
};

using IdVector = std::vector<std::vector<Complex>>;  // [position][element id]

inline IdVector apply_right(const IdVector& v, const SparseRightOp& op, ElementTable& table) {
  const std::size_t n = v.size();
  IdVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t id = 0; id < v[i].size(); ++id) {
      const Complex x = v[i][id];
      if (x == 0.0) continue;
      for (const auto& t : op.rows[i]) {
        const std::uint32_t to = table.mul(id, t.mult);
        auto& dst = out[t.col];
        if (dst.size() <= to) dst.resize(std::max<std::size_t>(to + 1, table.size()), 0.0);
        dst[to] += x * t.coeff;
      }
    }
  }
  return out;
}

inline Complex inner(const IdVector& a, const IdVector& b) {
  Complex s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t m = std::min(a[i].size(), b[i].size());
    for (std::size_t k = 0; k < m; ++k) s += a[i][k] * std::conj(b[i][k]);
  }
  return s;
}

}  // namespace detail

// log det = (1/2)[n log s - sum_{m=1}^{N} tr((Id - B/s)^m)/m] with B = A A*,
// the operator of R_A^* R_A for right multiplication of row vectors.
// Traces are computed exactly in the group ring by meet-in-the-middle:
// tr_i(C^{a+b}) = <delta_i C^a, delta_i C^b>.
inline FkEstimate fk_det_series(const GroupRingMatrix& A, int order, double margin = 0.05) {
  detail::check_square(A, "fk_det_series");
  if (order < 1) throw InputError("fk_det_series: order must be at least 1");
  FkEstimate e = detail::trivial_estimate(A, FkMethod::series);
  e.order = order;
  if (e.partial_oracle) e.caveat = "oracle not certified: traces may be miscounted";
  if (detail::closed_form(A, e)) return e;

  const std::size_t n = A.rows();
  const GroupRingMatrix B = A * gr_star(A);
  const double s = op_norm_bound(B) * (1.0 + margin);
  e.scaling = s;
  GroupRingMatrix C = GroupRingMatrix::identity(A.oracle(), n) + Complex(-1.0 / s) * B;
  const detail::SparseRightOp op(C);
  // prev, cur and the product under construction are dense over ids.
  detail::ElementTable table(*A.oracle(), op.multipliers, memory_budget_bytes(), 3 * n * sizeof(Complex));

  const int half = (order + 1) / 2;
  std::vector<double> tr(static_cast<std::size_t>(order) + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    detail::IdVector prev(n), cur(n);
    cur[i].assign(1, 1.0);
    for (int k = 1; k <= half; ++k) {
      prev = std::move(cur);
      cur = detail::apply_right(prev, op, table);
      // m = 2k-1 from (k, k-1); m = 2k from (k, k).
      tr[static_cast<std::size_t>(2 * k - 1)] += detail::inner(cur, prev).real();
      if (2 * k <= order) tr[static_cast<std::size_t>(2 * k)] += detail::inner(cur, cur).real();
    }
  }
  double sum = 0;
  for (int m = 1; m <= order; ++m) sum += tr[static_cast<std::size_t>(m)] / m;
  e.log_value = 0.5 * (static_cast<double>(n) * std::log(s) - sum);
  e.value = std::exp(e.log_value);
  // Geometric extrapolation of the omitted terms.
  const double last = tr[static_cast<std::size_t>(order)] / order;
  double tail = last;
  if (order >= 2) {
    const double before = tr[static_cast<std::size_t>(order - 1)] / (order - 1);
    const double rho = before > 0 ? last / before : 1.0;
    tail = rho < 1.0 ? last * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
  }
  e.tail_proxy = 0.5 * std::abs(tail);
  e.diagnostics.push_back("group elements visited: " + std::to_string(table.size()));
  return e;
}

namespace detail {

// Sparse rectangular matrix of R_A compressed to span(in) -> span(out).
struct Compression {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint32_t> r, c;
  std::vector<Complex> v;
  bool real = true;
};

inline Compression compress(const GroupRingMatrix& A, const std::vector<Word>& in, const std::vector<Word>& out) {
  const NormalFormOracle& o = *A.oracle();
  std::unordered_map<Word, std::uint32_t, WordHash> out_index;
  for (std::uint32_t k = 0; k < out.size(); ++k) out_index.emplace(out[k], k);
  Compression M;
  M.rows = A.rows() * in.size();
  M.cols = A.cols() * out.size();
  std::unordered_map<std::uint64_t, Complex> acc;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) {
      for (const auto& [h, c] : A.at(i, j).terms()) {
        for (std::uint32_t k = 0; k < in.size(); ++k) {
          auto it = out_index.find(o.normal_form(in[k] * h));
          if (it == out_index.end()) continue;
          const std::uint64_t row = i * in.size() + k;
          const std::uint64_t col = j * out.size() + it->second;
          acc[row * M.cols + col] += c;
        }
      }
    }
  }
  std::vector<std::pair<std::uint64_t, Complex>> sorted(acc.begin(), acc.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [key, c] : sorted) {
    if (c == 0.0) continue;
    M.r.push_back(static_cast<std::uint32_t>(key / M.cols));
    M.c.push_back(static_cast<std::uint32_t>(key % M.cols));
    M.v.push_back(c);
    if (c.imag() != 0.0) M.real = false;
  }
  return M;
}

inline std::vector<double> dense_singular_values(const Compression& M) {
  const auto m = static_cast<lapack_int>(M.rows), n = static_cast<lapack_int>(M.cols);
  const std::size_t mn = std::min(M.rows, M.cols);
  std::vector<double> s(mn);
  if (mn == 0) return s;
  check_memory(static_cast<double>(M.rows) * static_cast<double>(M.cols) * (M.real ? 8.0 : 16.0) * 1.5,
               "dense singular value decomposition");
  lapack_int info = 0;
  if (M.real) {
    std::vector<double> a(M.rows * M.cols, 0.0);
    for (std::size_t k = 0; k < M.v.size(); ++k) a[M.c[k] * M.rows + M.r[k]] += M.v[k].real();
    info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, a.data(), m, s.data(), nullptr, 1, nullptr, 1);
  } else {
    std::vector<Complex> a(M.rows * M.cols, 0.0);
    for (std::size_t k = 0; k < M.v.size(); ++k) a[M.c[k] * M.rows + M.r[k]] += M.v[k];
    info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, a.data(), m, s.data(), nullptr, 1, nullptr, 1);
  }
  if (info != 0) throw ResourceError("singular value decomposition failed (info " + std::to_string(info) + ")");
  return s;
}

// Square compression: reverse Cuthill-McKee ordering, then band
// bidiagonalization when the band is narrow.
inline std::vector<double> singular_values(const Compression& M, std::vector<std::string>* diag = nullptr) {
  if (M.rows != M.cols || M.rows < 64) return dense_singular_values(M);
  const std::size_t N = M.rows;
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  Graph g(N);
  for (std::size_t k = 0; k < M.v.size(); ++k)
    if (M.r[k] != M.c[k]) boost::add_edge(M.r[k], M.c[k], g);
  std::vector<std::size_t> order(N);
  boost::cuthill_mckee_ordering(g, order.rbegin());
  std::vector<std::size_t> pos(N);
  for (std::size_t k = 0; k < N; ++k) pos[order[k]] = k;
  long kl = 0, ku = 0;
  for (std::size_t k = 0; k < M.v.size(); ++k) {
    const long d = static_cast<long>(pos[M.c[k]]) - static_cast<long>(pos[M.r[k]]);
    ku = std::max(ku, d);
    kl = std::max(kl, -d);
  }
  if (static_cast<std::size_t>(kl + ku) * 4 > N) {
    if (diag) diag->push_back("dense SVD (bandwidth " + std::to_string(kl + ku) + ")");
    return dense_singular_values(M);
  }
  if (diag) diag->push_back("banded SVD (kl " + std::to_string(kl) + ", ku " + std::to_string(ku) + ")");
  const auto n = static_cast<lapack_int>(N);
  const lapack_int ldab = static_cast<lapack_int>(kl + ku + 1);
  check_memory(static_cast<double>(ldab) * static_cast<double>(N) * (M.real ? 8.0 : 16.0) * 2.0,
               "banded singular value decomposition");
  std::vector<double> d(N), e(N);
  lapack_int info = 0;
  // Column-major band storage: A(i,j) at ab[(ku + i - j) + j*ldab].
  auto slot = [&](std::size_t k) {
    const std::size_t i = pos[M.r[k]], j = pos[M.c[k]];
    return static_cast<std::size_t>(ku + static_cast<long>(i) - static_cast<long>(j)) + j * static_cast<std::size_t>(ldab);
  };
  if (M.real) {
    std::vector<double> ab(static_cast<std::size_t>(ldab) * N, 0.0);
    for (std::size_t k = 0; k < M.v.size(); ++k) ab[slot(k)] += M.v[k].real();
    info = LAPACKE_dgbbrd(LAPACK_COL_MAJOR, 'N', n, n, 0, static_cast<lapack_int>(kl), static_cast<lapack_int>(ku), ab.data(),
                          ldab, d.data(), e.data(), nullptr, 1, nullptr, 1, nullptr, 1);
  } else {
    std::vector<Complex> ab(static_cast<std::size_t>(ldab) * N, 0.0);
    for (std::size_t k = 0; k < M.v.size(); ++k) ab[slot(k)] += M.v[k];
    info = LAPACKE_zgbbrd(LAPACK_COL_MAJOR, 'N', n, n, 0, static_cast<lapack_int>(kl), static_cast<lapack_int>(ku), ab.data(),
                          ldab, d.data(), e.data(), nullptr, 1, nullptr, 1, nullptr, 1);
  }
  if (info != 0) throw ResourceError("band bidiagonalization failed (info " + std::to_string(info) + ")");
  info = LAPACKE_dbdsqr(LAPACK_COL_MAJOR, 'U', n, 0, 0, 0, d.data(), e.data(), nullptr, 1, nullptr, 1, nullptr, 1);
  if (info != 0) throw ResourceError("bidiagonal singular values failed (info " + std::to_string(info) + ")");
  for (double& x : d) x = std::abs(x);
  return d;
}

inline std::vector<double> ball_singular_values(const GroupRingMatrix& A, int radius, std::size_t& ball_size,
                                                bool& partial, std::vector<std::string>* diag = nullptr) {
  if (radius < 0) throw InputError("ball radius must be nonnegative");
  const double cap = static_cast<double>(memory_budget_bytes());
  // Ball growth is at most (2k-1)^R; refuse before enumerating hopeless balls.
  const Ball B = ball(*A.oracle(), radius, static_cast<std::size_t>(std::min(cap / 256.0, 5e7)));
  ball_size = B.elements.size();
  partial = B.partial;
  const Compression M = compress(A, B.elements, B.elements);
  return singular_values(M, diag);
}

}  // namespace detail

// Per-site log determinant of R_A compressed to span(ball(R))^n:
// log = sum_{sigma > eps} log(sigma) / |ball|.
inline FkEstimate fk_det_ball(const GroupRingMatrix& A, int radius, double cutoff = 1e-8) {
  detail::check_square(A, "fk_det_ball");
  if (!(cutoff >= 0)) throw InputError("fk_det_ball: cutoff must be nonnegative");
  FkEstimate e = detail::trivial_estimate(A, FkMethod::ball);
  e.radius = radius;
  e.cutoff = cutoff;
  e.caveat = "ball compression: exact in the limit for amenable groups, heuristic otherwise";
  if (detail::closed_form(A, e)) return e;
  std::size_t nb = 0;
  bool partial = false;
  const std::vector<double> sv = detail::ball_singular_values(A, radius, nb, partial, &e.diagnostics);
  e.partial_oracle = e.partial_oracle || partial;
  if (e.partial_oracle) e.caveat += "; oracle not certified: ball may contain duplicates";
  double sum = 0, below = 0;
  double smin = std::numeric_limits<double>::infinity();
  std::size_t nbelow = 0;
  for (double s : sv) {
    smin = std::min(smin, s);
    if (s > cutoff) {
      sum += std::log(s);
    } else {
      ++nbelow;
      below += 1.0;
    }
  }
  e.log_value = sum / static_cast<double>(nb);
  e.value = std::exp(e.log_value);
  e.sigma_min = sv.empty() ? 0.0 : smin;
  e.tail_proxy = below / static_cast<double>(nb);
  e.diagnostics.push_back("ball size " + std::to_string(nb) + ", " + std::to_string(nbelow) + " singular values below cutoff");
  return e;
}

inline FkEstimate fk_det(const GroupRingMatrix& A, FkMethod method, int order_or_radius, double cutoff = 1e-8) {
  return method == FkMethod::series ? fk_det_series(A, order_or_radius) : fk_det_ball(A, order_or_radius, cutoff);
}

struct PivotReduction {
  GroupRingMatrix reduced;
  double log_factor = 0;  // sum of log|c| over eliminated pivots c g
  std::size_t eliminated = 0;
};

// Eliminates pivots that are units c g of the group ring. Row operations by
// unipotent matrices and permutations have determinant 1, and a block
// triangular matrix with diagonal block c g contributes |c|, so
// det(A) = exp(log_factor) det(reduced) exactly.
inline PivotReduction eliminate_unit_pivots(const GroupRingMatrix& A, double tol = 1e-12) {
  detail::check_square(A, "eliminate_unit_pivots");
  const OraclePtr& o = A.oracle();
  std::vector<std::vector<GroupRingElement>> m(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) m[i].push_back(A.at(i, j));
  PivotReduction out;
  for (;;) {
    const std::size_t n = m.size();
    std::optional<std::pair<std::size_t, std::size_t>> best;
    std::size_t best_fill = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t fill = 0;
      for (std::size_t i = 0; i < n; ++i) fill += m[i][j].is_zero() ? 0 : 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (m[i][j].size() != 1 || std::abs(m[i][j].terms().begin()->second) <= tol) continue;
        if (!best || fill < best_fill) {
          best = {i, j};
          best_fill = fill;
        }
      }
    }
    if (!best) break;
    const auto [pi, pj] = *best;
    const auto& [g, c] = *m[pi][pj].terms().begin();
    const GroupRingElement pivot_inv = GroupRingElement::of_word(o, g.inverse(), 1.0 / c);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == pi || m[k][pj].is_zero()) continue;
      const GroupRingElement f = m[k][pj] * pivot_inv;
      for (std::size_t l = 0; l < n; ++l) {
        if (m[pi][l].is_zero()) continue;
        m[k][l] -= f * m[pi][l];
        m[k][l].prune(tol);
      }
    }
    out.log_factor += std::log(std::abs(c));
    ++out.eliminated;
    m.erase(m.begin() + static_cast<std::ptrdiff_t>(pi));
    for (auto& row : m) row.erase(row.begin() + static_cast<std::ptrdiff_t>(pj));
  }
  out.reduced = GroupRingMatrix(o, m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out.reduced.at(i, j) = std::move(m[i][j]);
  return out;
}

// fk_det after unit-pivot elimination; the estimate describes the reduced
// matrix, with the eliminated factor folded into the value.
inline FkEstimate fk_det_reduced(const GroupRingMatrix& A, FkMethod method, int order_or_radius,
                                 double cutoff = 1e-8) {
  const PivotReduction r = eliminate_unit_pivots(A);
  FkEstimate e;
  if (r.reduced.rows() == 0) {
    e = detail::trivial_estimate(A, method);
    e.exact = true;
    if (e.partial_oracle) e.caveat = "oracle not certified";
  } else {
    e = fk_det(r.reduced, method, order_or_radius, cutoff);
  }
  e.size = A.rows();
  e.log_value += r.log_factor;
  e.value = std::exp(e.log_value);
  if (r.eliminated)
    e.diagnostics.push_back("eliminated " + std::to_string(r.eliminated) + " unit pivot(s), factor " +
                            std::to_string(std::exp(r.log_factor)));
  return e;
}

// Histogram of compressed singular values as an estimate of the spectral
// density function F(lambda).
inline SpectralHistogram spectral_density(const GroupRingMatrix& A, int radius, int bins) {
  detail::check_square(A, "spectral_density");
  if (bins < 1) throw InputError("spectral_density: bins must be positive");
  SpectralHistogram h;
  std::size_t nb = 0;
  std::vector<double> sv = detail::ball_singular_values(A, radius, nb, h.partial_oracle);
  h.partial_oracle = h.partial_oracle || !A.oracle()->certified();
  std::sort(sv.begin(), sv.end());
  h.samples = sv.size();
  double top = op_norm_bound(A);
  if (!sv.empty()) top = std::max(top, sv.back());
  if (top <= 0) top = 1;
  for (int b = 0; b <= bins; ++b) {
    const double edge = top * b / bins;
    h.edges.push_back(edge);
    const auto cnt = static_cast<double>(std::upper_bound(sv.begin(), sv.end(), edge) - sv.begin());
    h.cumulative.push_back(cnt / static_cast<double>(nb));
  }
  return h;
}

// Smallest singular value of R_A restricted to vectors supported on ball(R),
// tracked across radii.
inline PropertyIReport property_i_probe(const GroupRingMatrix& A, const std::vector<int>& radii) {
  if (!A.oracle()) throw InputError("property_i_probe: matrix has no oracle");
  PropertyIReport rep;
  rep.partial_oracle = !A.oracle()->certified();
  const double norm = op_norm_bound(A);
  rep.threshold = 1e-8 * std::max(norm, 1.0);
  if (detail::is_zero_matrix(A)) {
    for (int R : radii) rep.rows.push_back({R, 0.0, 1.0});
    rep.verdict = ProbeVerdict::kernel_suspected;
    return rep;
  }
  for (int R : radii) {
    const Ball in = ball(*A.oracle(), R);
    // Columns: the exact image support, so no output is truncated.
    std::unordered_set<Word, WordHash> image;
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (std::size_t j = 0; j < A.cols(); ++j)
        for (const auto& [h, c] : A.at(i, j).terms())
          for (const Word& g : in.elements) image.insert(A.oracle()->normal_form(g * h));
    Ball out;
    out.elements.assign(image.begin(), image.end());
    std::sort(out.elements.begin(), out.elements.end());
    rep.partial_oracle = rep.partial_oracle || in.partial;
    const detail::Compression M = detail::compress(A, in.elements, out.elements);
    std::vector<double> sv = detail::dense_singular_values(M);
    // Fewer outputs than inputs leaves an unseen kernel of the missing rank.
    const std::size_t missing = M.rows > sv.size() ? M.rows - sv.size() : 0;
    double smin = missing > 0 ? 0.0 : std::numeric_limits<double>::infinity();
    std::size_t small = missing;
    for (double s : sv) {
      smin = std::min(smin, s);
      if (s <= rep.threshold) ++small;
    }
    rep.rows.push_back({R, smin, static_cast<double>(small) / static_cast<double>(M.rows)});
  }
  if (rep.rows.size() < 2) return rep;
  const ProbeRow& last = rep.rows.back();
  const ProbeRow& prev = rep.rows[rep.rows.size() - 2];
  // Injective operators whose spectrum reaches 0 show a slowly shrinking
  // sigma_min; only a collapse to the threshold or a fast geometric drop
  // (an exponentially decaying kernel vector) counts against injectivity.
  const int step = std::max(1, last.radius - prev.radius);
  const double rate = prev.sigma_min > 0 ? std::pow(last.sigma_min / prev.sigma_min, 1.0 / step) : 0.0;
  if (last.sigma_min <= rep.threshold) {
    rep.verdict = ProbeVerdict::kernel_suspected;
  } else if (rate < 0.25) {
    rep.verdict = ProbeVerdict::inconclusive;
  } else {
    rep.verdict = ProbeVerdict::no_evidence_of_kernel;
  }
  return rep;
}

}  // namespace l2alex
