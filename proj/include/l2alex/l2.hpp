#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "l2alex/abelianization.hpp"
#include "l2alex/alexander.hpp"
#include "l2alex/constructions.hpp"
#include "l2alex/diagram.hpp"
#include "l2alex/errors.hpp"
#include "l2alex/fk.hpp"
#include "l2alex/fox.hpp"
#include "l2alex/group_ring.hpp"

namespace l2alex {

// Knots generated from the unknot by connected sums and cablings, plus mirror
// and orientation reversal.
struct KnotExpr {
  enum class Kind { unknot, torus, sum, cable, mirror, inverse };
  using Ptr = std::shared_ptr<const KnotExpr>;

  Kind kind = Kind::unknot;
  int p = 0, q = 0;  // torus, cable
  std::vector<Ptr> children;

  static Ptr unknot() { return std::make_shared<const KnotExpr>(); }
  static Ptr torus(int p, int q) {
    check_cable_spec({p, q});
    return std::make_shared<const KnotExpr>(KnotExpr{Kind::torus, p, q, {}});
  }
  static Ptr sum(Ptr a, Ptr b) { return std::make_shared<const KnotExpr>(KnotExpr{Kind::sum, 0, 0, {a, b}}); }
  static Ptr cable(int p, int q, Ptr c) {
    check_cable_spec({p, q});
    return std::make_shared<const KnotExpr>(KnotExpr{Kind::cable, p, q, {c}});
  }
  static Ptr mirror(Ptr c) { return std::make_shared<const KnotExpr>(KnotExpr{Kind::mirror, 0, 0, {c}}); }
  static Ptr inverse(Ptr c) { return std::make_shared<const KnotExpr>(KnotExpr{Kind::inverse, 0, 0, {c}}); }
};

inline std::string format_knot_expr(const KnotExpr& K) {
  switch (K.kind) {
    case KnotExpr::Kind::unknot: return "unknot";
    case KnotExpr::Kind::torus: return "torus(" + std::to_string(K.p) + "," + std::to_string(K.q) + ")";
    case KnotExpr::Kind::sum:
      return "sum(" + format_knot_expr(*K.children[0]) + "," + format_knot_expr(*K.children[1]) + ")";
    case KnotExpr::Kind::cable:
      return "cable(" + std::to_string(K.p) + "," + std::to_string(K.q) + "," + format_knot_expr(*K.children[0]) + ")";
    case KnotExpr::Kind::mirror: return "mirror(" + format_knot_expr(*K.children[0]) + ")";
    case KnotExpr::Kind::inverse: return "inverse(" + format_knot_expr(*K.children[0]) + ")";
  }
  return "?";
}

namespace detail {

class KnotExprParser {
 public:
  explicit KnotExprParser(const std::string& s) : s_(s) {}

  KnotExpr::Ptr parse() {
    KnotExpr::Ptr k = expr();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return k;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("knot expression: " + what + " at position " + std::to_string(i_ + 1) + " in '" + s_ + "'");
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  void expect(char c) {
    skip();
    if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  std::string ident() {
    skip();
    const std::size_t b = i_;
    while (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-' || s_[i_] == '_')) ++i_;
    std::string id = s_.substr(b, i_ - b);
    for (char& c : id) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return id;
  }
  int integer() {
    skip();
    const std::size_t b = i_;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) ++i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    const std::string t = s_.substr(b, i_ - b);
    if (t.empty() || t == "-" || t == "+") fail("expected an integer");
    try {
      return std::stoi(t);
    } catch (...) {
      fail("integer out of range");
    }
  }
  KnotExpr::Ptr expr() {
    const std::string id = ident();
    if (id == "unknot") return KnotExpr::unknot();
    if (id == "torus") {
      expect('(');
      const int p = integer();
      expect(',');
      const int q = integer();
      expect(')');
      return KnotExpr::torus(p, q);
    }
    if (id == "sum") {
      expect('(');
      auto a = expr();
      expect(',');
      auto b = expr();
      expect(')');
      return KnotExpr::sum(a, b);
    }
    if (id == "cable") {
      expect('(');
      const int p = integer();
      expect(',');
      const int q = integer();
      expect(',');
      auto c = expr();
      expect(')');
      return KnotExpr::cable(p, q, c);
    }
    if (id == "mirror" || id == "inverse") {
      expect('(');
      auto c = expr();
      expect(')');
      return id == "mirror" ? KnotExpr::mirror(c) : KnotExpr::inverse(c);
    }
    if (id.empty()) fail("expected a knot expression");
    fail("unknown constructor '" + id + "'");
  }

  std::string s_;
  std::size_t i_ = 0;
};

inline long long checked_mul(long long a, long long b) {
  long long r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw InputError("exponent overflow");
  return r;
}
inline long long checked_add(long long a, long long b) {
  long long r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw InputError("exponent overflow");
  return r;
}

}  // namespace detail

inline KnotExpr::Ptr parse_knot_expr(const std::string& text) { return detail::KnotExprParser(text).parse(); }

// n_K with the value max(1,t)^{n_K} on graph knots.
inline long long exact_exponent(const KnotExpr& K) {
  auto torus_part = [](int p, int q) { return detail::checked_mul(std::llabs(p) - 1, std::llabs(q) - 1); };
  switch (K.kind) {
    case KnotExpr::Kind::unknot: return 0;
    case KnotExpr::Kind::torus: return torus_part(K.p, K.q);
    case KnotExpr::Kind::sum:
      if (K.children.size() != 2) throw InputError("malformed sum node");
      return detail::checked_add(exact_exponent(*K.children[0]), exact_exponent(*K.children[1]));
    case KnotExpr::Kind::cable:
      if (K.children.size() != 1) throw InputError("malformed cable node");
      return detail::checked_add(detail::checked_mul(std::llabs(K.p), exact_exponent(*K.children[0])), torus_part(K.p, K.q));
    case KnotExpr::Kind::mirror:
    case KnotExpr::Kind::inverse:
      if (K.children.size() != 1) throw InputError("malformed unary node");
      return exact_exponent(*K.children[0]);
  }
  throw InputError("malformed knot expression");
}

struct L2Value {
  double t = 1;
  double value = 1;                 // normalized value
  double log_value = 0;             // log of the normalized value
  std::optional<long long> exponent;  // exact path
  std::optional<FkEstimate> estimate;  // numeric path, before normalization
  long long normalization_exponent = 0;  // value = raw / max(1,t)^normalization_exponent
  bool normalized = true;
  std::optional<PropertyIReport> probe;
  std::vector<std::string> diagnostics;
};

inline L2Value exact_value(const KnotExpr& K, double t) {
  if (!(t > 0)) throw InputError("t must be positive");
  L2Value v;
  v.t = t;
  v.exponent = exact_exponent(K);
  v.log_value = static_cast<double>(*v.exponent) * std::log(std::max(1.0, t));
  v.value = std::pow(std::max(1.0, t), static_cast<double>(*v.exponent));
  return v;
}

inline bool detect_unknot(const KnotExpr& K) { return exact_exponent(K) == 0; }

struct SymmetryLaw {
  double lhs = 0;           // value at 1/t of the transformed knot
  double rhs = 0;           // value at t of K
  long long unit_exponent = 0;  // rhs = t^unit_exponent * lhs
  bool holds = false;
};

struct MirrorInverseReport {
  SymmetryLaw mirror, inverse;
};

// Delta_{K*}(1/t) ~ Delta_K(t) and Delta_{-K}(1/t) ~ Delta_K(t) in the unit
// class, with the witnessing power of t.
inline MirrorInverseReport mirror_inverse_laws(const KnotExpr::Ptr& K, double t) {
  if (!(t > 0)) throw InputError("t must be positive");
  auto law = [&](const KnotExpr::Ptr& T) {
    SymmetryLaw L;
    L.lhs = exact_value(*T, 1.0 / t).value;
    L.rhs = exact_value(*K, t).value;
    // max(1,1/t)^n = t^-n max(1,t)^n.
    L.unit_exponent = exact_exponent(*T);
    const double predicted = std::pow(t, static_cast<double>(L.unit_exponent)) * L.lhs;
    L.holds = std::abs(predicted - L.rhs) <= 1e-12 * std::max(1.0, std::abs(L.rhs));
    return L;
  };
  return {law(KnotExpr::mirror(K)), law(KnotExpr::inverse(K))};
}

// Two-crossing unknot diagram whose Wirtinger presentation is <a,b | a b^-1>.
inline Diagram unknot_diagram() { return parse_pd("X 2 2 3 1\nX 4 4 1 3\n"); }

// A presentation with meridian and longitude marks for K.
inline Presentation presentation_of(const KnotExpr& K) {
  switch (K.kind) {
    case KnotExpr::Kind::unknot: return wirtinger(unknot_diagram());
    case KnotExpr::Kind::torus: {
      const Presentation U = wirtinger(unknot_diagram());
      return cable_presentation(U, {K.p, K.q}, *U.mark(MarkRole::longitude)).presentation;
    }
    case KnotExpr::Kind::sum:
      return sum_presentation(presentation_of(*K.children[0]), presentation_of(*K.children[1])).presentation;
    case KnotExpr::Kind::cable: {
      const Presentation C = presentation_of(*K.children[0]);
      auto W = C.mark(MarkRole::longitude);
      if (!W) throw InputError("presentation_of: companion has no longitude mark");
      return cable_presentation(C, {K.p, K.q}, *W).presentation;
    }
    case KnotExpr::Kind::mirror: {
      // Same group; the reflection reverses the meridian and keeps the longitude.
      Presentation P = presentation_of(*K.children[0]);
      for (std::string& g : P.generators) g = mirror_name(g);
      if (auto m = P.mark(MarkRole::meridian)) P.marks[MarkRole::meridian] = m->inverse();
      P.wirtinger = false;
      return P;
    }
    case KnotExpr::Kind::inverse: {
      Presentation P = presentation_of(*K.children[0]);
      for (auto& [role, w] : P.marks)
        if (role != MarkRole::core) w = w.inverse();
      P.wirtinger = false;
      return P;
    }
  }
  throw InputError("malformed knot expression");
}

struct L2Params {
  FkMethod method = FkMethod::series;
  int order = 24;
  int radius = 8;
  double cutoff = 1e-8;
  std::vector<int> probe_radii = {2, 4, 6};
  std::size_t deleted_row = 1;
  bool reduce_pivots = true;  // exact unit-pivot elimination before estimating
};

// Twisted row-deleted Fox matrix psi_t(F_{P,i}) in the oracle group.
inline GroupRingMatrix twisted_fox_minor(const Presentation& P, const OracleBinding& b, double t,
                                         std::size_t deleted_row = 1) {
  const AbelianizationMap alpha = abelianization(P);
  return to_group_ring(twist(delete_row(fox_matrix(P), deleted_row), alpha, t), b);
}

inline L2Value l2_from_presentation(const Presentation& P, double t, const OracleBinding& b, const L2Params& par = {}) {
  if (!(t > 0)) throw InputError("t must be positive");
  if (P.deficiency() != 1) throw InputError("l2: deficiency-one presentation required");
  const BindingCheck chk = check_binding(P, b);
  if (!chk.homomorphism) throw OracleError("l2: oracle binding does not kill every relator");
  const AbelianizationMap alpha = abelianization(P);
  const GroupRingMatrix A = twisted_fox_minor(P, b, t, par.deleted_row);
  L2Value v;
  v.t = t;
  FkEstimate e = par.reduce_pivots
                     ? fk_det_reduced(A, par.method, par.method == FkMethod::series ? par.order : par.radius, par.cutoff)
                     : fk_det(A, par.method, par.method == FkMethod::series ? par.order : par.radius, par.cutoff);
  v.normalization_exponent = std::llabs(alpha[par.deleted_row - 1]) - 1;
  v.log_value = e.log_value - static_cast<double>(v.normalization_exponent) * std::log(std::max(1.0, t));
  v.value = std::exp(v.log_value);
  if (!par.probe_radii.empty()) {
    v.probe = property_i_probe(A, par.probe_radii);
    if (v.probe->verdict == ProbeVerdict::kernel_suspected) v.diagnostics.push_back("kernel-suspected");
  }
  if (e.partial_oracle) v.diagnostics.push_back("partial-oracle: " + e.caveat);
  if (e.kernel_suspected) v.diagnostics.push_back("kernel-suspected");
  v.estimate = std::move(e);
  return v;
}

// (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1)), p, q >= 1 coprime.
inline LaurentPolynomial torus_alexander_polynomial(int p, int q) {
  auto tn1 = [](int n) { return LaurentPolynomial::monomial(n) - LaurentPolynomial(1); };
  return exact_divide(tn1(p * q) * tn1(1), tn1(p) * tn1(q)).normalized();
}

struct OracleSearch {
  std::optional<OracleBinding> binding;
  bool isomorphism_certified = false;
  std::vector<std::string> notes;
};

// Oracle for P's group: Knuth-Bendix first; failing that, a torus knot group
// with the same Alexander polynomial reached by a surjective homomorphism.
inline OracleSearch find_oracle(const Presentation& P, const KbOptions& kb = {300, 30, std::nullopt},
                                int max_torus_product = 60) {
  OracleSearch out;
  std::string diag;
  if (auto b = kb_binding(P, kb, &diag)) {
    out.binding = std::move(b);
    out.isomorphism_certified = true;
    out.notes.push_back("knuth-bendix: " + diag);
    return out;
  }
  out.notes.push_back("knuth-bendix failed: " + diag);
  LaurentPolynomial delta;
  try {
    delta = alexander_polynomial(P);
  } catch (const InputError& e) {
    out.notes.push_back(std::string("no torus search: ") + e.what());
    return out;
  }
  for (int p = 2; p * (p + 1) <= max_torus_product; ++p) {
    for (int q = p + 1; p * q <= max_torus_product; ++q) {
      if (std::gcd(p, q) != 1 || torus_alexander_polynomial(p, q) != delta) continue;
      if (auto b = find_torus_binding(P, p, q)) {
        out.binding = std::move(b);
        out.notes.push_back("surjection onto the torus knot group (" + std::to_string(p) + "," + std::to_string(q) +
                            ") found; Alexander polynomials agree, isomorphism not certified");
        return out;
      }
      out.notes.push_back("no short surjection onto the torus knot group (" + std::to_string(p) + "," +
                          std::to_string(q) + ")");
    }
  }
  return out;
}

}  // namespace l2alex
