// l2alex: command-line front end. Text goes to stdout, JSON to --json <path>.
// Exit codes: 0 success, 2 input error, 3 resource or oracle failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "l2alex/l2alex.hpp"

using namespace l2alex;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// FNV-1a, for the inputs digest.
std::string digest(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Rounds to 15 significant digits so JSON output is stable.
double fixed15(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

ordered_json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fixed15(x);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

bool looks_like_presentation(const std::string& text) { return text.find("gens:") != std::string::npos; }

// Presentation from either a presentation file or a PD file.
Presentation load_knot(const std::string& path, std::string* raw = nullptr) {
  const std::string text = read_file(path);
  if (raw) *raw = text;
  if (looks_like_presentation(text)) {
    Presentation P = parse_presentation(text);
    P.wirtinger = P.wirtinger && validate_wirtinger(P).pass;
    return P;
  }
  return wirtinger(parse_pd(text));
}

ordered_json estimate_json(const FkEstimate& e) {
  ordered_json j;
  j["log_value"] = num(e.log_value);
  j["value"] = num(e.value);
  j["method"] = to_string(e.method);
  j["order"] = e.order;
  j["radius"] = e.radius;
  j["scaling"] = num(e.scaling);
  j["cutoff"] = num(e.cutoff);
  j["tail_proxy"] = num(e.tail_proxy);
  j["sigma_min"] = e.sigma_min ? num(*e.sigma_min) : ordered_json(nullptr);
  j["partial_oracle"] = e.partial_oracle;
  j["kernel_suspected"] = e.kernel_suspected;
  j["exact"] = e.exact;
  j["size"] = e.size;
  j["caveat"] = e.caveat;
  j["diagnostics"] = e.diagnostics;
  return j;
}

ordered_json probe_json(const PropertyIReport& r) {
  ordered_json j;
  j["verdict"] = to_string(r.verdict);
  j["threshold"] = num(r.threshold);
  j["partial_oracle"] = r.partial_oracle;
  ordered_json rows = ordered_json::array();
  for (const ProbeRow& row : r.rows)
    rows.push_back({{"radius", row.radius}, {"sigma_min", num(row.sigma_min)}, {"kernel_mass", num(row.kernel_mass)}});
  j["rows"] = rows;
  return j;
}

std::string estimate_text(const FkEstimate& e) {
  std::ostringstream os;
  os << "value " << fmt(e.value) << "\nlog_value " << fmt(e.log_value) << "\nmethod " << to_string(e.method);
  if (e.method == FkMethod::series) {
    os << " (order " << e.order << ", scaling " << fmt(e.scaling) << ")";
  } else {
    os << " (radius " << e.radius << ", cutoff " << fmt(e.cutoff) << ")";
  }
  os << "\ntail_proxy " << fmt(e.tail_proxy) << "\n";
  if (e.sigma_min) os << "sigma_min " << fmt(*e.sigma_min) << "\n";
  if (!e.caveat.empty()) os << "caveat: " << e.caveat << "\n";
  for (const auto& d : e.diagnostics) os << "note: " << d << "\n";
  return os.str();
}

// Matrix file: "group: free a b | free-abelian g | torus p q | kb" (kb reads
// gens:/rels: from the same file), then one "row:" line per row with entries
// separated by '|'.
GroupRingMatrix load_matrix(const std::string& path, const KbOptions& kb, std::vector<std::string>& warnings) {
  const std::string text = read_file(path);
  std::vector<std::pair<std::string, std::string>> extra;
  std::optional<Presentation> P;
  if (looks_like_presentation(text)) P = parse_presentation(text, &extra);
  if (!P) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      const auto colon = line.find(':');
      if (colon == std::string::npos) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) throw InputError("matrix file: expected 'key: value'");
        continue;
      }
      std::string key = line.substr(0, colon);
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t") + 1);
      extra.emplace_back(key, line.substr(colon + 1));
    }
  }
  OraclePtr oracle;
  std::vector<std::string> rows;
  for (const auto& [key, value] : extra) {
    if (key == "row") {
      rows.push_back(value);
      continue;
    }
    if (key != "group") throw InputError("matrix file: unknown directive '" + key + "'");
    std::istringstream g(value);
    std::string kind;
    g >> kind;
    std::vector<std::string> names;
    if (kind == "free" || kind == "free-abelian") {
      std::string n;
      while (g >> n) names.push_back(n);
      if (names.empty()) throw InputError("matrix file: group needs generator names");
      oracle = make_oracle(kind == "free" ? NormalFormOracle::free(names) : NormalFormOracle::free_abelian(names));
    } else if (kind == "torus") {
      int p = 0, q = 0;
      if (!(g >> p >> q)) throw InputError("matrix file: torus needs p q");
      oracle = make_oracle(NormalFormOracle::torus_amalgam(p, q));
    } else if (kind == "kb") {
      if (!P) throw InputError("matrix file: group kb needs gens:/rels: lines");
      KbResult r = kb_complete(*P, kb);
      if (!r.completed) warnings.push_back("partial-oracle: knuth-bendix did not complete (" + r.diagnostics + ")");
      oracle = make_oracle(NormalFormOracle::rewriting(P->generators, std::move(r.system)));
    } else {
      throw InputError("matrix file: unknown group kind '" + kind + "'");
    }
  }
  if (!oracle) throw InputError("matrix file: missing 'group:' line");
  if (rows.empty()) throw InputError("matrix file: no rows");
  std::vector<std::vector<std::string>> cells;
  for (const std::string& r : rows) {
    std::vector<std::string> c;
    std::string cur;
    for (char ch : r + "|") {
      if (ch == '|') {
        c.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    if (!cells.empty() && c.size() != cells.front().size()) throw InputError("matrix file: ragged rows");
    cells.push_back(std::move(c));
  }
  GroupRingMatrix A(oracle, cells.size(), cells.front().size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = 0; j < cells[i].size(); ++j) {
      const ComplexFreeRing x = parse_ring_element(cells[i][j], oracle->alphabet());
      GroupRingElement e(oracle);
      for (const auto& [w, c] : x.terms()) e.add(w, c);
      A.at(i, j) = std::move(e);
    }
  }
  return A;
}

OracleBinding parse_oracle_option(const std::string& spec, const Presentation& P, const KbOptions& kb,
                                  std::vector<std::string>& warnings) {
  if (spec == "auto") {
    OracleSearch s = find_oracle(P);
    for (const auto& n : s.notes) warnings.push_back("oracle: " + n);
    if (!s.binding)
      throw OracleError(
          "no word-problem oracle for this presentation (knuth-bendix and torus search failed); "
          "for graph knots use 'l2alex l2 exact'");
    if (!s.isomorphism_certified) warnings.push_back("oracle: binding is a certified surjection only");
    return *s.binding;
  }
  if (spec == "kb") {
    std::string diag;
    auto b = kb_binding(P, kb, &diag);
    if (!b) throw OracleError("knuth-bendix failed: " + diag);
    return *b;
  }
  if (spec.rfind("torus:", 0) == 0) {
    int p = 0, q = 0;
    if (std::sscanf(spec.c_str() + 6, "%d,%d", &p, &q) != 2) throw InputError("--oracle torus:p,q expected");
    auto b = find_torus_binding(P, p, q);
    if (!b) throw OracleError("no surjection onto the torus knot group found");
    warnings.push_back("oracle: torus binding is a certified surjection; isomorphism not certified");
    return *b;
  }
  throw InputError("unknown --oracle '" + spec + "' (auto, kb, torus:p,q)");
}

struct Report {
  ordered_json json = ordered_json::object();
  std::ostringstream text;
  std::vector<std::string> warnings;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fox calculus, Alexander polynomials and L2-Alexander invariants of knots"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string json_path;
  unsigned seed = 0;
  bool timing = false;
  app.add_option("--json", json_path, "Write a JSON report to this path");
  app.add_option("--seed", seed, "Seed for randomized operations")->capture_default_str();
  app.add_flag("--timing", timing, "Include wall time in the JSON report");

  // wirtinger
  auto* c_wirt = app.add_subcommand("wirtinger", "Wirtinger presentation of a PD code");
  std::string pd_file;
  bool keep_all = false;
  c_wirt->add_option("pd-file", pd_file)->required();
  c_wirt->add_flag("--keep-all-relators", keep_all);

  // fox
  auto* c_fox = app.add_subcommand("fox", "Fox matrix of a presentation");
  std::string pres_file;
  std::size_t delete_row_i = 0;
  std::optional<double> twist_t;
  c_fox->add_option("pres-file", pres_file)->required();
  c_fox->add_option("--delete-row", delete_row_i, "Delete row i (1-based)");
  c_fox->add_option("--twist", twist_t, "Twist coefficients by t^alpha");

  // alexander
  auto* c_alex = app.add_subcommand("alexander", "Normalized Alexander polynomial");
  std::string knot_file;
  std::size_t alex_row = 1;
  c_alex->add_option("file", knot_file, "PD or presentation file")->required();
  c_alex->add_option("--row", alex_row, "Fox matrix row to delete")->capture_default_str();

  // kb
  auto* c_kb = app.add_subcommand("kb", "Knuth-Bendix completion");
  KbOptions kbopt;
  std::vector<int> kb_weights;
  c_kb->add_option("pres-file", pres_file)->required();
  c_kb->add_option("--max-rules", kbopt.max_rules)->capture_default_str();
  c_kb->add_option("--max-len", kbopt.max_len)->capture_default_str();
  c_kb->add_option("--weights", kb_weights, "Per-generator shortlex weights");

  // fk
  auto* c_fk = app.add_subcommand("fk", "Fuglede-Kadison determinant of a group ring matrix");
  std::string matrix_file, method_name = "series";
  int order = 64, radius = 64, bins = 0;
  double cutoff = 1e-8;
  std::vector<int> probe_radii;
  c_fk->add_option("matrix-file", matrix_file)->required();
  c_fk->add_option("--method", method_name)->check(CLI::IsMember({"series", "ball"}))->capture_default_str();
  c_fk->add_option("--order", order)->capture_default_str();
  c_fk->add_option("--radius", radius)->capture_default_str();
  c_fk->add_option("--cutoff", cutoff)->capture_default_str();
  c_fk->add_option("--bins", bins, "Also print a spectral density histogram");
  c_fk->add_option("--probe", probe_radii, "Property I probe radii");
  bool pivot = false;
  c_fk->add_flag("--pivot", pivot, "Eliminate unit pivots exactly before estimating");

  // construct
  auto* c_con = app.add_subcommand("construct", "Build sum, cable and pattern presentations");
  c_con->require_subcommand(1);
  auto* c_sum = c_con->add_subcommand("sum", "Connected sum");
  std::string a_file, b_file;
  c_sum->add_option("A", a_file)->required();
  c_sum->add_option("B", b_file)->required();
  auto* c_cab = c_con->add_subcommand("cable", "(p,q)-cable");
  int cp = 2, cq = 3;
  std::string companion_file;
  c_cab->add_option("--p", cp)->required();
  c_cab->add_option("--q", cq)->required();
  c_cab->add_option("companion", companion_file)->required();
  auto* c_tp = c_con->add_subcommand("torus-pattern", "Torus knot pattern in a solid torus");
  c_tp->add_option("--p", cp)->required();
  c_tp->add_option("--q", cq)->required();
  auto* c_expr = c_con->add_subcommand("expr", "Presentation of a knot expression");
  std::string expr;
  c_expr->add_option("expr", expr)->required();

  // l2
  auto* c_l2 = app.add_subcommand("l2", "L2-Alexander invariant");
  c_l2->require_subcommand(1);
  auto* c_exact = c_l2->add_subcommand("exact", "Exact value on graph knots");
  double t = 2;
  c_exact->add_option("expr", expr)->required();
  c_exact->add_option("--t", t)->capture_default_str();
  auto* c_approx = c_l2->add_subcommand("approx", "Numeric value from a presentation");
  std::string oracle_spec = "auto";
  int l2_order = L2Params{}.order, l2_radius = L2Params{}.radius;
  c_approx->add_option("file", knot_file, "Presentation or PD file")->required();
  c_approx->add_option("--t", t)->capture_default_str();
  c_approx->add_option("--method", method_name)->check(CLI::IsMember({"series", "ball"}))->capture_default_str();
  c_approx->add_option("--order", l2_order)->capture_default_str();
  c_approx->add_option("--radius", l2_radius)->capture_default_str();
  c_approx->add_option("--cutoff", cutoff)->capture_default_str();
  c_approx->add_option("--oracle", oracle_spec, "auto, kb or torus:p,q")->capture_default_str();
  c_approx->add_option("--probe", probe_radii, "Property I probe radii");
  bool no_pivot = false;
  c_approx->add_flag("--no-pivot", no_pivot, "Skip exact unit-pivot elimination");

  // detect-unknot
  auto* c_det = app.add_subcommand("detect-unknot", "Unknot detection on graph knot expressions");
  c_det->add_option("expr", expr)->required();

  // tietze
  auto* c_tz = app.add_subcommand("tietze", "Apply Tietze moves and check Alexander invariance");
  std::string script_file;
  int random_moves = 0;
  c_tz->add_option("pres-file", pres_file)->required();
  auto* script_opt = c_tz->add_option("--script", script_file, "File with one move per line");
  c_tz->add_option("--random", random_moves, "Number of random moves")->excludes(script_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Report R;
  const auto t0 = std::chrono::steady_clock::now();
  std::string inputs;
  int exit_code = 0;
  try {
    if (*c_wirt) {
      const std::string text = read_file(pd_file);
      inputs += text;
      const Diagram D = parse_pd(text);
      const Presentation P = wirtinger(D, keep_all);
      const WirtingerReport W = validate_wirtinger(P);
      R.text << format_presentation(P);
      R.text << "# crossings " << D.crossings.size() << ", writhe " << D.writhe() << ", wirtinger check "
             << (W.pass ? "pass" : "fail") << "\n";
      R.json["command"] = "wirtinger";
      R.json["presentation"] = format_presentation(P);
      R.json["crossings"] = D.crossings.size();
      R.json["writhe"] = D.writhe();
      R.json["wirtinger_check"] = W.pass;
      R.json["flags"] = W.flags;
    } else if (*c_fox) {
      std::string raw;
      const Presentation P = load_knot(pres_file, &raw);
      inputs += raw;
      FoxMatrix F = fox_matrix(P);
      if (delete_row_i) F = delete_row(F, delete_row_i);
      R.json["command"] = "fox";
      ordered_json entries = ordered_json::array();
      if (twist_t) {
        const auto Ft = twist(F, abelianization(P), *twist_t);
        for (std::size_t i = 0; i < Ft.rows(); ++i)
          for (std::size_t j = 0; j < Ft.cols(); ++j) {
            const std::string s = format_ring_element(Ft.entries[i][j], P.generators);
            R.text << "d" << Ft.col_labels[j] << "/d" << Ft.row_labels[i] << " = " << s << "\n";
            entries.push_back({{"row", Ft.row_labels[i]}, {"col", Ft.col_labels[j]}, {"entry", s}});
          }
        R.json["twist"] = num(*twist_t);
      } else {
        for (std::size_t i = 0; i < F.rows(); ++i)
          for (std::size_t j = 0; j < F.cols(); ++j) {
            const std::string s = format_ring_element(F.entries[i][j], P.generators);
            R.text << "d" << F.col_labels[j] << "/d" << F.row_labels[i] << " = " << s << "\n";
            entries.push_back({{"row", F.row_labels[i]}, {"col", F.col_labels[j]}, {"entry", s}});
          }
      }
      R.json["rows"] = F.rows();
      R.json["cols"] = F.cols();
      R.json["entries"] = entries;
    } else if (*c_alex) {
      std::string raw;
      const Presentation P = load_knot(knot_file, &raw);
      inputs += raw;
      const AlexanderResult A = alexander(P, alex_row);
      R.text << format_laurent(A.polynomial) << "\n";
      R.json["command"] = "alexander";
      R.json["polynomial"] = format_laurent(A.polynomial);
      R.json["minor"] = format_laurent(A.minor);
      R.json["alpha_deleted"] = A.alpha_deleted;
      R.json["mahler_measure"] = num(mahler_measure(A.polynomial));
    } else if (*c_kb) {
      std::string raw;
      const Presentation P = load_knot(pres_file, &raw);
      inputs += raw;
      if (!kb_weights.empty()) {
        std::vector<std::size_t> ord(P.rank());
        std::iota(ord.begin(), ord.end(), 0);
        kbopt.order = ShortlexOrder::with_precedence(P.rank(), ord, kb_weights);
      }
      const KbResult r = kb_complete(P, kbopt);
      R.json["command"] = "kb";
      R.json["completed"] = r.completed;
      R.json["diagnostics"] = r.diagnostics;
      ordered_json rules = ordered_json::array();
      for (const Rule& rule : r.system.rules()) {
        const std::string l = format_codes(rule.lhs, P.generators);
        const std::string rr = format_codes(rule.rhs, P.generators);
        rules.push_back({l, rr});
        if (r.completed) R.text << l << " -> " << rr << "\n";
      }
      R.json["rules"] = rules;
      R.text << (r.completed ? "# " : "failure: ") << r.diagnostics << "\n";
      if (!r.completed) {
        R.text << "# partial system has " << r.system.rules().size() << " rules\n";
        exit_code = 3;
      }
    } else if (*c_fk) {
      inputs += read_file(matrix_file);
      const GroupRingMatrix A = load_matrix(matrix_file, kbopt, R.warnings);
      const FkMethod m = parse_fk_method(method_name);
      const int n = m == FkMethod::series ? order : radius;
      const FkEstimate e = pivot ? fk_det_reduced(A, m, n, cutoff) : fk_det(A, m, n, cutoff);
      R.text << estimate_text(e);
      R.json = estimate_json(e);
      R.json["command"] = "fk";
      if (e.partial_oracle) R.warnings.push_back("partial-oracle: " + e.caveat);
      if (e.kernel_suspected) R.warnings.push_back("kernel-suspected");
      if (bins > 0) {
        const SpectralHistogram h = spectral_density(A, radius, bins);
        ordered_json hist = ordered_json::array();
        R.text << "# spectral density (edge, F)\n";
        for (std::size_t b = 0; b < h.edges.size(); ++b) {
          R.text << fmt(h.edges[b]) << " " << fmt(h.cumulative[b]) << "\n";
          hist.push_back({num(h.edges[b]), num(h.cumulative[b])});
        }
        R.json["spectral_density"] = hist;
      }
      if (!probe_radii.empty()) {
        const PropertyIReport p = property_i_probe(A, probe_radii);
        R.text << "property I probe: " << to_string(p.verdict) << "\n";
        R.json["probe"] = probe_json(p);
        if (p.verdict == ProbeVerdict::kernel_suspected) R.warnings.push_back("kernel-suspected");
      }
    } else if (*c_con) {
      Presentation out;
      R.json["command"] = "construct";
      if (*c_sum) {
        inputs += read_file(a_file) + read_file(b_file);
        out = sum_presentation(load_knot(a_file), load_knot(b_file)).presentation;
        R.json["construction"] = "sum";
      } else if (*c_cab) {
        std::string raw;
        const Presentation C = load_knot(companion_file, &raw);
        inputs += raw;
        auto W = C.mark(MarkRole::longitude);
        if (!W) throw InputError("companion has no 'mark longitude:' line");
        out = cable_presentation(C, {cp, cq}, *W).presentation;
        R.json["construction"] = "cable";
      } else if (*c_tp) {
        out = torus_pattern_presentation({cp, cq});
        R.json["construction"] = "torus-pattern";
      } else {
        inputs += expr;
        out = presentation_of(*parse_knot_expr(expr));
        R.json["construction"] = "expr";
      }
      R.text << format_presentation(out);
      R.json["presentation"] = format_presentation(out);
    } else if (*c_l2) {
      if (*c_exact) {
        inputs += expr;
        const auto K = parse_knot_expr(expr);
        const L2Value v = exact_value(*K, t);
        R.text << "value " << fmt(v.value) << "\nexponent " << *v.exponent << "\n";
        R.json["input"] = format_knot_expr(*K);
        R.json["t"] = num(t);
        R.json["exponent"] = *v.exponent;
        R.json["value"] = num(v.value);
        R.json["method"] = "exact";
        R.json["diagnostics"] = ordered_json::array();
      } else {
        std::string raw;
        const Presentation P = load_knot(knot_file, &raw);
        inputs += raw;
        const OracleBinding b = parse_oracle_option(oracle_spec, P, kbopt, R.warnings);
        L2Params par;
        par.method = parse_fk_method(method_name);
        par.order = l2_order;
        par.radius = l2_radius;
        par.cutoff = cutoff;
        par.reduce_pivots = !no_pivot;
        if (!probe_radii.empty()) par.probe_radii = probe_radii;
        const L2Value v = l2_from_presentation(P, t, b, par);
        for (const auto& d : v.diagnostics) R.warnings.push_back(d);
        R.text << "value " << fmt(v.value) << " (normalized by max(1,t)^" << v.normalization_exponent << ")\n";
        R.text << estimate_text(*v.estimate);
        if (v.probe) R.text << "property I probe: " << to_string(v.probe->verdict) << "\n";
        R.json["input"] = knot_file;
        R.json["t"] = num(t);
        R.json["value"] = num(v.value);
        R.json["method"] = to_string(par.method);
        R.json["normalization_exponent"] = v.normalization_exponent;
        R.json["oracle"] = b.oracle->describe();
        R.json["estimate"] = estimate_json(*v.estimate);
        if (v.probe) R.json["probe"] = probe_json(*v.probe);
        R.json["diagnostics"] = v.diagnostics;
      }
      R.json["command"] = "l2";
    } else if (*c_det) {
      inputs += expr;
      const auto K = parse_knot_expr(expr);
      const bool u = detect_unknot(*K);
      R.text << (u ? "true" : "false") << "\n";
      R.json["command"] = "detect-unknot";
      R.json["input"] = format_knot_expr(*K);
      R.json["unknot"] = u;
      R.json["exponent"] = exact_exponent(*K);
    } else if (*c_tz) {
      std::string raw;
      Presentation P = load_knot(pres_file, &raw);
      inputs += raw;
      const AlexanderResult before = alexander(P);
      std::vector<std::string> applied;
      if (!script_file.empty()) {
        const std::string script = read_file(script_file);
        inputs += script;
        std::istringstream in(script);
        std::string line;
        while (std::getline(in, line)) {
          if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          const TietzeMove mv = parse_move(line, P);
          applied.push_back(describe(P, mv));
          P = tietze_apply(P, mv);
        }
      } else {
        std::mt19937_64 rng(seed);
        for (int k = 0; k < random_moves; ++k) {
          const TietzeMove mv = random_move(P, rng);
          applied.push_back(describe(P, mv));
          P = tietze_apply(P, mv);
        }
      }
      const AlexanderResult after = alexander(P);
      // Raw minors (cyclotomic factor removed) differ by a unit +-t^m.
      auto reduced = [](const AlexanderResult& r) {
        LaurentPolynomial c;
        for (long long e = 0; e < std::llabs(r.alpha_deleted); ++e) c.add(static_cast<int>(e), 1);
        return exact_divide(r.minor, c);
      };
      const LaurentPolynomial rb = reduced(before), ra = reduced(after);
      const int m = ra.min_degree() - rb.min_degree();
      const int sign = ra == rb.shifted(m) ? 1 : (ra == -rb.shifted(m) ? -1 : 0);
      const bool same = before.polynomial == after.polynomial;
      R.text << format_presentation(P);
      R.text << "# moves applied: " << applied.size() << "\n";
      R.text << "# alexander before: " << format_laurent(before.polynomial) << "\n";
      R.text << "# alexander after:  " << format_laurent(after.polynomial) << "\n";
      R.text << "# unit: " << (sign < 0 ? "-" : "") << "t^" << m << (same ? "" : " (polynomials differ)") << "\n";
      R.json["command"] = "tietze";
      R.json["moves"] = applied;
      R.json["presentation"] = format_presentation(P);
      R.json["alexander_before"] = format_laurent(before.polynomial);
      R.json["alexander_after"] = format_laurent(after.polynomial);
      R.json["invariant"] = same && sign != 0;
      R.json["unit_exponent"] = m;
      R.json["unit_sign"] = sign;
      if (!same) exit_code = 3;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const OracleError& e) {
    std::cerr << "oracle error: " << e.what() << "\n";
    return 3;
  }

  std::cout << R.text.str();
  for (const auto& w : R.warnings) std::cerr << "warning: " << w << "\n";
  if (!json_path.empty()) {
    ordered_json report;
    report["schema"] = 1;
    std::vector<std::string> args(argv + 1, argv + argc);
    report["argv"] = args;
    report["seed"] = seed;
    report["inputs_digest"] = digest(inputs);
    report["outputs"] = R.json;
    report["warnings"] = R.warnings;
    if (timing)
      report["wall_time"] = num(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "error: cannot write '" << json_path << "'\n";
      return 2;
    }
    out << report.dump(2) << "\n";
  }
  return exit_code;
}
