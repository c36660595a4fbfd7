#pragma once

#include <array>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "l2alex/abelianization.hpp"
#include "l2alex/errors.hpp"
#include "l2alex/presentation.hpp"
#include "l2alex/tietze.hpp"

namespace l2alex {

// PD convention: `X i j k l` lists the four edge labels counterclockwise
// starting at the incoming under-strand i; k is the outgoing under-strand and
// j, l are the over-strand. The crossing is positive when the over-strand runs
// from l to j and negative when it runs from j to l.
struct Crossing {
  std::array<int, 4> labels{};
  int sign = 0;
  int over_in = 0;   // label of the incoming over edge
  int over_out = 0;  // label of the outgoing over edge
};

struct Diagram {
  std::vector<Crossing> crossings;
  std::vector<int> labels;                   // sorted distinct edge labels
  std::vector<std::vector<int>> components;  // edge labels in traversal order

  std::size_t edge_count() const { return labels.size(); }
  int writhe() const {
    int w = 0;
    for (const Crossing& c : crossings) w += c.sign;
    return w;
  }
};

namespace detail {

struct EdgeEnds {
  // (crossing, slot) where the edge starts and ends; slot -1 = unknown.
  int start_c = -1, start_s = -1, end_c = -1, end_s = -1;
};

// Orients every over-strand by propagating from the under-slots, falling back
// to label order (j follows l on its component) where nothing propagates.
inline void orient(Diagram& D) {
  std::map<int, std::vector<std::pair<int, int>>> occ;
  for (std::size_t c = 0; c < D.crossings.size(); ++c)
    for (int s = 0; s < 4; ++s) occ[D.crossings[c].labels[s]].emplace_back(static_cast<int>(c), s);
  // over_dir[c]: +1 if l is incoming (l -> j), -1 if j incoming, 0 unknown.
  std::vector<int> over_dir(D.crossings.size(), 0);
  // For an over-slot occurrence, is it the incoming end of its edge?
  auto known_status = [&](int c, int s) -> int {
    if (s == 0) return 1;   // incoming
    if (s == 2) return -1;  // outgoing
    if (over_dir[static_cast<std::size_t>(c)] == 0) return 0;
    const bool l_in = over_dir[static_cast<std::size_t>(c)] > 0;
    return (s == 3) == l_in ? 1 : -1;
  };
  bool progress = true;
  auto propagate = [&]() {
    while (progress) {
      progress = false;
      for (std::size_t c = 0; c < D.crossings.size(); ++c) {
        if (over_dir[c] != 0) continue;
        for (int s : {1, 3}) {
          const int lab = D.crossings[c].labels[static_cast<std::size_t>(s)];
          const auto& o = occ[lab];
          for (const auto& [c2, s2] : o) {
            if (c2 == static_cast<int>(c) && s2 == s) continue;
            const int st = known_status(c2, s2);
            if (st == 0) continue;
            // This occurrence has the opposite status.
            const bool this_in = st < 0;
            over_dir[c] = ((s == 3) == this_in) ? 1 : -1;
            progress = true;
            break;
          }
          if (over_dir[c] != 0) break;
        }
      }
    }
  };
  propagate();
  for (std::size_t c = 0; c < D.crossings.size(); ++c) {
    if (over_dir[c] != 0) continue;
    // Fallback: consecutive labels on a component.
    const int j = D.crossings[c].labels[1], l = D.crossings[c].labels[3];
    over_dir[c] = (j == l + 1 || (l > j + 1)) ? 1 : -1;
    progress = true;
    propagate();
  }
  for (std::size_t c = 0; c < D.crossings.size(); ++c) {
    Crossing& X = D.crossings[c];
    X.sign = over_dir[c];
    X.over_in = over_dir[c] > 0 ? X.labels[3] : X.labels[1];
    X.over_out = over_dir[c] > 0 ? X.labels[1] : X.labels[3];
  }
}

inline std::map<int, EdgeEnds> edge_ends(const Diagram& D) {
  std::map<int, EdgeEnds> ends;
  for (std::size_t ci = 0; ci < D.crossings.size(); ++ci) {
    const Crossing& X = D.crossings[ci];
    const int c = static_cast<int>(ci);
    auto set_end = [&](int lab, int slot) {
      ends[lab].end_c = c;
      ends[lab].end_s = slot;
    };
    auto set_start = [&](int lab, int slot) {
      ends[lab].start_c = c;
      ends[lab].start_s = slot;
    };
    set_end(X.labels[0], 0);
    set_start(X.labels[2], 2);
    const int in_slot = X.sign > 0 ? 3 : 1;
    set_end(X.over_in, in_slot);
    set_start(X.over_out, in_slot == 3 ? 1 : 3);
  }
  return ends;
}

// Edge following `lab` along its component.
inline int next_edge(const Diagram& D, const std::map<int, EdgeEnds>& ends, int lab) {
  const EdgeEnds& e = ends.at(lab);
  const Crossing& X = D.crossings[static_cast<std::size_t>(e.end_c)];
  return e.end_s == 0 ? X.labels[2] : X.over_out;
}

}  // namespace detail

inline Diagram parse_pd(const std::string& text) {
  Diagram D;
  std::string cleaned;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    for (char& ch : line)
      if (ch == '/' || ch == ',' || ch == '[' || ch == ']' || ch == '(' || ch == ')') ch = ' ';
    cleaned += line + "\n";
  }
  std::istringstream in(cleaned);
  std::string tok;
  std::vector<int> cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    if (cur.size() != 4) throw InputError("parse_pd: a crossing needs exactly 4 labels");
    Crossing X;
    for (std::size_t i = 0; i < 4; ++i) X.labels[i] = cur[i];
    D.crossings.push_back(X);
    cur.clear();
  };
  while (in >> tok) {
    if (tok == "X" || tok == "PD" || tok == "x") {
      flush();
      continue;
    }
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size() || v < 1) throw InputError("");
      cur.push_back(v);
    } catch (...) {
      throw InputError("parse_pd: non-integer token '" + tok + "'");
    }
    if (cur.size() > 4) throw InputError("parse_pd: crossing with more than 4 labels");
  }
  flush();
  if (D.crossings.empty()) throw InputError("parse_pd: empty input");
  std::map<int, int> count;
  for (const Crossing& X : D.crossings)
    for (int l : X.labels) ++count[l];
  for (const auto& [lab, n] : count) {
    if (n != 2)
      throw InputError("parse_pd: edge " + std::to_string(lab) + " appears " + std::to_string(n) +
                       " times (expected 2)");
    D.labels.push_back(lab);
  }
  for (const Crossing& X : D.crossings)
    if (X.labels[0] == X.labels[2]) throw InputError("parse_pd: under-strand enters and leaves on the same edge");
  detail::orient(D);
  const auto ends = detail::edge_ends(D);
  for (const auto& [lab, e] : ends)
    if (e.start_c < 0 || e.end_c < 0)
      throw InputError("parse_pd: inconsistent orientation at edge " + std::to_string(lab));
  std::set<int> seen;
  for (int lab : D.labels) {
    if (seen.count(lab)) continue;
    std::vector<int> comp;
    int cur_lab = lab;
    while (!seen.count(cur_lab)) {
      seen.insert(cur_lab);
      comp.push_back(cur_lab);
      cur_lab = detail::next_edge(D, ends, cur_lab);
    }
    if (cur_lab != lab) throw InputError("parse_pd: edges do not close into components");
    D.components.push_back(std::move(comp));
  }
  return D;
}

inline std::string format_pd(const Diagram& D) {
  std::string out;
  for (const Crossing& X : D.crossings) {
    out += "X";
    for (int l : X.labels) out += " " + std::to_string(l);
    out += "\n";
  }
  return out;
}

// Arc structure: edges joined through over-strands.
struct ArcData {
  std::map<int, std::size_t> arc_of;     // edge label -> arc index
  std::vector<std::vector<int>> arcs;    // edges of each arc, sorted
};

inline ArcData arcs_of(const Diagram& D) {
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < D.labels.size(); ++i) index[D.labels[i]] = i;
  detail::UnionFind uf(D.labels.size());
  for (const Crossing& X : D.crossings) uf.unite(index[X.labels[1]], index[X.labels[3]]);
  // Order arcs by their smallest label.
  std::map<std::size_t, std::size_t> root_to_arc;
  ArcData A;
  for (std::size_t i = 0; i < D.labels.size(); ++i) {
    const std::size_t r = uf.find(i);
    auto it = root_to_arc.find(r);
    if (it == root_to_arc.end()) {
      it = root_to_arc.emplace(r, A.arcs.size()).first;
      A.arcs.emplace_back();
    }
    A.arcs[it->second].push_back(D.labels[i]);
    A.arc_of[D.labels[i]] = it->second;
  }
  return A;
}

inline std::vector<std::string> default_generator_names(std::size_t n) {
  std::vector<std::string> names;
  if (n <= 26) {
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  } else {
    for (std::size_t i = 0; i < n; ++i) names.push_back("a" + std::to_string(i + 1));
  }
  return names;
}

// Relator at crossing X: b a b^-1 c^-1 (positive) or b^-1 a b c^-1 (negative),
// b over, a incoming under, c outgoing under.
inline Word crossing_relator(const Crossing& X, const ArcData& A) {
  const auto b = static_cast<std::uint32_t>(A.arc_of.at(X.over_in));
  const auto a = static_cast<std::uint32_t>(A.arc_of.at(X.labels[0]));
  const auto c = static_cast<std::uint32_t>(A.arc_of.at(X.labels[2]));
  const Word B = Word::generator(b, X.sign);
  return B * Word::generator(a) * B.inverse() * Word::generator(c, -1);
}

// The longitude based at the arc of generator 1: the over-arc generators met
// at undercrossings, b^sign, multiplied against traversal order, times
// g1^-writhe. It commutes with g1 and has abelianization weight 0.
inline Word longitude_word(const Diagram& D) {
  if (D.components.size() != 1) throw InputError("longitude_word: diagram is not a knot diagram");
  const ArcData A = arcs_of(D);
  const auto ends = detail::edge_ends(D);
  // Start at the beginning of arc 0: an edge of arc 0 whose start is an under-slot.
  int start = A.arcs[0].front();
  for (int lab : A.arcs[0])
    if (ends.at(lab).start_s == 2) start = lab;
  Word w;
  int lab = start;
  do {
    const detail::EdgeEnds& e = ends.at(lab);
    if (e.end_s == 0) {
      const Crossing& X = D.crossings[static_cast<std::size_t>(e.end_c)];
      w = Word::generator(static_cast<std::uint32_t>(A.arc_of.at(X.over_in)), X.sign) * w;
    }
    lab = detail::next_edge(D, ends, lab);
  } while (lab != start);
  return w * Word::generator(0, -D.writhe());
}

// Wirtinger presentation: one generator per arc (ordered by smallest edge
// label), one relator per crossing, the last crossing's relator dropped unless
// keep_all_relators. Marks: meridian = generator 1, longitude = longitude_word.
inline Presentation wirtinger(const Diagram& D, bool keep_all_relators = false) {
  if (D.components.size() != 1)
    throw InputError("wirtinger: diagram has " + std::to_string(D.components.size()) +
                     " components; a connected knot diagram is required");
  const ArcData A = arcs_of(D);
  Presentation P;
  P.generators = default_generator_names(A.arcs.size());
  const std::size_t n = keep_all_relators ? D.crossings.size() : D.crossings.size() - 1;
  for (std::size_t c = 0; c < n; ++c) P.relators.push_back(crossing_relator(D.crossings[c], A));
  P.marks[MarkRole::meridian] = Word::generator(0);
  P.marks[MarkRole::longitude] = longitude_word(D);
  P.wirtinger = !keep_all_relators;
  return P;
}

// Swaps over and under at every crossing (the mirror image).
inline Diagram mirror_diagram(const Diagram& D) {
  std::string text;
  for (const Crossing& X : D.crossings) {
    const auto& L = X.labels;
    std::array<int, 4> m = X.sign > 0 ? std::array<int, 4>{L[3], L[0], L[1], L[2]}
                                      : std::array<int, 4>{L[1], L[2], L[3], L[0]};
    text += "X " + std::to_string(m[0]) + " " + std::to_string(m[1]) + " " + std::to_string(m[2]) + " " +
            std::to_string(m[3]) + "\n";
  }
  return parse_pd(text);
}

struct MirrorResult {
  Presentation presentation;
  std::vector<std::size_t> correspondence;  // generator i of P -> generator correspondence[i]
  AbelianizationMap alpha;                  // abelianization before renormalization: all -1
};

inline std::string mirror_name(const std::string& n) {
  const std::string up = detail::to_upper(n), low = detail::to_lower(n);
  if (n == low && up != low) return up;
  if (n == up && up != low) return low;
  return n + "_m";
}

// The mirror image presentation: generators A_i are the meridians of the mirror
// with the opposite orientation, so relators keep their spelling in the A_i and
// the abelianization sends every A_i to -1 before renormalization.
inline MirrorResult mirror_presentation(const Presentation& P) {
  if (!P.wirtinger) throw InputError("mirror_presentation: input is not a Wirtinger presentation");
  MirrorResult M;
  M.presentation = P;
  for (std::string& g : M.presentation.generators) g = mirror_name(g);
  check_presentation(M.presentation);
  for (std::size_t i = 0; i < P.rank(); ++i) M.correspondence.push_back(i);
  M.alpha.values.assign(P.rank(), -1);
  return M;
}

}  // namespace l2alex
