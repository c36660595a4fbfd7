#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "l2alex/errors.hpp"
#include "l2alex/word.hpp"

namespace l2alex {

enum class MarkRole { meridian, longitude, core };

inline std::string to_string(MarkRole r) {
  switch (r) {
    case MarkRole::meridian: return "meridian";
    case MarkRole::longitude: return "longitude";
    case MarkRole::core: return "core";
  }
  return "?";
}

inline MarkRole parse_mark_role(const std::string& s) {
  if (s == "meridian") return MarkRole::meridian;
  if (s == "longitude") return MarkRole::longitude;
  if (s == "core") return MarkRole::core;
  throw InputError("unknown mark role '" + s + "'");
}

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  bool wirtinger = false;
  std::map<MarkRole, Word> marks;

  std::size_t rank() const { return generators.size(); }
  int deficiency() const { return static_cast<int>(generators.size()) - static_cast<int>(relators.size()); }

  std::optional<Word> mark(MarkRole r) const {
    auto it = marks.find(r);
    if (it == marks.end()) return std::nullopt;
    return it->second;
  }

  int generator_index(const std::string& name) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (generators[i] == name) return static_cast<int>(i);
    return -1;
  }

  Word word(std::string_view text) const { return parse_word(text, generators); }
  std::string str(const Word& w) const { return format_word(w, generators); }

  friend bool operator==(const Presentation&, const Presentation&) = default;
};

// Checks names and that every word only uses declared generators.
inline void check_presentation(const Presentation& P) {
  for (std::size_t i = 0; i < P.generators.size(); ++i) {
    if (!detail::is_identifier(P.generators[i]))
      throw InputError("generator name '" + P.generators[i] + "' is not an identifier");
    for (std::size_t j = 0; j < i; ++j)
      if (P.generators[i] == P.generators[j]) throw InputError("duplicate generator '" + P.generators[i] + "'");
  }
  for (const Word& r : P.relators)
    if (r.max_generator() > P.generators.size()) throw InputError("relator uses an undeclared generator");
  for (const auto& [role, w] : P.marks)
    if (w.max_generator() > P.generators.size()) throw InputError("mark uses an undeclared generator");
}

// Text format, one directive per line:
//   gens: a b c
//   rels: a b A C, b c B A
//   mark meridian: a
//   wirtinger: true
// '#' starts a comment. Unknown directives are left to the caller via `extra`.
inline Presentation parse_presentation(const std::string& text,
                                       std::vector<std::pair<std::string, std::string>>* extra = nullptr) {
  Presentation P;
  bool have_gens = false;
  std::vector<std::string> rel_texts;
  std::vector<std::pair<MarkRole, std::string>> mark_texts;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto colon = line.find(':');
    std::string key = line.substr(0, colon == std::string::npos ? line.size() : colon);
    key.erase(0, key.find_first_not_of(" \t\r"));
    key.erase(key.find_last_not_of(" \t\r") + 1);
    if (key.empty()) continue;
    if (colon == std::string::npos)
      throw InputError("line " + std::to_string(lineno) + ": expected 'key: value'");
    const std::string value = line.substr(colon + 1);
    if (key == "gens") {
      std::istringstream g(value);
      std::string name;
      while (g >> name) P.generators.push_back(name);
      have_gens = true;
    } else if (key == "rels") {
      std::string cur;
      for (char c : value + ",") {
        if (c == ',') {
          if (cur.find_first_not_of(" \t\r") != std::string::npos) rel_texts.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
    } else if (key == "wirtinger") {
      // Only a claim; callers re-validate.
      std::string v = value;
      v.erase(0, v.find_first_not_of(" \t\r"));
      v.erase(v.find_last_not_of(" \t\r") + 1);
      if (v != "true" && v != "false") throw InputError("line " + std::to_string(lineno) + ": wirtinger must be true or false");
      P.wirtinger = v == "true";
    } else if (key.rfind("mark ", 0) == 0) {
      std::string role = key.substr(5);
      role.erase(0, role.find_first_not_of(' '));
      mark_texts.emplace_back(parse_mark_role(role), value);
    } else if (extra) {
      extra->emplace_back(key, value);
    } else {
      throw InputError("line " + std::to_string(lineno) + ": unknown directive '" + key + "'");
    }
  }
  if (!have_gens) throw InputError("presentation has no 'gens:' line");
  for (const std::string& r : rel_texts) {
    Word w = parse_word(r, P.generators);
    if (w.empty()) throw InputError("relator '" + r + "' reduces to the empty word");
    P.relators.push_back(std::move(w));
  }
  for (const auto& [role, t] : mark_texts) P.marks[role] = parse_word(t, P.generators);
  check_presentation(P);
  return P;
}

inline std::string format_presentation(const Presentation& P) {
  std::string out = "gens:";
  for (const std::string& g : P.generators) out += " " + g;
  out += "\nrels: ";
  for (std::size_t j = 0; j < P.relators.size(); ++j) {
    if (j) out += ", ";
    out += P.str(P.relators[j]);
  }
  out += "\n";
  for (const auto& [role, w] : P.marks) out += "mark " + to_string(role) + ": " + P.str(w) + "\n";
  if (P.wirtinger) out += "wirtinger: true\n";
  return out;
}

}  // namespace l2alex
