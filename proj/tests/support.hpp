#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "l2alex/l2alex.hpp"

namespace testing {

inline std::string data_file(const std::string& name) {
  std::ifstream in(std::string(L2ALEX_DATA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing data file " + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline l2alex::Presentation trefoil_wirtinger() { return l2alex::wirtinger(l2alex::parse_pd(data_file("trefoil.pd"))); }
inline l2alex::Presentation figure_eight_wirtinger() {
  return l2alex::wirtinger(l2alex::parse_pd(data_file("figure_eight.pd")));
}
inline l2alex::Presentation trefoil_2gen() { return l2alex::parse_presentation(data_file("trefoil_2gen.pres")); }
inline l2alex::Presentation unknot_2gen() { return l2alex::parse_presentation(data_file("unknot.pres")); }

// Random word over k generators with up to max_len letters (before reduction).
inline l2alex::Word random_word(std::mt19937_64& rng, std::size_t k, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), gen(0, k - 1);
  std::bernoulli_distribution neg(0.5);
  std::vector<l2alex::Letter> raw;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i)
    raw.push_back({static_cast<std::uint32_t>(gen(rng)), neg(rng) ? -1 : 1});
  return l2alex::Word::from_letters(raw);
}

}  // namespace testing
