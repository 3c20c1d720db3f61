#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "incr/lexicon.hpp"
#include "incr/session.hpp"
#include "incr/world.hpp"

namespace testing_support {

inline std::string data_path(const std::string& rel) { return std::string(INCR_DATA_DIR) + "/" + rel; }

inline std::shared_ptr<const incr::Lexicon> demo_lexicon() {
  static auto lex = std::make_shared<const incr::Lexicon>(incr::load_lexicon_file(data_path("lexicon/demo.lex")));
  return lex;
}

inline std::shared_ptr<const incr::WorldModel> world(const std::string& name) {
  return std::make_shared<const incr::WorldModel>(incr::load_world_file(data_path("worlds/" + name + ".world")));
}

inline incr::SessionConfig config(const std::string& world_name = "", bool s_modifiers = false) {
  incr::SessionConfig c;
  c.lexicon = demo_lexicon();
  if (!world_name.empty()) c.world = world(world_name);
  c.parser.modifier_prediction = s_modifiers;
  return c;
}

inline std::vector<std::string> words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::vector<std::string> corpus() {
  std::vector<std::string> out;
  std::ifstream in(data_path("corpus.txt"));
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

inline incr::ParserState parse_prefix(const std::string& text, bool s_modifiers = false) {
  incr::ParserOptions o;
  o.modifier_prediction = s_modifiers;
  incr::ParserState st = incr::init_session(demo_lexicon(), o);
  for (const auto& w : words(text)) st = incr::step_word(st, w);
  return st;
}

}  // namespace testing_support
