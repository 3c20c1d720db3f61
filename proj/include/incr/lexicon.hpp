#pragma once

// Lexicalised grammar. File format, one entry per line, '#' starts a comment:
//
//   word : CATEGORY = LF-TEXT

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "incr/category.hpp"
#include "incr/error.hpp"
#include "incr/lf_parser.hpp"
#include "incr/term.hpp"
#include "incr/typing.hpp"

namespace incr {

struct LexEntry {
  std::string word;
  Category cat;
  Term sem;
};

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

class Lexicon {
 public:
  Lexicon() = default;

  /// Adds an entry after checking its semantics against the category's type.
  void add(LexEntry e, std::size_t line = 0) {
    SemType expected = e.cat.sem_type();
    try {
      infer_type(e.sem, expected);
    } catch (const TypeError& err) {
      throw LoadError("entry '" + e.word + " : " + e.cat.str() + "' does not have type " +
                          expected.str() + " (" + err.what() + ")",
                      line);
    }
    if (!free_vars(e.sem).empty())
      throw LoadError("entry '" + e.word + "' has free variables", line);
    index_[e.word].push_back(entries_.size());
    entries_.push_back(std::move(e));
  }

  /// All entries for `word` in file order; UnknownWord lists near misses.
  std::vector<LexEntry> lookup(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) throw UnknownWord(word, suggestions(word));
    std::vector<LexEntry> out;
    for (auto i : it->second) out.push_back(entries_[i]);
    return out;
  }

  bool contains(const std::string& word) const { return index_.count(word) > 0; }

  std::vector<std::string> suggestions(const std::string& word, std::size_t max_distance = 2) const {
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (const auto& [w, _] : index_) {
      std::size_t d = edit_distance(word, w);
      if (d <= max_distance) scored.emplace_back(d, w);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<std::string> out;
    for (auto& [_, w] : scored) out.push_back(w);
    return out;
  }

  /// True if some entry, after its forward arguments, is a modifier X\X.
  bool has_modifiers_of(const Category& x) const {
    for (const auto& e : entries_) {
      Category rest = e.cat;
      e.cat.forward_args(&rest);
      if (!rest.is_atom() && rest.dir() == Category::Dir::Bwd && rest.arg() == x && rest.result() == x)
        return true;
    }
    return false;
  }

  const std::vector<LexEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<LexEntry> entries_;
  std::map<std::string, std::vector<std::size_t>> index_;
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline Lexicon load_lexicon(std::string_view source) {
  Lexicon lex;
  std::istringstream in{std::string(source)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto colon = line.find(':');
    auto eq = line.find('=', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || eq == std::string::npos)
      throw LoadError("expected 'word : CATEGORY = LF'", lineno);
    std::string word = trim(line.substr(0, colon));
    if (word.empty()) throw LoadError("missing word", lineno);
    Category cat = Category::atom("s");
    Term sem;
    try {
      cat = parse_category(trim(line.substr(colon + 1, eq - colon - 1)));
      sem = parse_lf(trim(line.substr(eq + 1)));
    } catch (const SyntaxError& e) {
      throw LoadError(e.what(), lineno);
    }
    lex.add({word, cat, sem}, lineno);
  }
  return lex;
}

inline Lexicon load_lexicon_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open lexicon file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return load_lexicon(ss.str());
}

}  // namespace incr
