#pragma once

// Finite first-order models. File format, one item per line, '#' comments:
//
//   entity <id>
//   fact <pred>(<id>{,<id>})
//   constraint <name> : <LF-TEXT>

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "incr/error.hpp"
#include "incr/lexicon.hpp"
#include "incr/lf_parser.hpp"
#include "incr/term.hpp"

namespace incr {

using EntityId = std::string;
using Tuple = std::vector<EntityId>;

struct Constraint {
  std::string name;
  Term formula;
};

class WorldModel {
 public:
  void add_entity(const EntityId& e) {
    if (std::find(entities_.begin(), entities_.end(), e) == entities_.end()) entities_.push_back(e);
  }

  void add_fact(const std::string& pred, Tuple args) {
    for (const auto& a : args)
      if (!has_entity(a)) throw Error("undeclared entity '" + a + "' in fact " + pred);
    auto ar = arity_.find(pred);
    if (ar != arity_.end() && ar->second != args.size())
      throw Error("predicate " + pred + " used with arities " + std::to_string(ar->second) + " and " +
                  std::to_string(args.size()));
    arity_[pred] = args.size();
    facts_[pred].insert(std::move(args));
  }

  void add_constraint(std::string name, Term formula) {
    if (!free_vars(formula).empty()) throw Error("constraint " + name + " is not closed");
    note_predicates(formula);
    constraints_.push_back({std::move(name), std::move(formula)});
  }

  bool has_entity(const EntityId& e) const {
    return std::find(entities_.begin(), entities_.end(), e) != entities_.end();
  }
  /// Predicates named by a fact or a constraint.
  bool declares(const std::string& pred) const { return arity_.count(pred) > 0; }
  bool has_facts(const std::string& pred) const { return facts_.count(pred) > 0; }
  std::optional<std::size_t> arity(const std::string& pred) const {
    auto it = arity_.find(pred);
    if (it == arity_.end()) return std::nullopt;
    return it->second;
  }
  bool holds(const std::string& pred, const Tuple& args) const {
    auto it = facts_.find(pred);
    return it != facts_.end() && it->second.count(args) > 0;
  }

  const std::vector<EntityId>& entities() const { return entities_; }
  const std::map<std::string, std::set<Tuple>>& facts() const { return facts_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  friend bool operator==(const WorldModel& a, const WorldModel& b) {
    if (a.entities_ != b.entities_ || a.facts_ != b.facts_ || a.constraints_.size() != b.constraints_.size())
      return false;
    for (std::size_t i = 0; i < a.constraints_.size(); ++i)
      if (a.constraints_[i].name != b.constraints_[i].name || a.constraints_[i].formula != b.constraints_[i].formula)
        return false;
    return true;
  }

 private:
  void note_predicates(const Term& f) {
    visit(f, [&](const Term& n) {
      if (n.is(Term::Kind::App) && n.fun().is(Term::Kind::Const)) arity_.emplace(n.fun().name(), n.arity());
    });
  }

  std::vector<EntityId> entities_;
  std::map<std::string, std::set<Tuple>> facts_;
  std::map<std::string, std::size_t> arity_;
  std::vector<Constraint> constraints_;
};

namespace detail {

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace detail

inline WorldModel load_world(std::string_view source) {
  WorldModel w;
  std::istringstream in{std::string(source)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto sp = line.find_first_of(" \t");
    std::string kw = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));
    try {
      if (kw == "entity") {
        if (!detail::is_identifier(rest)) throw LoadError("bad entity id '" + rest + "'", lineno);
        w.add_entity(rest);
      } else if (kw == "fact") {
        auto open = rest.find('(');
        if (open == std::string::npos || rest.back() != ')') throw LoadError("expected pred(id,...)", lineno);
        std::string pred = trim(rest.substr(0, open));
        if (!detail::is_identifier(pred)) throw LoadError("bad predicate name", lineno);
        Tuple args;
        std::string inner = rest.substr(open + 1, rest.size() - open - 2);
        for (std::size_t from = 0;;) {
          auto comma = inner.find(',', from);
          args.push_back(trim(inner.substr(from, comma == std::string::npos ? std::string::npos : comma - from)));
          if (comma == std::string::npos) break;
          from = comma + 1;
        }
        if (args.empty() || std::any_of(args.begin(), args.end(), [](auto& x) { return x.empty(); }))
          throw LoadError("empty argument in fact", lineno);
        w.add_fact(pred, std::move(args));
      } else if (kw == "constraint") {
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw LoadError("expected 'constraint name : LF'", lineno);
        std::string name = trim(rest.substr(0, colon));
        if (!detail::is_identifier(name)) throw LoadError("bad constraint name", lineno);
        w.add_constraint(name, parse_lf(trim(rest.substr(colon + 1))));
      } else {
        throw LoadError("unknown keyword '" + kw + "'", lineno);
      }
    } catch (const LoadError&) {
      throw;
    } catch (const Error& e) {
      throw LoadError(e.what(), lineno);
    }
  }
  return w;
}

inline WorldModel load_world_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open world file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return load_world(ss.str());
}

inline std::string save_world(const WorldModel& w) {
  std::string out;
  for (const auto& e : w.entities()) out += "entity " + e + "\n";
  for (const auto& [pred, tuples] : w.facts())
    for (const auto& t : tuples) {
      out += "fact " + pred + "(";
      for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + t[i];
      out += ")\n";
    }
  for (const auto& c : w.constraints()) out += "constraint " + c.name + " : " + print_lf(c.formula) + "\n";
  return out;
}

}  // namespace incr
