#pragma once

// Reader for the LF text format:
//
//   term  := ident | ident "(" term {"," term} ")" | "lam(" var "," term ")"
//          | "q(" quant "," var "," term ")" | "pro(" var ")"
//          | quant "(" var "," term "," term ")" | "and(" term "," term ")"
//          | "impl(" term "," term ")" | "true"
//   quant := "forall" | "exists" | "no" | "the"
//
// An identifier is a variable when bound by an enclosing lam/quantifier node,
// by a q-term anywhere in the text, or listed as deliberately free.

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "incr/error.hpp"
#include "incr/term.hpp"

namespace incr {

struct LfParseResult {
  Term term;
  /// Set when a deliberately free variable was used.
  bool has_free_vars = false;
};

namespace detail {

class LfReader {
 public:
  explicit LfReader(std::string_view src) : src_(src) {}

  Term read_all() {
    Term t = term();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) throw SyntaxError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ >= src_.size() || !std::isalpha(static_cast<unsigned char>(src_[pos_])))
      throw SyntaxError("expected identifier", pos_);
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  std::vector<Term> arg_list() {
    std::vector<Term> args{term()};
    while (peek(',')) {
      ++pos_;
      args.push_back(term());
    }
    expect(')');
    return args;
  }

  Term term() {
    Term head = special(ident());
    // Postfix application, e.g. lam(x,f(x))(a) for non-normal terms.
    while (peek('(')) {
      ++pos_;
      head = Term::app(head, arg_list());
    }
    return head;
  }

  Term special(const std::string& id) {
    if (id == "true") return Term::true_();
    if (!peek('(')) return Term::constant(id);
    if (id == "lam") {
      ++pos_;
      std::string v = ident();
      expect(',');
      Term b = term();
      expect(')');
      return Term::lam(v, b);
    }
    if (id == "q") {
      ++pos_;
      std::size_t qpos = pos_;
      auto q = parse_quant(ident());
      if (!q) throw SyntaxError("unknown quantifier", qpos);
      expect(',');
      std::string v = ident();
      expect(',');
      Term r = term();
      expect(')');
      return Term::qterm(*q, v, r);
    }
    if (id == "pro") {
      ++pos_;
      std::string v = ident();
      expect(')');
      return Term::pro(v);
    }
    if (id == "and" || id == "impl") {
      ++pos_;
      Term l = term();
      expect(',');
      Term r = term();
      expect(')');
      return id == "and" ? Term::conj(l, r) : Term::impl(l, r);
    }
    if (auto q = parse_quant(id)) {
      ++pos_;
      std::string v = ident();
      expect(',');
      Term r = term();
      expect(',');
      Term b = term();
      expect(')');
      return Term::scoped(*q, v, r, b);
    }
    ++pos_;
    return Term::app(Term::constant(id), arg_list());
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline Term resolve_vars(const Term& t, std::set<std::string>& scope, const std::set<std::string>& global) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Const:
      return scope.count(t.name()) || global.count(t.name()) ? Term::var(t.name()) : t;
    case K::Lam:
    case K::Scoped:
    case K::QTerm: {
      bool fresh = scope.insert(t.bound_var()).second;
      std::vector<Term> kids;
      for (const auto& k : t.children()) kids.push_back(resolve_vars(k, scope, global));
      if (fresh) scope.erase(t.bound_var());
      return t.with_children(std::move(kids));
    }
    default: {
      if (t.children().empty()) return t;
      std::vector<Term> kids;
      for (const auto& k : t.children()) kids.push_back(resolve_vars(k, scope, global));
      return t.with_children(std::move(kids));
    }
  }
}

}  // namespace detail

/// Parses LF text. `free` lists identifiers that denote deliberately free
/// variables (e.g. context variables awaiting evaluation).
inline LfParseResult parse_lf_ex(std::string_view text, const std::set<std::string>& free = {}) {
  detail::LfReader reader(text);
  Term raw = reader.read_all();
  std::set<std::string> global(free.begin(), free.end());
  for (const auto& v : qterm_vars(raw)) global.insert(v);
  std::set<std::string> scope;
  Term resolved = detail::resolve_vars(raw, scope, global);
  LfParseResult res{resolved, false};
  for (const auto& v : free_vars(resolved))
    if (free.count(v)) res.has_free_vars = true;
  return res;
}

inline Term parse_lf(std::string_view text, const std::set<std::string>& free = {}) {
  return parse_lf_ex(text, free).term;
}

}  // namespace incr
