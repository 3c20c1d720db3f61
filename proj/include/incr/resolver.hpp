#pragma once

// Pronoun coindexing and referent sets for definite descriptions.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "incr/closure.hpp"
#include "incr/error.hpp"
#include "incr/evaluator.hpp"
#include "incr/parser.hpp"
#include "incr/reduce.hpp"
#include "incr/term.hpp"
#include "incr/world.hpp"

namespace incr {

struct ContextVar {
  VarName var;
  std::optional<std::string> sort;
  bool from_context = true;
};

/// Most recent first.
using ContextVars = std::vector<ContextVar>;

struct CoindexedProp : UnscopedProp {
  /// Pronoun variable and the variable or constant it was replaced by.
  std::vector<std::pair<VarName, std::string>> bindings;
};

struct ResolverOptions {
  /// Pronoun variable to required sort. A context variable whose sort is
  /// known and differs is skipped. Empty: no filtering.
  std::map<VarName, std::string> pronoun_sorts;
};

namespace detail {

inline std::vector<VarName> pronoun_vars(const Term& t) {
  std::vector<VarName> out;
  std::set<VarName> seen;
  visit(t, [&](const Term& n) {
    if (n.is(Term::Kind::Pro) && seen.insert(n.bound_var()).second) out.push_back(n.bound_var());
  });
  return out;
}

/// Individual constants in argument positions, surface order.
inline std::vector<std::string> proper_nouns(const Term& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  visit(t, [&](const Term& n) {
    if (!n.is(Term::Kind::App)) return;
    for (const auto& a : n.args())
      if (a.is(Term::Kind::Const) && seen.insert(a.name()).second) out.push_back(a.name());
  });
  return out;
}

}  // namespace detail

/// Renames quantifier variables of `p` that clash with context variables.
inline UnscopedProp apart_from_context(UnscopedProp p, const ContextVars& ctx) {
  std::set<std::string> taken = all_names(p.body);
  for (const auto& c : ctx) taken.insert(c.var);
  for (const auto& c : ctx) {
    bool clash = false;
    for (const auto& v : qterm_vars(p.body)) clash = clash || v == c.var;
    if (!clash) continue;
    VarName nv = first_unused(SemType::e(), taken);
    taken.insert(nv);
    p.body = map_bottom_up(p.body, [&](const Term& n) {
      if (n.is(Term::Kind::QTerm) && n.bound_var() == c.var) return n.with_name(nv);
      if (n.is(Term::Kind::Var) && n.name() == c.var) return Term::var(nv);
      return n;
    });
    for (auto& v : p.introduced)
      if (v == c.var) v = nv;
  }
  return p;
}

/// Every total assignment of pronouns to candidates: context variables
/// (most recent first), then quantifier variables of the sentence, then
/// proper nouns of the sentence.
inline std::vector<CoindexedProp> coindex_candidates(const UnscopedProp& input, const ContextVars& ctx,
                                                     const ResolverOptions& opts = {}) {
  UnscopedProp p = apart_from_context(input, ctx);
  std::vector<VarName> pros = detail::pronoun_vars(p.body);
  std::vector<CoindexedProp> out;
  out.push_back({p, {}});
  if (pros.empty()) return out;

  std::vector<std::string> sentence_vars = qterm_vars(p.body);
  std::vector<std::string> names = detail::proper_nouns(p.body);

  for (const auto& pv : pros) {
    auto sort = opts.pronoun_sorts.find(pv);
    std::vector<std::pair<std::string, bool>> cands;  // (name, is variable)
    for (const auto& c : ctx) {
      if (sort != opts.pronoun_sorts.end() && c.sort && *c.sort != sort->second) continue;
      cands.emplace_back(c.var, true);
    }
    for (const auto& v : sentence_vars) cands.emplace_back(v, true);
    for (const auto& n : names) cands.emplace_back(n, false);

    std::vector<CoindexedProp> next;
    for (const auto& partial : out)
      for (const auto& [name, is_var] : cands) {
        CoindexedProp c = partial;
        c.body = replace_pronoun(c.body, pv, is_var ? Term::var(name) : Term::constant(name));
        c.bindings.emplace_back(pv, name);
        next.push_back(std::move(c));
      }
    out = std::move(next);
  }
  return out;
}

/// Definite descriptions of a hypothesis, in surface order, after closure.
inline std::vector<Term> definite_descriptions(const Hypothesis& h) {
  std::vector<Term> out;
  auto fill_holes = [](const Term& t) {
    return map_bottom_up(t, [](const Term& n) {
      bool hole = n.is(Term::Kind::App) && n.fun().is(Term::Kind::Const) && n.fun().name() == detail::hole_name();
      return hole ? Term::true_() : n;
    });
  };
  visit(close_existentially(h.sem, h.ty, true).body, [&](const Term& n) {
    if (n.is(Term::Kind::QTerm) && n.quant() == Quant::The)
      out.push_back(Term::qterm(Quant::The, n.bound_var(), fill_holes(n.restrictor())));
  });
  return out;
}

/// Entities satisfying the restrictor of the definite description `marker`
/// ("d0", "d1", ...) as built so far. Computed afresh on every call.
inline std::vector<EntityId> referent_set(const Hypothesis& h, const std::string& marker, const WorldModel& world) {
  std::vector<Term> ds = definite_descriptions(h);
  std::size_t i = 0;
  bool ok = marker.size() > 1 && marker[0] == 'd';
  try {
    if (ok) i = std::stoul(marker.substr(1));
  } catch (const std::exception&) {
    ok = false;
  }
  if (!ok || i >= ds.size()) throw Error("unknown definite description marker '" + marker + "'");
  const Term& d = ds[i];
  Term r = narrow_scope(d.restrictor());
  for (const auto& v : free_vars(r))
    if (v != d.bound_var()) r = Term::scoped(Quant::Exists, v, Term::true_(), r);
  std::vector<EntityId> out;
  for (const auto& e : world.entities())
    if (evaluate(r, world, {{d.bound_var(), e}}, {false})) out.push_back(e);
  return out;
}

}  // namespace incr
