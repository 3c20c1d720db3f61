#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "incr/error.hpp"
#include "incr/parser.hpp"
#include "incr/reduce.hpp"
#include "incr/term.hpp"

namespace incr {

/// A proposition with quantifier terms and pronouns still in situ.
struct UnscopedProp {
  Term body;
  /// Variables introduced by existential closure.
  std::vector<VarName> introduced;
};

/// Drops `true` conjuncts everywhere.
inline Term simplify_true(const Term& t) {
  return map_bottom_up(t, [](const Term& n) {
    if (n.is(Term::Kind::And)) return conj_simplified(n.left(), n.right());
    return n;
  });
}

namespace detail {

inline const std::string& hole_name() {
  static const std::string h = "_hole";
  return h;
}

/// The trivial value used to saturate a functional argument of type `ty`.
/// With `keep_holes`, predicates become an opaque atom instead of `true`, so
/// quantifier terms passed to them survive.
inline Term trivial_value(const SemType& ty, bool keep_holes = false) {
  if (ty.kind() == SemType::Kind::T) return Term::true_();
  if (ty.is_fn() && ty.arg() == ty.result()) {
    VarName v = fresh_placeholder();
    return Term::lam(v, Term::var(v));
  }
  if (ty.is_fn() && ty.final_result().kind() == SemType::Kind::T) {
    std::vector<VarName> vs;
    std::vector<Term> refs;
    for (std::size_t i = 0; i < ty.args().size(); ++i) {
      vs.push_back(fresh_placeholder());
      refs.push_back(Term::var(vs.back()));
    }
    Term body = keep_holes ? Term::app(Term::constant(hole_name()), refs) : Term::true_();
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = Term::lam(*it, body);
    return body;
  }
  throw UnsupportedArgument("cannot close over an argument of type " + ty.str());
}

}  // namespace detail

/// Saturates a hypothesis: entity arguments become empty existential
/// quantifier terms, functional arguments are instantiated trivially.
inline UnscopedProp close_existentially(const Term& sem, const SemType& ty, bool keep_holes = false) {
  std::vector<SemType> arg_types = ty.args();
  std::vector<Term> values;
  std::vector<VarName> introduced;
  std::vector<VarName> kept;  // lambda names reused for closure variables
  Term cur = sem;
  for (const auto& at : arg_types) {
    std::string lam_name = cur.is(Term::Kind::Lam) ? cur.bound_var() : std::string();
    if (cur.is(Term::Kind::Lam)) cur = cur.body();
    if (at.kind() == SemType::Kind::E) {
      VarName v = fresh_placeholder();
      values.push_back(Term::qterm(Quant::Exists, v, Term::true_()));
      introduced.push_back(v);
      kept.push_back(lam_name);
    } else {
      values.push_back(detail::trivial_value(at, keep_holes));
    }
  }
  Term raw = beta_reduce_raw(Term::app(sem, values));
  // Closure variables keep their lambda's name unless that name is in use
  // in the saturated body.
  std::set<std::string> used;
  for (const auto& n : all_names(raw))
    if (!is_placeholder(n)) used.insert(n);
  for (std::size_t i = 0; i < introduced.size(); ++i) {
    const std::string& want = kept[i];
    if (!want.empty() && !is_placeholder(want) && !used.count(want)) {
      raw = map_bottom_up(raw, [&](const Term& n) {
        if (n.name() != introduced[i]) return n;
        return n.is(Term::Kind::Var) ? Term::var(want) : n.with_name(want);
      });
      used.insert(want);
      introduced[i] = want;
    }
  }
  Term named = assign_names(raw);
  if (named != raw) {
    // Recover the names chosen for the remaining placeholders.
    std::vector<VarName> qv = qterm_vars(named);
    std::vector<VarName> qraw = qterm_vars(raw);
    for (auto& v : introduced)
      for (std::size_t j = 0; j < qraw.size() && j < qv.size(); ++j)
        if (qraw[j] == v) v = qv[j];
  }
  Term body = simplify_true(named);
  // A trivially instantiated function may discard an introduced variable.
  std::vector<VarName> present = qterm_vars(body);
  std::vector<VarName> surviving;
  for (const auto& v : introduced)
    if (std::find(present.begin(), present.end(), v) != present.end()) surviving.push_back(v);
  return {body, surviving};
}

inline UnscopedProp close_existentially(const Hypothesis& h) { return close_existentially(h.sem, h.ty); }

}  // namespace incr
