#pragma once

// Quantifier scoping. A reading is a discharge order over the quantifier
// terms of a proposition, outermost first. A quantifier term nested in the
// restrictor of another is discharged inside that restrictor when it comes
// later in the order, and above it otherwise.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "incr/closure.hpp"
#include "incr/error.hpp"
#include "incr/term.hpp"

namespace incr {

using NodeId = std::string;

struct ScopeRecord {
  NodeId node;
  std::vector<VarName> discharged;  // outermost first
};

struct ScopedReading {
  Term formula;
  std::vector<VarName> order;
};

namespace detail {

/// Quantifier terms in surface (pre-order) order.
inline std::vector<Term> qterms_in_order(const Term& t) {
  std::vector<Term> out;
  visit(t, [&](const Term& n) {
    if (n.is(Term::Kind::QTerm)) out.push_back(n);
  });
  return out;
}

inline Term replace_qterm(const Term& t, const VarName& v) {
  return map_bottom_up(t, [&](const Term& n) {
    return n.is(Term::Kind::QTerm) && n.bound_var() == v ? Term::var(v) : n;
  });
}

inline Term discharge(const Term& t, const std::vector<VarName>& order) {
  std::vector<Term> qs = qterms_in_order(t);
  if (qs.empty()) return t;
  std::set<VarName> present;
  for (const auto& q : qs) present.insert(q.bound_var());
  auto first = std::find_if(order.begin(), order.end(), [&](const VarName& v) { return present.count(v); });
  if (first == order.end()) return t;
  const VarName v = *first;
  Term node = *std::find_if(qs.begin(), qs.end(), [&](const Term& q) { return q.bound_var() == v; });

  std::set<VarName> inner;
  for (const auto& q : qterms_in_order(node.restrictor())) inner.insert(q.bound_var());
  std::vector<VarName> in_order, out_order;
  for (auto it = first + 1; it != order.end(); ++it) (inner.count(*it) ? in_order : out_order).push_back(*it);

  Term restrictor = discharge(node.restrictor(), in_order);
  Term body = discharge(replace_qterm(t, v), out_order);
  return Term::scoped(node.quant(), v, restrictor, body);
}

/// Free occurrences of plain variables in each quantifier's restrictor.
inline bool respects_free_variables(const std::vector<Term>& qs, const std::vector<VarName>& order) {
  std::map<VarName, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (const auto& q2 : qs) {
    std::set<VarName> fv;
    std::set<VarName> bound;
    detail::free_vars_rec(q2.restrictor(), bound, fv);
    for (const auto& q1 : qs)
      if (q1.bound_var() != q2.bound_var() && fv.count(q1.bound_var()) &&
          pos[q1.bound_var()] > pos[q2.bound_var()])
        return false;
  }
  return true;
}

inline bool respects_preferences(const std::vector<VarName>& order, const std::vector<ScopeRecord>& prefs) {
  std::set<VarName> present(order.begin(), order.end());
  for (const auto& rec : prefs) {
    std::vector<VarName> want;
    for (const auto& v : rec.discharged)
      if (present.count(v)) want.push_back(v);
    std::set<VarName> wanted(want.begin(), want.end());
    std::vector<VarName> got;
    for (const auto& v : order)
      if (wanted.count(v)) got.push_back(v);
    if (got != want) return false;
  }
  return true;
}

}  // namespace detail

/// All readings consistent with the free-variable constraint and `prefs`,
/// leftmost-widest first. Duplicate formulas are kept once.
inline std::vector<ScopedReading> enumerate_scopings(const Term& body, const std::vector<ScopeRecord>& prefs = {}) {
  std::vector<Term> qs = detail::qterms_in_order(body);
  std::vector<std::size_t> idx(qs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

  std::vector<ScopedReading> out;
  std::set<std::string> seen;
  do {
    std::vector<VarName> order;
    for (auto i : idx) order.push_back(qs[i].bound_var());
    if (!detail::respects_free_variables(qs, order) || !detail::respects_preferences(order, prefs)) continue;
    Term f = detail::discharge(body, order);
    if (seen.insert(print_lf(f)).second) out.push_back({f, order});
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

inline std::vector<ScopedReading> enumerate_scopings(const UnscopedProp& p, const std::vector<ScopeRecord>& prefs = {}) {
  return enumerate_scopings(p.body, prefs);
}

/// Records the relative order of `chosen` at `node`, leaving out `exclude`
/// (closure variables, which are renamed from one prefix to the next).
/// `latest` is the enumeration `chosen` was picked from.
inline std::vector<ScopeRecord> persist_preference(std::vector<ScopeRecord> prefs, const ScopedReading& chosen,
                                                   const std::vector<ScopedReading>& latest,
                                                   const std::set<VarName>& exclude = {},
                                                   const NodeId& node = "s0") {
  bool found = std::any_of(latest.begin(), latest.end(), [&](const ScopedReading& r) {
    return r.order == chosen.order && r.formula == chosen.formula;
  });
  if (!found) throw InconsistentPreference("reading is not from the latest enumeration");

  std::vector<VarName> order;
  for (const auto& v : chosen.order)
    if (!exclude.count(v)) order.push_back(v);

  auto rec = std::find_if(prefs.begin(), prefs.end(), [&](const ScopeRecord& r) { return r.node == node; });
  if (rec == prefs.end()) {
    prefs.push_back({node, order});
    return prefs;
  }
  // Keep recorded variables that the chosen reading does not mention, each
  // right after its recorded predecessor.
  std::vector<VarName> merged = order;
  for (std::size_t i = 0; i < rec->discharged.size(); ++i) {
    const VarName& v = rec->discharged[i];
    if (std::find(merged.begin(), merged.end(), v) != merged.end()) continue;
    auto at = merged.begin();
    if (i > 0) {
      auto prev = std::find(merged.begin(), merged.end(), rec->discharged[i - 1]);
      at = prev == merged.end() ? merged.end() : prev + 1;
    }
    merged.insert(at, v);
  }
  rec->discharged = merged;
  return prefs;
}

}  // namespace incr
