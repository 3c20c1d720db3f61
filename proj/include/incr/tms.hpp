#pragma once

// Source-tagged proposition store. Each asserted proposition gets a source
// id; derived records carry the union of their premises' sources, so
// retracting a source removes everything concluded from it.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "incr/error.hpp"
#include "incr/ground.hpp"
#include "incr/term.hpp"
#include "incr/typing.hpp"

namespace incr {

using SourceId = std::string;

struct Countermodel {
  std::vector<std::string> domain;
  std::map<std::string, std::string> constants;
  std::vector<std::string> true_atoms;
};

struct EntailmentResult {
  bool entailed = true;
  std::optional<Countermodel> countermodel;
  explicit operator bool() const { return entailed; }
};

inline constexpr std::size_t kDefaultAtomBudget = 20000;

namespace detail {

inline std::vector<std::string> individual_constants(const std::vector<Term>& fs) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (const auto& f : fs)
    visit(f, [&](const Term& n) {
      if (!n.is(Term::Kind::App)) return;
      for (const auto& a : n.args())
        if (a.is(Term::Kind::Const) && seen.insert(a.name()).second) out.push_back(a.name());
    });
  return out;
}

}  // namespace detail

/// Finite-model entailment: `a` entails `b` if no model with 1..k entities
/// makes `a` true and `b` false. Constants may denote any entity.
inline EntailmentResult entails(const Term& a, const Term& b, int domain_k, std::size_t atom_budget = kDefaultAtomBudget) {
  std::vector<std::string> consts = detail::individual_constants({a, b});
  for (int n = 1; n <= domain_k; ++n) {
    std::vector<std::string> domain;
    for (int i = 0; i < n; ++i) domain.push_back("d" + std::to_string(i));
    // Constant interpretations up to renaming of entities: restricted growth
    // sequences.
    std::vector<int> interp(consts.size(), 0);
    for (;;) {
      std::map<std::string, std::string> cmap;
      for (std::size_t i = 0; i < consts.size(); ++i) cmap[consts[i]] = domain[interp[i]];
      PropArena arena;
      AtomPolicy policy{[&](const std::string& c) { return cmap.at(c); },
                        [](const std::string&, const std::vector<std::string>&) -> std::optional<bool> {
                          return std::nullopt;
                        }};
      Grounder gr(arena, domain, policy, atom_budget);
      auto root = arena.conj(gr.holds(a), arena.neg(gr.holds(b)));
      if (auto model = arena.solve(root)) {
        Countermodel cm{domain, cmap, {}};
        for (std::size_t i = 0; i < model->size(); ++i)
          if ((*model)[i]) cm.true_atoms.push_back(arena.atom_name(static_cast<int>(i)));
        return {false, cm};
      }
      // next restricted growth sequence
      std::size_t i = consts.size();
      bool advanced = false;
      while (i-- > 0) {
        int maxprev = -1;
        for (std::size_t j = 0; j < i; ++j) maxprev = std::max(maxprev, interp[j]);
        if (interp[i] < std::min(maxprev + 1, n - 1)) {
          ++interp[i];
          std::fill(interp.begin() + static_cast<long>(i) + 1, interp.end(), 0);
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  }
  return {true, std::nullopt};
}

struct PropRecord {
  std::string id;
  Term prop;
  std::set<SourceId> sources;
  bool derived = false;
};

struct AssertOutcome {
  std::string id;
  /// Whether the previous proposition survived the entailment check.
  bool prev_retained = true;
  std::vector<std::string> retracted;
  std::vector<std::string> derived;
  std::vector<std::string> trace;
  std::optional<Countermodel> countermodel;
};

class PropStore {
 public:
  const std::vector<PropRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }

  const PropRecord* find(const std::string& id) const {
    auto it = std::find_if(records_.begin(), records_.end(), [&](const PropRecord& r) { return r.id == id; });
    return it == records_.end() ? nullptr : &*it;
  }

  /// Stores `prop` under a fresh source. If `prev` is given and not entailed
  /// by `prop`, its sources are retracted first.
  AssertOutcome assert_prop(const Term& prop, const std::optional<PropRecord>& prev, int domain_k,
                            std::size_t atom_budget = kDefaultAtomBudget) {
    infer_type(prop, SemType::t());
    if (auto fv = free_vars(prop); !fv.empty()) throw UnboundVariable("asserted proposition has free variable " + *fv.begin());

    AssertOutcome out;
    if (prev) {
      EntailmentResult r = entails(prop, prev->prop, domain_k, atom_budget);
      if (!r.entailed) {
        out.prev_retained = false;
        out.countermodel = r.countermodel;
        for (const auto& src : prev->sources) {
          if (!has_source(src)) continue;
          for (auto& id : retract(src)) {
            out.trace.push_back("RETRACT " + id + " REASON entailment-failure");
            out.retracted.push_back(id);
          }
        }
      }
    }
    out.id = fresh_id();
    records_.push_back({out.id, prop, {out.id}, false});
    out.trace.push_back("ASSERT " + out.id + " " + print_lf(prop));
    for (auto& id : chain()) {
      out.derived.push_back(id);
      out.trace.push_back("ASSERT " + id + " " + print_lf(find(id)->prop));
    }
    return out;
  }

  /// Removes every record whose sources contain `src`; returns their ids.
  std::vector<std::string> retract(const SourceId& src) {
    if (!has_source(src)) throw UnknownSource("unknown source " + src);
    std::vector<std::string> removed;
    std::vector<PropRecord> kept;
    for (auto& r : records_) {
      if (r.sources.count(src))
        removed.push_back(r.id);
      else
        kept.push_back(std::move(r));
    }
    records_ = std::move(kept);
    return removed;
  }

  bool has_source(const SourceId& src) const {
    return std::any_of(records_.begin(), records_.end(), [&](const PropRecord& r) { return r.sources.count(src) > 0; });
  }

  /// Stores a record under a given source without entailment checks.
  std::string add(const Term& prop, std::set<SourceId> sources, bool derived = false) {
    std::string id = fresh_id();
    if (sources.empty()) sources.insert(id);
    records_.push_back({id, prop, std::move(sources), derived});
    chain();
    return id;
  }

 private:
  std::string fresh_id() { return "u" + std::to_string(++counter_); }

  /// Modus ponens over stored implications, to a fixpoint. Returns ids of
  /// new derived records.
  std::vector<std::string> chain() {
    std::vector<std::string> added;
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<PropRecord> snapshot = records_;
      for (const auto& imp : snapshot) {
        if (!imp.prop.is(Term::Kind::Impl)) continue;
        for (const auto& ante : snapshot) {
          if (!alpha_equal(ante.prop, imp.prop.left())) continue;
          std::set<SourceId> srcs = imp.sources;
          srcs.insert(ante.sources.begin(), ante.sources.end());
          const Term& concl = imp.prop.right();
          bool known = std::any_of(records_.begin(), records_.end(), [&](const PropRecord& r) {
            return alpha_equal(r.prop, concl) && r.sources == srcs;
          });
          if (known) continue;
          std::string id = fresh_id();
          records_.push_back({id, concl, srcs, true});
          added.push_back(id);
          changed = true;
        }
      }
    }
    return added;
  }

  std::vector<PropRecord> records_;
  unsigned counter_ = 0;
};

}  // namespace incr
