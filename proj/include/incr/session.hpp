#pragma once

// Per-word pipeline: parse, close, coindex, scope, judge, assert. A Session
// is an immutable value; feeding a word returns a new one that remembers its
// predecessor for undo.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "incr/closure.hpp"
#include "incr/error.hpp"
#include "incr/evaluator.hpp"
#include "incr/lexicon.hpp"
#include "incr/parser.hpp"
#include "incr/resolver.hpp"
#include "incr/scoper.hpp"
#include "incr/tms.hpp"
#include "incr/world.hpp"

namespace incr {

/// Memo of plausibility verdicts for one world, keyed by printed formula.
/// Shared by a session and its successors; safe across threads.
class PlausibilityCache {
 public:
  PlausibilityVerdict get(const Term& p, const WorldModel& w) {
    std::string key = print_lf(p);
    {
      std::lock_guard<std::mutex> lk(mu_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    PlausibilityVerdict v = plausible(p, w);
    std::lock_guard<std::mutex> lk(mu_);
    memo_.emplace(std::move(key), v);
    return v;
  }

 private:
  std::mutex mu_;
  std::map<std::string, PlausibilityVerdict> memo_;
};

struct SessionConfig {
  std::shared_ptr<const Lexicon> lexicon;
  std::shared_ptr<const WorldModel> world;
  int domain_k = 3;
  ParserOptions parser;
  std::size_t atom_budget = kDefaultAtomBudget;
  /// Filled by new_session when empty.
  std::shared_ptr<PlausibilityCache> verdicts;
};

struct ReadingReport {
  ScopedReading reading;
  PlausibilityVerdict verdict;
  /// Context after inserting this reading, deepest lift first.
  std::vector<ContextLF> contexts;
  std::string error;
};

struct CoindexReport {
  CoindexedProp prop;
  std::vector<ReadingReport> readings;
};

struct HypReport {
  Hypothesis hyp;
  std::optional<UnscopedProp> closure;
  std::string closure_error;
  std::vector<CoindexReport> coindexings;
  std::vector<std::pair<std::string, std::vector<EntityId>>> referents;
  bool blocked = false;
  std::string blocked_by;
};

class Session {
 public:
  const SessionConfig& config() const { return *config_; }
  const ParserState& parser() const { return parser_; }
  const PropStore& store() const { return db_; }
  const std::vector<ScopeRecord>& preferences() const { return prefs_; }
  const ContextLF& context() const { return ctx_; }
  const std::vector<HypReport>& analysis() const { return analysis_; }
  const std::vector<std::string>& events() const { return events_; }
  const std::vector<std::string>& words() const { return words_; }
  /// Events added by the most recent word.
  std::vector<std::string> last_events() const {
    return {events_.begin() + static_cast<long>(events_before_), events_.end()};
  }
  bool blocked() const { return blocked_; }
  bool has_history() const { return previous_ != nullptr; }
  const Session& previous() const { return *previous_; }

 private:
  friend Session new_session(SessionConfig);
  friend Session feed_word(const Session&, const std::string&);

  std::shared_ptr<const SessionConfig> config_;
  ParserState parser_;
  PropStore db_;
  std::vector<ScopeRecord> prefs_;
  ContextLF ctx_;
  std::optional<PropRecord> prev_;
  std::vector<HypReport> analysis_;
  std::vector<std::string> words_;
  std::vector<std::string> events_;
  std::size_t events_before_ = 0;
  bool blocked_ = false;
  std::shared_ptr<const Session> previous_;
};

namespace detail {

inline ContextVars context_vars(const ContextLF& ctx) {
  ContextVars out;
  for (auto it = ctx.binders.rbegin(); it != ctx.binders.rend(); ++it) out.push_back({*it, std::nullopt, true});
  return out;
}

inline HypReport analyse(const Hypothesis& h, const SessionConfig& cfg, const ContextLF& ctx,
                         const std::vector<ScopeRecord>& prefs) {
  HypReport r{h, std::nullopt, {}, {}, {}, false, {}};
  try {
    r.closure = close_existentially(h);
  } catch (const Error& e) {
    r.closure_error = e.what();
  }
  if (r.closure) {
    for (auto& ci : coindex_candidates(*r.closure, context_vars(ctx))) {
      CoindexReport cr{ci, {}};
      for (auto& sr : enumerate_scopings(ci, prefs)) {
        ReadingReport rr{sr, {}, {}, {}};
        try {
          rr.contexts = update_context(ctx, sr.formula);
          // Without a world there is nothing to judge against.
          if (!cfg.world->entities().empty())
            rr.verdict = cfg.verdicts->get(rr.contexts.front().formula(), *cfg.world);
        } catch (const Error& e) {
          rr.error = e.what();
        }
        cr.readings.push_back(std::move(rr));
      }
      r.coindexings.push_back(std::move(cr));
    }
  }
  try {
    std::size_t n = definite_descriptions(h).size();
    for (std::size_t i = 0; i < n; ++i) {
      std::string marker = "d" + std::to_string(i);
      r.referents.emplace_back(marker, referent_set(h, marker, *cfg.world));
    }
  } catch (const Error&) {
    r.referents.clear();
  }

  bool any = false, all_implausible = true;
  for (const auto& c : r.coindexings)
    for (const auto& rd : c.readings) {
      any = true;
      if (!rd.error.empty() || rd.verdict.plausible) all_implausible = false;
      else if (r.blocked_by.empty()) r.blocked_by = rd.verdict.constraint;
    }
  r.blocked = any && all_implausible;
  if (!r.blocked) r.blocked_by.clear();
  return r;
}

inline std::string describe_constraint(const std::string& name) {
  return name.empty() ? "(facts)" : name;
}

}  // namespace detail

inline Session new_session(SessionConfig cfg) {
  if (!cfg.lexicon) throw Error("session needs a lexicon");
  if (!cfg.world) cfg.world = std::make_shared<const WorldModel>();
  if (!cfg.verdicts) cfg.verdicts = std::make_shared<PlausibilityCache>();
  Session s;
  s.config_ = std::make_shared<const SessionConfig>(std::move(cfg));
  s.parser_ = init_session(s.config_->lexicon, s.config_->parser);
  for (const auto& h : s.parser_.hyps()) s.analysis_.push_back(detail::analyse(h, *s.config_, s.ctx_, s.prefs_));
  return s;
}

/// Feeds one word ("." ends the sentence). Parser errors propagate and
/// leave the session unchanged; a word whose readings are all implausible
/// produces a blocked session.
inline Session feed_word(const Session& s, const std::string& word) {
  if (s.blocked_) throw SessionBlocked("session is blocked; undo first");
  if (is_ignored_punctuation(word)) return s;
  const SessionConfig& cfg = *s.config_;

  Session n = s;
  n.previous_ = std::make_shared<const Session>(s);
  n.events_before_ = n.events_.size();
  n.words_.push_back(word);

  if (word == ".") {
    // Sentence boundary: commit the preferred complete reading to the context.
    const ReadingReport* chosen = nullptr;
    const ReadingReport* fallback = nullptr;
    for (const auto& hr : s.analysis_) {
      if (hr.hyp.ty != SemType::t()) continue;
      for (const auto& c : hr.coindexings)
        for (const auto& rd : c.readings) {
          if (!rd.error.empty() || rd.contexts.empty()) continue;
          if (!fallback) fallback = &rd;
          if (!chosen && rd.verdict.plausible) chosen = &rd;
        }
    }
    if (!chosen) chosen = fallback;
    if (!chosen) throw DeadEnd("sentence is incomplete at '.'");
    n.ctx_ = rename_into_pool(chosen->contexts.front(), s.ctx_.binders.size());
    n.events_.push_back("COMMIT " + print_lf(n.ctx_.formula()));
    n.prefs_.clear();
    n.prev_.reset();
    n.parser_ = restart_sentence(s.parser_);
    n.analysis_.clear();
    for (const auto& h : n.parser_.hyps()) n.analysis_.push_back(detail::analyse(h, cfg, n.ctx_, n.prefs_));
    return n;
  }

  ParserState ps = step_word(s.parser_, word);
  std::vector<HypReport> analysis;
  for (const auto& h : ps.hyps()) analysis.push_back(detail::analyse(h, cfg, s.ctx_, s.prefs_));

  std::vector<bool> keep;
  bool all_blocked = !analysis.empty();
  for (const auto& a : analysis) {
    keep.push_back(!a.blocked);
    all_blocked = all_blocked && a.blocked;
  }
  if (all_blocked) {
    n.parser_ = ps;
    n.analysis_ = std::move(analysis);
    n.blocked_ = true;
    n.events_.push_back("BLOCKED " + detail::describe_constraint(n.analysis_.front().blocked_by));
    return n;
  }
  std::vector<HypReport> kept;
  for (std::size_t i = 0; i < analysis.size(); ++i) {
    if (keep[i]) {
      kept.push_back(std::move(analysis[i]));
    } else {
      n.events_.push_back("BLOCK " + print_lf(analysis[i].hyp.sem) + " BY " +
                          detail::describe_constraint(analysis[i].blocked_by));
    }
  }
  n.parser_ = keep_hypotheses(ps, keep);
  n.analysis_ = std::move(kept);

  // Preferred reading: first plausible reading of the first hypothesis that
  // has one.
  for (const auto& hr : n.analysis_) {
    for (const auto& c : hr.coindexings) {
      std::vector<ScopedReading> latest;
      for (const auto& rd : c.readings) latest.push_back(rd.reading);
      for (const auto& rd : c.readings) {
        if (!rd.error.empty() || !rd.verdict.plausible) continue;
        Term prop = free_vars(rd.reading.formula).empty() ? rd.reading.formula : rd.contexts.front().formula();
        bool repeated = n.prev_ && alpha_equal(n.prev_->prop, prop) && n.db_.find(n.prev_->id);
        if (!repeated) {
          try {
            AssertOutcome out = n.db_.assert_prop(prop, n.prev_, cfg.domain_k, cfg.atom_budget);
            for (auto& line : out.trace) n.events_.push_back(line);
            n.prev_ = *n.db_.find(out.id);
          } catch (const SignatureTooLarge& e) {
            n.events_.push_back(std::string("SKIP-ASSERT ") + e.what());
          }
        }
        std::set<VarName> introduced(c.prop.introduced.begin(), c.prop.introduced.end());
        n.prefs_ = persist_preference(n.prefs_, rd.reading, latest, introduced);
        return n;
      }
    }
  }
  return n;
}

inline Session undo_word(const Session& s) {
  if (!s.has_history()) throw NothingToUndo();
  return s.previous();
}

/// A fresh session fed with `words`.
inline Session replay(SessionConfig cfg, const std::vector<std::string>& words) {
  Session s = new_session(std::move(cfg));
  for (const auto& w : words) s = feed_word(s, w);
  return s;
}

}  // namespace incr
