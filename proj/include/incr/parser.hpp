#pragma once

// Word-by-word parser. A parser state is a finite set of hypotheses, each a
// lambda term of type T1 -> ... -> Tk -> t standing for every partial tree
// of the prefix. The pending categories record what each abstraction still
// expects from the right, outermost first.
//
// Combination schemas for a hypothesis S expecting X, and a word w : C:
//
//   apply     C = X                      S(w)
//   compose   C = X/Y1../Yn              lam y1..yn. S(w y1..yn)
//   predict   X = s, C = A/Y1../Yn       lam y1..yn. lam V. S(V(w y1..yn))   V : A\s
//
// Left-recursive positions get one predicted modifier slot:
//
//   noun slot     apply into n, when the lexicon has n\n modifiers:
//                 lam M. S(M(w))
//   sentence slot predict into an embedded s: lam y.. lam V. lam Q. Q(S(V(w y..)))
//   VP slot       (modifier prediction option) apply/compose into np\s:
//                 lam y.. lam R. S(R(w y..))

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "incr/category.hpp"
#include "incr/error.hpp"
#include "incr/lexicon.hpp"
#include "incr/reduce.hpp"
#include "incr/sem_type.hpp"
#include "incr/term.hpp"
#include "incr/typing.hpp"

namespace incr {

struct ParserOptions {
  /// Predict VP-modifier slots (off by default).
  bool modifier_prediction = false;
};

struct Hypothesis {
  Term sem;
  SemType ty;
  std::vector<Category> pending;
  std::vector<std::string> trace;

  std::string pending_str() const {
    std::string s;
    for (const auto& c : pending) s += (s.empty() ? "" : " ") + c.str();
    return s;
  }
};

class ParserState {
 public:
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<Hypothesis>& hyps() const { return hyps_; }
  const std::shared_ptr<const Lexicon>& lexicon() const { return lexicon_; }
  const ParserOptions& options() const { return options_; }
  bool has_history() const { return previous_ != nullptr; }
  const ParserState& previous() const { return *previous_; }
  std::size_t history_size() const {
    std::size_t n = 0;
    for (auto p = previous_; p; p = p->previous_) ++n;
    return n;
  }

 private:
  friend ParserState init_session(std::shared_ptr<const Lexicon>, ParserOptions);
  friend ParserState step_word(const ParserState&, const std::string&);
  friend ParserState restart_sentence(const ParserState&);
  friend ParserState keep_hypotheses(const ParserState&, const std::vector<bool>&);

  std::shared_ptr<const Lexicon> lexicon_;
  ParserOptions options_;
  std::vector<std::string> words_;
  std::vector<Hypothesis> hyps_;
  std::shared_ptr<const ParserState> previous_;
};

namespace detail {

inline Category vp() { return Category::bwd(Category::atom("s"), Category::atom("np")); }
inline Category modifier_of(const Category& x) { return Category::bwd(x, x); }

inline SemType state_type(const std::vector<Category>& pending) {
  std::vector<SemType> args;
  for (const auto& c : pending) args.push_back(c.sem_type());
  return SemType::chain(args, SemType::t());
}

inline void order_hypotheses(std::vector<Hypothesis>& hyps) {
  std::stable_sort(hyps.begin(), hyps.end(), [](const Hypothesis& a, const Hypothesis& b) {
    if (a.ty.size() != b.ty.size()) return a.ty.size() < b.ty.size();
    std::string pa = print_lf(a.sem), pb = print_lf(b.sem);
    if (pa != pb) return pa < pb;
    return a.pending_str() < b.pending_str();
  });
}

class Combiner {
 public:
  Combiner(const Lexicon& lex, const ParserOptions& opts, bool sentence_start)
      : lex_(lex), opts_(opts), sentence_start_(sentence_start) {}

  void combine(const Hypothesis& h, const LexEntry& entry, std::vector<Hypothesis>& out) const {
    if (h.pending.empty()) return;
    const Category& x = h.pending.front();
    std::vector<Category> rest(h.pending.begin() + 1, h.pending.end());
    Term w = freshen(entry.sem);
    Category head = entry.cat;
    std::vector<Category> fargs = entry.cat.forward_args(&head);
    const std::string tag = entry.word + ":" + entry.cat.str();

    // apply
    if (entry.cat == x) {
      emit(h, Term::app(h.sem, {w}), rest, "apply " + tag, out);
      if (x.is_atom("n") && lex_.has_modifiers_of(x)) {
        VarName m = fresh_placeholder();
        emit(h, Term::lam(m, Term::app(h.sem, {Term::app(Term::var(m), {w})})),
             concat({modifier_of(x)}, rest), "apply+noun-slot " + tag, out);
      }
      if (opts_.modifier_prediction && x == vp()) {
        VarName r = fresh_placeholder();
        emit(h, Term::lam(r, Term::app(h.sem, {Term::app(Term::var(r), {w})})),
             concat({modifier_of(vp())}, rest), "apply+vp-slot " + tag, out);
      }
    }

    // compose
    if (!fargs.empty() && head == x) {
      std::vector<VarName> ys;
      std::vector<Term> yterms;
      for (std::size_t i = 0; i < fargs.size(); ++i) {
        ys.push_back(fresh_placeholder());
        yterms.push_back(Term::var(ys.back()));
      }
      Term filled = Term::app(w, yterms);
      emit(h, abstract(ys, Term::app(h.sem, {filled})), concat(fargs, rest), "compose " + tag, out);
      if (opts_.modifier_prediction && x == vp()) {
        VarName r = fresh_placeholder();
        Term body = Term::lam(r, Term::app(h.sem, {Term::app(Term::var(r), {filled})}));
        emit(h, abstract(ys, body), concat(concat(fargs, {modifier_of(vp())}), rest),
             "compose+vp-slot " + tag, out);
      }
    }

    // predict
    if (x.is_atom("s") && head.is_atom() && !head.is_atom("s")) {
      std::vector<VarName> ys;
      std::vector<Term> yterms;
      for (std::size_t i = 0; i < fargs.size(); ++i) {
        ys.push_back(fresh_placeholder());
        yterms.push_back(Term::var(ys.back()));
      }
      Term filled = Term::app(w, yterms);
      VarName v = fresh_placeholder();
      Category need = Category::bwd(Category::atom("s"), head);
      Term inner = Term::app(h.sem, {Term::app(Term::var(v), {filled})});
      emit(h, abstract(ys, Term::lam(v, inner)), concat(concat(fargs, {need}), rest), "predict " + tag, out);

      // The main sentence gets its modifier slot once, after everything else
      // it still expects.
      bool has_slot = std::find(h.pending.begin(), h.pending.end(), modifier_of(x)) != h.pending.end();
      bool embeds_s = std::find(rest.begin(), rest.end(), x) != rest.end();
      if (!sentence_start_ && !has_slot && !embeds_s) {
        std::vector<VarName> rs;
        std::vector<Term> rterms{Term::app(Term::var(v), {filled})};
        for (std::size_t i = 0; i < rest.size(); ++i) {
          rs.push_back(fresh_placeholder());
          rterms.push_back(Term::var(rs.back()));
        }
        VarName q = fresh_placeholder();
        Term full = Term::lam(q, Term::app(Term::var(q), {Term::app(h.sem, rterms)}));
        Term wrapped = Term::lam(v, abstract(rs, full));
        emit(h, abstract(ys, wrapped), concat(concat(concat(fargs, {need}), rest), {modifier_of(x)}),
             "predict+sentence-slot " + tag, out);
      }
    }
  }

 private:
  static std::vector<Category> concat(std::vector<Category> a, const std::vector<Category>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }
  static Term abstract(const std::vector<VarName>& vs, Term body) {
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = Term::lam(*it, body);
    return body;
  }

  void emit(const Hypothesis& from, const Term& raw, std::vector<Category> pending, std::string rule,
            std::vector<Hypothesis>& out) const {
    SemType ty = state_type(pending);
    try {
      infer_type(raw, ty);
    } catch (const TypeError&) {
      return;
    }
    Term sem = assign_names(beta_reduce_raw(raw), {}, ty);
    Hypothesis h{sem, ty, std::move(pending), from.trace};
    h.trace.push_back(std::move(rule));
    out.push_back(std::move(h));
  }

  const Lexicon& lex_;
  const ParserOptions& opts_;
  bool sentence_start_;
};

}  // namespace detail

inline Hypothesis initial_hypothesis() {
  return {parse_lf("lam(p,p)"), SemType::fn(SemType::t(), SemType::t()), {Category::atom("s")}, {}};
}

/// Empty prefix: the identity on propositions, awaiting a sentence.
inline ParserState init_session(std::shared_ptr<const Lexicon> lex, ParserOptions opts = {}) {
  ParserState st;
  st.lexicon_ = std::move(lex);
  st.options_ = opts;
  st.hyps_ = {initial_hypothesis()};
  return st;
}

inline bool is_ignored_punctuation(const std::string& word) {
  return word == "," || word == ";" || word == "!" || word == "?" || word == ":";
}

/// Absorbs one word. Throws UnknownWord, or DeadEnd when no hypothesis
/// survives.
inline ParserState step_word(const ParserState& st, const std::string& word) {
  if (word.empty()) throw Error("empty word");
  if (is_ignored_punctuation(word)) return st;
  const Lexicon& lex = *st.lexicon_;
  std::vector<LexEntry> entries = lex.lookup(word);
  detail::Combiner comb(lex, st.options_, st.words_.empty());
  std::vector<Hypothesis> produced;
  for (const auto& h : st.hyps_)
    for (const auto& e : entries) comb.combine(h, e, produced);

  std::vector<Hypothesis> packed;
  std::set<std::string> seen;
  for (auto& h : produced) {
    std::string key = print_lf(alpha_canonical(h.sem)) + "|" + h.ty.str() + "|" + h.pending_str();
    if (seen.insert(key).second) packed.push_back(std::move(h));
  }
  if (packed.empty()) throw DeadEnd("no analysis continues with '" + word + "'");
  detail::order_hypotheses(packed);

  ParserState next;
  next.lexicon_ = st.lexicon_;
  next.options_ = st.options_;
  next.words_ = st.words_;
  next.words_.push_back(word);
  next.hyps_ = std::move(packed);
  next.previous_ = std::make_shared<const ParserState>(st);
  return next;
}

/// Starts a new sentence after a boundary, keeping undo history.
inline ParserState restart_sentence(const ParserState& st) {
  ParserState next;
  next.lexicon_ = st.lexicon_;
  next.options_ = st.options_;
  next.hyps_ = {initial_hypothesis()};
  next.previous_ = std::make_shared<const ParserState>(st);
  return next;
}

/// The same state with only the flagged hypotheses; history is shared.
inline ParserState keep_hypotheses(const ParserState& st, const std::vector<bool>& keep) {
  ParserState next = st;
  next.hyps_.clear();
  for (std::size_t i = 0; i < st.hyps_.size(); ++i)
    if (i < keep.size() && keep[i]) next.hyps_.push_back(st.hyps_[i]);
  return next;
}

inline ParserState undo_word(const ParserState& st) {
  if (!st.has_history()) throw NothingToUndo();
  return st.previous();
}

/// (type, term) pairs, ordered by type size then canonical text.
inline std::vector<std::pair<SemType, Term>> hypotheses(const ParserState& st) {
  std::vector<std::pair<SemType, Term>> out;
  for (const auto& h : st.hyps()) out.emplace_back(h.ty, h.sem);
  return out;
}

}  // namespace incr
