#pragma once

// Batch and interactive drivers shared by the `incr` tool and its tests.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "incr/report.hpp"
#include "incr/session.hpp"

namespace incr {

struct CliConfig {
  std::string lexicon_path;
  std::string world_path;
  int domain_k = 3;
  bool s_modifiers = false;
  TraceLevel trace = TraceLevel::Min;
  bool json = false;
};

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitDeadEnd = 2, kExitBlocked = 3 };

inline SessionConfig load_session_config(const CliConfig& c) {
  SessionConfig sc;
  sc.lexicon = std::make_shared<const Lexicon>(load_lexicon_file(c.lexicon_path));
  sc.world = c.world_path.empty() ? std::make_shared<const WorldModel>()
                                  : std::make_shared<const WorldModel>(load_world_file(c.world_path));
  sc.domain_k = c.domain_k;
  sc.parser.modifier_prediction = c.s_modifiers;
  return sc;
}

inline std::vector<std::string> split_words(std::istream& in) {
  std::vector<std::string> out;
  std::string w;
  while (in >> w) {
    // A trailing full stop is a separate token.
    if (w.size() > 1 && w.back() == '.') {
      out.push_back(w.substr(0, w.size() - 1));
      out.push_back(".");
    } else {
      out.push_back(w);
    }
  }
  return out;
}

/// Feeds `words` one at a time, printing a section block per word (or the
/// final snapshot as JSON). Returns the process exit code.
inline int run_batch(const SessionConfig& cfg, const std::vector<std::string>& words, TraceLevel level, bool json,
                     std::ostream& out, std::ostream& err) {
  Session s = new_session(cfg);
  int code = kExitOk;
  for (const auto& w : words) {
    try {
      s = feed_word(s, w);
    } catch (const UnknownWord& e) {
      err << "error: " << e.what();
      if (!e.suggestions().empty()) {
        err << " (did you mean:";
        for (const auto& sug : e.suggestions()) err << " " << sug;
        err << ")";
      }
      err << "\n";
      code = kExitDeadEnd;
      break;
    } catch (const DeadEnd& e) {
      err << "error: dead end: " << e.what() << "\n";
      code = kExitDeadEnd;
      break;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      code = kExitUsage;
      break;
    }
    if (!json && !is_ignored_punctuation(w)) out << "== " << w << "\n" << render_sections(s, level);
    if (s.blocked()) {
      err << "blocked: every reading violates a constraint\n";
      code = kExitBlocked;
      break;
    }
  }
  if (json) out << snapshot_text(s) << "\n";
  return code;
}

/// Line-oriented interactive loop. Words advance; `:undo`, `:state`,
/// `:scopings`, `:context` and `:quit` are commands.
inline int run_repl(const SessionConfig& cfg, TraceLevel level, std::istream& in, std::ostream& out,
                    std::ostream& err) {
  Session s = new_session(cfg);
  std::string line;
  out << "> " << std::flush;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        if (tok == ":quit") return kExitOk;
        if (tok == ":undo") {
          s = undo_word(s);
          out << render_sections(s, level);
        } else if (tok == ":state") {
          out << snapshot_text(s) << "\n";
        } else if (tok == ":scopings") {
          for (const auto& h : s.analysis())
            for (const auto& c : h.coindexings)
              for (const auto& rd : c.readings) out << print_lf(rd.reading.formula) << "\n";
        } else if (tok == ":context") {
          out << print_lf(s.context().formula()) << "\n";
        } else if (!tok.empty() && tok[0] == ':') {
          err << "unknown command " << tok << "\n";
        } else {
          std::istringstream ws(tok);
          for (const auto& w : split_words(ws)) {
            s = feed_word(s, w);
            out << "== " << w << "\n" << render_sections(s, level);
          }
        }
      } catch (const UnknownWord& e) {
        err << "error: " << e.what();
        for (const auto& sug : e.suggestions()) err << " " << sug;
        err << "\n";
      } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
      }
    }
    out << "> " << std::flush;
  }
  return kExitOk;
}

}  // namespace incr
