#pragma once

// Canonical session snapshot (JSON) and the text sections printed by the
// command-line front end.
//
// Snapshot shape:
//   words        every word fed so far, "." included
//   blocked      true when the last word left only implausible readings
//   hypotheses   [{type, lf, pending, trace, blocked, blocked_by,
//                  closure: {lf, introduced} | null, closure_error,
//                  coindexings: [{lf, bindings: {pronoun: target},
//                                 readings: [{lf, order, verdict, constraint,
//                                             contexts, error}]}],
//                  referents: {d0: [entity, ...], ...}}]
//   props        [{id, lf, sources, derived}]
//   preferences  [{node, discharged}]
//   context      canonical LF of the discourse so far
//   entities     world entities
//   events       trace lines, oldest first

#include <sstream>
#include <string>

#include <json.hpp>

#include "incr/session.hpp"

namespace incr {

using Json = nlohmann::ordered_json;

inline Json reading_json(const ReadingReport& rd) {
  Json j;
  j["lf"] = print_lf(rd.reading.formula);
  j["order"] = rd.reading.order;
  j["verdict"] = !rd.error.empty() ? "error" : rd.verdict.plausible ? "plausible" : "implausible";
  j["constraint"] = rd.verdict.constraint;
  Json ctxs = Json::array();
  for (const auto& c : rd.contexts) ctxs.push_back(print_lf(c.formula()));
  j["contexts"] = ctxs;
  j["error"] = rd.error;
  return j;
}

inline Json hypothesis_json(const HypReport& h) {
  Json j;
  j["type"] = h.hyp.ty.str();
  j["lf"] = print_lf(h.hyp.sem);
  j["pending"] = h.hyp.pending_str();
  j["trace"] = h.hyp.trace;
  j["blocked"] = h.blocked;
  j["blocked_by"] = h.blocked_by;
  if (h.closure) {
    j["closure"] = {{"lf", print_lf(h.closure->body)}, {"introduced", h.closure->introduced}};
  } else {
    j["closure"] = nullptr;
  }
  j["closure_error"] = h.closure_error;
  Json cis = Json::array();
  for (const auto& c : h.coindexings) {
    Json cj;
    cj["lf"] = print_lf(c.prop.body);
    Json b = Json::object();
    for (const auto& [pro, target] : c.prop.bindings) b[pro] = target;
    cj["bindings"] = b;
    Json rs = Json::array();
    for (const auto& rd : c.readings) rs.push_back(reading_json(rd));
    cj["readings"] = rs;
    cis.push_back(cj);
  }
  j["coindexings"] = cis;
  Json refs = Json::object();
  for (const auto& [marker, ents] : h.referents) refs[marker] = ents;
  j["referents"] = refs;
  return j;
}

inline Json snapshot(const Session& s) {
  Json j;
  j["words"] = s.words();
  j["blocked"] = s.blocked();
  Json hs = Json::array();
  for (const auto& h : s.analysis()) hs.push_back(hypothesis_json(h));
  j["hypotheses"] = hs;
  Json props = Json::array();
  for (const auto& r : s.store().records())
    props.push_back({{"id", r.id}, {"lf", print_lf(r.prop)}, {"sources", r.sources}, {"derived", r.derived}});
  j["props"] = props;
  Json prefs = Json::array();
  for (const auto& p : s.preferences()) prefs.push_back({{"node", p.node}, {"discharged", p.discharged}});
  j["preferences"] = prefs;
  j["context"] = print_lf(s.context().formula());
  j["entities"] = s.config().world->entities();
  j["events"] = s.events();
  return j;
}

inline std::string snapshot_text(const Session& s) { return snapshot(s).dump(2); }

enum class TraceLevel { Min, Full };

/// HYPS / PROPS / READINGS / EVENTS sections for the latest word.
inline std::string render_sections(const Session& s, TraceLevel level) {
  std::ostringstream out;
  out << "HYPS\n";
  for (const auto& h : s.analysis()) {
    out << "  " << h.hyp.ty.str() << "  " << print_lf(h.hyp.sem) << (h.blocked ? "  [blocked]" : "") << "\n";
    if (level == TraceLevel::Full) {
      out << "    pending: " << h.hyp.pending_str() << "\n";
      for (const auto& t : h.hyp.trace) out << "    rule: " << t << "\n";
      if (h.closure) out << "    closure: " << print_lf(h.closure->body) << "\n";
      for (const auto& [marker, ents] : h.referents) {
        out << "    referents " << marker << ":";
        for (const auto& e : ents) out << " " << e;
        out << "\n";
      }
    }
  }
  out << "PROPS\n";
  for (const auto& r : s.store().records()) {
    out << "  " << r.id << " " << print_lf(r.prop) << " {";
    bool first = true;
    for (const auto& src : r.sources) {
      out << (first ? "" : ",") << src;
      first = false;
    }
    out << "}" << (r.derived ? " derived" : "") << "\n";
  }
  out << "READINGS\n";
  for (std::size_t i = 0; i < s.analysis().size(); ++i) {
    const auto& h = s.analysis()[i];
    for (std::size_t c = 0; c < h.coindexings.size(); ++c) {
      if (level == TraceLevel::Min && c > 0) break;
      const auto& ci = h.coindexings[c];
      if (level == TraceLevel::Full || !ci.prop.bindings.empty())
        out << "  h" << i << "." << c << " " << print_lf(ci.prop.body) << "\n";
      for (const auto& rd : ci.readings) {
        std::string verdict = !rd.error.empty() ? "ERROR " + rd.error
                              : rd.verdict.plausible ? "PLAUSIBLE"
                                                     : "IMPLAUSIBLE(" + detail::describe_constraint(rd.verdict.constraint) + ")";
        out << "  h" << i << " " << verdict << " " << print_lf(rd.reading.formula) << "\n";
        for (std::size_t k = 0; k < rd.contexts.size(); ++k) {
          if (level == TraceLevel::Min && k > 0) break;
          out << "    => " << print_lf(rd.contexts[k].formula()) << "\n";
        }
      }
    }
  }
  out << "EVENTS\n";
  for (const auto& e : s.last_events()) out << "  " << e << "\n";
  return out.str();
}

}  // namespace incr
