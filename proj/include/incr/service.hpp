#pragma once

// Session-per-client JSON service. Transport-free: `handle` maps a method,
// path and body to a status and JSON body; tools/incr_server.cpp binds it to
// HTTP.
//
//   POST   /sessions              {"lexicon": name, "world": name,
//                                  "s_modifiers": bool, "domain_k": int}
//   POST   /sessions/{id}/words   {"word": w}
//   POST   /sessions/{id}/undo
//   GET    /sessions/{id}
//   DELETE /sessions/{id}
//
// Success bodies are {"id": id, "snapshot": {...}}; errors are
// {"error": message} plus "suggestions" for unknown words.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "incr/report.hpp"
#include "incr/session.hpp"

namespace incr {

struct ServiceConfig {
  std::string lexicon_dir = "data/lexicon";
  std::string world_dir = "data/worlds";
  std::chrono::seconds idle_ttl{1800};
  int domain_k = 3;
};

struct Response {
  int status = 200;
  std::string body;
};

class Service {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Service(ServiceConfig cfg) : cfg_(std::move(cfg)), rng_(std::random_device{}()) {}

  Response handle(const std::string& method, const std::string& path, const std::string& body) {
    expire_idle();
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < path.size();) {
      std::size_t j = path.find('/', i);
      if (j == std::string::npos) j = path.size();
      if (j > i) parts.push_back(path.substr(i, j - i));
      i = j + 1;
    }
    if (parts.empty() || parts[0] != "sessions") return error(404, "no such route");
    try {
      if (parts.size() == 1) {
        if (method != "POST") return error(405, "method not allowed");
        return create(body);
      }
      const std::string& id = parts[1];
      if (parts.size() == 2) {
        if (method == "GET") return with_session(id, [&](Handle& h) { return ok(id, h); });
        if (method == "DELETE") return remove(id);
        return error(405, "method not allowed");
      }
      if (parts.size() == 3 && method == "POST" && parts[2] == "words") return feed(id, body);
      if (parts.size() == 3 && method == "POST" && parts[2] == "undo") return undo(id);
      return error(404, "no such route");
    } catch (const nlohmann::json::exception& e) {
      return error(400, std::string("bad request body: ") + e.what());
    }
  }

  std::size_t session_count() {
    std::lock_guard<std::mutex> lk(table_mu_);
    return sessions_.size();
  }

  /// Moves every session's idle clock back by `d` (for expiry tests).
  void age_sessions(std::chrono::seconds d) {
    std::lock_guard<std::mutex> lk(table_mu_);
    for (auto& [_, h] : sessions_) {
      std::lock_guard<std::mutex> hl(h->mu);
      h->last_used -= d;
    }
  }

 private:
  struct Handle {
    std::mutex mu;
    Session session;
    bool dead = false;
    Clock::time_point created;
    Clock::time_point last_used;
  };

  static Response error(int status, const std::string& msg, const Json& extra = Json::object()) {
    Json j = extra;
    j["error"] = msg;
    return {status, j.dump()};
  }

  static Response ok(const std::string& id, const Handle& h, int status = 200) {
    Json j;
    j["id"] = id;
    j["dead_end"] = h.dead;
    j["snapshot"] = snapshot(h.session);
    return {status, j.dump()};
  }

  static bool valid_name(const std::string& n) {
    if (n.empty() || n.size() > 64) return false;
    for (char c : n)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
  }

  std::shared_ptr<const Lexicon> lexicon(const std::string& name) {
    std::lock_guard<std::mutex> lk(cache_mu_);
    if (auto it = lexicons_.find(name); it != lexicons_.end()) return it->second;
    auto lex = std::make_shared<const Lexicon>(load_lexicon_file(cfg_.lexicon_dir + "/" + name + ".lex"));
    lexicons_[name] = lex;
    return lex;
  }

  std::shared_ptr<const WorldModel> world(const std::string& name) {
    std::lock_guard<std::mutex> lk(cache_mu_);
    if (auto it = worlds_.find(name); it != worlds_.end()) return it->second;
    auto w = std::make_shared<const WorldModel>(load_world_file(cfg_.world_dir + "/" + name + ".world"));
    worlds_[name] = w;
    return w;
  }

  std::string fresh_id() {
    static const char* hex = "0123456789abcdef";
    std::string id;
    std::uint64_t r = rng_();
    for (int i = 0; i < 16; ++i, r >>= 4) id += hex[r & 15];
    return id;
  }

  Response create(const std::string& body) {
    Json req = body.empty() ? Json::object() : Json::parse(body);
    std::string lex_name = req.value("lexicon", std::string("demo"));
    std::string world_name = req.value("world", std::string("demo"));
    if (!valid_name(lex_name) || !valid_name(world_name)) return error(400, "invalid lexicon or world name");
    SessionConfig sc;
    try {
      sc.lexicon = lexicon(lex_name);
      sc.world = world(world_name);
      std::lock_guard<std::mutex> lk(cache_mu_);
      auto& v = verdicts_[world_name];
      if (!v) v = std::make_shared<PlausibilityCache>();
      sc.verdicts = v;
    } catch (const Error& e) {
      return error(400, e.what());
    }
    sc.domain_k = req.value("domain_k", cfg_.domain_k);
    sc.parser.modifier_prediction = req.value("s_modifiers", false);
    auto h = std::make_shared<Handle>();
    h->session = new_session(sc);
    h->created = h->last_used = Clock::now();
    std::string id;
    {
      std::lock_guard<std::mutex> lk(table_mu_);
      do {
        id = fresh_id();
      } while (sessions_.count(id));
      sessions_[id] = h;
    }
    std::lock_guard<std::mutex> hl(h->mu);
    return ok(id, *h, 201);
  }

  template <typename F>
  Response with_session(const std::string& id, F&& f) {
    std::shared_ptr<Handle> h;
    {
      std::lock_guard<std::mutex> lk(table_mu_);
      auto it = sessions_.find(id);
      if (it == sessions_.end()) return error(404, "unknown session " + id);
      h = it->second;
    }
    std::lock_guard<std::mutex> hl(h->mu);
    h->last_used = Clock::now();
    return f(*h);
  }

  Response feed(const std::string& id, const std::string& body) {
    Json req = Json::parse(body.empty() ? "{}" : body);
    if (!req.contains("word") || !req["word"].is_string()) return error(400, "expected {\"word\": string}");
    std::string word = req["word"].get<std::string>();
    return with_session(id, [&](Handle& h) {
      if (h.dead) return error(409, "session is at a dead end; undo first");
      if (h.session.blocked()) return error(409, "session is blocked; undo first");
      try {
        h.session = feed_word(h.session, word);
      } catch (const UnknownWord& e) {
        return error(422, e.what(), {{"suggestions", e.suggestions()}});
      } catch (const DeadEnd& e) {
        h.dead = true;
        return error(409, e.what());
      } catch (const Error& e) {
        return error(400, e.what());
      }
      return ok(id, h);
    });
  }

  Response undo(const std::string& id) {
    return with_session(id, [&](Handle& h) {
      if (h.dead) {
        h.dead = false;
        return ok(id, h);
      }
      if (!h.session.has_history()) return error(409, "nothing to undo");
      h.session = undo_word(h.session);
      return ok(id, h);
    });
  }

  Response remove(const std::string& id) {
    std::lock_guard<std::mutex> lk(table_mu_);
    if (!sessions_.erase(id)) return error(404, "unknown session " + id);
    return {204, ""};
  }

  void expire_idle() {
    std::lock_guard<std::mutex> lk(table_mu_);
    auto now = Clock::now();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      std::unique_lock<std::mutex> hl(it->second->mu, std::try_to_lock);
      if (hl.owns_lock() && now - it->second->last_used > cfg_.idle_ttl) {
        hl.unlock();
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }

  ServiceConfig cfg_;
  std::mutex table_mu_;
  std::map<std::string, std::shared_ptr<Handle>> sessions_;
  std::mutex cache_mu_;
  std::map<std::string, std::shared_ptr<const Lexicon>> lexicons_;
  std::map<std::string, std::shared_ptr<const WorldModel>> worlds_;
  std::map<std::string, std::shared_ptr<PlausibilityCache>> verdicts_;
  std::mt19937_64 rng_;
};

}  // namespace incr
