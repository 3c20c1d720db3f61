#include <gtest/gtest.h>

#include <thread>

#include "incr/cli.hpp"
#include "incr/http.hpp"
#include "incr/service.hpp"
#include "support.hpp"

using namespace incr;

namespace {

ServiceConfig service_config() {
  ServiceConfig c;
  c.lexicon_dir = testing_support::data_path("lexicon");
  c.world_dir = testing_support::data_path("worlds");
  return c;
}

std::string create(Service& svc, const std::string& world = "demo") {
  Response r = svc.handle("POST", "/sessions", Json{{"world", world}}.dump());
  EXPECT_EQ(r.status, 201) << r.body;
  return Json::parse(r.body)["id"].get<std::string>();
}

Response feed(Service& svc, const std::string& id, const std::string& word) {
  return svc.handle("POST", "/sessions/" + id + "/words", Json{{"word", word}}.dump());
}

Json snapshot_of(const Response& r) { return Json::parse(r.body)["snapshot"]; }

}  // namespace

TEST(Service, CreateFeedGetUndoDelete) {
  Service svc(service_config());
  std::string id = create(svc);
  EXPECT_EQ(svc.session_count(), 1u);
  Response r = feed(svc, id, "mary");
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(snapshot_of(r)["words"], Json::array({"mary"}));

  Response g = svc.handle("GET", "/sessions/" + id, "");
  EXPECT_EQ(g.status, 200);
  EXPECT_EQ(snapshot_of(g), snapshot_of(r));

  Response u = svc.handle("POST", "/sessions/" + id + "/undo", "");
  EXPECT_EQ(u.status, 200);
  EXPECT_TRUE(snapshot_of(u)["words"].empty());
  EXPECT_EQ(svc.handle("POST", "/sessions/" + id + "/undo", "").status, 409);

  EXPECT_EQ(svc.handle("DELETE", "/sessions/" + id, "").status, 204);
  EXPECT_EQ(svc.handle("GET", "/sessions/" + id, "").status, 404);
  EXPECT_EQ(svc.handle("DELETE", "/sessions/" + id, "").status, 404);
  EXPECT_EQ(svc.session_count(), 0u);
}

TEST(Service, WorkedExampleReadings) {
  Service svc(service_config());
  std::string id = create(svc, "london");
  Response r;
  for (const auto& w : testing_support::words("london has a tower . every parent shows it")) {
    r = feed(svc, id, w);
    ASSERT_EQ(r.status, 200) << w << ": " << r.body;
  }
  Json h = snapshot_of(r)["hypotheses"][0];
  Json readings = h["coindexings"][0]["readings"];
  EXPECT_EQ(readings[0]["lf"], "forall(x,parent(x),exists(z,true,show(x,w,z)))");
  EXPECT_EQ(readings[1]["lf"], "exists(z,true,forall(x,parent(x),show(x,w,z)))");
  EXPECT_EQ(readings[0]["contexts"][0],
            "exists(w,true,and(and(tower(w),has(london,w)),forall(x,parent(x),exists(z,true,show(x,w,z)))))");
  EXPECT_EQ(readings[1]["contexts"][0],
            "exists(w,true,exists(z,true,and(and(tower(w),has(london,w)),forall(x,parent(x),show(x,w,z)))))");
}

TEST(Service, ErrorStatuses) {
  Service svc(service_config());
  EXPECT_EQ(svc.handle("GET", "/sessions/nope", "").status, 404);
  EXPECT_EQ(svc.handle("POST", "/sessions/nope/words", R"({"word":"mary"})").status, 404);
  EXPECT_EQ(svc.handle("GET", "/other", "").status, 404);
  EXPECT_EQ(svc.handle("GET", "/sessions", "").status, 405);
  EXPECT_EQ(svc.handle("POST", "/sessions", "{not json").status, 400);
  EXPECT_EQ(svc.handle("POST", "/sessions", R"({"world":"../etc"})").status, 400);
  EXPECT_EQ(svc.handle("POST", "/sessions", R"({"world":"missing"})").status, 400);

  std::string id = create(svc);
  EXPECT_EQ(svc.handle("PUT", "/sessions/" + id, "").status, 405);
  EXPECT_EQ(svc.handle("POST", "/sessions/" + id + "/words", R"({"w":1})").status, 400);
  EXPECT_EQ(svc.handle("POST", "/sessions/" + id + "/other", "").status, 404);

  Response unknown = feed(svc, id, "mari");
  EXPECT_EQ(unknown.status, 422);
  Json j = Json::parse(unknown.body);
  ASSERT_TRUE(j["suggestions"].is_array());
  EXPECT_NE(std::find(j["suggestions"].begin(), j["suggestions"].end(), "mary"), j["suggestions"].end());
}

TEST(Service, DeadEndIsSticky) {
  Service svc(service_config());
  std::string id = create(svc);
  ASSERT_EQ(feed(svc, id, "mary").status, 200);
  EXPECT_EQ(feed(svc, id, "mary").status, 409);
  Response again = feed(svc, id, "sleeps");
  EXPECT_EQ(again.status, 409);
  Response u = svc.handle("POST", "/sessions/" + id + "/undo", "");
  EXPECT_EQ(u.status, 200);
  EXPECT_EQ(Json::parse(u.body)["dead_end"], false);
  EXPECT_EQ(snapshot_of(u)["words"], Json::array({"mary"}));
  EXPECT_EQ(feed(svc, id, "sleeps").status, 200);
}

TEST(Service, BlockedSessionRefusesWords) {
  Service svc(service_config());
  std::string id = create(svc, "workshop");
  for (const auto& w : testing_support::words("put the punch")) ASSERT_EQ(feed(svc, id, w).status, 200);
  Response r = feed(svc, id, "onto");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(svc.handle("POST", "/sessions/" + id + "/undo", "").status, 200);
  EXPECT_EQ(feed(svc, id, "plate").status, 200);
}

TEST(Service, SnapshotMatchesCli) {
  Service svc(service_config());
  std::string id = create(svc);
  Response r;
  for (const auto& w : testing_support::words("every man gave a book to a child")) r = feed(svc, id, w);
  std::istringstream in("every man gave a book to a child");
  std::ostringstream out, err;
  ASSERT_EQ(run_batch(testing_support::config("demo"), split_words(in), TraceLevel::Min, true, out, err), kExitOk);
  EXPECT_EQ(snapshot_of(r), Json::parse(out.str()));
}

TEST(Service, ConcurrentSessionsDoNotInterleave) {
  Service svc(service_config());
  const std::vector<std::string> a = testing_support::words("london has a tower . every parent shows it");
  const std::vector<std::string> b = testing_support::words("mary introduced john to sue . john sleeps");
  std::string ida = create(svc, "london");
  std::string idb = create(svc, "demo");
  auto run = [&](const std::string& id, const std::vector<std::string>& ws) {
    for (int round = 0; round < 3; ++round) {
      for (const auto& w : ws) ASSERT_EQ(feed(svc, id, w).status, 200);
      if (round < 2) {
        for (std::size_t i = 0; i < ws.size(); ++i)
          ASSERT_EQ(svc.handle("POST", "/sessions/" + id + "/undo", "").status, 200);
      }
    }
  };
  std::thread ta(run, ida, a), tb(run, idb, b);
  ta.join();
  tb.join();
  Json got_a = snapshot_of(svc.handle("GET", "/sessions/" + ida, ""));
  Json got_b = snapshot_of(svc.handle("GET", "/sessions/" + idb, ""));
  EXPECT_EQ(got_a, snapshot(replay(testing_support::config("london"), a)));
  EXPECT_EQ(got_b, snapshot(replay(testing_support::config("demo"), b)));
}

TEST(Service, IdleSessionsExpire) {
  ServiceConfig c = service_config();
  c.idle_ttl = std::chrono::seconds(60);
  Service svc(c);
  std::string old_id = create(svc);
  svc.age_sessions(std::chrono::seconds(61));
  std::string new_id = create(svc);
  EXPECT_EQ(svc.handle("GET", "/sessions/" + old_id, "").status, 404);
  EXPECT_EQ(svc.handle("GET", "/sessions/" + new_id, "").status, 200);
  EXPECT_EQ(svc.session_count(), 1u);
}

TEST(Service, HttpRoundTrip) {
  Service svc(service_config());
  httplib::Server server;
  mount(server, svc);
  int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/sessions", R"({"world":"demo"})", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  std::string id = Json::parse(created->body)["id"];
  auto fed = client.Post("/sessions/" + id + "/words", R"({"word":"mary"})", "application/json");
  ASSERT_TRUE(fed);
  EXPECT_EQ(fed->status, 200);
  auto bad = client.Post("/sessions/" + id + "/words", R"({"word":"zzz"})", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 422);
  auto gone = client.Delete("/sessions/" + id);
  ASSERT_TRUE(gone);
  EXPECT_EQ(gone->status, 204);
  auto missing = client.Get("/sessions/" + id);
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  server.stop();
  t.join();
}
