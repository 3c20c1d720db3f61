#pragma once

// Binds a Service to an httplib server.

#include <httplib.h>

#include "incr/service.hpp"

namespace incr {

inline void mount(httplib::Server& server, Service& service) {
  auto bridge = [&service](const httplib::Request& req, httplib::Response& res) {
    Response r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    if (!r.body.empty()) res.set_content(r.body, "application/json");
  };
  const char* route = R"(/sessions(/.*)?)";
  server.Get(route, bridge);
  server.Post(route, bridge);
  server.Put(route, bridge);
  server.Patch(route, bridge);
  server.Delete(route, bridge);
}

}  // namespace incr
