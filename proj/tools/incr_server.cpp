// incr_server: HTTP front end for interpretation sessions.

#include <iostream>

#include <CLI11.hpp>
#include "incr/http.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Interpretation session service"};
  int port = 8080;
  std::string host = "127.0.0.1";
  int ttl = 1800;
  incr::ServiceConfig cfg;
  app.add_option("--port", port, "listening port");
  app.add_option("--host", host, "listening address");
  app.add_option("--lexicon-dir", cfg.lexicon_dir, "directory of <name>.lex files")->check(CLI::ExistingDirectory);
  app.add_option("--world-dir", cfg.world_dir, "directory of <name>.world files")->check(CLI::ExistingDirectory);
  app.add_option("--idle-ttl", ttl, "seconds before an idle session expires");
  CLI11_PARSE(app, argc, argv);
  cfg.idle_ttl = std::chrono::seconds(ttl);

  incr::Service service(cfg);
  httplib::Server server;
  incr::mount(server, service);

  std::cerr << "listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}
