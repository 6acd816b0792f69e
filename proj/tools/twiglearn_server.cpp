#include <CLI11.hpp>
#include <httplib.h>

#include <iostream>

#include "twiglearn/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"HTTP service for interactive query learning", "twiglearn-server"};
  std::string host = "127.0.0.1";
  int port = 8080;
  long budget_ms = 5000;
  twiglearn::service::ServiceConfig config;
  app.add_option("--host", host, "bind address")->envname("TWIGLEARN_HOST")->capture_default_str();
  app.add_option("--port", port, "listen port")->envname("TWIGLEARN_PORT")->capture_default_str();
  app.add_option("--budget-ms", budget_ms, "time budget of one learning request")
      ->envname("TWIGLEARN_BUDGET_MS")
      ->capture_default_str();
  app.add_option("--search-max-nodes", config.search_max_nodes)->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  config.time_budget = std::chrono::milliseconds(budget_ms);

  twiglearn::service::Api api(config);
  httplib::Server server;
  twiglearn::service::install_routes(server, api);
  std::cerr << "listening on " << host << ':' << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "cannot bind " << host << ':' << port << '\n';
    return 1;
  }
}
