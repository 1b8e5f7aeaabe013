#include "interface/service.hpp"

#include <httplib.h>

#include <iostream>

namespace delaystab::interface {

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  if (r.text) {
    res.set_content(*r.text, r.content_type);
  } else {
    res.set_content(r.body.dump(2) + "\n", "application/json");
  }
}

}  // namespace

std::unique_ptr<httplib::Server> make_server(const HandlerOptions& options) {
  auto server = std::make_unique<httplib::Server>();
  server->set_default_headers({{"Access-Control-Allow-Origin", "*"}});

  server->Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    const json body{{"status", "ok"}, {"schema_version", kSchemaVersion}};
    res.set_content(body.dump(2) + "\n", "application/json");
  });

  for (const char* mode : {"check", "region", "sweep", "verify", "zones"}) {
    const std::string name = mode;
    server->Post("/api/" + name, [name, options](const httplib::Request& req,
                                                 httplib::Response& res) {
      json request;
      try {
        request = json::parse(req.body);
      } catch (const json::parse_error& e) {
        const json body{{"schema_version", kSchemaVersion},
                        {"error", std::string("malformed JSON: ") + e.what()},
                        {"code", "InvalidArgument"}};
        res.status = 400;
        res.set_content(body.dump(2) + "\n", "application/json");
        return;
      }
      reply(res, handle(name, request, options));
    });
    server->Options("/api/" + name, [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }
  return server;
}

bool serve(const std::string& host, int port, const HandlerOptions& options) {
  auto server = make_server(options);
  std::cerr << "delaystab listening on " << host << ':' << port << '\n';
  return server->listen(host, port);
}

}  // namespace delaystab::interface
