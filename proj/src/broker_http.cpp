// Eigen must precede httplib: a resolver header it pulls in defines macros
// that collide with Eigen internals.
#include "rankfarm/broker.hpp"

#include <httplib.h>

namespace rankfarm {

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, "application/json");
}

}  // namespace

void mount(Broker& broker, httplib::Server& server) {
  server.Get("/v1/healthz", [&broker](const httplib::Request&, httplib::Response& res) { reply(res, broker.healthz()); });
  server.Put("/v1/hierarchy", [&broker](const httplib::Request& req, httplib::Response& res) {
    reply(res, broker.put_hierarchy(req.body));
  });
  server.Put(R"(/v1/offerings/([^/]+))", [&broker](const httplib::Request& req, httplib::Response& res) {
    reply(res, broker.put_offering(req.matches[1].str(), req.body));
  });
  server.Post("/v1/rank", [&broker](const httplib::Request& req, httplib::Response& res) {
    reply(res, broker.post_rank(req.body));
  });
  server.Get(R"(/v1/reports/([^/]+))", [&broker](const httplib::Request& req, httplib::Response& res) {
    reply(res, broker.get_report(req.matches[1].str()));
  });
}

}  // namespace rankfarm
