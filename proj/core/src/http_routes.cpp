#include "rmab/http_routes.hpp"

#include "httplib.h"
#include "rmab/service_json.hpp"

namespace rmab {

namespace {

void reply(httplib::Response& res, const JsonApi::Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

}  // namespace

void mount_routes(httplib::Server& server, JsonApi& api) {
  server.Post("/sessions", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.create_session(req.body));
  });
  server.Post(R"(/sessions/([0-9a-f]+)/actions)",
              [&api](const httplib::Request& req, httplib::Response& res) {
                reply(res, api.submit_action(req.matches[1], req.body));
              });
  server.Get(R"(/sessions/([0-9a-f]+)/summary)",
             [&api](const httplib::Request& req, httplib::Response& res) {
               reply(res, api.get_summary(req.matches[1]));
             });
  server.Get(R"(/sessions/([0-9a-f]+))", [&api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api.get_state(req.matches[1]));
  });
}

}  // namespace rmab
