#pragma once

#include <string>

#include "json.hpp"
#include "rmab/service.hpp"

namespace rmab {

nlohmann::json to_json(const SessionView& view, bool debug);
nlohmann::json to_json(const SessionSummary& summary);

/// JSON request handling independent of the transport.
class JsonApi {
 public:
  struct Response {
    int status = 200;
    nlohmann::json body;
  };

  explicit JsonApi(GameService& service) : service_(&service) {}

  Response create_session(const std::string& body);                        // POST /sessions
  Response submit_action(const std::string& id, const std::string& body);  // POST /sessions/{id}/actions
  Response get_state(const std::string& id);                                // GET /sessions/{id}
  Response get_summary(const std::string& id);                              // GET /sessions/{id}/summary

 private:
  template <typename F>
  Response guarded(F&& f);

  GameService* service_;
};

}  // namespace rmab
