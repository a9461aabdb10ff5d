#pragma once

namespace httplib {
class Server;
}

namespace rmab {

class JsonApi;

/// Registers the session endpoints on `server`.
void mount_routes(httplib::Server& server, JsonApi& api);

}  // namespace rmab
