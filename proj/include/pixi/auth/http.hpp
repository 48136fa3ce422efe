#pragma once

#include "pixi/auth/service.hpp"
#include "pixi/common/error.hpp"

namespace httplib {
class Server;
}

namespace pixi::auth {

int http_status(ErrorCode code);

// Registers the REST/JSON API on `server`. Errors are returned as
// {"error": {"code", "message"}} with a matching status.
void install_routes(httplib::Server& server, Service& service);

}  // namespace pixi::auth
