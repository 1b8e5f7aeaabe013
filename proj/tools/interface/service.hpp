#pragma once

#include <memory>
#include <string>

#include "interface/handler.hpp"

namespace httplib {
class Server;
}

namespace delaystab::interface {

/// Stateless HTTP front end over handle():
///   POST /api/check, /api/region, /api/sweep, /api/verify, /api/zones
///   GET  /api/health
/// Responses are the handler's JSON (or CSV/SVG when requested).
[[nodiscard]] std::unique_ptr<httplib::Server> make_server(const HandlerOptions& options);

/// Blocks until the server stops. Returns false when the port cannot be bound.
bool serve(const std::string& host, int port, const HandlerOptions& options);

}  // namespace delaystab::interface
