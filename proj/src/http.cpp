#include <httplib.h>

#include "ptolemy/errors.hpp"
#include "ptolemy/service.hpp"

namespace ptolemy {

namespace {

void reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& kind, const std::string& message) {
  reply(res, status, {{"error", {{"kind", kind}, {"message", message}}}});
}

// Runs the handler and maps exceptions onto status codes.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const nlohmann::json::exception& e) {
      reply_error(res, 400, "format", e.what());
    } catch (const FormatError& e) {
      reply_error(res, 400, "format", e.what());
    } catch (const UnknownSession& e) {
      reply_error(res, 404, e.kind(), e.what());
    } catch (const DomainError& e) {
      reply_error(res, 422, e.kind(), e.what());
    } catch (const std::exception& e) {
      reply_error(res, 500, "internal", e.what());
    }
  };
}

nlohmann::json body_json(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  return nlohmann::json::parse(req.body);
}

}  // namespace

void install_routes(httplib::Server& server, SessionStore& store) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(/sessions.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  server.Post("/sessions", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                reply(res, 201, store.create(body_json(req)));
              }));
  server.Get(R"(/sessions/([0-9a-f]+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, store.view(req.matches[1]));
             }));
  server.Post(R"(/sessions/([0-9a-f]+)/moves)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                reply(res, 200, store.apply_move(req.matches[1], body_json(req)));
              }));
  server.Post(R"(/sessions/([0-9a-f]+)/undo)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                reply(res, 200, store.undo(req.matches[1]));
              }));
  server.Get(R"(/sessions/([0-9a-f]+)/export)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, store.export_state(req.matches[1]));
             }));
}

bool serve(const std::string& host, int port, SessionOptions options) {
  httplib::Server server;
  SessionStore store(std::move(options));
  install_routes(server, store);
  return server.listen(host, port);
}

}  // namespace ptolemy
