#pragma once

// Exploration sessions behind the JSON-over-HTTP interface used by the
// explorer UI.
//
// A session starts either from a quiver (quiver mode) or from a triangulated
// polygon (polygon mode, one mutable vertex per diagonal and one frozen
// vertex per side). Moves mutate the seed; in polygon mode they also flip the
// matching diagonal, and the quiver of the current triangulation must equal
// the seed's quiver after every move. Undo re-applies the last move.
//
// View:   {"id", "mode", "quiver", "vars", "polygon", "frieze", "history",
//          "flags", "last_exchange"}
// Export: {"id", "mode", "seed", "triangulation", "frieze", "history"}

#include <chrono>
#include <cstddef>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "ptolemy/seed.hpp"

namespace httplib {
class Server;
}

namespace ptolemy {

struct SessionOptions {
  std::size_t capacity = 256;
  std::chrono::seconds idle_ttl{3600};
  /// Variables print at most this many terms in views.
  std::size_t max_printed_terms = 200;
  /// Moves whose exchange relation would outgrow these limits are refused
  /// with ResourceLimit instead of tying up the server.
  ExchangeLimits limits{200000, 200000000};
  /// Injectable clock for tests.
  std::function<std::chrono::steady_clock::time_point()> now = [] { return std::chrono::steady_clock::now(); };
};

/// Prints p, cutting it off after max_terms terms with a marker that states
/// the full term count.
std::string print_truncated(const LaurentPoly& p, std::size_t max_terms);

class SessionStore {
 public:
  explicit SessionStore(SessionOptions options = {});
  ~SessionStore();

  /// {"quiver": {n, frozen, b}} or {"polygon": {"m": m, "diagonals": [[i, j], ...]}}
  /// (diagonals default to the fan at vertex 1). Throws FormatError.
  nlohmann::json create(const nlohmann::json& request);
  /// Throws UnknownSession.
  nlohmann::json view(const std::string& id);
  /// {"vertex": k} (1-based) in either mode, or {"diagonal": [i, j]} in
  /// polygon mode. Throws FormatError, UnknownSession, InvalidVertex,
  /// InvalidDiagonal or ResourceLimit.
  nlohmann::json apply_move(const std::string& id, const nlohmann::json& move);
  /// Re-applies the last move; on an empty history nothing changes and
  /// flags.undo_noop is set.
  nlohmann::json undo(const std::string& id);
  /// Full exact state.
  nlohmann::json export_state(const std::string& id);

  std::size_t size() const;

  struct Session;  // opaque

 private:
  std::shared_ptr<Session> find(const std::string& id);
  void evict_expired();
  std::string fresh_id();

  SessionOptions options_;
  mutable std::mutex mutex_;
  std::list<std::string> recency_;  // most recent first
  struct Entry {
    std::shared_ptr<Session> session;
    std::list<std::string>::iterator position;
    std::chrono::steady_clock::time_point last_used;
  };
  std::unordered_map<std::string, Entry> sessions_;
  std::mt19937_64 id_rng_;
};

/// Installs the endpoints
///   POST /sessions, GET /sessions/{id}, POST /sessions/{id}/moves,
///   POST /sessions/{id}/undo, GET /sessions/{id}/export
/// Errors answer {"error": {"kind", "message"}} with 400 (malformed input),
/// 404 (unknown session) or 422 (refused move).
void install_routes(httplib::Server& server, SessionStore& store);

/// Blocks serving on host:port until the process is stopped. Returns false
/// if the address cannot be bound.
bool serve(const std::string& host, int port, SessionOptions options = {});

}  // namespace ptolemy
