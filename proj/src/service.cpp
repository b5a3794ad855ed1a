#include "ptolemy/service.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "ptolemy/errors.hpp"
#include "ptolemy/frieze.hpp"
#include "ptolemy/triangulation.hpp"

namespace ptolemy {

namespace {

enum class Mode { quiver, polygon };

struct Move {
  std::size_t vertex;
  // polygon mode: the diagonal flipped away and the one that replaced it
  std::optional<Arc> diagonal;
  std::optional<Arc> replacement;
};

nlohmann::json arc_json(const Arc& a) { return nlohmann::json::array({a.a, a.b}); }

nlohmann::json move_json(const Move& m) {
  nlohmann::json j{{"vertex", m.vertex + 1}};
  if (m.diagonal) j["diagonal"] = arc_json(*m.diagonal);
  if (m.replacement) j["replacement"] = arc_json(*m.replacement);
  return j;
}

std::size_t positive_index(const nlohmann::json& v, const char* what) {
  if (!v.is_number_integer()) throw FormatError(std::string("move: ") + what + " must be an integer");
  const auto k = v.get<long long>();
  if (k < 1) throw FormatError(std::string("move: ") + what + " must be at least 1");
  return static_cast<std::size_t>(k);
}

}  // namespace

struct SessionStore::Session {
  std::mutex mutex;
  std::string id;
  Mode mode = Mode::quiver;
  Seed initial;
  Seed current;
  // polygon mode only
  std::optional<Triangulation> triangulation;
  std::vector<Arc> arcs;
  std::vector<Move> history;
  std::optional<std::string> last_exchange;
};

std::string print_truncated(const LaurentPoly& p, std::size_t max_terms) {
  if (p.size() <= max_terms) return to_string(p);
  std::vector<LaurentPoly::Term> head(p.terms().begin(), p.terms().begin() + static_cast<std::ptrdiff_t>(max_terms));
  return to_string(LaurentPoly::from_terms(p.generator_count(), std::move(head))) + " + ... [truncated: " +
         std::to_string(p.size()) + " terms]";
}

SessionStore::SessionStore(SessionOptions options) : options_(std::move(options)), id_rng_(std::random_device{}()) {
  if (options_.capacity == 0) throw std::invalid_argument("session capacity must be positive");
}

SessionStore::~SessionStore() = default;

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::string SessionStore::fresh_id() {
  static constexpr char hex[] = "0123456789abcdef";
  for (;;) {
    std::string id;
    for (int word = 0; word < 2; ++word) {
      std::uint64_t bits = id_rng_();
      for (int i = 0; i < 16; ++i, bits >>= 4) id += hex[bits & 15];
    }
    if (!sessions_.count(id)) return id;
  }
}

void SessionStore::evict_expired() {
  const auto now = options_.now();
  while (!recency_.empty()) {
    auto it = sessions_.find(recency_.back());
    if (now - it->second.last_used < options_.idle_ttl) break;
    sessions_.erase(it);
    recency_.pop_back();
  }
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  evict_expired();
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw UnknownSession("no session '" + id + "'");
  recency_.splice(recency_.begin(), recency_, it->second.position);
  it->second.last_used = options_.now();
  return it->second.session;
}

namespace {

nlohmann::json render(const SessionStore::Session& s, const SessionOptions& options, bool undo_noop);

}  // namespace

nlohmann::json SessionStore::create(const nlohmann::json& request) {
  auto session = std::make_shared<Session>();
  if (!request.is_object()) throw FormatError("session: expected a JSON object");
  if (request.contains("quiver") == request.contains("polygon"))
    throw FormatError("session: give exactly one of \"quiver\" and \"polygon\"");
  if (request.contains("quiver")) {
    session->mode = Mode::quiver;
    session->initial = initial_seed(quiver_from_json(request.at("quiver")));
  } else {
    const auto& p = request.at("polygon");
    if (!p.is_object() || !p.contains("m") || !p.at("m").is_number_integer())
      throw FormatError("session: polygon needs an integer m");
    const int m = p.at("m").get<int>();
    if (m < 3 || m > 64) throw FormatError("session: polygon size must be between 3 and 64");
    Triangulation t = p.contains("diagonals") ? triangulation_from_json(p) : Triangulation::fan(m);
    const ArcQuiver aq = quiver_from_triangulation(t, true);
    session->mode = Mode::polygon;
    session->triangulation = std::move(t);
    session->arcs = aq.arcs;
    session->initial = initial_seed(aq.quiver);
  }
  session->current = session->initial;

  std::lock_guard lock(mutex_);
  evict_expired();
  while (sessions_.size() >= options_.capacity) {
    sessions_.erase(recency_.back());
    recency_.pop_back();
  }
  session->id = fresh_id();
  recency_.push_front(session->id);
  sessions_.emplace(session->id, Entry{session, recency_.begin(), options_.now()});
  std::lock_guard session_lock(session->mutex);
  return render(*session, options_, false);
}

nlohmann::json SessionStore::view(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return render(*s, options_, false);
}

namespace {

// Applies the mutation at vertex v (and the matching flip in polygon mode),
// committing only once every step has succeeded.
void mutate_session(SessionStore::Session& s, std::size_t v, const ExchangeLimits& limits, bool record) {
  const std::size_t n = s.current.size();
  if (v >= n) throw InvalidVertex("vertex " + std::to_string(v + 1) + " out of range 1.." + std::to_string(n));
  if (s.current.quiver.is_frozen(v)) {
    const std::string what = s.mode == Mode::polygon ? " is a side of the polygon" : " is frozen";
    throw InvalidVertex("vertex " + std::to_string(v + 1) + what);
  }
  const auto numerator = exchange_numerator(s.current, v, limits);
  if (!numerator) {
    throw ResourceLimit("mutation at vertex " + std::to_string(v + 1) + " exceeds " +
                        std::to_string(limits.max_terms) + " terms");
  }
  Seed next = mutate_seed(s.current, v, *numerator);
  Move move{v, std::nullopt, std::nullopt};
  std::optional<Triangulation> flipped;
  std::vector<Arc> arcs = s.arcs;
  if (s.mode == Mode::polygon) {
    const Arc d = s.arcs[v];
    arcs[v] = flipped_diagonal(*s.triangulation, d);
    flipped = flip(*s.triangulation, d);
    move.diagonal = d;
    move.replacement = arcs[v];
    if (!quiver_for_arcs(*flipped, arcs).equal_ignoring_frozen_block(next.quiver))
      throw std::logic_error("flip of " + to_string(d) + " disagrees with mutation at vertex " + std::to_string(v + 1));
  }
  s.last_exchange = describe_exchange(s.current.quiver, v);
  s.current = std::move(next);
  if (flipped) {
    s.triangulation = std::move(flipped);
    s.arcs = std::move(arcs);
  }
  if (record) s.history.push_back(move);
}

nlohmann::json render(const SessionStore::Session& s, const SessionOptions& options, bool undo_noop) {
  nlohmann::json vars = nlohmann::json::array();
  bool truncated = false;
  for (const auto& v : s.current.vars) {
    truncated = truncated || v.size() > options.max_printed_terms;
    vars.push_back(print_truncated(v, options.max_printed_terms));
  }
  nlohmann::json history = nlohmann::json::array();
  for (const auto& m : s.history) history.push_back(move_json(m));
  nlohmann::json polygon = nullptr, frieze = nullptr;
  if (s.mode == Mode::polygon) {
    nlohmann::json arcs = nlohmann::json::array();
    for (const Arc& a : s.arcs) arcs.push_back(arc_json(a));
    polygon = to_json(*s.triangulation);
    polygon["arcs"] = arcs;
    frieze = to_json(frieze_from_triangulation(*s.triangulation).to_grid());
  }
  const bool returned = !s.history.empty() && seed_equal_up_to_permutation(s.initial, s.current).has_value();
  return {
      {"id", s.id},
      {"mode", s.mode == Mode::quiver ? "quiver" : "polygon"},
      {"quiver", to_json(s.current.quiver)},
      {"vars", vars},
      {"polygon", polygon},
      {"frieze", frieze},
      {"history", history},
      {"flags", {{"returned_to_start", returned}, {"undo_noop", undo_noop}, {"truncated", truncated}}},
      {"last_exchange", s.last_exchange ? nlohmann::json(*s.last_exchange) : nlohmann::json(nullptr)},
  };
}

}  // namespace

nlohmann::json SessionStore::apply_move(const std::string& id, const nlohmann::json& move) {
  if (!move.is_object()) throw FormatError("move: expected a JSON object");
  if (move.contains("vertex") == move.contains("diagonal"))
    throw FormatError("move: give exactly one of \"vertex\" and \"diagonal\"");
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  std::size_t v = 0;
  if (move.contains("vertex")) {
    v = positive_index(move.at("vertex"), "vertex") - 1;
  } else {
    if (s->mode != Mode::polygon) throw FormatError("move: diagonal moves need a polygon session");
    const auto& d = move.at("diagonal");
    if (!d.is_array() || d.size() != 2) throw FormatError("move: diagonal must be a pair [i, j]");
    const Arc arc(static_cast<int>(positive_index(d[0], "diagonal endpoint")),
                  static_cast<int>(positive_index(d[1], "diagonal endpoint")));
    if (!s->triangulation->contains(arc))
      throw InvalidDiagonal(to_string(arc) + " is not a diagonal of the current triangulation");
    v = static_cast<std::size_t>(std::find(s->arcs.begin(), s->arcs.end(), arc) - s->arcs.begin());
  }
  mutate_session(*s, v, options_.limits, true);
  return render(*s, options_, false);
}

nlohmann::json SessionStore::undo(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->history.empty()) return render(*s, options_, true);
  // The mutation at the same vertex is its own inverse; in polygon mode it
  // flips the replacement diagonal back.
  mutate_session(*s, s->history.back().vertex, options_.limits, false);
  s->history.pop_back();
  return render(*s, options_, false);
}

nlohmann::json SessionStore::export_state(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  nlohmann::json history = nlohmann::json::array();
  for (const auto& m : s->history) history.push_back(move_json(m));
  nlohmann::json triangulation = nullptr, frieze = nullptr;
  if (s->mode == Mode::polygon) {
    triangulation = to_json(*s->triangulation);
    frieze = to_text(s->triangulation->m(), frieze_from_triangulation(*s->triangulation).to_grid());
  }
  return {{"id", s->id},
          {"mode", s->mode == Mode::quiver ? "quiver" : "polygon"},
          {"seed", to_json(s->current)},
          {"triangulation", triangulation},
          {"frieze", frieze},
          {"history", history}};
}

}  // namespace ptolemy
