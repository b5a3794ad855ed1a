#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "fixtures.hpp"
#include "ptolemy/errors.hpp"
#include "ptolemy/frieze.hpp"
#include "ptolemy/service.hpp"
#include "support.hpp"

using namespace ptolemy;
using nlohmann::json;

namespace {

const json a2_request = json::parse(R"({"quiver": {"n": 2, "frozen": [], "b": [[0, 1], [-1, 0]]}})");

json vertex(int k) { return {{"vertex", k}}; }
json diagonal(int i, int j) { return {{"diagonal", {i, j}}}; }

std::string printed_quotient(const std::string& num, const std::string& den, std::size_t n) {
  return to_string(*div_exact(parse_laurent(num, n), parse_laurent(den, n)));
}

// The parts of a view that describe the mathematical state.
json state(const json& view) { return {view["quiver"], view["vars"], view["polygon"], view["frieze"]}; }

FriezeGrid grid_from_json(const json& rows) {
  FriezeGrid g;
  for (const auto& row : rows) {
    g.rows.emplace_back();
    for (const auto& v : row) g.rows.back().push_back(parse_rational(v.get<std::string>()));
  }
  return g;
}

}  // namespace

TEST_CASE("a quiver session starts from the generators") {
  SessionStore store;
  const json v = store.create(a2_request);
  CHECK(v["mode"] == "quiver");
  CHECK(v["vars"] == json::array({"x1", "x2"}));
  CHECK(v["quiver"] == to_json(Quiver({{0, 1}, {-1, 0}})));
  CHECK(v["polygon"].is_null());
  CHECK(v["frieze"].is_null());
  CHECK(v["history"].empty());
  CHECK(v["last_exchange"].is_null());
  CHECK(v["flags"] == json{{"returned_to_start", false}, {"undo_noop", false}, {"truncated", false}});
  CHECK(v["id"].get<std::string>().size() == 32);
  CHECK(store.view(v["id"]) == v);
}

TEST_CASE("A2 moves, the pentagon and undo") {
  SessionStore store;
  const json start = store.create(a2_request);
  const std::string id = start["id"];

  const json one = store.apply_move(id, vertex(1));
  CHECK(one["vars"][0] == printed_quotient("1 + x2", "x1", 2));
  CHECK(one["vars"][1] == "x2");
  CHECK(one["last_exchange"] == "x1' = (1 + x2)/x1");
  CHECK(one["history"] == json::array({{{"vertex", 1}}}));
  CHECK_FALSE(one["flags"]["returned_to_start"].get<bool>());

  const json back = store.undo(id);
  CHECK(state(back) == state(start));
  CHECK(back["history"].empty());
  CHECK_FALSE(back["flags"]["undo_noop"].get<bool>());
  const json noop = store.undo(id);
  CHECK(noop["flags"]["undo_noop"].get<bool>());
  CHECK(state(noop) == state(start));

  // [1, 2] then two undos
  store.apply_move(id, vertex(1));
  store.apply_move(id, vertex(2));
  store.undo(id);
  CHECK(state(store.undo(id)) == state(start));

  // five alternating moves come back up to relabeling
  json v;
  for (int k : {1, 2, 1, 2, 1}) {
    v = store.apply_move(id, vertex(k));
    if (v["history"].size() < 5) CHECK_FALSE(v["flags"]["returned_to_start"].get<bool>());
  }
  CHECK(v["flags"]["returned_to_start"].get<bool>());
  CHECK(v["vars"] == json::array({"x2", "x1"}));
}

TEST_CASE("rejected moves leave the session unchanged") {
  SessionStore store;
  json frozen_request = a2_request;
  frozen_request["quiver"]["frozen"] = {2};
  const json start = store.create(frozen_request);
  const std::string id = start["id"];
  CHECK_THROWS_AS(store.apply_move(id, vertex(2)), InvalidVertex);
  CHECK_THROWS_AS(store.apply_move(id, vertex(3)), InvalidVertex);
  CHECK_THROWS_AS(store.apply_move(id, vertex(0)), FormatError);
  CHECK_THROWS_AS(store.apply_move(id, json{{"vertex", "1"}}), FormatError);
  CHECK_THROWS_AS(store.apply_move(id, json::object()), FormatError);
  CHECK_THROWS_AS(store.apply_move(id, diagonal(1, 3)), FormatError);
  CHECK_THROWS_AS(store.apply_move("0123", vertex(1)), UnknownSession);
  CHECK(store.view(id) == start);

  CHECK_THROWS_AS(store.create(json::array()), FormatError);
  CHECK_THROWS_AS(store.create(json{{"quiver", {{"n", 2}}}}), FormatError);
  CHECK_THROWS_AS(store.create(json{{"polygon", {{"m", 2}}}}), FormatError);
  CHECK_THROWS_AS(store.create(json{{"polygon", {{"m", 5}, {"diagonals", {{1, 3}}}}}}), FormatError);
}

TEST_CASE("polygon sessions flip and mutate together") {
  SessionStore store;
  const json square = store.create(json{{"polygon", {{"m", 4}, {"diagonals", {{1, 3}}}}}});
  const Quiver q = quiver_from_json(square["quiver"]);
  CHECK(q.mutable_vertices().size() == 1);
  CHECK(q.size() == 5);
  CHECK(square["polygon"]["diagonals"] == json::array({{1, 3}}));
  CHECK(square["polygon"]["arcs"][0] == json::array({1, 3}));
  const std::string id = square["id"];

  CHECK_THROWS_AS(store.apply_move(id, diagonal(2, 4)), InvalidDiagonal);
  CHECK_THROWS_AS(store.apply_move(id, vertex(2)), InvalidVertex);  // a side
  const json flipped = store.apply_move(id, diagonal(3, 1));
  CHECK(flipped["polygon"]["diagonals"] == json::array({{2, 4}}));
  CHECK(flipped["history"][0] == json{{"vertex", 1}, {"diagonal", {1, 3}}, {"replacement", {2, 4}}});
  // x1' = (x_side * x_side + x_side * x_side) / x1
  CHECK(flipped["vars"][0].get<std::string>().find("x1^-1") != std::string::npos);
  CHECK(state(store.undo(id)) == state(square));
}

TEST_CASE("the octagon session shows the fixture frieze") {
  SessionStore store;
  Triangulation t = Triangulation::fan(8);
  for (const Triangulation& c : enumerate_triangulations(8))
    if (triangle_counts(c) == testing::octagon_quiddity()) t = c;
  const json v = store.create(json{{"polygon", to_json(t)}});
  const FriezeGrid shown = grid_from_json(v["frieze"]);
  CHECK(shown == frieze_from_triangulation(t).to_grid());
  const Frieze f = Frieze::from_grid(8, shown);
  CHECK(testing::matching_shift(testing::octagon_frieze_grid(), f.to_grid(17), 8).has_value());

  const json exported = store.export_state(v["id"]);
  CHECK(exported["triangulation"] == to_json(t));
  CHECK(parse_frieze(exported["frieze"].get<std::string>()).second == shown);
  CHECK(seed_from_json(exported["seed"]).vars.size() == 13);
}

TEST_CASE("random polygon moves keep the invariant and undo exactly") {
  testing::Rng rng(41);
  SessionStore store;
  for (int trial = 0; trial < 5; ++trial) {
    const int m = testing::uniform_int(rng, 4, 8);
    const json start = store.create(json{{"polygon", to_json(testing::random_triangulation(rng, m))}});
    const std::string id = start["id"];
    std::vector<json> views{start};
    for (int step = 0; step < 8; ++step) {
      const auto diags = views.back()["polygon"]["diagonals"];
      const auto& d = diags[testing::uniform_int(rng, 0, static_cast<int>(diags.size()) - 1)];
      const json v = store.apply_move(id, json{{"diagonal", d}});
      // the quiver of the current triangulation is the seed's quiver
      const Triangulation t = triangulation_from_json(v["polygon"]);
      std::vector<Arc> arcs;
      for (const auto& a : v["polygon"]["arcs"]) arcs.emplace_back(a[0].get<int>(), a[1].get<int>());
      CHECK(quiver_for_arcs(t, arcs).equal_ignoring_frozen_block(quiver_from_json(v["quiver"])));
      CHECK(grid_from_json(v["frieze"]) == frieze_from_triangulation(t).to_grid());
      views.push_back(v);
    }
    for (std::size_t i = views.size() - 1; i-- > 0;) CHECK(state(store.undo(id)) == state(views[i]));
  }
}

TEST_CASE("long variables are truncated in views but exported exactly") {
  const LaurentPoly p = parse_laurent("x1^3 + 2*x1^2 + 3*x1 + 4", 1);
  CHECK(print_truncated(p, 4) == to_string(p));
  CHECK(print_truncated(p, 2) == "x1^3 + 2*x1^2 + ... [truncated: 4 terms]");

  SessionOptions options;
  options.max_printed_terms = 3;
  SessionStore store(options);
  const std::string id = store.create(json{{"quiver", to_json(Quiver({{0, 2, -2}, {-2, 0, 2}, {2, -2, 0}}))}})["id"];
  json v;
  for (int k : {1, 2, 3}) v = store.apply_move(id, vertex(k));
  CHECK(v["flags"]["truncated"].get<bool>());
  const Seed exact = seed_from_json(store.export_state(id)["seed"]);
  CHECK(exact.vars[2].size() > 3);
  CHECK(v["vars"][2].get<std::string>().find("[truncated: " + std::to_string(exact.vars[2].size()) + " terms]") !=
        std::string::npos);
}

TEST_CASE("moves that outgrow the limits are refused") {
  SessionOptions options;
  options.limits = {50, 1000000};
  SessionStore store(options);
  const json start = store.create(json{{"quiver", to_json(Quiver({{0, 2, -2}, {-2, 0, 2}, {2, -2, 0}}))}});
  const std::string id = start["id"];
  bool refused = false;
  for (int step = 0; step < 20 && !refused; ++step) {
    try {
      store.apply_move(id, vertex(1 + step % 3));
    } catch (const ResourceLimit&) {
      refused = true;
    }
  }
  CHECK(refused);
}

TEST_CASE("sessions are evicted by recency and idle time") {
  auto now = std::chrono::steady_clock::now();
  SessionOptions options;
  options.capacity = 2;
  options.now = [&now] { return now; };
  SessionStore store(options);
  const std::string a = store.create(a2_request)["id"];
  const std::string b = store.create(a2_request)["id"];
  store.view(a);  // a is now more recent than b
  const std::string c = store.create(a2_request)["id"];
  CHECK(store.size() == 2);
  CHECK_THROWS_AS(store.view(b), UnknownSession);
  store.view(a);
  now += std::chrono::minutes(59);
  store.view(c);
  now += std::chrono::minutes(2);
  CHECK_THROWS_AS(store.view(a), UnknownSession);  // idle for 61 minutes
  CHECK(store.view(c)["id"] == c);
}

TEST_CASE("concurrent moves on one session are linearized") {
  SessionStore store;
  const std::string id = store.create(json{{"quiver", to_json(Quiver({{0, 1, 0}, {-1, 0, 1}, {0, -1, 0}}))}})["id"];
  std::atomic<int> accepted{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 40; ++i) {
        store.apply_move(id, vertex(1 + (t + i) % 3));
        ++accepted;
        if (i % 7 == 0) store.view(id);
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(store.view(id)["history"].size() == static_cast<std::size_t>(accepted.load()));
  CHECK(accepted.load() == 320);
}

TEST_CASE("HTTP endpoints") {
  httplib::Server server;
  SessionStore store;
  install_routes(server, store);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/sessions", a2_request.dump(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const json view = json::parse(created->body);
  const std::string id = view["id"];

  auto moved = client.Post("/sessions/" + id + "/moves", R"({"vertex": 1})", "application/json");
  REQUIRE(moved);
  CHECK(moved->status == 200);
  const json after = json::parse(moved->body);
  CHECK(after["vars"][0] == printed_quotient("1 + x2", "x1", 2));
  CHECK(after == store.view(id));

  auto got = client.Get("/sessions/" + id);
  REQUIRE(got);
  CHECK(json::parse(got->body) == after);

  auto exported = client.Get("/sessions/" + id + "/export");
  REQUIRE(exported);
  CHECK(seed_from_json(json::parse(exported->body)["seed"]).vars[0] == parse_laurent(after["vars"][0].get<std::string>(), 2));

  auto undone = client.Post("/sessions/" + id + "/undo", "", "application/json");
  REQUIRE(undone);
  CHECK(state(json::parse(undone->body)) == state(view));

  auto missing = client.Get("/sessions/abcdef");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(json::parse(missing->body)["error"]["kind"] == "unknown-session");

  auto malformed = client.Post("/sessions", "{not json", "application/json");
  REQUIRE(malformed);
  CHECK(malformed->status == 400);

  auto bad_vertex = client.Post("/sessions/" + id + "/moves", R"({"vertex": 9})", "application/json");
  REQUIRE(bad_vertex);
  CHECK(bad_vertex->status == 422);
  CHECK(json::parse(bad_vertex->body)["error"]["kind"] == "invalid-vertex");

  server.stop();
  runner.join();
}
