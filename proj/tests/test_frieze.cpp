#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "ptolemy/errors.hpp"
#include "ptolemy/frieze.hpp"
#include "support.hpp"

using namespace ptolemy;

namespace {

std::vector<Rational> to_rationals(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// The octagon triangulation whose triangle counts reproduce the fixture's
// second row, found by search rather than written down.
Triangulation octagon_triangulation() {
  const auto q = testing::octagon_quiddity();
  for (const Triangulation& t : enumerate_triangulations(8))
    if (triangle_counts(t) == q) return t;
  throw std::logic_error("no octagon triangulation matches");
}

}  // namespace

TEST_CASE("small friezes") {
  const Triangulation q(4, {Arc(1, 3)});
  const Frieze f = frieze_from_triangulation(q);
  CHECK(f.entry(2, 4) == 2);
  CHECK(quiddity(f) == to_rationals({2, 1, 2, 1}));
  const Frieze fan = frieze_from_triangulation(Triangulation::fan(5));
  CHECK(fan.entry(2, 4) == 2);
  CHECK(fan.entry(2, 5) == 3);
  CHECK(quiddity(fan) == to_rationals({3, 1, 2, 2, 1}));
  CHECK(fan.entry(7, 9) == fan.entry(2, 4));  // labels are taken mod m
  CHECK_THROWS_AS(fan.entry(2, 2), InvalidVertex);
}

TEST_CASE("the octagon fixture") {
  const auto fixture = testing::octagon_frieze_grid();
  const auto rep = check_frieze(fixture, {8});
  CHECK(rep.boundary_ok);
  CHECK(rep.diamond_ok);
  CHECK(rep.positive);
  CHECK(rep.integer);
  CHECK(rep.shift_invariant);
  REQUIRE(rep.period);
  CHECK(*rep.period == 8);

  const Triangulation t = octagon_triangulation();
  CHECK(t.diagonals() == std::vector<Arc>{Arc(1, 3), Arc(3, 8), Arc(4, 6), Arc(4, 7), Arc(4, 8)});
  const Frieze f = frieze_from_triangulation(t);
  CHECK(quiddity(f) == to_rationals(testing::octagon_quiddity()));
  const auto shift = testing::matching_shift(fixture, f.to_grid(8 + 9), 8);
  CHECK(shift.has_value());

  // The fixture read as a frieze directly: symmetric, unitary, and equal to f
  // up to rotation.
  const Frieze g = Frieze::from_grid(8, fixture);
  CHECK(g.symmetric());
  const auto cert = is_unitary(g);
  REQUIRE(cert);
  for (const Arc& d : cert->diagonals()) CHECK(g.entry(d.a, d.b) == 1);
  bool eleven = false;
  for (const Arc& a : polygon_arcs(8)) eleven = eleven || g.entry(a.a, a.b) == 11;
  CHECK(eleven);
}

TEST_CASE("the fourth row repeats with period four") {
  const auto rep = check_frieze(testing::octagon_frieze_grid());
  CHECK(rep.expected_period == 8);
  FriezeGrid middle{{testing::octagon_frieze_grid().rows[3]}};
  middle.rows.push_back(middle.rows[0]);
  const auto r = check_frieze(middle, {8});
  REQUIRE(r.period);
  CHECK(*r.period == 4);
}

TEST_CASE("perturbed grids report the violating diamond") {
  auto grid = testing::octagon_frieze_grid();
  grid.rows[2][4] += 1;
  const auto rep = check_frieze(grid, {8});
  CHECK_FALSE(rep.diamond_ok);
  std::set<std::pair<std::size_t, std::size_t>> where;
  for (const auto& v : rep.violations) where.insert({v.row, v.column});
  // The entry is the left or right corner of two diamonds in its row and the
  // top or bottom of one diamond each in the rows above and below.
  CHECK(where.count({2, 4}) == 1);
  CHECK(where.count({2, 3}) == 1);
  CHECK(rep.violations.size() == 4);
  grid.rows[3].pop_back();
  CHECK_THROWS_AS(check_frieze(grid), FormatError);
}

TEST_CASE("every heptagon frieze passes the checks") {
  for (const Triangulation& t : enumerate_triangulations(7)) {
    const Frieze f = frieze_from_triangulation(t);
    const auto rep = check_frieze(f.to_grid(3 * 7));
    CHECK(rep.boundary_ok);
    CHECK(rep.diamond_ok);
    CHECK(rep.positive);
    CHECK(rep.integer);
    CHECK(rep.shift_invariant);
    CHECK(f.symmetric());
    std::vector<Rational> counts;
    for (int c : triangle_counts(t)) counts.emplace_back(c);
    CHECK(quiddity(f) == counts);
    // The diamond rule alone, started from the quiddity row, rebuilds f.
    CHECK(frieze_by_diamond_rule(quiddity(f), 3 * 7) == f.to_grid(3 * 7));
    const auto cert = is_unitary(f);
    REQUIRE(cert);
    for (const Arc& d : cert->diagonals()) CHECK(f.entry(d.a, d.b) == 1);
  }
}

TEST_CASE("hexagon friezes are all unitary") {
  std::set<std::string> seen;
  for (const Triangulation& t : enumerate_triangulations(6)) {
    const Frieze f = frieze_from_triangulation(t);
    if (!seen.insert(to_text(6, f.to_grid())).second) continue;
    CHECK(is_unitary(f).has_value());
  }
  CHECK(seen.size() == 14);
}

TEST_CASE("a non-unit seed gives a rational, non-unitary frieze") {
  const Triangulation t = Triangulation::fan(5);
  EdgeValues v = unit_values(t);
  v[Arc(1, 3)] = 3;
  const Frieze f(5, ptolemy_propagate(t, v));
  CHECK(f.entry(2, 4) == Rational(2, 3));
  CHECK(f.entry(2, 5) == Rational(5, 3));
  const auto rep = check_frieze(f.to_grid(10));
  CHECK(rep.diamond_ok);  // unit sides make every Ptolemy relation a diamond
  CHECK(rep.positive);
  CHECK_FALSE(rep.integer);
  CHECK(rep.shift_invariant);
  CHECK_FALSE(is_unitary(f).has_value());
}

TEST_CASE("frieze entries are lambda lengths") {
  const auto fan = frieze_entries_as_lambda(Triangulation::fan(5));
  CHECK(fan.max_deviation < 1e-9);
  const auto tri = frieze_entries_as_lambda(Triangulation(3, {}));
  CHECK(tri.max_deviation < 1e-12);
  const auto oct = frieze_entries_as_lambda(octagon_triangulation());
  CHECK(oct.max_deviation < 1e-8);
}

TEST_CASE("frieze text format") {
  const Frieze f = frieze_from_triangulation(octagon_triangulation());
  const auto grid = f.to_grid();
  const std::string text = to_text(8, grid);
  const auto [m, back] = parse_frieze(text);
  CHECK(m == 8);
  CHECK(back == grid);
  CHECK(to_text(m, back) == text);
  CHECK(Frieze::from_grid(8, back) == f);
  CHECK(text.substr(0, 4) == "8\n1 ");
  CHECK(text.find("\n 1 ") != std::string::npos);

  FriezeGrid rational{{{1, 1, 1}, {Rational(1, 2), 3, 4}}};
  const auto [m2, back2] = parse_frieze(to_text(3, rational));
  CHECK(back2 == rational);

  CHECK_THROWS_AS(parse_frieze(""), FormatError);
  CHECK_THROWS_AS(parse_frieze("3\n1 1 1\n"), FormatError);
  CHECK_THROWS_AS(parse_frieze("3\n1 1 1\n1 1 1\n"), FormatError);  // missing stagger
  CHECK_THROWS_AS(parse_frieze("3\n1 1 1\n 1 1\n"), FormatError);
  CHECK_THROWS_AS(parse_frieze("x\n"), FormatError);
}
