#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "fixtures.hpp"
#include "ptolemy/errors.hpp"
#include "ptolemy/hyperbolic.hpp"
#include "ptolemy/pluecker.hpp"
#include "ptolemy/triangulation.hpp"
#include "support.hpp"

using namespace ptolemy;
using ptolemy::testing::Rng;

namespace {

// Oracle: brute force over all subsets of m - 3 diagonals.
std::size_t brute_force_triangulation_count(int m) {
  std::vector<Arc> diags;
  for (const Arc& a : polygon_arcs(m))
    if (!a.is_side(m)) diags.push_back(a);
  std::size_t count = 0;
  const std::size_t total = std::size_t{1} << diags.size();
  for (std::size_t mask = 0; mask < total; ++mask) {
    if (static_cast<int>(__builtin_popcountll(mask)) != m - 3) continue;
    bool ok = true;
    for (std::size_t i = 0; i < diags.size() && ok; ++i)
      for (std::size_t j = i + 1; j < diags.size() && ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1)) ok = !diags[i].crosses(diags[j]);
    count += ok;
  }
  return count;
}

std::size_t catalan(std::size_t k) {
  std::size_t c = 1;
  for (std::size_t i = 0; i < k; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

DecoratedIdealPoint at(double x, double d) { return {x, d}; }

}  // namespace

TEST_CASE("triangulation counts") {
  CHECK(enumerate_triangulations(3).size() == 1);
  const auto four = enumerate_triangulations(4);
  REQUIRE(four.size() == 2);
  CHECK(four[0].diagonals() == std::vector<Arc>{Arc(1, 3)});
  CHECK(four[1].diagonals() == std::vector<Arc>{Arc(2, 4)});
  for (int m = 3; m <= 9; ++m) {
    const auto all = enumerate_triangulations(m);
    CHECK(all.size() == catalan(m - 2));
    if (m <= 8) CHECK(all.size() == brute_force_triangulation_count(m));
    CHECK(std::set<Triangulation>(all.begin(), all.end()).size() == all.size());
    CHECK(std::is_sorted(all.begin(), all.end()));
  }
  CHECK_THROWS(enumerate_triangulations(2));
}

TEST_CASE("triangulation validation") {
  CHECK_THROWS_AS(Triangulation(5, {Arc(1, 3), Arc(2, 4)}), InvalidDiagonal);
  CHECK_THROWS_AS(Triangulation(5, {Arc(1, 3)}), InvalidDiagonal);
  CHECK_THROWS_AS(Triangulation(5, {Arc(1, 2), Arc(1, 3)}), InvalidDiagonal);
  CHECK_THROWS_AS(Triangulation(5, {Arc(1, 6), Arc(1, 3)}), InvalidDiagonal);
  CHECK_THROWS_AS(Triangulation(5, {Arc(1, 3), Arc(1, 3)}), InvalidDiagonal);
  CHECK(Triangulation::fan(5).triangles().size() == 3);
}

TEST_CASE("flips") {
  const Triangulation q(4, {Arc(1, 3)});
  CHECK(flip(q, Arc(1, 3)).diagonals() == std::vector<Arc>{Arc(2, 4)});
  const Triangulation fan = Triangulation::fan(5);
  CHECK(flip(fan, Arc(1, 3)).diagonals() == std::vector<Arc>{Arc(1, 4), Arc(2, 4)});
  CHECK_THROWS_AS(flip(fan, Arc(2, 4)), InvalidDiagonal);
  for (int m = 4; m <= 8; ++m) {
    const auto all = enumerate_triangulations(m);
    std::set<Triangulation> seen{all.front()};
    std::vector<Triangulation> stack{all.front()};
    while (!stack.empty()) {
      const Triangulation t = stack.back();
      stack.pop_back();
      CHECK(t.diagonals().size() == static_cast<std::size_t>(m - 3));  // degree m - 3
      for (const Arc& d : t.diagonals()) {
        const Triangulation f = flip(t, d);
        CHECK(flip(f, flipped_diagonal(t, d)) == t);
        if (seen.insert(f).second) stack.push_back(f);
      }
    }
    CHECK(seen.size() == all.size());  // flip graph is connected
  }
}

TEST_CASE("quivers from triangulations") {
  const auto fan = quiver_from_triangulation(Triangulation::fan(5));
  REQUIRE(fan.quiver.size() == 2);
  CHECK(std::abs(fan.quiver(0, 1)) == 1);
  CHECK(quiver_from_triangulation(Triangulation(4, {Arc(1, 3)})).quiver == Quiver(1));

  const auto with_sides = quiver_from_triangulation(Triangulation::fan(5), true);
  CHECK(with_sides.quiver.size() == 7);
  CHECK(with_sides.quiver.frozen_vertices().size() == 5);
  for (std::size_t i = 2; i < 7; ++i)
    for (std::size_t j = 2; j < 7; ++j) CHECK(with_sides.quiver(i, j) == 0);
}

TEST_CASE("flip commutes with mutation on every hexagon triangulation") {
  for (bool boundary : {false, true}) {
    for (const Triangulation& t : enumerate_triangulations(6)) {
      const auto aq = quiver_from_triangulation(t, boundary);
      for (std::size_t v = 0; v < t.diagonals().size(); ++v) {
        const Arc d = aq.arcs[v];
        const Triangulation f = flip(t, d);
        // Same vertex order, with the flipped diagonal in d's slot.
        std::vector<Arc> arcs = aq.arcs;
        arcs[v] = flipped_diagonal(t, d);
        const Quiver expected = quiver_for_arcs(f, arcs);
        CHECK(aq.quiver.mutate(v).equal_ignoring_frozen_block(expected));
      }
    }
  }
}

TEST_CASE("Ptolemy propagation") {
  const Triangulation q(4, {Arc(1, 3)});
  CHECK(ptolemy_propagate(q, unit_values(q)).at(Arc(2, 4)) == 2);
  const Triangulation fan = Triangulation::fan(5);
  const auto v = ptolemy_propagate(fan, unit_values(fan));
  CHECK(v.at(Arc(2, 4)) == 2);
  CHECK(v.at(Arc(3, 5)) == 2);
  CHECK(v.at(Arc(2, 5)) == 3);
  EdgeValues bad = unit_values(fan);
  bad[Arc(1, 3)] = 0;
  CHECK_THROWS_AS(ptolemy_propagate(fan, bad), GeometryError);
  bad.erase(Arc(1, 3));
  CHECK_THROWS_AS(ptolemy_propagate(fan, bad), GeometryError);
}

TEST_CASE("propagation is flip-order independent and satisfies every Ptolemy relation") {
  Rng rng(41);
  for (int it = 0; it < 30; ++it) {
    const int m = testing::uniform_int(rng, 4, 8);
    const Triangulation t = testing::random_triangulation(rng, m);
    EdgeValues seed;
    for (const Arc& s : polygon_sides(m)) seed[s] = testing::random_positive_rational(rng);
    for (const Arc& d : t.diagonals()) seed[d] = testing::random_positive_rational(rng);
    const auto full = ptolemy_propagate(t, seed);
    CHECK(full.size() == polygon_arcs(m).size());
    for (int i = 1; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j)
        for (int k = j + 1; k <= m; ++k)
          for (int l = k + 1; l <= m; ++l)
            CHECK(full.at(Arc(i, k)) * full.at(Arc(j, l)) ==
                  full.at(Arc(i, j)) * full.at(Arc(k, l)) + full.at(Arc(j, k)) * full.at(Arc(i, l)));
    // A different starting triangulation, seeded from the result, agrees.
    const Triangulation u = testing::random_triangulation(rng, m);
    EdgeValues reseed;
    for (const Arc& s : polygon_sides(m)) reseed[s] = full.at(s);
    for (const Arc& d : u.diagonals()) reseed[d] = full.at(d);
    CHECK(ptolemy_propagate(u, reseed) == full);
  }
}

TEST_CASE("Pluecker coordinates") {
  PlaneMatrix id{std::vector<Rational>{1, 0, 0, 0}, std::vector<Rational>{0, 1, 0, 0}};
  const auto p = pluecker_from_matrix(id);
  CHECK(p.at(Arc(1, 2)) == 1);
  for (const auto& [arc, v] : p)
    if (!(arc == Arc(1, 2))) CHECK(v == 0);

  PlaneMatrix a{std::vector<Rational>{1, 1, 1}, std::vector<Rational>{0, 1, 2}};
  const auto pa = pluecker_from_matrix(a);
  CHECK(pa.at(Arc(1, 2)) == 1);
  CHECK(pa.at(Arc(1, 3)) == 2);
  CHECK(pa.at(Arc(2, 3)) == 1);
  PlaneMatrix scaled = a;
  for (auto& x : scaled[1]) x *= Rational(7, 3);
  for (const auto& [arc, v] : pluecker_from_matrix(scaled)) CHECK(v == pa.at(arc) * Rational(7, 3));

  CHECK_THROWS_AS(pluecker_from_matrix({std::vector<Rational>{1, 2}, std::vector<Rational>{2, 4}}), DegenerateSubspace);
  CHECK_THROWS_AS(pluecker_from_matrix({std::vector<Rational>{1, 2}, std::vector<Rational>{2}}), DimensionError);

  PlueckerCoordinates ones;
  for (const Arc& arc : polygon_arcs(5)) ones[arc] = 1;
  CHECK(verify_pluecker(ones, 5).size() == 5);

  PlueckerCoordinates four;
  for (const Arc& arc : polygon_arcs(4)) four[arc] = 1;
  four[Arc(1, 3)] = 2;
  CHECK(verify_pluecker(four, 4).empty());
  four[Arc(2, 4)] = 2;
  CHECK(verify_pluecker(four, 4).size() == 1);
}

TEST_CASE("random matrices satisfy the three-term relation") {
  Rng rng(43);
  for (int it = 0; it < 50; ++it) {
    const int n = testing::uniform_int(rng, 2, 8);
    PlaneMatrix a;
    for (auto& row : a)
      for (int i = 0; i < n; ++i) row.push_back(Rational(testing::uniform_int(rng, -9, 9), testing::uniform_int(rng, 1, 9)));
    for (auto& row : a)
      for (auto& x : row) x.canonicalize();
    try {
      CHECK(verify_pluecker(pluecker_from_matrix(a), n).empty());
    } catch (const DegenerateSubspace&) {
    }
  }
}

TEST_CASE("plane matrix parsing") {
  const auto a = parse_plane_matrix("1 1 1\n0 1 2\n");
  CHECK(a[1][2] == 2);
  CHECK_THROWS_AS(parse_plane_matrix("1 2\n3\n"), FormatError);
  CHECK_THROWS_AS(parse_plane_matrix("1 2\n"), FormatError);
}

TEST_CASE("Euclidean Ptolemy") {
  const auto square = verify_ptolemy_euclidean({Point2{0, 0}, Point2{1, 0}, Point2{1, 1}, Point2{0, 1}});
  CHECK(std::abs(square.residual) < 1e-12);
  CHECK(square.concyclic);
  std::array<Point2, 4> pent;
  for (int i = 0; i < 4; ++i) {
    const double th = 2 * std::numbers::pi * i / 5;
    pent[i] = {std::cos(th), std::sin(th)};
  }
  const auto rp = verify_ptolemy_euclidean(pent);
  CHECK(std::abs(rp.residual) < 1e-12);
  // Golden-ratio identity: side s, diagonal phi * s.
  const double s = std::hypot(pent[0].x - pent[1].x, pent[0].y - pent[1].y);
  const double d = std::hypot(pent[0].x - pent[2].x, pent[0].y - pent[2].y);
  CHECK(std::abs(d / s - std::numbers::phi) < 1e-12);
  const auto kite = verify_ptolemy_euclidean({Point2{0, 0}, Point2{1, 0}, Point2{1, 1}, Point2{0, 2}});
  CHECK(kite.residual > 1e-9);
  CHECK_FALSE(kite.concyclic);
  CHECK_THROWS_AS(verify_ptolemy_euclidean({Point2{0, 0}, Point2{0, 0}, Point2{1, 1}, Point2{0, 2}}), GeometryError);
}

TEST_CASE("lambda lengths") {
  CHECK(lambda_length(at(0, 1), at(1, 1)) == doctest::Approx(1.0));
  CHECK(lambda_length(DecoratedIdealPoint::infinity(1), at(0, 1)) == doctest::Approx(1.0));
  CHECK(lambda_length(at(0, 0.25), at(1, 0.25)) == doctest::Approx(4.0));  // disjoint horocycles
  CHECK(lambda_length(at(0, 4), at(1, 4)) < 1.0);                          // overlapping
  CHECK_THROWS_AS(lambda_length(at(1, 1), at(1, 2)), GeometryError);
  CHECK_THROWS_AS(lambda_length(at(1, -1), at(2, 1)), GeometryError);
  // Farey decoration
  CHECK(lambda_length(at(1.0 / 2, 1.0 / 4), at(2.0 / 3, 1.0 / 9)) == doctest::Approx(1.0));
  CHECK(lambda_length(at(1.0 / 3, 1.0 / 9), at(3.0 / 4, 1.0 / 16)) == doctest::Approx(5.0));
  Rng rng(47);
  for (int it = 0; it < 100; ++it) {
    const auto a = at(std::uniform_real_distribution<double>(-5, 5)(rng), std::uniform_real_distribution<double>(0.1, 3)(rng));
    const auto b = at(std::uniform_real_distribution<double>(-5, 5)(rng), std::uniform_real_distribution<double>(0.1, 3)(rng));
    const double c = std::uniform_real_distribution<double>(0.1, 10)(rng);
    CHECK(lambda_length(a, b) == doctest::Approx(lambda_length(b, a)).epsilon(1e-12));
    const auto a2 = at(*a.position, a.horo * c);
    CHECK(std::abs(lambda_length(a2, b) - lambda_length(a, b) / std::sqrt(c)) < 1e-12 * lambda_length(a, b));
  }
}

TEST_CASE("hyperbolic Ptolemy") {
  CHECK(std::abs(verify_ptolemy_hyperbolic({at(0, 1), at(1, 1), at(2, 1), DecoratedIdealPoint::infinity()})) < 1e-12);
  const double farey = verify_ptolemy_hyperbolic({at(0, 1), at(0.5, 0.25), at(1, 1), DecoratedIdealPoint::infinity()});
  CHECK(farey == 0.0);
  CHECK_THROWS_AS(verify_ptolemy_hyperbolic({at(0, 1), at(0, 1), at(2, 1), at(3, 1)}), GeometryError);
  CHECK_THROWS_AS(verify_ptolemy_hyperbolic({at(0, 1), at(2, 1), at(1, 1), at(3, 1)}), GeometryError);
  // Cyclic rotations through infinity are fine.
  CHECK(std::abs(verify_ptolemy_hyperbolic({at(2, 1), DecoratedIdealPoint::infinity(), at(0, 1), at(1, 1)})) < 1e-12);
}

TEST_CASE("realizing polygons") {
  const Triangulation tri(3, {});
  const auto p = realize_polygon(tri, unit_values(tri));
  CHECK(p.points[0].at_infinity());
  CHECK(p.points[0].horo == doctest::Approx(1.0));
  CHECK(*p.points[1].position == doctest::Approx(0.0));
  CHECK(p.points[1].horo == doctest::Approx(1.0));
  CHECK(*p.points[2].position == doctest::Approx(1.0));
  CHECK(p.points[2].horo == doctest::Approx(1.0));

  Rng rng(53);
  for (int it = 0; it < 40; ++it) {
    const int m = testing::uniform_int(rng, 3, 8);
    const Triangulation t = testing::random_triangulation(rng, m);
    EdgeValues vals;
    for (const Arc& s : polygon_sides(m)) vals[s] = testing::random_positive_rational(rng);
    for (const Arc& d : t.diagonals()) vals[d] = testing::random_positive_rational(rng);
    const auto poly = realize_polygon(t, vals);
    for (const auto& [arc, v] : vals) CHECK(std::abs(poly.lambda(arc.a, arc.b) - v.get_d()) < 1e-9 * std::max(1.0, v.get_d()));
    for (int i = 2; i < m; ++i) CHECK(*poly.points[i].position > *poly.points[i - 1].position);
    // Every other arc follows from Ptolemy.
    const auto full = ptolemy_propagate(t, vals);
    for (const auto& [arc, v] : lambda_table(poly))
      CHECK(std::abs(v - full.at(arc).get_d()) < 1e-9 * std::max(1.0, full.at(arc).get_d()));
  }
}

TEST_CASE("text formats") {
  const Triangulation t(6, {Arc(1, 3), Arc(1, 4), Arc(4, 6)});
  CHECK(parse_triangulation(to_text(t)) == t);
  CHECK(parse_triangulation(R"({"m":6,"diagonals":[[1,3],[1,4],[4,6]]})") == t);
  CHECK(triangulation_from_json(to_json(t)) == t);
  CHECK_THROWS_AS(parse_triangulation("6\n1\n"), FormatError);
  CHECK_THROWS_AS(parse_triangulation("six\n"), FormatError);
  EdgeValues v = ptolemy_propagate(t, unit_values(t));
  v[Arc(1, 2)] = Rational(3, 7);
  CHECK(edge_values_from_json(to_json(v)) == v);
  CHECK(to_json(v)["1-2"] == "3/7");
  CHECK(parse_arc("2-5") == Arc(2, 5));
  CHECK_THROWS_AS(parse_arc("2_5"), FormatError);

  const auto poly = realize_polygon(t, unit_values(t));
  const auto j = to_json(poly);
  CHECK(j[0][0] == "inf");
  CHECK(j[1][0] == "0");
  CHECK(format_decimal(1.0 / 3) == "0.333333333333");
}
