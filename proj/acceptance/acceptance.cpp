// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fixtures.hpp"
#include "ptolemy/errors.hpp"
#include "ptolemy/frieze.hpp"
#include "ptolemy/hyperbolic.hpp"
#include "ptolemy/pluecker.hpp"
#include "ptolemy/seed.hpp"
#include "ptolemy/triangulation.hpp"
#include "support.hpp"

using namespace ptolemy;
using testing::Rng;
using testing::uniform_int;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;

  // Records a failed expectation; keeps the first few messages.
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (ok || std::count(detail.begin(), detail.end(), ';') < 3) detail += (detail.empty() ? "" : "; ") + what;
    ok = false;
  }
};

struct Criterion {
  std::string name;
  double time_limit;  // seconds; 0 means none
  std::function<Outcome(Rng&)> run;
};

Quiver a2() {
  Quiver q(2);
  q.set_arrows(0, 1, 1);
  return q;
}

std::set<std::string> printed(const std::vector<LaurentPoly>& vs) {
  std::set<std::string> out;
  for (const auto& v : vs) out.insert(to_string(v));
  return out;
}

LaurentPoly quotient(const std::string& num, const std::string& den, std::size_t n) {
  auto q = div_exact(parse_laurent(num, n), parse_laurent(den, n));
  if (!q) throw std::logic_error("fixture quotient is not exact");
  return *q;
}

Outcome a2_exchange_graph(Rng&) {
  Outcome out;
  const auto g = explore_exchange_graph(initial_seed(a2()));
  out.expect(g.complete, "exploration incomplete");
  out.expect(g.nodes.size() == 5, "nodes=" + std::to_string(g.nodes.size()));
  out.expect(g.edges.size() == 5, "edges=" + std::to_string(g.edges.size()));
  // 2-regular and connected on 5 nodes means the 5-cycle
  bool regular = true;
  for (const auto& row : g.neighbors)
    regular = regular && row.size() == 2 && std::count(row.begin(), row.end(), ExchangeGraph::npos) == 0;
  out.expect(regular, "not 2-regular");
  std::set<std::size_t> reached{0};
  std::vector<std::size_t> stack{0};
  while (regular && !stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (auto v : g.neighbors[u])
      if (reached.insert(v).second) stack.push_back(v);
  }
  out.expect(reached.size() == 5, "not connected");
  const std::vector<LaurentPoly> expected{parse_laurent("x1", 2), parse_laurent("x2", 2), quotient("1 + x2", "x1", 2),
                                          quotient("1 + x1", "x2", 2), quotient("1 + x1 + x2", "x1*x2", 2)};
  out.expect(g.variables.size() == 5 && printed(g.variables) == printed(expected), "cluster variables differ");
  out.detail = out.ok ? "5 seeds, 5 edges, 5 variables" : out.detail;
  return out;
}

Outcome pentagon_recurrence(Rng&) {
  Outcome out;
  const Seed s0 = initial_seed(a2());
  const std::vector<std::size_t> five{0, 1, 0, 1, 0};
  const Seed s5 = apply_mutation_sequence(s0, five);
  const auto sigma = seed_equal_up_to_permutation(s0, s5);
  out.expect(sigma.has_value(), "[1,2,1,2,1] does not return to the initial seed up to permutation");
  out.expect(s5 != s0, "returned exactly after five steps (expected a relabeling)");
  // Five more steps at the relabeled vertices undo the relabeling.
  std::vector<std::size_t> next;
  if (sigma)
    for (auto k : five) next.push_back((*sigma)[k]);
  out.expect(sigma && apply_mutation_sequence(s5, next) == s0, "tracking the permutation does not return exactly");
  out.detail = out.ok ? "returns up to the swap (1 2)" : out.detail;
  return out;
}

Outcome five_vertex_exchange(Rng&) {
  Outcome out;
  // 1->5, 3->5, 5->2, 5->4, 2->1, 2->3, 4->1, 4->3
  Quiver q(5);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 5}, {3, 5}, {5, 2}, {5, 4}, {2, 1}, {2, 3}, {4, 1}, {4, 3}})
    q.set_arrows(i - 1, j - 1, 1);
  const Seed s = mutate_seed(initial_seed(q), 4);
  out.expect(s.vars[4] == quotient("x1*x3 + x2*x4", "x5", 5), "x5' = " + to_string(s.vars[4]));
  for (std::size_t i = 0; i < 4; ++i) out.expect(s.vars[i] == LaurentPoly::generator(5, i), "other variables changed");
  out.expect(describe_exchange(q, 4) == "x5' = (x1*x3 + x2*x4)/x5", describe_exchange(q, 4));
  out.detail = out.ok ? describe_exchange(q, 4) : out.detail;
  return out;
}

Outcome involution(Rng& rng) {
  Outcome out;
  std::size_t checks = 0;
  for (int it = 0; it < 1000; ++it) {
    const std::size_t n = uniform_int(rng, 1, 6);
    const Quiver q = testing::random_quiver(rng, n, 3);
    for (std::size_t k = 0; k < n; ++k, ++checks) out.expect(q.mutate(k).mutate(k) == q, "quiver " + to_text(q));
  }
  std::size_t seed_checks = 0;
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = uniform_int(rng, 1, 6);
    const Quiver q = testing::random_quiver(rng, n, 3);
    const auto ks = testing::random_bounded_sequence(rng, q, uniform_int(rng, 0, 3), 3);
    const Seed s = apply_mutation_sequence(initial_seed(q), ks);
    for (std::size_t k = 0; k < n; ++k, ++seed_checks)
      out.expect(mutate_seed(mutate_seed(s, k), k) == s, "seed " + to_text(s.quiver));
  }
  if (out.ok) out.detail = std::to_string(checks) + " quiver and " + std::to_string(seed_checks) + " seed involutions";
  return out;
}

// Cases whose exchange numerator would exceed these limits are abandoned and
// count as not completed.
const ExchangeLimits laurent_limits{20000, 20000000};

Outcome laurent_phenomenon(Rng& rng) {
  Outcome out;
  std::size_t completed = 0, abandoned = 0, violations = 0, mutations = 0, largest = 0;
  std::vector<std::string> abandoned_cases;
  for (int it = 0; it < 500; ++it) {
    const std::size_t n = uniform_int(rng, 2, 4);
    const Quiver q = testing::random_quiver(rng, n, 2);
    const auto ks = testing::random_bounded_sequence(rng, q, uniform_int(rng, 1, 12), 2);
    Seed s = initial_seed(q);
    bool done = true;
    try {
      for (std::size_t step = 0; step < ks.size(); ++step) {
        const auto numerator = exchange_numerator(s, ks[step], laurent_limits);
        if (!numerator) {
          done = false;
          std::string seq;
          for (auto k : ks) seq += (seq.empty() ? "" : ",") + std::to_string(k + 1);
          abandoned_cases.push_back(to_text(q) + " [" + seq + "] at step " + std::to_string(step + 1));
          break;
        }
        s = mutate_seed(s, ks[step], *numerator);
        ++mutations;
        for (const auto& v : s.vars) largest = std::max(largest, v.size());
      }
    } catch (const LaurentViolation& e) {
      ++violations;
      out.expect(false, std::string("LaurentViolation: ") + e.what());
      continue;
    }
    if (done) {
      ++completed;
    } else {
      ++abandoned;
    }
  }
  std::ostringstream d;
  d << completed << "/500 completed, " << mutations << " mutations, " << violations << " violations, largest variable "
    << largest << " terms";
  if (abandoned) {
    d << "; " << abandoned << " abandoned over the limits (" << laurent_limits.max_terms << " terms, "
      << laurent_limits.max_pairs << " term pairs per product), e.g. "
      << abandoned_cases.front();
    out.ok = false;
  }
  out.detail = out.ok ? d.str() : (violations ? out.detail + "; " : "") + d.str();
  return out;
}

Outcome flip_commutation(Rng&) {
  Outcome out;
  std::size_t checks = 0;
  for (bool boundary : {false, true}) {
    for (const Triangulation& t : enumerate_triangulations(6)) {
      const ArcQuiver aq = quiver_from_triangulation(t, boundary);
      for (std::size_t v = 0; v < aq.arcs.size(); ++v) {
        if (aq.quiver.is_frozen(v)) continue;
        const Triangulation t2 = flip(t, aq.arcs[v]);
        std::vector<Arc> arcs = aq.arcs;
        arcs[v] = flipped_diagonal(t, aq.arcs[v]);
        const Quiver expected = quiver_for_arcs(t2, arcs);
        out.expect(aq.quiver.mutate(v).equal_ignoring_frozen_block(expected),
                   "flip of " + to_string(aq.arcs[v]) + " in " + to_json(t).dump());
        ++checks;
      }
    }
  }
  if (out.ok) out.detail = "14 triangulations, " + std::to_string(checks) + " flips (with and without sides)";
  return out;
}

Outcome a3_count(Rng&) {
  Outcome out;
  Quiver q(3);
  q.set_arrows(0, 1, 1);
  q.set_arrows(1, 2, 1);
  const auto g = explore_exchange_graph(initial_seed(q));
  const std::size_t hexagon = enumerate_triangulations(6).size();
  out.expect(g.complete, "exploration incomplete");
  out.expect(g.nodes.size() == 14 && g.nodes.size() == hexagon,
             "seeds=" + std::to_string(g.nodes.size()) + " triangulations=" + std::to_string(hexagon));
  if (out.ok) out.detail = "14 seeds = 14 hexagon triangulations";
  return out;
}

Outcome conway_coxeter(Rng&) {
  Outcome out;
  std::size_t friezes = 0;
  for (int m = 5; m <= 9; ++m) {
    for (const Triangulation& t : enumerate_triangulations(m)) {
      const auto rep = check_frieze(frieze_from_triangulation(t).to_grid(3 * m), {static_cast<std::size_t>(m)});
      const bool ok = rep.boundary_ok && rep.diamond_ok && rep.positive && rep.integer && rep.shift_invariant;
      out.expect(ok, "m=" + std::to_string(m) + " " + to_json(t).dump());
      ++friezes;
    }
  }
  if (out.ok) out.detail = std::to_string(friezes) + " friezes, m=5..9";
  return out;
}

// The octagon triangulation whose triangle counts reproduce the fixture's
// quiddity row.
std::optional<Triangulation> octagon_triangulation() {
  for (const Triangulation& t : enumerate_triangulations(8))
    if (triangle_counts(t) == testing::octagon_quiddity()) return t;
  return std::nullopt;
}

Outcome octagon_figure(Rng&) {
  Outcome out;
  const auto t = octagon_triangulation();
  out.expect(t.has_value(), "no triangulation has the fixture's quiddity");
  if (!t) return out;
  const auto fixture = testing::octagon_frieze_grid();
  const Frieze f = frieze_from_triangulation(*t);
  const auto shift = testing::matching_shift(fixture, f.to_grid(8 + 9), 8);
  out.expect(shift.has_value(), "generated frieze does not match the fixture grid");
  bool eleven = false;
  for (const auto& row : f.to_grid().rows) eleven = eleven || std::count(row.begin(), row.end(), Rational(11)) > 0;
  out.expect(eleven, "no entry 11");
  const auto cert = is_unitary(f);
  out.expect(cert.has_value(), "is_unitary found no certificate");
  if (out.ok) {
    std::string diags;
    for (const Arc& d : t->diagonals()) diags += (diags.empty() ? "" : " ") + to_string(d);
    out.detail = "triangulation " + diags + ", shift " + std::to_string(*shift);
  }
  return out;
}

// Zero one time in five.
Rational random_rational(Rng& rng) {
  return uniform_int(rng, 0, 4) == 0 ? Rational(0) : testing::random_nonzero_rational(rng, 9);
}

Outcome pluecker_suite(Rng& rng) {
  Outcome out;
  std::size_t generic = 0, positive = 0;
  for (int it = 0; it < 200; ++it) {
    const int n = uniform_int(rng, 4, 8);
    // Generic rank-2 matrix: signs arbitrary, zero entries allowed.
    PlaneMatrix a;
    for (;;) {
      a = {std::vector<Rational>(n), std::vector<Rational>(n)};
      for (auto& row : a)
        for (auto& v : row) v = random_rational(rng);
      try {
        const auto p = pluecker_from_matrix(a);
        out.expect(verify_pluecker(p, n).empty(), "violation on a generic matrix");
        ++generic;
        break;
      } catch (const DegenerateSubspace&) {
      }
    }
    // Positive points of the Grassmannian: columns (c_i, c_i s_i) with c_i > 0
    // and s_1 < ... < s_n, so p_ij = c_i c_j (s_j - s_i) > 0 for i < j.
    std::vector<Rational> s;
    Rational acc = testing::random_nonzero_rational(rng);
    for (int i = 0; i < n; ++i) {
      acc += testing::random_positive_rational(rng);
      s.push_back(acc);
    }
    PlaneMatrix b{std::vector<Rational>(n), std::vector<Rational>(n)};
    for (int i = 0; i < n; ++i) {
      b[0][i] = testing::random_positive_rational(rng);
      b[1][i] = b[0][i] * s[i];
    }
    const auto p = pluecker_from_matrix(b);
    out.expect(verify_pluecker(p, n).empty(), "violation on a positive matrix");
    const Triangulation t = testing::random_triangulation(rng, n);
    EdgeValues seed_values;
    for (const Arc& side : polygon_sides(n)) seed_values[side] = p.at(side);
    for (const Arc& d : t.diagonals()) seed_values[d] = p.at(d);
    const EdgeValues all = ptolemy_propagate(t, seed_values);
    bool same = all.size() == p.size();
    for (const auto& [arc, v] : p) same = same && all.count(arc) && all.at(arc) == v;
    out.expect(same, "propagation from " + to_json(t).dump() + " does not reproduce the determinants");
    ++positive;
  }
  if (out.ok)
    out.detail = std::to_string(generic) + " generic matrices verified, " + std::to_string(positive) +
                 " positive matrices reconstructed from a triangulation";
  return out;
}

Outcome hyperbolic_suite(Rng& rng) {
  Outcome out;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return std::exp(std::log(lo) + unit(rng) * (std::log(hi) - std::log(lo))); };

  // (a) Farey decoration: p/q with horocycle diameter 1/q^2, infinity = 1/0
  // with height 1.
  double farey_err = 0;
  for (int it = 0; it < 100; ++it) {
    auto draw = [&]() {
      for (;;) {
        const long q = uniform_int(rng, 0, 12);
        const long p = q == 0 ? 1 : uniform_int(rng, -30, 30);
        if (std::gcd(p, q) == 1) return std::pair<long, long>{p, q};
      }
    };
    auto [p, q] = draw();
    auto [r, s] = draw();
    if (p * s == r * q) {
      --it;
      continue;
    }
    auto point = [](long num, long den) {
      return den == 0 ? DecoratedIdealPoint::infinity(1.0)
                      : DecoratedIdealPoint{static_cast<double>(num) / den, 1.0 / (static_cast<double>(den) * den)};
    };
    const double lambda = lambda_length(point(p, q), point(r, s));
    farey_err = std::max(farey_err, std::abs(lambda - std::abs(static_cast<double>(p * s - r * q))));
  }
  out.expect(farey_err < 1e-9, "Farey error " + format_decimal(farey_err));

  // (b) random decorated quadruples in cyclic order
  double ptolemy_err = 0;
  for (int it = 0; it < 500; ++it) {
    std::vector<double> xs(4);
    for (auto& x : xs) x = unit(rng) * 20 - 10;
    std::sort(xs.begin(), xs.end());
    std::array<DecoratedIdealPoint, 4> quad;
    for (int i = 0; i < 4; ++i) quad[i] = {xs[i], log_uniform(0.05, 20)};
    if (uniform_int(rng, 0, 3) == 0) quad[3] = DecoratedIdealPoint::infinity(log_uniform(0.05, 20));
    std::rotate(quad.begin(), quad.begin() + uniform_int(rng, 0, 3), quad.end());
    if (uniform_int(rng, 0, 1)) std::reverse(quad.begin(), quad.end());
    ptolemy_err = std::max(ptolemy_err, std::abs(verify_ptolemy_hyperbolic(quad)));
  }
  out.expect(ptolemy_err < 1e-9, "Ptolemy residual " + format_decimal(ptolemy_err));

  // (c) realization round trip
  double round_trip_err = 0;
  for (int it = 0; it < 200; ++it) {
    const Triangulation t = testing::random_triangulation(rng, uniform_int(rng, 3, 8));
    EdgeValues v;
    for (const Arc& side : polygon_sides(t.m())) v[side] = testing::random_positive_rational(rng);
    for (const Arc& d : t.diagonals()) v[d] = testing::random_positive_rational(rng);
    const auto poly = realize_polygon(t, v);
    for (const auto& [arc, value] : v)
      round_trip_err = std::max(round_trip_err, std::abs(poly.lambda(arc.a, arc.b) - value.get_d()));
  }
  out.expect(round_trip_err < 1e-9, "round trip error " + format_decimal(round_trip_err));

  // (d) the all-ones octagon against the fixture grid, up to rotation
  double octagon_err = std::numeric_limits<double>::infinity();
  if (const auto t = octagon_triangulation()) {
    const auto table = lambda_table(realize_polygon(*t, unit_values(*t)));
    const Frieze fixture = Frieze::from_grid(8, testing::octagon_frieze_grid());
    for (int rot = 0; rot < 8; ++rot) {
      double err = 0;
      for (const auto& [arc, lambda] : table)
        err = std::max(err, std::abs(lambda - fixture.entry(arc.a + rot, arc.b + rot).get_d()));
      octagon_err = std::min(octagon_err, err);
    }
  }
  out.expect(octagon_err < 1e-8, "octagon error " + format_decimal(octagon_err));

  if (out.ok)
    out.detail = "farey " + format_decimal(farey_err) + ", quadruples " + format_decimal(ptolemy_err) + ", round trip " +
                 format_decimal(round_trip_err) + ", octagon " + format_decimal(octagon_err);
  return out;
}

bool convex_in_order(const std::array<Point2, 4>& p) {
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const Point2 &a = p[i], &b = p[(i + 1) % 4], &c = p[(i + 2) % 4];
    const double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (std::abs(cross) < 1e-6) return false;
    const int s = cross > 0 ? 1 : -1;
    if (sign && s != sign) return false;
    sign = s;
  }
  return true;
}

Outcome euclidean_suite(Rng& rng) {
  Outcome out;
  const double square = verify_ptolemy_euclidean({Point2{0, 0}, {1, 0}, {1, 1}, {0, 1}}).residual;
  out.expect(std::abs(square) < 1e-12, "square residual " + format_decimal(square));
  std::array<Point2, 4> pentagon;
  for (int i = 0; i < 4; ++i) {
    const double a = 2 * std::numbers::pi * i / 5;
    pentagon[i] = {std::cos(a), std::sin(a)};
  }
  const double penta = verify_ptolemy_euclidean(pentagon).residual;
  out.expect(std::abs(penta) < 1e-12, "pentagon residual " + format_decimal(penta));
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 1000;) {
    std::array<Point2, 4> q;
    for (auto& p : q) p = {coord(rng), coord(rng)};
    // order the points by angle around their centroid
    const double cx = (q[0].x + q[1].x + q[2].x + q[3].x) / 4, cy = (q[0].y + q[1].y + q[2].y + q[3].y) / 4;
    std::sort(q.begin(), q.end(), [&](const Point2& a, const Point2& b) {
      return std::atan2(a.y - cy, a.x - cx) < std::atan2(b.y - cy, b.x - cx);
    });
    if (!convex_in_order(q)) continue;
    worst = std::min(worst, verify_ptolemy_euclidean(q).residual);
    ++it;
  }
  out.expect(worst >= -1e-9, "inequality residual " + format_decimal(worst));
  if (out.ok)
    out.detail = "square " + format_decimal(square) + ", pentagon " + format_decimal(penta) +
                 ", min residual over 1000 quadrilaterals " + format_decimal(worst);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runs the acceptance criteria and prints one PASS/FAIL line each"};
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for the randomized criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {"a2-exchange-graph", 1, a2_exchange_graph},
      {"pentagon-recurrence", 1, pentagon_recurrence},
      {"five-vertex-exchange", 0, five_vertex_exchange},
      {"involution", 0, involution},
      {"laurent-phenomenon", 120, laurent_phenomenon},
      {"flip-mutation-commutation", 0, flip_commutation},
      {"a3-count", 10, a3_count},
      {"conway-coxeter", 60, conway_coxeter},
      {"octagon-frieze", 0, octagon_figure},
      {"pluecker", 0, pluecker_suite},
      {"hyperbolic", 0, hyperbolic_suite},
      {"euclidean-ptolemy", 0, euclidean_suite},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    Rng rng(seed * 1000003 + i);
    const auto start = Clock::now();
    Outcome out;
    try {
      out = c.run(rng);
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    if (c.time_limit > 0 && elapsed >= c.time_limit) {
      out.ok = false;
      out.detail += "; exceeded " + format_decimal(c.time_limit) + " s";
    }
    std::ostringstream t;
    t.setf(std::ios::fixed);
    t.precision(2);
    t << elapsed;
    std::cout << (out.ok ? "PASS " : "FAIL ") << c.name << " (" << t.str() << " s): " << out.detail << std::endl;
    failures += out.ok ? 0 : 1;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures ? 1 : 0;
}
