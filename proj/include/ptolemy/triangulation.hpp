#pragma once

#include <array>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptolemy/laurent.hpp"
#include "ptolemy/quiver.hpp"

namespace ptolemy {

/// Side or diagonal {a, b} of a convex polygon whose vertices are labelled
/// 1..m clockwise. Always stored with a < b.
struct Arc {
  int a = 0;
  int b = 0;

  Arc() = default;
  Arc(int i, int j) : a(i < j ? i : j), b(i < j ? j : i) {}

  bool is_side(int m) const { return b - a == 1 || (a == 1 && b == m); }
  bool crosses(const Arc& o) const { return (a < o.a && o.a < b && b < o.b) || (o.a < a && a < o.b && o.b < b); }

  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// "i-j"
std::string to_string(const Arc& arc);
Arc parse_arc(const std::string& text);

/// The m boundary sides {i, i+1} for i = 1..m (the last one is {1, m}).
std::vector<Arc> polygon_sides(int m);
/// Every side and diagonal of the m-gon, sorted.
std::vector<Arc> polygon_arcs(int m);

class Triangulation {
 public:
  /// Throws InvalidDiagonal unless the diagonals form a triangulation of the m-gon.
  Triangulation(int m, std::vector<Arc> diagonals);

  /// Fan of diagonals {v, j} from one vertex.
  static Triangulation fan(int m, int v = 1);

  int m() const { return m_; }
  /// Sorted.
  const std::vector<Arc>& diagonals() const { return diagonals_; }
  bool contains(const Arc& d) const;
  /// True for sides of the polygon and diagonals of the triangulation.
  bool is_arc(int i, int j) const;
  /// The m - 2 triangles, each as increasing (clockwise) vertex labels.
  std::vector<std::array<int, 3>> triangles() const;

  friend bool operator==(const Triangulation&, const Triangulation&) = default;
  friend auto operator<=>(const Triangulation&, const Triangulation&) = default;

 private:
  int m_;
  std::vector<Arc> diagonals_;
};

/// Every triangulation of the labelled m-gon (Catalan(m - 2) of them), sorted.
std::vector<Triangulation> enumerate_triangulations(int m);

/// The quadrilateral around diagonal d: {d.a, c1, d.b, c2} in clockwise
/// order, where c1 lies between d.a and d.b.
std::array<int, 4> flip_quadrilateral(const Triangulation& t, const Arc& d);
/// The diagonal that replaces d under a flip.
Arc flipped_diagonal(const Triangulation& t, const Arc& d);
Triangulation flip(const Triangulation& t, const Arc& d);

struct ArcQuiver {
  Quiver quiver;
  /// arcs[v] is the arc behind quiver vertex v.
  std::vector<Arc> arcs;
};

/// One vertex per diagonal, followed by one frozen vertex per side when
/// include_boundary is set. Inside every triangle with clockwise vertices
/// p < q < r, arrows run pq -> qr -> rp -> pq; arrows between two frozen
/// vertices are dropped.
ArcQuiver quiver_from_triangulation(const Triangulation& t, bool include_boundary = false);

/// Same construction with a caller-chosen vertex order. Every arc must be a
/// side or a diagonal of t; sides become frozen vertices.
Quiver quiver_for_arcs(const Triangulation& t, const std::vector<Arc>& arcs);

/// Values on arcs of a polygon.
using EdgeValues = std::map<Arc, Rational>;

/// Given values on all sides and the diagonals of t, returns the values on
/// every arc obtained by repeated Ptolemy exchanges. Throws GeometryError if
/// an input value is missing or not positive.
EdgeValues ptolemy_propagate(const Triangulation& t, const EdgeValues& seed_values);

/// The Ptolemy exchange across diagonal d of the quadrilateral from
/// flip_quadrilateral: value of the flipped diagonal.
Rational ptolemy_exchange(const Triangulation& t, const Arc& d, const EdgeValues& values);

EdgeValues unit_values(const Triangulation& t);

// Text formats.
// Triangulation: "m" on the first line, then one "i j" pair per line.
std::string to_text(const Triangulation& t);
Triangulation parse_triangulation(const std::string& text);
nlohmann::json to_json(const Triangulation& t);
Triangulation triangulation_from_json(const nlohmann::json& j);
/// {"i-j": "p/q", ...}
nlohmann::json to_json(const EdgeValues& values);
EdgeValues edge_values_from_json(const nlohmann::json& j);

}  // namespace ptolemy
