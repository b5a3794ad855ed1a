#pragma once

// Floating-point side of the polygon geometry: Euclidean Ptolemy checks and
// decorated ideal polygons in the upper half-plane.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptolemy/triangulation.hpp"

namespace ptolemy {

struct Point2 {
  double x = 0;
  double y = 0;
};

struct EuclideanPtolemy {
  /// AB*CD + BC*AD - AC*BD; never below zero up to rounding.
  double residual = 0;
  /// |residual| <= 1e-9
  bool concyclic = false;
};

/// Points A, B, C, D in order around a convex quadrilateral. Throws
/// GeometryError on coincident points.
EuclideanPtolemy verify_ptolemy_euclidean(const std::array<Point2, 4>& points);

/// Ideal boundary point of the upper half-plane with a horocycle. For a finite
/// position `horo` is the Euclidean diameter of the horocycle; for the point
/// at infinity (position == nullopt) it is the height of the horizontal line.
struct DecoratedIdealPoint {
  std::optional<double> position;
  double horo = 1.0;

  bool at_infinity() const { return !position.has_value(); }
  static DecoratedIdealPoint infinity(double height = 1.0) { return {std::nullopt, height}; }
};

/// e^{l/2} for the signed distance l between the two horocycles:
/// |x_a - x_b| / sqrt(d_a d_b) for finite points, sqrt(h / d) against infinity.
double lambda_length(const DecoratedIdealPoint& a, const DecoratedIdealPoint& b);

/// lambda_AB lambda_CD + lambda_BC lambda_DA - lambda_AC lambda_BD for four
/// points in cyclic order. Throws GeometryError on repeated points or when
/// the points are not in cyclic order.
double verify_ptolemy_hyperbolic(const std::array<DecoratedIdealPoint, 4>& quad);

/// Vertex i of the polygon is points[i - 1].
struct DecoratedIdealPolygon {
  std::vector<DecoratedIdealPoint> points;

  double lambda(int i, int j) const { return lambda_length(points.at(i - 1), points.at(j - 1)); }
};

/// Lambda lengths of every side and diagonal.
std::map<Arc, double> lambda_table(const DecoratedIdealPolygon& polygon);

/// Builds a decorated ideal polygon whose lambda lengths on the sides and on
/// t's diagonals equal the given positive values. Gauge: vertex 1 at infinity
/// with a height-1 horocycle, vertex 2 at 0; positions then increase with the
/// vertex label.
DecoratedIdealPolygon realize_polygon(const Triangulation& t, const EdgeValues& values);

/// [[position | "inf", horo], ...] with 12 significant digits.
nlohmann::json to_json(const DecoratedIdealPolygon& polygon);
std::string format_decimal(double v);

}  // namespace ptolemy
