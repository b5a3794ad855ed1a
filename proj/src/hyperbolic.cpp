#include "ptolemy/hyperbolic.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>

#include "ptolemy/errors.hpp"

namespace ptolemy {

namespace {

double distance(const Point2& p, const Point2& q) { return std::hypot(p.x - q.x, p.y - q.y); }

double boundary_coordinate(const DecoratedIdealPoint& p) {
  return p.position ? *p.position : std::numeric_limits<double>::infinity();
}

}  // namespace

EuclideanPtolemy verify_ptolemy_euclidean(const std::array<Point2, 4>& pts) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (pts[i].x == pts[j].x && pts[i].y == pts[j].y) throw GeometryError("coincident points in quadrilateral");
  const auto& [a, b, c, d] = pts;
  EuclideanPtolemy r;
  r.residual = distance(a, b) * distance(c, d) + distance(b, c) * distance(a, d) - distance(a, c) * distance(b, d);
  r.concyclic = std::abs(r.residual) <= 1e-9;
  return r;
}

double lambda_length(const DecoratedIdealPoint& a, const DecoratedIdealPoint& b) {
  if (!(a.horo > 0) || !(b.horo > 0)) throw GeometryError("horocycle parameters must be positive");
  if (a.at_infinity() && b.at_infinity()) throw GeometryError("lambda length between identical boundary points");
  if (a.at_infinity()) return std::sqrt(a.horo / b.horo);
  if (b.at_infinity()) return std::sqrt(b.horo / a.horo);
  if (*a.position == *b.position) throw GeometryError("lambda length between identical boundary points");
  return std::abs(*a.position - *b.position) / std::sqrt(a.horo * b.horo);
}

double verify_ptolemy_hyperbolic(const std::array<DecoratedIdealPoint, 4>& q) {
  std::array<double, 4> x{};
  for (int i = 0; i < 4; ++i) x[i] = boundary_coordinate(q[i]);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (x[i] == x[j]) throw GeometryError("repeated boundary point in ideal quadrilateral");
  int descents = 0;
  for (int i = 0; i < 4; ++i) descents += x[i] > x[(i + 1) % 4] ? 1 : 0;
  if (descents != 1 && descents != 3) throw GeometryError("ideal quadrilateral vertices are not in cyclic order");
  const auto& [a, b, c, d] = q;
  return lambda_length(a, b) * lambda_length(c, d) + lambda_length(b, c) * lambda_length(d, a) -
         lambda_length(a, c) * lambda_length(b, d);
}

std::map<Arc, double> lambda_table(const DecoratedIdealPolygon& polygon) {
  std::map<Arc, double> out;
  const int m = static_cast<int>(polygon.points.size());
  for (const Arc& arc : polygon_arcs(m)) out.emplace(arc, polygon.lambda(arc.a, arc.b));
  return out;
}

DecoratedIdealPolygon realize_polygon(const Triangulation& t, const EdgeValues& values) {
  const int m = t.m();
  auto value = [&](int i, int j) {
    auto it = values.find(Arc(i, j));
    if (it == values.end()) throw GeometryError("no value for arc " + to_string(Arc(i, j)));
    if (it->second <= 0) throw GeometryError("value on arc " + to_string(Arc(i, j)) + " is not positive");
    return it->second.get_d();
  };
  for (const Arc& s : polygon_sides(m)) value(s.a, s.b);
  for (const Arc& d : t.diagonals()) value(d.a, d.b);

  DecoratedIdealPolygon poly;
  poly.points.resize(m);
  std::vector<char> placed(m + 1, 0);
  poly.points[0] = DecoratedIdealPoint::infinity(1.0);
  poly.points[1] = {0.0, 1.0 / (value(1, 2) * value(1, 2))};
  placed[1] = placed[2] = 1;

  // Solve the new vertex v of triangle {p, q, v} from lambda(p, v) and lambda(q, v).
  auto place = [&](int p, int q, int v) {
    if (q == 1) std::swap(p, q);
    DecoratedIdealPoint& out = poly.points[v - 1];
    if (p == 1) {
      const DecoratedIdealPoint& f = poly.points[q - 1];
      const double c = value(1, v);
      out.horo = poly.points[0].horo / (c * c);
      const double offset = value(q, v) * std::sqrt(f.horo * out.horo);
      out.position = *f.position + (v > q ? offset : -offset);
    } else {
      const int lo = std::min(p, q), hi = std::max(p, q);
      const DecoratedIdealPoint& L = poly.points[lo - 1];
      const DecoratedIdealPoint& H = poly.points[hi - 1];
      const double wl = value(lo, v) * std::sqrt(L.horo);
      const double wh = value(hi, v) * std::sqrt(H.horo);
      const double gap = *H.position - *L.position;
      double s;
      if (lo < v && v < hi) {
        s = gap / (wl + wh);
        out.position = *L.position + wl * s;
      } else if (v > hi) {
        s = gap / (wl - wh);
        out.position = *L.position + wl * s;
      } else {
        s = gap / (wh - wl);
        out.position = *L.position - wl * s;
      }
      if (!(s > 0) || !std::isfinite(s)) throw GeometryError("triangle cannot be developed on the embedding side");
      out.horo = s * s;
    }
    placed[v] = 1;
  };

  const auto triangles = t.triangles();
  std::vector<char> done(triangles.size(), 0);
  std::queue<std::size_t> pending;
  for (std::size_t i = 0; i < triangles.size(); ++i) {
    const auto& tri = triangles[i];
    if (tri[0] == 1 && tri[1] == 2) {
      place(1, 2, tri[2]);
      done[i] = 1;
      pending.push(i);
    }
  }
  while (!pending.empty()) {
    const auto tri = triangles[pending.front()];
    pending.pop();
    for (std::size_t i = 0; i < triangles.size(); ++i) {
      if (done[i]) continue;
      const auto& other = triangles[i];
      int shared = 0, fresh = 0;
      std::array<int, 2> edge{};
      for (int v : other) {
        if (v == tri[0] || v == tri[1] || v == tri[2]) {
          if (shared < 2) edge[shared] = v;
          ++shared;
        } else {
          fresh = v;
        }
      }
      if (shared != 2) continue;
      place(edge[0], edge[1], fresh);
      done[i] = 1;
      pending.push(i);
    }
  }
  for (int v = 1; v <= m; ++v) {
    if (!placed[v]) throw std::logic_error("realize_polygon: vertex " + std::to_string(v) + " was not reached");
  }
  return poly;
}

std::string format_decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

nlohmann::json to_json(const DecoratedIdealPolygon& polygon) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : polygon.points) {
    out.push_back({p.position ? nlohmann::json(format_decimal(*p.position)) : nlohmann::json("inf"),
                   format_decimal(p.horo)});
  }
  return out;
}

}  // namespace ptolemy
