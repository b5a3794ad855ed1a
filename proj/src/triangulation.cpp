#include "ptolemy/triangulation.hpp"

#include <algorithm>
#include <sstream>

#include "ptolemy/errors.hpp"

namespace ptolemy {

std::string to_string(const Arc& arc) { return std::to_string(arc.a) + "-" + std::to_string(arc.b); }

Arc parse_arc(const std::string& text) {
  const auto dash = text.find('-');
  try {
    if (dash == std::string::npos) throw std::invalid_argument("no dash");
    std::size_t used = 0;
    const int i = std::stoi(text.substr(0, dash), &used);
    if (used != dash) throw std::invalid_argument("trailing");
    const std::string rest = text.substr(dash + 1);
    const int j = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("trailing");
    return Arc(i, j);
  } catch (const std::logic_error&) {
    throw FormatError("malformed arc key '" + text + "', expected \"i-j\"");
  }
}

std::vector<Arc> polygon_sides(int m) {
  std::vector<Arc> sides;
  for (int i = 1; i <= m; ++i) sides.emplace_back(i, i == m ? 1 : i + 1);
  return sides;
}

std::vector<Arc> polygon_arcs(int m) {
  std::vector<Arc> arcs;
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) arcs.emplace_back(i, j);
  return arcs;
}

// --- Triangulation ----------------------------------------------------------

Triangulation::Triangulation(int m, std::vector<Arc> diagonals) : m_(m), diagonals_(std::move(diagonals)) {
  if (m_ < 3) throw InvalidDiagonal("a polygon needs at least 3 vertices, got " + std::to_string(m_));
  std::sort(diagonals_.begin(), diagonals_.end());
  for (const Arc& d : diagonals_) {
    if (d.a < 1 || d.b > m_ || d.a == d.b) throw InvalidDiagonal("arc " + to_string(d) + " is not in the " + std::to_string(m_) + "-gon");
    if (d.is_side(m_)) throw InvalidDiagonal("arc " + to_string(d) + " is a side, not a diagonal");
  }
  if (std::adjacent_find(diagonals_.begin(), diagonals_.end()) != diagonals_.end()) {
    throw InvalidDiagonal("repeated diagonal");
  }
  if (static_cast<int>(diagonals_.size()) != m_ - 3) {
    throw InvalidDiagonal("a triangulation of the " + std::to_string(m_) + "-gon has " + std::to_string(m_ - 3) +
                          " diagonals, got " + std::to_string(diagonals_.size()));
  }
  for (std::size_t i = 0; i < diagonals_.size(); ++i) {
    for (std::size_t j = i + 1; j < diagonals_.size(); ++j) {
      if (diagonals_[i].crosses(diagonals_[j])) {
        throw InvalidDiagonal("diagonals " + to_string(diagonals_[i]) + " and " + to_string(diagonals_[j]) + " cross");
      }
    }
  }
}

Triangulation Triangulation::fan(int m, int v) {
  std::vector<Arc> d;
  for (int j = 1; j <= m; ++j) {
    Arc a(v, j);
    if (j != v && !a.is_side(m)) d.push_back(a);
  }
  return Triangulation(m, std::move(d));
}

bool Triangulation::contains(const Arc& d) const {
  return std::binary_search(diagonals_.begin(), diagonals_.end(), d);
}

bool Triangulation::is_arc(int i, int j) const {
  const Arc a(i, j);
  return a.is_side(m_) || contains(a);
}

std::vector<std::array<int, 3>> Triangulation::triangles() const {
  std::vector<std::array<int, 3>> out;
  for (int p = 1; p <= m_; ++p)
    for (int q = p + 1; q <= m_; ++q) {
      if (!is_arc(p, q)) continue;
      for (int r = q + 1; r <= m_; ++r) {
        if (is_arc(q, r) && is_arc(p, r)) out.push_back({p, q, r});
      }
    }
  return out;
}

namespace {

// Triangulations of the sub-polygon lo, lo+1, ..., hi (edge {lo, hi} present).
std::vector<std::vector<Arc>> triangulate_range(int lo, int hi) {
  if (hi - lo < 2) return {{}};
  std::vector<std::vector<Arc>> out;
  for (int k = lo + 1; k < hi; ++k) {
    const auto left = triangulate_range(lo, k);
    const auto right = triangulate_range(k, hi);
    for (const auto& l : left) {
      for (const auto& r : right) {
        std::vector<Arc> d = l;
        d.insert(d.end(), r.begin(), r.end());
        if (k - lo >= 2) d.emplace_back(lo, k);
        if (hi - k >= 2) d.emplace_back(k, hi);
        out.push_back(std::move(d));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Triangulation> enumerate_triangulations(int m) {
  if (m < 3) throw InvalidDiagonal("a polygon needs at least 3 vertices, got " + std::to_string(m));
  std::vector<Triangulation> out;
  for (auto& d : triangulate_range(1, m)) out.emplace_back(m, std::move(d));
  std::sort(out.begin(), out.end());
  return out;
}

std::array<int, 4> flip_quadrilateral(const Triangulation& t, const Arc& d) {
  if (!t.contains(d)) throw InvalidDiagonal("arc " + to_string(d) + " is not a diagonal of the triangulation");
  int inner = 0, outer = 0;
  for (int c = 1; c <= t.m(); ++c) {
    if (c == d.a || c == d.b || !t.is_arc(d.a, c) || !t.is_arc(c, d.b)) continue;
    (d.a < c && c < d.b ? inner : outer) = c;
  }
  return {d.a, inner, d.b, outer};
}

Arc flipped_diagonal(const Triangulation& t, const Arc& d) {
  const auto q = flip_quadrilateral(t, d);
  return Arc(q[1], q[3]);
}

Triangulation flip(const Triangulation& t, const Arc& d) {
  const Arc replacement = flipped_diagonal(t, d);
  std::vector<Arc> diagonals = t.diagonals();
  std::replace(diagonals.begin(), diagonals.end(), d, replacement);
  return Triangulation(t.m(), std::move(diagonals));
}

// --- Quivers ------------------------------------------------------------------

Quiver quiver_for_arcs(const Triangulation& t, const std::vector<Arc>& arcs) {
  std::map<Arc, std::size_t> vertex;
  for (std::size_t v = 0; v < arcs.size(); ++v) {
    if (!t.is_arc(arcs[v].a, arcs[v].b)) {
      throw InvalidDiagonal("arc " + to_string(arcs[v]) + " is not part of the triangulation");
    }
    vertex.emplace(arcs[v], v);
  }
  Quiver q(arcs.size());
  for (std::size_t v = 0; v < arcs.size(); ++v) {
    if (arcs[v].is_side(t.m())) q.set_frozen(v);
  }
  for (const auto& [p, r, s] : t.triangles()) {
    const std::array<Arc, 3> cycle{Arc(p, r), Arc(r, s), Arc(s, p)};
    for (int e = 0; e < 3; ++e) {
      auto from = vertex.find(cycle[e]);
      auto to = vertex.find(cycle[(e + 1) % 3]);
      if (from == vertex.end() || to == vertex.end()) continue;
      if (q.is_frozen(from->second) && q.is_frozen(to->second)) continue;
      q.set_arrows(from->second, to->second, q(from->second, to->second) + 1);
    }
  }
  return q;
}

ArcQuiver quiver_from_triangulation(const Triangulation& t, bool include_boundary) {
  std::vector<Arc> arcs = t.diagonals();
  if (include_boundary) {
    const auto sides = polygon_sides(t.m());
    arcs.insert(arcs.end(), sides.begin(), sides.end());
  }
  Quiver q = quiver_for_arcs(t, arcs);
  return {std::move(q), std::move(arcs)};
}

// --- Ptolemy propagation ------------------------------------------------------

namespace {

const Rational& value_at(const EdgeValues& values, const Arc& arc) {
  auto it = values.find(arc);
  if (it == values.end()) throw GeometryError("no value for arc " + to_string(arc));
  return it->second;
}

}  // namespace

Rational ptolemy_exchange(const Triangulation& t, const Arc& d, const EdgeValues& values) {
  const auto [a, c1, b, c2] = flip_quadrilateral(t, d);
  const Rational& diagonal = value_at(values, d);
  if (diagonal == 0) throw GeometryError("zero value on diagonal " + to_string(d));
  Rational r = (value_at(values, Arc(a, c1)) * value_at(values, Arc(b, c2)) +
                value_at(values, Arc(c1, b)) * value_at(values, Arc(c2, a))) /
               diagonal;
  return r;
}

EdgeValues ptolemy_propagate(const Triangulation& t, const EdgeValues& seed_values) {
  EdgeValues values;
  for (const Arc& side : polygon_sides(t.m())) values.emplace(side, value_at(seed_values, side));
  for (const Arc& d : t.diagonals()) values.emplace(d, value_at(seed_values, d));
  for (const auto& [arc, v] : seed_values) {
    if (!values.contains(arc)) throw GeometryError("value given for arc " + to_string(arc) + " outside the triangulation");
    if (v <= 0) throw GeometryError("value on arc " + to_string(arc) + " is not positive");
  }

  for (const Arc& target : polygon_arcs(t.m())) {
    if (values.contains(target)) continue;
    // Walk from target.a towards target.b, flipping the first crossed
    // diagonal each time; every flip yields a diagonal through target.a.
    Triangulation current = t;
    for (;;) {
      if (current.contains(target)) break;
      std::optional<Arc> next;
      for (const Arc& e : current.diagonals()) {
        if (!e.crosses(target)) continue;
        const auto quad = flip_quadrilateral(current, e);
        if (quad[1] == target.a || quad[3] == target.a) {
          next = e;
          break;
        }
      }
      if (!next) throw std::logic_error("ptolemy_propagate: no flippable diagonal towards " + to_string(target));
      const Arc created = flipped_diagonal(current, *next);
      if (!values.contains(created)) values.emplace(created, ptolemy_exchange(current, *next, values));
      current = flip(current, *next);
    }
  }
  return values;
}

EdgeValues unit_values(const Triangulation& t) {
  EdgeValues v;
  for (const Arc& s : polygon_sides(t.m())) v.emplace(s, 1);
  for (const Arc& d : t.diagonals()) v.emplace(d, 1);
  return v;
}

// --- Formats ------------------------------------------------------------------

std::string to_text(const Triangulation& t) {
  std::ostringstream out;
  out << t.m() << "\n";
  for (const Arc& d : t.diagonals()) out << d.a << " " << d.b << "\n";
  return out.str();
}

Triangulation parse_triangulation(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return triangulation_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("triangulation: ") + e.what());
    }
  }
  std::istringstream in(text);
  int m;
  if (!(in >> m)) throw FormatError("triangulation: expected polygon size on the first line");
  std::vector<Arc> diagonals;
  int i, j;
  while (in >> i) {
    if (!(in >> j)) throw FormatError("triangulation: diagonal with a single endpoint");
    diagonals.emplace_back(i, j);
  }
  if (!in.eof()) throw FormatError("triangulation: unexpected token");
  try {
    return Triangulation(m, std::move(diagonals));
  } catch (const InvalidDiagonal& e) {
    throw FormatError(std::string("triangulation: ") + e.what());
  }
}

nlohmann::json to_json(const Triangulation& t) {
  nlohmann::json d = nlohmann::json::array();
  for (const Arc& a : t.diagonals()) d.push_back({a.a, a.b});
  return {{"m", t.m()}, {"diagonals", d}};
}

Triangulation triangulation_from_json(const nlohmann::json& j) {
  try {
    std::vector<Arc> diagonals;
    for (const auto& d : j.at("diagonals")) diagonals.emplace_back(d.at(0).get<int>(), d.at(1).get<int>());
    return Triangulation(j.at("m").get<int>(), std::move(diagonals));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("triangulation: ") + e.what());
  } catch (const InvalidDiagonal& e) {
    throw FormatError(std::string("triangulation: ") + e.what());
  }
}

nlohmann::json to_json(const EdgeValues& values) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [arc, v] : values) j[to_string(arc)] = to_string(v);
  return j;
}

EdgeValues edge_values_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("edge values: expected an object keyed \"i-j\"");
  EdgeValues values;
  for (const auto& [key, v] : j.items()) {
    if (v.is_number_integer()) {
      values[parse_arc(key)] = Rational(v.get<long>());
    } else if (v.is_string()) {
      values[parse_arc(key)] = parse_rational(v.get<std::string>());
    } else {
      throw FormatError("edge values: value for " + key + " must be a rational string");
    }
  }
  return values;
}

}  // namespace ptolemy
