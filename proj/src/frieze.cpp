#include "ptolemy/frieze.hpp"

#include <cmath>
#include <sstream>

#include "ptolemy/errors.hpp"

namespace ptolemy {

namespace {

long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
long mod(long a, long b) { return ((a % b) + b) % b; }

}  // namespace

Frieze::Frieze(int m, const EdgeValues& values) : m_(m) {
  if (m < 3) throw DimensionError("a frieze needs a polygon with at least 3 vertices");
  for (const Arc& arc : polygon_arcs(m)) {
    auto it = values.find(arc);
    if (it == values.end()) throw GeometryError("no value for arc " + to_string(arc));
    entries_[{arc.a, arc.b}] = it->second;
    entries_[{arc.b, arc.a}] = it->second;
  }
}

Frieze Frieze::from_grid(int m, const FriezeGrid& grid) {
  if (m < 3) throw FormatError("frieze: m must be at least 3");
  if (grid.rows.size() != static_cast<std::size_t>(m - 1))
    throw FormatError("frieze: expected " + std::to_string(m - 1) + " rows, got " + std::to_string(grid.rows.size()));
  Frieze f;
  f.m_ = m;
  for (int r = 0; r < m - 1; ++r) {
    const auto& row = grid.rows[r];
    if (row.size() < static_cast<std::size_t>(m))
      throw FormatError("frieze: row " + std::to_string(r) + " is shorter than one period");
    for (int k = 0; k < m; ++k) {
      const int i = static_cast<int>(k + 1 - floor_div(r, 2));
      f.entries_[{f.wrap(i), f.wrap(i + r + 1)}] = row[k];
    }
  }
  return f;
}

const Rational& Frieze::entry(int i, int j) const {
  auto it = entries_.find({wrap(i), wrap(j)});
  if (it == entries_.end()) throw InvalidVertex("frieze entry (" + std::to_string(i) + ", " + std::to_string(j) + ") does not exist");
  return it->second;
}

FriezeGrid Frieze::to_grid(int width) const {
  FriezeGrid g;
  g.rows.resize(m_ - 1);
  for (int r = 0; r < m_ - 1; ++r) {
    g.rows[r].reserve(width);
    for (int k = 0; k < width; ++k) {
      const int i = static_cast<int>(k + 1 - floor_div(r, 2));
      g.rows[r].push_back(entry(i, i + r + 1));
    }
  }
  return g;
}

EdgeValues Frieze::edge_values() const {
  EdgeValues out;
  for (const Arc& arc : polygon_arcs(m_)) out.emplace(arc, entry(arc.a, arc.b));
  return out;
}

bool Frieze::symmetric() const {
  for (const auto& [key, value] : entries_) {
    if (entry(key.second, key.first) != value) return false;
  }
  return true;
}

Frieze frieze_from_triangulation(const Triangulation& t) {
  return Frieze(t.m(), ptolemy_propagate(t, unit_values(t)));
}

std::vector<Rational> quiddity(const Frieze& f) {
  std::vector<Rational> q;
  for (int i = 1; i <= f.m(); ++i) q.push_back(f.entry(i - 1, i + 1));
  return q;
}

std::vector<int> triangle_counts(const Triangulation& t) {
  std::vector<int> counts(t.m(), 0);
  for (const auto& tri : t.triangles())
    for (int v : tri) ++counts[v - 1];
  return counts;
}

FriezeReport check_frieze(const FriezeGrid& grid, const FriezeCheckOptions& options) {
  const auto& rows = grid.rows;
  if (rows.size() < 2) throw FormatError("frieze: a grid needs at least two rows");
  const std::size_t width = rows[0].size();
  for (const auto& row : rows)
    if (row.size() != width) throw FormatError("frieze: ragged grid");
  if (width == 0) throw FormatError("frieze: empty rows");

  FriezeReport rep;
  auto all_ones = [](const std::vector<Rational>& row) {
    for (const auto& v : row)
      if (v != 1) return false;
    return true;
  };
  rep.boundary_ok = all_ones(rows.front()) && all_ones(rows.back());

  for (std::size_t r = 1; r + 1 < rows.size(); ++r) {
    const std::size_t p = r % 2;
    for (std::size_t k = 0; k + 1 < width && k + p < width; ++k) {
      Rational det = rows[r][k] * rows[r][k + 1] - rows[r - 1][k + p] * rows[r + 1][k + p];
      if (det != 1) rep.violations.push_back({r, k, std::move(det)});
    }
  }
  rep.diamond_ok = rep.violations.empty();

  rep.positive = true;
  rep.integer = true;
  for (const auto& row : rows)
    for (const auto& v : row) {
      rep.positive = rep.positive && v > 0;
      rep.integer = rep.integer && v.get_den() == 1;
    }

  auto repeats_under = [&](std::size_t s) {
    for (const auto& row : rows)
      for (std::size_t k = 0; k + s < width; ++k)
        if (row[k] != row[k + s]) return false;
    return true;
  };
  for (std::size_t s = 1; s < width; ++s) {
    if (repeats_under(s)) {
      rep.period = s;
      break;
    }
  }
  rep.expected_period = options.expected_period ? options.expected_period : rows.size() + 1;
  rep.shift_invariant = repeats_under(rep.expected_period);
  return rep;
}

FriezeGrid frieze_by_diamond_rule(const std::vector<Rational>& quiddity_row, std::size_t width) {
  const long m = static_cast<long>(quiddity_row.size());
  if (m < 3) throw DimensionError("quiddity row must have at least 3 entries");
  // f[r][i - lo] = entry(i, i + r + 1); row r + 1 needs rows r and r - 1 one
  // step further right, so start wide enough on both sides.
  const long lo = -m;
  const long hi = static_cast<long>(width) + 2 * m;
  std::vector<std::vector<Rational>> f(m - 1);
  f[0].assign(hi - lo + 1, Rational(1));
  for (long i = lo; i <= hi; ++i) f[1].push_back(quiddity_row[mod(i, m)]);
  for (long r = 1; r + 1 < m - 1; ++r) {
    const std::size_t len = f[r].size() - 1;
    for (std::size_t x = 0; x < len; ++x) {
      const Rational& b = f[r - 1][x + 1];
      if (b == 0) throw DivisionByZero("diamond rule divides by a zero entry");
      f[r + 1].push_back((f[r][x] * f[r][x + 1] - 1) / b);
    }
  }
  FriezeGrid g;
  g.rows.resize(m - 1);
  for (long r = 0; r < m - 1; ++r) {
    for (std::size_t k = 0; k < width; ++k) {
      const long i = static_cast<long>(k) + 1 - floor_div(r, 2);
      g.rows[r].push_back(f[r].at(i - lo));
    }
  }
  return g;
}

std::optional<Triangulation> is_unitary(const Frieze& f) {
  for (const Triangulation& t : enumerate_triangulations(f.m())) {
    bool ok = true;
    for (const Arc& d : t.diagonals()) {
      if (f.entry(d.a, d.b) != 1 || f.entry(d.b, d.a) != 1) {
        ok = false;
        break;
      }
    }
    if (ok) return t;
  }
  return std::nullopt;
}

LambdaComparison frieze_entries_as_lambda(const Triangulation& t) {
  const Frieze f = frieze_from_triangulation(t);
  LambdaComparison out{realize_polygon(t, unit_values(t)), 0.0};
  for (const auto& [arc, lambda] : lambda_table(out.polygon)) {
    out.max_deviation = std::max(out.max_deviation, std::abs(lambda - f.entry(arc.a, arc.b).get_d()));
  }
  return out;
}

std::string to_text(int m, const FriezeGrid& grid) {
  std::ostringstream out;
  out << m << '\n';
  for (std::size_t r = 0; r < grid.rows.size(); ++r) {
    if (r % 2 == 1) out << ' ';
    for (std::size_t k = 0; k < grid.rows[r].size(); ++k) {
      if (k) out << ' ';
      out << to_string(grid.rows[r][k]);
    }
    out << '\n';
  }
  return out.str();
}

std::pair<int, FriezeGrid> parse_frieze(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int m = 0;
  bool have_m = false;
  FriezeGrid grid;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream tokens(line);
    if (!have_m) {
      std::string tok, extra;
      tokens >> tok;
      if (tokens >> extra) throw FormatError("frieze: first line must hold m alone");
      try {
        std::size_t used = 0;
        m = std::stoi(tok, &used);
        if (used != tok.size()) throw FormatError("frieze: bad m '" + tok + "'");
      } catch (const std::logic_error&) {
        throw FormatError("frieze: bad m '" + tok + "'");
      }
      if (m < 3) throw FormatError("frieze: m must be at least 3");
      have_m = true;
      continue;
    }
    const bool staggered = line[0] == ' ';
    if (staggered != (grid.rows.size() % 2 == 1))
      throw FormatError("frieze: row " + std::to_string(grid.rows.size()) + " has the wrong stagger");
    std::vector<Rational> row;
    std::string tok;
    while (tokens >> tok) row.push_back(parse_rational(tok));
    grid.rows.push_back(std::move(row));
  }
  if (!have_m) throw FormatError("frieze: empty input");
  if (grid.rows.size() != static_cast<std::size_t>(m - 1))
    throw FormatError("frieze: expected " + std::to_string(m - 1) + " rows");
  for (const auto& row : grid.rows)
    if (row.size() != grid.rows[0].size()) throw FormatError("frieze: ragged grid");
  return {m, std::move(grid)};
}

nlohmann::json to_json(const FriezeGrid& grid) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : grid.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : row) r.push_back(to_string(v));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace ptolemy
