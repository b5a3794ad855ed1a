#pragma once

// Conway–Coxeter frieze patterns of the m-gon.
//
// A frieze is stored by polygon arcs: entry(i, j) is the value on the arc
// {i, j}. Its grid has m - 1 rows; row r holds the arcs (i, i + r + 1), so
// rows 0 and m - 2 are the sides (all 1). Odd rows sit half a step to the
// right of even rows, and moving right one step is a clockwise rotation
// i -> i + 1. Every small diamond
//
//         b
//       a   d        a = entry(i, j),     d = entry(i + 1, j + 1)
//         c          b = entry(i + 1, j), c = entry(i, j + 1)
//
// satisfies ad - bc = 1, which is Ptolemy on the quadrilateral i, i+1, j, j+1.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ptolemy/hyperbolic.hpp"
#include "ptolemy/laurent.hpp"
#include "ptolemy/triangulation.hpp"

namespace ptolemy {

/// Staggered rows; odd rows are shifted right by half a step. Rows need not
/// cover exactly one period.
struct FriezeGrid {
  std::vector<std::vector<Rational>> rows;

  friend bool operator==(const FriezeGrid&, const FriezeGrid&) = default;
};

class Frieze {
 public:
  /// Values on every arc of the m-gon (sides included).
  Frieze(int m, const EdgeValues& values);

  /// Reads one period (columns 0..m-1) of a grid with m - 1 rows. The two
  /// readings of each arc (once as (i, j), once as (j, i)) are kept apart so
  /// symmetry can be checked rather than assumed.
  static Frieze from_grid(int m, const FriezeGrid& grid);

  int m() const { return m_; }
  /// Labels are taken mod m (1..m); requires i != j.
  const Rational& entry(int i, int j) const;

  /// Row r, column k holds entry(i, i + r + 1) with i = k + 1 - floor(r / 2).
  FriezeGrid to_grid(int width) const;
  FriezeGrid to_grid() const { return to_grid(m_); }

  /// Values keyed by arc (reads entry(a, b) with a < b).
  EdgeValues edge_values() const;
  /// entry(i, j) == entry(j, i) for every stored pair.
  bool symmetric() const;

  friend bool operator==(const Frieze&, const Frieze&) = default;

 private:
  Frieze() = default;
  int wrap(int i) const { return ((i - 1) % m_ + m_) % m_ + 1; }

  int m_ = 0;
  std::map<std::pair<int, int>, Rational> entries_;
};

/// All-ones on the sides and diagonals of t, extended by Ptolemy.
Frieze frieze_from_triangulation(const Triangulation& t);

/// entry(i - 1, i + 1) for i = 1..m.
std::vector<Rational> quiddity(const Frieze& f);

/// Triangles incident to each vertex 1..m.
std::vector<int> triangle_counts(const Triangulation& t);

struct DiamondViolation {
  /// Row and column of the left entry a of the diamond.
  std::size_t row;
  std::size_t column;
  Rational determinant;
};

struct FriezeCheckOptions {
  /// Shift under which the grid must repeat; 0 means rows + 1 (= m).
  std::size_t expected_period = 0;
};

struct FriezeReport {
  bool boundary_ok = false;
  bool diamond_ok = false;
  std::vector<DiamondViolation> violations;
  bool positive = false;
  bool integer = false;
  /// Smallest horizontal shift under which every row repeats within the grid
  /// width, or nullopt if none shorter than the width exists.
  std::optional<std::size_t> period;
  std::size_t expected_period = 0;
  /// Rows repeat under a shift by expected_period (vacuous when the grid is
  /// narrower than that shift).
  bool shift_invariant = false;
};

/// Throws FormatError on ragged grids or grids with fewer than two rows.
FriezeReport check_frieze(const FriezeGrid& grid, const FriezeCheckOptions& options = {});

/// Rebuilds the m - 1 rows of a frieze from its quiddity row alone (vertex
/// i + 1 at index i), using only the diamond rule; `width` columns in the same
/// layout as Frieze::to_grid. Independent of the Ptolemy propagation.
FriezeGrid frieze_by_diamond_rule(const std::vector<Rational>& quiddity_row, std::size_t width);

/// First triangulation (in enumeration order) whose diagonals all carry 1.
std::optional<Triangulation> is_unitary(const Frieze& f);

struct LambdaComparison {
  DecoratedIdealPolygon polygon;
  /// max over arcs |lambda - entry|
  double max_deviation = 0;
};

/// Realizes t with all-ones values and compares every lambda length with the
/// frieze built from t.
LambdaComparison frieze_entries_as_lambda(const Triangulation& t);

// Text format: m on the first line, then the rows, space separated, odd rows
// prefixed by one blank.
std::string to_text(int m, const FriezeGrid& grid);
/// Returns m and the grid. Throws FormatError.
std::pair<int, FriezeGrid> parse_frieze(const std::string& text);

nlohmann::json to_json(const FriezeGrid& grid);

}  // namespace ptolemy
