#include "ptolemy/pluecker.hpp"

#include <sstream>

#include "ptolemy/errors.hpp"

namespace ptolemy {

PlueckerCoordinates pluecker_from_matrix(const PlaneMatrix& a) {
  const std::size_t n = a[0].size();
  if (a[1].size() != n) throw DimensionError("plane matrix rows have different lengths");
  if (n < 2) throw DegenerateSubspace("a plane needs at least two columns");
  PlueckerCoordinates p;
  bool all_zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational minor = a[0][i] * a[1][j] - a[0][j] * a[1][i];
      all_zero = all_zero && minor == 0;
      p.emplace(Arc(static_cast<int>(i + 1), static_cast<int>(j + 1)), std::move(minor));
    }
  }
  if (all_zero) throw DegenerateSubspace("matrix has rank < 2");
  return p;
}

std::vector<PlueckerViolation> verify_pluecker(const PlueckerCoordinates& p, int n) {
  auto at = [&](int i, int j) -> const Rational& {
    auto it = p.find(Arc(i, j));
    if (it == p.end()) throw GeometryError("missing Pluecker coordinate p" + std::to_string(i) + std::to_string(j));
    return it->second;
  };
  std::vector<PlueckerViolation> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
          Rational lhs = at(i, k) * at(j, l);
          Rational rhs = at(i, j) * at(k, l) + at(i, l) * at(j, k);
          if (lhs != rhs) out.push_back({{i, j, k, l}, std::move(lhs), std::move(rhs)});
        }
  return out;
}

PlaneMatrix parse_plane_matrix(const std::string& text) {
  PlaneMatrix a;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    std::istringstream tokens(line);
    std::string tok;
    std::vector<Rational> values;
    while (tokens >> tok) values.push_back(parse_rational(tok));
    if (values.empty()) continue;
    if (row == 2) throw FormatError("plane matrix: more than two rows");
    a[row++] = std::move(values);
  }
  if (row != 2) throw FormatError("plane matrix: expected two rows");
  if (a[0].size() != a[1].size()) throw FormatError("plane matrix: ragged rows");
  return a;
}

}  // namespace ptolemy
