#pragma once

#include <array>
#include <string>
#include <vector>

#include "ptolemy/laurent.hpp"
#include "ptolemy/triangulation.hpp"

namespace ptolemy {

/// Two rows of equal length n spanning a plane in Q^n.
using PlaneMatrix = std::array<std::vector<Rational>, 2>;

/// p_ij for 1 <= i < j <= n, keyed by Arc{i, j}.
using PlueckerCoordinates = std::map<Arc, Rational>;

/// p_ij = a_1i a_2j - a_1j a_2i. Throws DimensionError on ragged rows and
/// DegenerateSubspace when the rows do not span a plane.
PlueckerCoordinates pluecker_from_matrix(const PlaneMatrix& a);

/// Quadruple i < j < k < l for which p_ik p_jl != p_ij p_kl + p_il p_jk.
struct PlueckerViolation {
  std::array<int, 4> indices;
  Rational lhs;
  Rational rhs;
};

/// Checks the three-term relation on every quadruple; empty means satisfied.
/// Throws GeometryError if a coordinate is missing.
std::vector<PlueckerViolation> verify_pluecker(const PlueckerCoordinates& p, int n);

/// Rows as whitespace separated rationals, one row per line.
PlaneMatrix parse_plane_matrix(const std::string& text);

}  // namespace ptolemy
