#pragma once

// Multivariate Laurent polynomials in x1..xn with unbounded integer
// coefficients. Terms are kept sorted in descending lexicographic order of
// their exponent vectors with no zero coefficients, so equal polynomials
// have identical term lists.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ptolemy {

using Integer = mpz_class;
using Rational = mpq_class;

std::string to_string(const Integer& v);
/// "p/q" in lowest terms, or just "p" when the denominator is 1.
std::string to_string(const Rational& v);
/// Accepts "p" or "p/q" (optionally signed). Throws FormatError.
Rational parse_rational(std::string_view text);

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t n) : exps_(n, 0) {}
  explicit Monomial(std::vector<int> exps) : exps_(std::move(exps)) {}

  /// x_{i+1}^power in n generators.
  static Monomial generator(std::size_t n, std::size_t i, int power = 1);

  std::size_t size() const { return exps_.size(); }
  int operator[](std::size_t i) const { return exps_[i]; }
  std::span<const int> exponents() const { return exps_; }
  bool is_one() const;

  Monomial operator*(const Monomial& other) const;
  Monomial operator/(const Monomial& other) const;
  /// True when every exponent is >= the matching exponent of `other`.
  bool divisible_by(const Monomial& other) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  std::vector<int> exps_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

class LaurentPoly {
 public:
  using Term = std::pair<Monomial, Integer>;

  /// The zero polynomial in n generators.
  explicit LaurentPoly(std::size_t n = 0) : n_(n) {}

  static LaurentPoly constant(std::size_t n, const Integer& c);
  /// x_{i+1}
  static LaurentPoly generator(std::size_t n, std::size_t i);
  static LaurentPoly monomial(const Monomial& m, const Integer& c = 1);
  /// Merges duplicate monomials and drops zero coefficients.
  static LaurentPoly from_terms(std::size_t n, std::vector<Term> terms);

  std::size_t generator_count() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  /// Componentwise minimum exponent over all terms (zero vector for 0).
  Monomial min_exponents() const;

  LaurentPoly operator-() const;
  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly pow(unsigned exponent) const;
  /// Multiplies every term by a monomial.
  LaurentPoly shifted(const Monomial& m) const;

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);
  /// Total order used for deterministic sorting of variables.
  friend std::strong_ordering operator<=>(const LaurentPoly& a, const LaurentPoly& b);

 private:
  std::size_t n_;
  std::vector<Term> terms_;
};

/// Exact quotient q with q*b == a, or nullopt when no Laurent polynomial with
/// integer coefficients satisfies that. Throws DivisionByZero for b == 0 and
/// DimensionError on mismatched generator counts.
std::optional<LaurentPoly> div_exact(const LaurentPoly& a, const LaurentPoly& b);

/// Exact value at a point with nonzero rational coordinates.
Rational evaluate(const LaurentPoly& p, std::span<const Rational> point);

/// Canonical text, e.g. "x1^2*x2^-1 - 3*x2 + 1". Zero prints as "0".
std::string to_string(const LaurentPoly& p);
/// Inverse of to_string. Generators must be x1..xn. Throws FormatError.
LaurentPoly parse_laurent(std::string_view text, std::size_t n);

}  // namespace ptolemy

template <>
struct std::hash<ptolemy::LaurentPoly> {
  std::size_t operator()(const ptolemy::LaurentPoly& p) const noexcept;
};
