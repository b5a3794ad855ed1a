#pragma once

// Random generators shared by the unit tests and the acceptance suite.

#include <cstdint>
#include <random>
#include <vector>

#include "ptolemy/laurent.hpp"
#include "ptolemy/quiver.hpp"
#include "ptolemy/triangulation.hpp"

namespace ptolemy::testing {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// At most max_terms terms, exponents in [-e, e], coefficients in [-c, c].
inline LaurentPoly random_laurent(Rng& rng, std::size_t n, int max_terms = 6, int e = 3, int c = 9) {
  std::vector<LaurentPoly::Term> terms;
  const int count = uniform_int(rng, 0, max_terms);
  for (int t = 0; t < count; ++t) {
    std::vector<int> exps(n);
    for (auto& x : exps) x = uniform_int(rng, -e, e);
    terms.emplace_back(Monomial(std::move(exps)), Integer(uniform_int(rng, -c, c)));
  }
  return LaurentPoly::from_terms(n, std::move(terms));
}

inline LaurentPoly random_nonzero_laurent(Rng& rng, std::size_t n, int max_terms = 6, int e = 3, int c = 9) {
  for (;;) {
    LaurentPoly p = random_laurent(rng, n, max_terms, e, c);
    if (!p.is_zero()) return p;
  }
}

inline Rational random_nonzero_rational(Rng& rng, int bound = 9) {
  int num = 0;
  while (num == 0) num = uniform_int(rng, -bound, bound);
  Rational r(num, uniform_int(rng, 1, bound));
  r.canonicalize();
  return r;
}

inline Rational random_positive_rational(Rng& rng, int bound = 9) {
  Rational r(uniform_int(rng, 1, bound), uniform_int(rng, 1, bound));
  r.canonicalize();
  return r;
}

/// Skew-symmetric matrix with entries above the diagonal uniform in [-w, w].
inline Quiver random_quiver(Rng& rng, std::size_t n, int w) {
  Quiver q(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) q.set_arrows(i, j, uniform_int(rng, -w, w));
  return q;
}

inline std::int64_t max_abs_entry(const Quiver& q) {
  std::int64_t m = 0;
  for (auto e : q.entries()) m = std::max<std::int64_t>(m, e < 0 ? -e : e);
  return m;
}

/// Mutation sequence of the given length, each step uniform among the mutable
/// vertices whose mutation keeps every |b_ij| <= bound. Stops early if no
/// vertex qualifies (only possible at the first step).
inline std::vector<std::size_t> random_bounded_sequence(Rng& rng, Quiver q, std::size_t length, std::int64_t bound) {
  std::vector<std::size_t> ks;
  while (ks.size() < length) {
    std::vector<std::size_t> ok;
    std::vector<Quiver> next;
    for (std::size_t k : q.mutable_vertices()) {
      Quiver m = q.mutate(k);
      if (max_abs_entry(m) <= bound) {
        ok.push_back(k);
        next.push_back(std::move(m));
      }
    }
    if (ok.empty()) break;
    const auto pick = std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng);
    ks.push_back(ok[pick]);
    q = std::move(next[pick]);
  }
  return ks;
}

inline Triangulation random_triangulation(Rng& rng, int m) {
  const auto all = enumerate_triangulations(m);
  return all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
}

}  // namespace ptolemy::testing
