#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptolemy/laurent.hpp"
#include "ptolemy/quiver.hpp"

namespace ptolemy {

/// A quiver together with one cluster variable per vertex. Variables are
/// Laurent polynomials in the generators x1..xn of the initial seed; frozen
/// vertices keep their generator forever.
struct Seed {
  Quiver quiver;
  std::vector<LaurentPoly> vars;

  std::size_t size() const { return quiver.size(); }
  Seed permuted(const Permutation& sigma) const;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// vars[i] = x_{i+1}
Seed initial_seed(const Quiver& q);

/// Numerator of the exchange relation at k: the product over arrows into k
/// plus the product over arrows out of k (empty products are 1).
LaurentPoly exchange_numerator(const Seed& s, std::size_t k);

struct ExchangeLimits {
  /// Largest numerator (and intermediate product) in terms.
  std::size_t max_terms = 20000;
  /// Largest single product, counted as pairs of terms multiplied.
  std::size_t max_pairs = 20000000;
};

/// exchange_numerator, or nullopt as soon as building it would exceed the
/// limits. Meant for callers that must stay responsive on mutation-infinite
/// quivers, where variables grow without bound.
std::optional<LaurentPoly> exchange_numerator(const Seed& s, std::size_t k, const ExchangeLimits& limits);

/// Mutation at a mutable vertex. Throws InvalidVertex, or LaurentViolation
/// if the exchange relation does not divide exactly.
Seed mutate_seed(const Seed& s, std::size_t k);
/// Same, with exchange_numerator(s, k) supplied by the caller.
Seed mutate_seed(const Seed& s, std::size_t k, const LaurentPoly& numerator);

Seed apply_mutation_sequence(Seed s, std::span<const std::size_t> ks);

/// Lexicographically least sigma with quiver and variables matching under
/// sigma, or nullopt.
std::optional<Permutation> seed_equal_up_to_permutation(const Seed& a, const Seed& b);

struct CanonicalSeed {
  Seed seed;
  /// original.permuted(sigma) == seed
  Permutation sigma;
};

/// Canonical quiver first, then the least variable tuple among the
/// relabelings that realize it.
CanonicalSeed canonical_seed(const Seed& s);

/// Symbolic exchange relation with vertex names, e.g.
/// "x5' = (x1*x3 + x2*x4)/x5".
std::string describe_exchange(const Quiver& q, std::size_t k);

struct ExploreLimits {
  std::size_t max_nodes = 10000;
  std::size_t max_depth = 32;
};

struct ExchangeEdge {
  std::size_t from;
  std::size_t vertex;
  std::size_t to;

  friend bool operator==(const ExchangeEdge&, const ExchangeEdge&) = default;
};

struct ExchangeGraph {
  /// Canonical representatives in discovery order; node 0 is the start.
  std::vector<Seed> nodes;
  std::vector<std::size_t> depth;
  /// neighbors[u][k] is the node reached by mutating u at vertex k, or npos
  /// for frozen vertices and for mutations cut off by a limit.
  std::vector<std::vector<std::size_t>> neighbors;
  /// One entry per undirected edge, recorded from its lower endpoint.
  std::vector<ExchangeEdge> edges;
  /// Distinct cluster variables (mutable positions only), sorted.
  std::vector<LaurentPoly> variables;
  bool complete = false;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Breadth-first closure under mutation, deduplicating seeds up to
/// simultaneous relabeling. Frontier levels are expanded in parallel; the
/// result does not depend on scheduling.
ExchangeGraph explore_exchange_graph(const Seed& start, const ExploreLimits& limits = {});

// Seed text format: {"quiver": <quiver wire format>, "vars": ["x1", ...]}
nlohmann::json to_json(const Seed& s);
Seed seed_from_json(const nlohmann::json& j);
std::string to_text(const Seed& s);
Seed parse_seed(const std::string& text);

nlohmann::json to_json(const ExchangeGraph& g);
std::string to_dot(const ExchangeGraph& g);

}  // namespace ptolemy
