#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ptolemy {

/// sigma[i] is the image of vertex i.
using Permutation = std::vector<std::size_t>;

Permutation identity_permutation(std::size_t n);
Permutation inverse(const Permutation& sigma);
/// (a∘b)(i) = a[b[i]]
Permutation compose(const Permutation& a, const Permutation& b);

/// Quiver without loops or 2-cycles, stored as its skew-symmetric exchange
/// matrix: b(i, j) > 0 counts arrows i -> j. Vertices are 0-based in the C++
/// API and 1-based in every text format.
class Quiver {
 public:
  Quiver() = default;
  explicit Quiver(std::size_t n);
  /// Validates skew-symmetry, zero diagonal and frozen indices
  /// (throws DimensionError / InvalidVertex).
  Quiver(std::vector<std::vector<std::int64_t>> b, const std::vector<std::size_t>& frozen = {});

  std::size_t size() const { return n_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return b_[i * n_ + j]; }
  /// Sets b(i, j) = count and b(j, i) = -count.
  void set_arrows(std::size_t i, std::size_t j, std::int64_t count);

  bool is_frozen(std::size_t v) const { return frozen_[v] != 0; }
  void set_frozen(std::size_t v, bool frozen = true);
  std::vector<std::size_t> frozen_vertices() const;
  std::vector<std::size_t> mutable_vertices() const;

  /// Throws InvalidVertex when k is out of range or frozen.
  Quiver mutate(std::size_t k) const;

  /// Relabels vertex i as sigma[i]: result(sigma[i], sigma[j]) == (*this)(i, j).
  Quiver permuted(const Permutation& sigma) const;

  /// Row-major entries; lexicographic comparison of this vector orders matrices.
  const std::vector<std::int64_t>& entries() const { return b_; }
  std::vector<std::vector<std::int64_t>> matrix() const;

  /// Equality that ignores arrows between two frozen vertices.
  bool equal_ignoring_frozen_block(const Quiver& other) const;

  friend bool operator==(const Quiver&, const Quiver&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> b_;
  std::vector<char> frozen_;
};

/// Lexicographically least sigma with a(i, j) == b(sigma[i], sigma[j]) for all
/// i, j and frozen vertices mapped to frozen vertices, or nullopt.
std::optional<Permutation> quiver_equal_up_to_permutation(const Quiver& a, const Quiver& b);

struct CanonicalQuiver {
  Quiver quiver;
  /// q.permuted(sigma) == quiver
  Permutation sigma;
};

/// Least row-major matrix over all relabelings of the mutable vertices, with
/// frozen vertices held in place. Brute force; meant for small mutable parts.
CanonicalQuiver canonical_form(const Quiver& q);

/// Every relabeling that attains the canonical matrix, in lexicographic order.
std::vector<Permutation> canonical_permutations(const Quiver& q);

// Wire format: {"n": int, "frozen": [1-based ints], "b": [[ints]]}
nlohmann::json to_json(const Quiver& q);
Quiver quiver_from_json(const nlohmann::json& j);
std::string to_text(const Quiver& q);
/// Throws FormatError on malformed text.
Quiver parse_quiver(const std::string& text);

/// Graphviz rendering: frozen vertices drawn as boxes, arrows with b > 1 labelled.
std::string to_dot(const Quiver& q, const std::string& name = "quiver");

}  // namespace ptolemy
