#include "ptolemy/quiver.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ptolemy/errors.hpp"

namespace ptolemy {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("quiver arrow count overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("quiver arrow count overflow");
  return r;
}

}  // namespace

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

Permutation inverse(const Permutation& sigma) {
  Permutation inv(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) inv[sigma[i]] = i;
  return inv;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = a[b[i]];
  return r;
}

Quiver::Quiver(std::size_t n) : n_(n), b_(n * n, 0), frozen_(n, 0) {}

Quiver::Quiver(std::vector<std::vector<std::int64_t>> b, const std::vector<std::size_t>& frozen)
    : Quiver(b.size()) {
  for (std::size_t i = 0; i < n_; ++i) {
    if (b[i].size() != n_) throw DimensionError("exchange matrix is not square");
    for (std::size_t j = 0; j < n_; ++j) b_[i * n_ + j] = b[i][j];
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0) throw DimensionError("loop at vertex " + std::to_string(i + 1));
    for (std::size_t j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) != -(*this)(j, i)) {
        throw DimensionError("exchange matrix is not skew-symmetric at (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ")");
      }
    }
  }
  for (std::size_t v : frozen) set_frozen(v);
}

void Quiver::set_arrows(std::size_t i, std::size_t j, std::int64_t count) {
  if (i >= n_ || j >= n_) throw InvalidVertex("vertex out of range");
  if (i == j && count != 0) throw DimensionError("quivers have no loops");
  b_[i * n_ + j] = count;
  b_[j * n_ + i] = -count;
}

void Quiver::set_frozen(std::size_t v, bool frozen) {
  if (v >= n_) throw InvalidVertex("frozen vertex " + std::to_string(v + 1) + " out of range");
  frozen_[v] = frozen ? 1 : 0;
}

std::vector<std::size_t> Quiver::frozen_vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < n_; ++v)
    if (frozen_[v]) out.push_back(v);
  return out;
}

std::vector<std::size_t> Quiver::mutable_vertices() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < n_; ++v)
    if (!frozen_[v]) out.push_back(v);
  return out;
}

Quiver Quiver::mutate(std::size_t k) const {
  if (k >= n_) throw InvalidVertex("vertex " + std::to_string(k + 1) + " out of range 1.." + std::to_string(n_));
  if (frozen_[k]) throw InvalidVertex("vertex " + std::to_string(k + 1) + " is frozen");
  Quiver r(*this);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i == k || j == k) {
        r.b_[i * n_ + j] = -b_[i * n_ + j];
        continue;
      }
      // (|b_ik| b_kj + b_ik |b_kj|) / 2 is nonzero only for a path i -> k -> j
      // (or its reverse), where it equals +-b_ik * b_kj.
      const std::int64_t bik = (*this)(i, k), bkj = (*this)(k, j);
      if (bik > 0 && bkj > 0) {
        r.b_[i * n_ + j] = checked_add(b_[i * n_ + j], checked_mul(bik, bkj));
      } else if (bik < 0 && bkj < 0) {
        r.b_[i * n_ + j] = checked_add(b_[i * n_ + j], -checked_mul(bik, bkj));
      }
    }
  }
  return r;
}

Quiver Quiver::permuted(const Permutation& sigma) const {
  if (sigma.size() != n_) throw DimensionError("permutation size does not match quiver");
  Quiver r(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    r.frozen_[sigma[i]] = frozen_[i];
    for (std::size_t j = 0; j < n_; ++j) r.b_[sigma[i] * n_ + sigma[j]] = b_[i * n_ + j];
  }
  return r;
}

std::vector<std::vector<std::int64_t>> Quiver::matrix() const {
  std::vector<std::vector<std::int64_t>> m(n_, std::vector<std::int64_t>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m[i][j] = (*this)(i, j);
  return m;
}

bool Quiver::equal_ignoring_frozen_block(const Quiver& other) const {
  if (n_ != other.n_ || frozen_ != other.frozen_) return false;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (frozen_[i] && frozen_[j]) continue;
      if ((*this)(i, j) != other(i, j)) return false;
    }
  }
  return true;
}

// --- Isomorphism ------------------------------------------------------------

namespace {

bool extend_isomorphism(const Quiver& a, const Quiver& b, std::size_t depth, Permutation& sigma,
                        std::vector<char>& used) {
  const std::size_t n = a.size();
  if (depth == n) return true;
  for (std::size_t cand = 0; cand < n; ++cand) {
    if (used[cand] || a.is_frozen(depth) != b.is_frozen(cand)) continue;
    bool ok = true;
    for (std::size_t u = 0; u < depth && ok; ++u) {
      ok = a(depth, u) == b(cand, sigma[u]) && a(u, depth) == b(sigma[u], cand);
    }
    if (!ok) continue;
    sigma[depth] = cand;
    used[cand] = 1;
    if (extend_isomorphism(a, b, depth + 1, sigma, used)) return true;
    used[cand] = 0;
  }
  return false;
}

}  // namespace

std::optional<Permutation> quiver_equal_up_to_permutation(const Quiver& a, const Quiver& b) {
  if (a.size() != b.size()) return std::nullopt;
  Permutation sigma(a.size());
  std::vector<char> used(a.size(), 0);
  if (!extend_isomorphism(a, b, 0, sigma, used)) return std::nullopt;
  return sigma;
}

std::vector<Permutation> canonical_permutations(const Quiver& q) {
  const std::size_t n = q.size();
  const std::vector<std::size_t> movable = q.mutable_vertices();

  // tau maps a position of the candidate matrix to the original vertex shown there.
  Permutation tau = identity_permutation(n);
  std::vector<std::size_t> order = movable;
  std::vector<std::int64_t> best;
  std::vector<Permutation> winners;

  do {
    for (std::size_t p = 0; p < movable.size(); ++p) tau[movable[p]] = order[p];
    int cmp = best.empty() ? -1 : 0;
    for (std::size_t i = 0; i < n && cmp == 0; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::int64_t v = q(tau[i], tau[j]);
        const std::int64_t w = best[i * n + j];
        if (v != w) {
          cmp = v < w ? -1 : 1;
          break;
        }
      }
    }
    if (cmp < 0) {
      best.assign(n * n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) best[i * n + j] = q(tau[i], tau[j]);
      winners.clear();
    }
    if (cmp <= 0) winners.push_back(inverse(tau));
  } while (std::next_permutation(order.begin(), order.end()));

  std::sort(winners.begin(), winners.end());
  return winners;
}

CanonicalQuiver canonical_form(const Quiver& q) {
  Permutation sigma = canonical_permutations(q).front();
  return {q.permuted(sigma), std::move(sigma)};
}

// --- Formats ----------------------------------------------------------------

nlohmann::json to_json(const Quiver& q) {
  nlohmann::json frozen = nlohmann::json::array();
  for (std::size_t v : q.frozen_vertices()) frozen.push_back(v + 1);
  return {{"n", q.size()}, {"frozen", frozen}, {"b", q.matrix()}};
}

Quiver quiver_from_json(const nlohmann::json& j) {
  try {
    const std::size_t n = j.at("n").get<std::size_t>();
    auto b = j.at("b").get<std::vector<std::vector<std::int64_t>>>();
    if (b.size() != n) throw FormatError("quiver: \"b\" has " + std::to_string(b.size()) + " rows, n is " + std::to_string(n));
    std::vector<std::size_t> frozen;
    if (j.contains("frozen")) {
      for (auto v : j.at("frozen").get<std::vector<long long>>()) {
        if (v < 1 || static_cast<std::size_t>(v) > n) throw FormatError("quiver: frozen vertex out of range");
        frozen.push_back(static_cast<std::size_t>(v - 1));
      }
    }
    return Quiver(std::move(b), frozen);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("quiver: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("quiver: ") + e.what());
  }
}

std::string to_text(const Quiver& q) { return to_json(q).dump(); }

Quiver parse_quiver(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("quiver: ") + e.what());
  }
  return quiver_from_json(j);
}

std::string to_dot(const Quiver& q, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << name << " {\n";
  for (std::size_t v = 0; v < q.size(); ++v) {
    out << "  " << v + 1 << " [shape=" << (q.is_frozen(v) ? "box" : "circle") << "];\n";
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      const std::int64_t b = q(i, j);
      if (b <= 0) continue;
      out << "  " << i + 1 << " -> " << j + 1;
      if (b > 1) out << " [label=\"" << b << "\"]";
      out << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace ptolemy
