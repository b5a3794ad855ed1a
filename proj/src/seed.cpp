#include "ptolemy/seed.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "ptolemy/errors.hpp"

namespace ptolemy {

Seed Seed::permuted(const Permutation& sigma) const {
  Seed r{quiver.permuted(sigma), std::vector<LaurentPoly>(vars.size())};
  for (std::size_t i = 0; i < vars.size(); ++i) r.vars[sigma[i]] = vars[i];
  return r;
}

Seed initial_seed(const Quiver& q) {
  Seed s{q, {}};
  s.vars.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) s.vars.push_back(LaurentPoly::generator(q.size(), i));
  return s;
}

LaurentPoly exchange_numerator(const Seed& s, std::size_t k) {
  const std::size_t n = s.size();
  LaurentPoly in = LaurentPoly::constant(n, 1);
  LaurentPoly out = LaurentPoly::constant(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t b = s.quiver(i, k);
    if (b > 0) in = in * s.vars[i].pow(static_cast<unsigned>(b));
    if (b < 0) out = out * s.vars[i].pow(static_cast<unsigned>(-b));
  }
  return in + out;
}

std::optional<LaurentPoly> exchange_numerator(const Seed& s, std::size_t k, const ExchangeLimits& limits) {
  const std::size_t n = s.size();
  auto product = [&](int sign) -> std::optional<LaurentPoly> {
    LaurentPoly acc = LaurentPoly::constant(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t b = sign * s.quiver(i, k);
      for (std::int64_t e = 0; e < b; ++e) {
        if (acc.size() * s.vars[i].size() > limits.max_pairs) return std::nullopt;
        acc = acc * s.vars[i];
        if (acc.size() > limits.max_terms) return std::nullopt;
      }
    }
    return acc;
  };
  auto in = product(1);
  if (!in) return std::nullopt;
  auto out = product(-1);
  if (!out) return std::nullopt;
  LaurentPoly sum = *in + *out;
  if (sum.size() > limits.max_terms) return std::nullopt;
  return sum;
}

Seed mutate_seed(const Seed& s, std::size_t k) {
  s.quiver.mutate(k);  // validates k before the numerator is built
  return mutate_seed(s, k, exchange_numerator(s, k));
}

Seed mutate_seed(const Seed& s, std::size_t k, const LaurentPoly& numerator) {
  Seed r{s.quiver.mutate(k), s.vars};
  auto q = div_exact(numerator, s.vars[k]);
  if (!q) {
    throw LaurentViolation("exchange relation at vertex " + std::to_string(k + 1) +
                           " is not a Laurent polynomial; divisor " + to_string(s.vars[k]));
  }
  r.vars[k] = std::move(*q);
  return r;
}

Seed apply_mutation_sequence(Seed s, std::span<const std::size_t> ks) {
  for (std::size_t k : ks) s = mutate_seed(s, k);
  return s;
}

namespace {

bool extend_seed_match(const Seed& a, const Seed& b, std::size_t depth, Permutation& sigma,
                       std::vector<char>& used) {
  const std::size_t n = a.size();
  if (depth == n) return true;
  for (std::size_t cand = 0; cand < n; ++cand) {
    if (used[cand] || a.quiver.is_frozen(depth) != b.quiver.is_frozen(cand)) continue;
    if (a.vars[depth] != b.vars[cand]) continue;
    bool ok = true;
    for (std::size_t u = 0; u < depth && ok; ++u) {
      ok = a.quiver(depth, u) == b.quiver(cand, sigma[u]) && a.quiver(u, depth) == b.quiver(sigma[u], cand);
    }
    if (!ok) continue;
    sigma[depth] = cand;
    used[cand] = 1;
    if (extend_seed_match(a, b, depth + 1, sigma, used)) return true;
    used[cand] = 0;
  }
  return false;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count / 8, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

using SeedKey = std::pair<std::vector<std::int64_t>, std::vector<LaurentPoly>>;

SeedKey key_of(const Seed& s) { return {s.quiver.entries(), s.vars}; }

}  // namespace

std::optional<Permutation> seed_equal_up_to_permutation(const Seed& a, const Seed& b) {
  if (a.size() != b.size() || a.vars.size() != b.vars.size()) return std::nullopt;
  Permutation sigma(a.size());
  std::vector<char> used(a.size(), 0);
  if (!extend_seed_match(a, b, 0, sigma, used)) return std::nullopt;
  return sigma;
}

CanonicalSeed canonical_seed(const Seed& s) {
  std::optional<CanonicalSeed> best;
  for (const Permutation& sigma : canonical_permutations(s.quiver)) {
    Seed candidate = s.permuted(sigma);
    if (!best || candidate.vars < best->seed.vars) best = CanonicalSeed{std::move(candidate), sigma};
  }
  return std::move(*best);
}

std::string describe_exchange(const Quiver& q, std::size_t k) {
  if (k >= q.size()) throw InvalidVertex("vertex " + std::to_string(k + 1) + " out of range");
  auto product = [&](bool incoming) {
    std::string out;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const std::int64_t b = incoming ? q(i, k) : q(k, i);
      if (b <= 0) continue;
      if (!out.empty()) out += "*";
      out += "x" + std::to_string(i + 1);
      if (b > 1) out += "^" + std::to_string(b);
    }
    return out.empty() ? std::string("1") : out;
  };
  const std::string name = "x" + std::to_string(k + 1);
  return name + "' = (" + product(true) + " + " + product(false) + ")/" + name;
}

ExchangeGraph explore_exchange_graph(const Seed& start, const ExploreLimits& limits) {
  if (limits.max_nodes < 1 || limits.max_depth < 1) throw std::invalid_argument("exploration limits must be >= 1");
  const std::size_t n = start.size();
  const std::vector<std::size_t> movable = start.quiver.mutable_vertices();

  ExchangeGraph g;
  std::map<SeedKey, std::size_t> index;
  auto add_node = [&](Seed s, std::size_t depth) {
    index.emplace(key_of(s), g.nodes.size());
    g.nodes.push_back(std::move(s));
    g.depth.push_back(depth);
    g.neighbors.emplace_back(n, ExchangeGraph::npos);
    return g.nodes.size() - 1;
  };
  add_node(canonical_seed(start).seed, 0);
  g.complete = true;

  std::size_t level_begin = 0;
  for (std::size_t depth = 0; level_begin < g.nodes.size(); ++depth) {
    const std::size_t level_end = g.nodes.size();
    const std::size_t width = level_end - level_begin;

    // The expensive part (exact mutation + canonicalisation) runs in
    // parallel; merging below is sequential in (node, vertex) order.
    std::vector<Seed> images(width * movable.size());
    parallel_for(images.size(), [&](std::size_t t) {
      const Seed& from = g.nodes[level_begin + t / movable.size()];
      images[t] = canonical_seed(mutate_seed(from, movable[t % movable.size()])).seed;
    });

    for (std::size_t t = 0; t < images.size(); ++t) {
      const std::size_t u = level_begin + t / movable.size();
      const std::size_t k = movable[t % movable.size()];
      std::size_t v;
      if (auto it = index.find(key_of(images[t])); it != index.end()) {
        v = it->second;
      } else if (depth + 1 > limits.max_depth || g.nodes.size() >= limits.max_nodes) {
        g.complete = false;
        continue;
      } else {
        v = add_node(std::move(images[t]), depth + 1);
      }
      g.neighbors[u][k] = v;
      if (u <= v) g.edges.push_back({u, k, v});
    }
    level_begin = level_end;
  }

  std::set<LaurentPoly> vars;
  for (const Seed& s : g.nodes) {
    for (std::size_t k : movable) vars.insert(s.vars[k]);
  }
  g.variables.assign(vars.begin(), vars.end());
  return g;
}

// --- Formats ----------------------------------------------------------------

nlohmann::json to_json(const Seed& s) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : s.vars) vars.push_back(to_string(v));
  return {{"quiver", to_json(s.quiver)}, {"vars", vars}};
}

Seed seed_from_json(const nlohmann::json& j) {
  try {
    Seed s{quiver_from_json(j.at("quiver")), {}};
    const auto vars = j.at("vars").get<std::vector<std::string>>();
    if (vars.size() != s.quiver.size()) throw FormatError("seed: vars length does not match quiver size");
    for (const auto& v : vars) s.vars.push_back(parse_laurent(v, s.quiver.size()));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("seed: ") + e.what());
  }
}

std::string to_text(const Seed& s) { return to_json(s).dump(); }

Seed parse_seed(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("seed: ") + e.what());
  }
  return seed_from_json(j);
}

nlohmann::json to_json(const ExchangeGraph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    nodes.push_back({{"id", i}, {"depth", g.depth[i]}, {"seed", to_json(g.nodes[i])}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges) edges.push_back({e.from, e.vertex + 1, e.to});
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : g.variables) vars.push_back(to_string(v));
  return {{"nodes", nodes}, {"edges", edges}, {"variables", vars}, {"complete", g.complete}};
}

std::string to_dot(const ExchangeGraph& g) {
  std::ostringstream out;
  out << "graph exchange {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    std::string label;
    for (const auto& v : g.nodes[i].vars) {
      if (!label.empty()) label += "\\n";
      label += to_string(v);
    }
    out << "  " << i << " [label=\"" << label << "\"];\n";
  }
  for (const auto& e : g.edges) {
    out << "  " << e.from << " -- " << e.to << " [label=\"" << e.vertex + 1 << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ptolemy
