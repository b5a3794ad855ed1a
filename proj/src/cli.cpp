#include "ptolemy/cli.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptolemy/errors.hpp"
#include "ptolemy/frieze.hpp"
#include "ptolemy/hyperbolic.hpp"
#include "ptolemy/pluecker.hpp"
#include "ptolemy/seed.hpp"
#include "ptolemy/service.hpp"
#include "ptolemy/triangulation.hpp"

namespace ptolemy {

namespace {

// Unreadable or unwritable files; reported like malformed input.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path);
  if (!file) throw IoError("cannot read '" + path + "'");
  buf << file.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path);
  if (!file || !(file << content)) throw IoError("cannot write '" + path + "'");
}

nlohmann::json parse_json(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(what + ": " + e.what());
  }
}

// A seed document, or a bare quiver taken as its initial seed.
Seed read_seed(const std::string& text) {
  const auto j = parse_json(text, "seed");
  if (j.is_object() && j.contains("quiver")) return seed_from_json(j);
  return initial_seed(quiver_from_json(j));
}

double parse_double(const std::string& tok) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used == tok.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw FormatError("malformed number '" + tok + "'");
}

// Non-blank lines split into whitespace separated tokens.
std::vector<std::vector<std::string>> token_lines(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream tokens(line);
    std::vector<std::string> row;
    std::string tok;
    while (tokens >> tok) row.push_back(tok);
    if (!row.empty()) lines.push_back(std::move(row));
  }
  return lines;
}

std::vector<DecoratedIdealPoint> read_ideal_points(const std::string& text) {
  std::vector<DecoratedIdealPoint> points;
  for (const auto& row : token_lines(text)) {
    if (row.size() != 2) throw FormatError("ideal point: expected 'position horo' per line");
    const double horo = parse_double(row[1]);
    if (row[0] == "inf") {
      points.push_back(DecoratedIdealPoint::infinity(horo));
    } else {
      points.push_back({parse_double(row[0]), horo});
    }
  }
  return points;
}

std::vector<std::size_t> zero_based(const std::vector<long long>& ks) {
  std::vector<std::size_t> out;
  for (long long k : ks) {
    if (k < 1) throw InvalidVertex("vertex " + std::to_string(k) + " out of range");
    out.push_back(static_cast<std::size_t>(k - 1));
  }
  return out;
}

std::string matrix_text(const Quiver& q) {
  std::ostringstream out;
  for (const auto& row : q.matrix()) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
    out << '\n';
  }
  const auto frozen = q.frozen_vertices();
  if (!frozen.empty()) {
    out << "frozen:";
    for (auto v : frozen) out << ' ' << v + 1;
    out << '\n';
  }
  return out.str();
}

std::string seed_text(const Seed& s) {
  std::ostringstream out;
  out << matrix_text(s.quiver);
  for (std::size_t i = 0; i < s.vars.size(); ++i) out << "u" << i + 1 << " = " << to_string(s.vars[i]) << '\n';
  return out.str();
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << nlohmann::json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cluster algebras, polygon geometry and frieze patterns"};
  app.name("ptolemy_lab");
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

  std::string input = "-";
  std::string dot_path, triangulation_path, values_path;
  std::vector<long long> ks;
  std::size_t max_nodes = 0, max_depth = ExploreLimits{}.max_depth, expected_period = 0;
  int m = 0, width = 0;

  auto add_input = [&](CLI::App* sub) { sub->add_option("input", input, "input file, - for stdin"); };

  auto* quiver_mutate = app.add_subcommand("quiver-mutate", "mutate a quiver at a sequence of vertices");
  quiver_mutate->add_option("--k", ks, "vertices (1-based), applied in order")
      ->required()
      ->delimiter(',')
      ->allow_extra_args(false);
  quiver_mutate->add_option("--dot", dot_path, "write the result as Graphviz");
  add_input(quiver_mutate);

  auto* seed_mutate = app.add_subcommand("seed-mutate", "mutate a seed (or a quiver's initial seed)");
  seed_mutate->add_option("--k", ks, "vertices (1-based), applied in order")
      ->required()
      ->delimiter(',')
      ->allow_extra_args(false);
  seed_mutate->add_option("--dot", dot_path, "write the resulting quiver as Graphviz");
  add_input(seed_mutate);

  auto* explore = app.add_subcommand("explore", "exchange graph of a seed (or a quiver's initial seed)");
  auto* max_nodes_opt =
      explore->add_option("--max-nodes", max_nodes, "node limit (default 10000 or PTOLEMY_LAB_MAX_NODES)");
  explore->add_option("--max-depth", max_depth, "depth limit");
  explore->add_option("--dot", dot_path, "write the exchange graph as Graphviz");
  add_input(explore);

  auto* frieze_gen = app.add_subcommand("frieze-gen", "frieze of a triangulated polygon");
  frieze_gen->add_option("--m", m, "polygon size (checked against the triangulation)");
  frieze_gen->add_option("--triangulation", triangulation_path, "triangulation file (default: input)");
  frieze_gen->add_option("--width", width, "columns to print (default m)");
  add_input(frieze_gen);

  auto* frieze_check = app.add_subcommand("frieze-check", "validate a frieze grid");
  frieze_check->add_option("--period", expected_period, "expected period (default m)");
  add_input(frieze_check);

  auto* frieze_unitary = app.add_subcommand("frieze-unitary", "find a triangulation with all-ones diagonals");
  add_input(frieze_unitary);

  auto* pluecker = app.add_subcommand("pluecker", "Pluecker coordinates of a 2 x n matrix");
  add_input(pluecker);

  auto* pluecker_verify = app.add_subcommand("pluecker-verify", "check the three-term relations");
  add_input(pluecker_verify);

  auto* euclid = app.add_subcommand("ptolemy-euclid", "Ptolemy residual of four planar points");
  add_input(euclid);

  auto* lambda = app.add_subcommand("lambda", "lambda lengths of two or four decorated ideal points");
  add_input(lambda);

  auto* realize = app.add_subcommand("realize", "decorated ideal polygon with prescribed lambda lengths");
  realize->add_option("--triangulation", triangulation_path, "triangulation file (default: input)");
  realize->add_option("--values", values_path, "edge values JSON (default: all ones)");
  add_input(realize);

  std::string host = "127.0.0.1";
  int port = 8080;
  SessionOptions session_options;
  long long ttl_seconds = session_options.idle_ttl.count();
  auto* serve_cmd = app.add_subcommand("serve", "run the session service");
  serve_cmd->add_option("--host", host, "bind address");
  serve_cmd->add_option("--port", port, "port");
  serve_cmd->add_option("--capacity", session_options.capacity, "maximum live sessions");
  serve_cmd->add_option("--ttl", ttl_seconds, "idle session lifetime in seconds");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    report_error(err, "usage", e.what());
    return 2;
  }
  const bool json = format == "json";

  try {
    if (quiver_mutate->parsed()) {
      Quiver q = parse_quiver(read_input(input, in));
      for (auto k : zero_based(ks)) q = q.mutate(k);
      if (!dot_path.empty()) write_file(dot_path, to_dot(q));
      out << (json ? to_text(q) + "\n" : matrix_text(q));
    } else if (seed_mutate->parsed()) {
      Seed s = read_seed(read_input(input, in));
      for (auto k : zero_based(ks)) {
        if (k >= s.size()) throw InvalidVertex("vertex " + std::to_string(k + 1) + " out of range");
        s = mutate_seed(s, k);
      }
      if (!dot_path.empty()) write_file(dot_path, to_dot(s.quiver));
      out << (json ? to_text(s) + "\n" : seed_text(s));
    } else if (explore->parsed()) {
      ExploreLimits limits;
      limits.max_depth = max_depth;
      if (max_nodes_opt->count()) {
        limits.max_nodes = max_nodes;
      } else if (const char* env = std::getenv("PTOLEMY_LAB_MAX_NODES")) {
        try {
          limits.max_nodes = std::stoul(env);
        } catch (const std::logic_error&) {
          throw FormatError(std::string("PTOLEMY_LAB_MAX_NODES: not a number '") + env + "'");
        }
      }
      if (limits.max_nodes < 1 || limits.max_depth < 1) throw FormatError("exploration limits must be at least 1");
      const auto g = explore_exchange_graph(read_seed(read_input(input, in)), limits);
      if (!dot_path.empty()) write_file(dot_path, to_dot(g));
      if (json) {
        out << to_json(g).dump() << '\n';
      } else {
        out << "nodes=" << g.nodes.size() << " edges=" << g.edges.size() << " variables=" << g.variables.size()
            << " complete=" << bool_text(g.complete) << '\n';
        for (const auto& v : g.variables) out << to_string(v) << '\n';
      }
    } else if (frieze_gen->parsed()) {
      const Triangulation t =
          parse_triangulation(read_input(triangulation_path.empty() ? input : triangulation_path, in));
      if (m && m != t.m())
        throw DimensionError("--m " + std::to_string(m) + " does not match the " + std::to_string(t.m()) + "-gon");
      if (width < 0) throw FormatError("--width must be positive");
      const auto grid = frieze_from_triangulation(t).to_grid(width ? width : t.m());
      out << (json ? nlohmann::json{{"m", t.m()}, {"rows", to_json(grid)}}.dump() + "\n" : to_text(t.m(), grid));
    } else if (frieze_check->parsed()) {
      const auto [fm, grid] = parse_frieze(read_input(input, in));
      const auto rep = check_frieze(grid, {expected_period ? expected_period : static_cast<std::size_t>(fm)});
      const bool valid = rep.boundary_ok && rep.diamond_ok && rep.shift_invariant;
      if (json) {
        nlohmann::json violations = nlohmann::json::array();
        for (const auto& v : rep.violations)
          violations.push_back({{"row", v.row}, {"column", v.column}, {"determinant", to_string(v.determinant)}});
        out << nlohmann::json{{"valid", valid},
                              {"boundary_ok", rep.boundary_ok},
                              {"diamond_ok", rep.diamond_ok},
                              {"positive", rep.positive},
                              {"integer", rep.integer},
                              {"period", rep.period ? nlohmann::json(*rep.period) : nlohmann::json(nullptr)},
                              {"expected_period", rep.expected_period},
                              {"shift_invariant", rep.shift_invariant},
                              {"violations", violations}}
                   .dump()
            << '\n';
      } else {
        out << "valid=" << bool_text(valid) << " boundary=" << bool_text(rep.boundary_ok)
            << " diamond=" << bool_text(rep.diamond_ok) << " positive=" << bool_text(rep.positive)
            << " integer=" << bool_text(rep.integer)
            << " period=" << (rep.period ? std::to_string(*rep.period) : std::string("none"))
            << " expected_period=" << rep.expected_period << " shift_invariant=" << bool_text(rep.shift_invariant)
            << '\n';
        for (const auto& v : rep.violations)
          out << "violation row=" << v.row << " column=" << v.column << " determinant=" << to_string(v.determinant)
              << '\n';
      }
    } else if (frieze_unitary->parsed()) {
      const auto [fm, grid] = parse_frieze(read_input(input, in));
      const auto cert = is_unitary(Frieze::from_grid(fm, grid));
      if (json) {
        out << nlohmann::json{{"unitary", cert.has_value()},
                              {"triangulation", cert ? to_json(*cert) : nlohmann::json(nullptr)}}
                   .dump()
            << '\n';
      } else {
        out << "unitary=" << bool_text(cert.has_value()) << '\n';
        if (cert) out << to_text(*cert);
      }
    } else if (pluecker->parsed()) {
      const auto p = pluecker_from_matrix(parse_plane_matrix(read_input(input, in)));
      if (json) {
        out << to_json(p).dump() << '\n';
      } else {
        for (const auto& [arc, v] : p) out << to_string(arc) << ' ' << to_string(v) << '\n';
      }
    } else if (pluecker_verify->parsed()) {
      const std::string text = read_input(input, in);
      const auto first = text.find_first_not_of(" \t\r\n");
      PlueckerCoordinates p = first != std::string::npos && text[first] == '{'
                                  ? edge_values_from_json(parse_json(text, "pluecker coordinates"))
                                  : pluecker_from_matrix(parse_plane_matrix(text));
      int n = 0;
      for (const auto& [arc, v] : p) n = std::max(n, arc.b);
      const auto violations = verify_pluecker(p, n);
      if (json) {
        nlohmann::json vs = nlohmann::json::array();
        for (const auto& v : violations)
          vs.push_back({{"indices", v.indices}, {"lhs", to_string(v.lhs)}, {"rhs", to_string(v.rhs)}});
        out << nlohmann::json{{"n", n}, {"violations", vs}}.dump() << '\n';
      } else {
        out << "n=" << n << " violations=" << violations.size() << '\n';
        for (const auto& v : violations)
          out << "violation " << v.indices[0] << ' ' << v.indices[1] << ' ' << v.indices[2] << ' ' << v.indices[3]
              << " lhs=" << to_string(v.lhs) << " rhs=" << to_string(v.rhs) << '\n';
      }
    } else if (euclid->parsed()) {
      const auto lines = token_lines(read_input(input, in));
      if (lines.size() != 4) throw FormatError("ptolemy-euclid: expected four lines 'x y'");
      std::array<Point2, 4> pts;
      for (int i = 0; i < 4; ++i) {
        if (lines[i].size() != 2) throw FormatError("ptolemy-euclid: expected 'x y'");
        pts[i] = {parse_double(lines[i][0]), parse_double(lines[i][1])};
      }
      const auto r = verify_ptolemy_euclidean(pts);
      out << (json ? nlohmann::json{{"residual", r.residual}, {"concyclic", r.concyclic}}.dump()
                   : "residual=" + format_decimal(r.residual) + " concyclic=" + bool_text(r.concyclic))
          << '\n';
    } else if (lambda->parsed()) {
      const auto pts = read_ideal_points(read_input(input, in));
      if (pts.size() == 2) {
        const double l = lambda_length(pts[0], pts[1]);
        out << (json ? nlohmann::json{{"lambda", l}}.dump() : "lambda=" + format_decimal(l)) << '\n';
      } else if (pts.size() == 4) {
        const std::array<DecoratedIdealPoint, 4> quad{pts[0], pts[1], pts[2], pts[3]};
        const double residual = verify_ptolemy_hyperbolic(quad);
        nlohmann::json table = nlohmann::json::object();
        for (int i = 0; i < 4; ++i)
          for (int j = i + 1; j < 4; ++j)
            table[std::to_string(i + 1) + "-" + std::to_string(j + 1)] = lambda_length(pts[i], pts[j]);
        if (json) {
          out << nlohmann::json{{"lambda", table}, {"residual", residual}}.dump() << '\n';
        } else {
          for (const auto& [key, v] : table.items()) out << key << ' ' << format_decimal(v.get<double>()) << '\n';
          out << "residual=" << format_decimal(residual) << '\n';
        }
      } else {
        throw FormatError("lambda: expected two or four points");
      }
    } else if (realize->parsed()) {
      const Triangulation t =
          parse_triangulation(read_input(triangulation_path.empty() ? input : triangulation_path, in));
      EdgeValues values = unit_values(t);
      if (!values_path.empty()) values = edge_values_from_json(parse_json(read_input(values_path, in), "edge values"));
      const auto poly = realize_polygon(t, values);
      if (json) {
        out << to_json(poly).dump() << '\n';
      } else {
        for (std::size_t i = 0; i < poly.points.size(); ++i) {
          const auto& p = poly.points[i];
          out << i + 1 << ' ' << (p.position ? format_decimal(*p.position) : std::string("inf")) << ' '
              << format_decimal(p.horo) << '\n';
        }
      }
    } else if (serve_cmd->parsed()) {
      if (ttl_seconds < 1) throw FormatError("--ttl must be positive");
      if (session_options.capacity < 1) throw FormatError("--capacity must be positive");
      session_options.idle_ttl = std::chrono::seconds(ttl_seconds);
      err << "listening on " << host << ':' << port << std::endl;
      if (!serve(host, port, session_options)) {
        report_error(err, "bind", "cannot listen on " + host + ":" + std::to_string(port));
        return 1;
      }
    }
  } catch (const FormatError& e) {
    report_error(err, "format", e.what());
    return 2;
  } catch (const IoError& e) {
    report_error(err, "io", e.what());
    return 2;
  } catch (const DomainError& e) {
    report_error(err, e.kind(), e.what());
    return 1;
  }
  return 0;
}

}  // namespace ptolemy
