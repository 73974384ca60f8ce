#include "szl/io.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "szl/errors.hpp"

namespace szl::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

void write(std::string& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& x : j) flat = flat && !x.is_structured();
      out += '[';
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(out, x, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(std::string(what) + ": " + e.what());
  }
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> lines(std::string_view text) {
  std::vector<std::string> out;
  for (auto& l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    if (!l.empty()) out.push_back(std::move(l));
  }
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) fail("trailing characters in number '" + s + "'");
    return x;
  } catch (const std::logic_error&) {
    fail("not a number: '" + s + "'");
  }
}

Json check_to_json(const ConsistencyReport::Check& c) {
  return Json{{"passed", c.passed}, {"witness", c.witness}, {"lhs", c.lhs}, {"rhs", c.rhs}};
}

ConsistencyReport::Check check_from_json(const Json& j) {
  ConsistencyReport::Check c;
  c.passed = get<bool>(field(j, "passed"), "passed");
  c.witness = get<std::vector<Vertex>>(field(j, "witness"), "witness");
  c.lhs = get<double>(field(j, "lhs"), "lhs");
  c.rhs = get<double>(field(j, "rhs"), "rhs");
  return c;
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidParams, "cannot serialize a non-finite value");
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  out += '\n';
  return out;
}

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(e.what());
  }
}

Json to_json(const DirectedGraph& g) {
  Json arcs = Json::array();
  for (const auto& [i, j] : g.arcs()) arcs.push_back({g.vertex(i), g.vertex(j)});
  return Json{{"vertices", g.vertices()}, {"arcs", arcs}};
}

DirectedGraph graph_from_json(const Json& j) {
  auto vertices = get<std::vector<Vertex>>(field(j, "vertices"), "vertices");
  auto arcs = get<std::vector<std::pair<Vertex, Vertex>>>(field(j, "arcs"), "arcs");
  return DirectedGraph(std::move(vertices), std::move(arcs));
}

Json to_json(const VertexPartition& part) {
  return Json{{"blocks", part.blocks()}, {"names", part.names()}};
}

VertexPartition partition_from_json(const Json& j) {
  auto blocks = get<std::vector<std::vector<Vertex>>>(field(j, "blocks"), "blocks");
  std::vector<std::string> names;
  if (j.contains("names")) names = get<std::vector<std::string>>(j.at("names"), "names");
  return VertexPartition(std::move(blocks), std::move(names));
}

Json to_json(const StochasticMatrix& p) {
  Json rows = Json::array();
  const Eigen::MatrixXd dense = p.to_dense();
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < dense.cols(); ++k) row.push_back(dense(i, k));
    rows.push_back(std::move(row));
  }
  return Json{{"vertices", p.vertices()}, {"rows", rows}};
}

StochasticMatrix matrix_from_json(const Json& j) {
  auto vertices = get<std::vector<Vertex>>(field(j, "vertices"), "vertices");
  auto rows = get<std::vector<std::vector<double>>>(field(j, "rows"), "rows");
  return StochasticMatrix::from_dense(std::move(vertices), rows);
}

Json to_json(const WalkerState& s) {
  const ArcBasis& basis = s.basis();
  Json amps = Json::array();
  for (std::size_t a = 0; a < basis.size(); ++a) {
    if (s[a] == 0.0) continue;
    const auto [i, k] = basis.arc(a);
    amps.push_back({basis.vertices()[i], basis.vertices()[k], s[a]});
  }
  return Json{{"amplitudes", amps}};
}

WalkerState walker_state_from_json(const Json& j, std::shared_ptr<const ArcBasis> basis) {
  WalkerState s(basis);
  for (const auto& entry : field(j, "amplitudes")) {
    if (!entry.is_array() || entry.size() != 3) fail("amplitude entries are [i, j, value]");
    const auto i = get<std::string>(entry[0], "vertex");
    const auto k = get<std::string>(entry[1], "vertex");
    const auto a = basis->require(i, k);
    s.amplitudes()(static_cast<Eigen::Index>(a)) = get<double>(entry[2], "amplitude");
  }
  return s;
}

Json to_json(const LinkingCoefficients& s) {
  Json values = Json::array();
  for (const auto& [key, value] : s.values()) {
    values.push_back({s.vertices()[key.first], s.blocks()[key.second], value});
  }
  return Json{{"s", values}, {"vertices", s.vertices()}, {"blocks", s.blocks()},
              {"warnings", s.warnings()}};
}

LinkingCoefficients linking_from_json(const Json& j) {
  auto vertices = get<std::vector<Vertex>>(field(j, "vertices"), "vertices");
  auto blocks = get<std::vector<std::string>>(field(j, "blocks"), "blocks");
  std::vector<std::string> warnings;
  if (j.contains("warnings")) warnings = get<std::vector<std::string>>(j.at("warnings"), "warnings");
  const auto index = [](const std::vector<std::string>& v, const std::string& x) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] == x) return k;
    }
    fail("unknown label '" + x + "'");
  };
  std::map<std::pair<std::size_t, std::size_t>, double> values;
  for (const auto& entry : field(j, "s")) {
    if (!entry.is_array() || entry.size() != 3) fail("linking entries are [i, block, value]");
    values[{index(vertices, get<std::string>(entry[0], "vertex")),
            index(blocks, get<std::string>(entry[1], "block"))}] = get<double>(entry[2], "value");
  }
  return LinkingCoefficients(std::move(vertices), std::move(blocks), std::move(values),
                             std::move(warnings));
}

Json to_json(const ConsistencyReport& r) {
  return Json{{"weak_reversibility", check_to_json(r.weak_reversibility)},
              {"cycle_condition", check_to_json(r.cycle_condition)},
              {"triangle_condition", check_to_json(r.triangle_condition)},
              {"all_passed", r.all_passed()}};
}

ConsistencyReport consistency_from_json(const Json& j) {
  ConsistencyReport r;
  r.weak_reversibility = check_from_json(field(j, "weak_reversibility"));
  r.cycle_condition = check_from_json(field(j, "cycle_condition"));
  r.triangle_condition = check_from_json(field(j, "triangle_condition"));
  return r;
}

Json to_json(const VerblunskySequence& v) {
  Json alphas = Json::array();
  for (double a : v.alphas) alphas.push_back(a);
  Json out{{"alphas", alphas}};
  out["boundary_trusted_up_to"] =
      v.trusted_up_to ? Json(*v.trusted_up_to) : Json(v.alphas.empty() ? 0 : v.alphas.size() - 1);
  return out;
}

VerblunskySequence verblunsky_from_json(const Json& j) {
  VerblunskySequence v;
  v.alphas = get<std::vector<double>>(field(j, "alphas"), "alphas");
  if (j.contains("boundary_trusted_up_to") && !j.at("boundary_trusted_up_to").is_null()) {
    const auto k = get<std::size_t>(j.at("boundary_trusted_up_to"), "boundary_trusted_up_to");
    if (v.alphas.empty() || k + 1 != v.alphas.size()) v.trusted_up_to = k;
  }
  return v;
}

Json to_json(const BirthDeathChain& c) {
  const auto arr = [](const std::vector<double>& xs) {
    Json a = Json::array();
    for (double x : xs) a.push_back(x);
    return a;
  };
  return Json{{"p", arr(c.p)}, {"q", arr(c.q)}, {"r", arr(c.r)}};
}

BirthDeathChain birth_death_from_json(const Json& j) {
  BirthDeathChain c;
  c.p = get<std::vector<double>>(field(j, "p"), "p");
  c.q = get<std::vector<double>>(field(j, "q"), "q");
  c.r = get<std::vector<double>>(field(j, "r"), "r");
  c.validate();
  return c;
}

Json to_json(const DensityMatrix& d) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < d.rho.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < d.rho.cols(); ++k) row.push_back(d.rho(i, k));
    rows.push_back(std::move(row));
  }
  Json eig = Json::array();
  const Eigen::VectorXd lambda = d.eigenvalues();
  for (Eigen::Index k = lambda.size(); k-- > 0;) eig.push_back(lambda(k));
  return Json{{"positions", d.positions}, {"rho", rows}, {"eigenvalues", eig}};
}

std::string distribution_csv(const Distribution& d) {
  std::string out = "vertex,probability\n";
  for (std::size_t k = 0; k < d.vertices.size(); ++k) {
    out += d.vertices[k] + ',' + format_double(d.p[k]) + '\n';
  }
  return out;
}

Distribution distribution_from_csv(std::string_view text) {
  const auto rows = lines(text);
  if (rows.empty() || rows[0] != "vertex,probability") fail("expected header 'vertex,probability'");
  Distribution d;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto cells = split(rows[k], ',');
    if (cells.size() != 2) fail("line " + std::to_string(k + 1) + ": expected 2 columns");
    d.vertices.push_back(cells[0]);
    d.p.push_back(to_double(cells[1]));
  }
  return d;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (k) out += ',';
      out += format_double(m(i, k));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd matrix_from_csv(std::string_view text) {
  const auto rows = lines(text);
  std::vector<std::vector<double>> cells;
  for (const auto& r : rows) {
    std::vector<double> row;
    for (const auto& c : split(r, ',')) row.push_back(to_double(c));
    if (!cells.empty() && row.size() != cells.front().size()) fail("ragged matrix rows");
    cells.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(cells.size());
  const auto m = cells.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(cells[0].size());
  Eigen::MatrixXd out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < m; ++k) {
      out(i, k) = cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
  }
  return out;
}

std::string time_series_csv(const std::vector<Distribution>& series) {
  std::string out = "step,vertex,probability\n";
  for (std::size_t t = 0; t < series.size(); ++t) {
    const auto& d = series[t];
    for (std::size_t k = 0; k < d.vertices.size(); ++k) {
      out += std::to_string(t) + ',' + d.vertices[k] + ',' + format_double(d.p[k]) + '\n';
    }
  }
  return out;
}

std::vector<Distribution> time_series_from_csv(std::string_view text) {
  const auto rows = lines(text);
  if (rows.empty() || rows[0] != "step,vertex,probability") {
    fail("expected header 'step,vertex,probability'");
  }
  std::vector<Distribution> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto cells = split(rows[k], ',');
    if (cells.size() != 3) fail("line " + std::to_string(k + 1) + ": expected 3 columns");
    const auto t = static_cast<std::size_t>(to_double(cells[0]));
    if (t > out.size()) fail("line " + std::to_string(k + 1) + ": steps out of order");
    if (t == out.size()) out.emplace_back();
    out[t].vertices.push_back(cells[1]);
    out[t].p.push_back(to_double(cells[2]));
  }
  return out;
}

}  // namespace szl::io
