#include "pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "golden.hpp"
#include "szl/analysis.hpp"
#include "szl/errors.hpp"
#include "szl/io.hpp"
#include "workflow.hpp"

namespace szl::cli {

namespace {

using io::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string text;
  int status = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GraphSpec spec_of(const Config& c) {
  GraphSpec spec;
  spec.family = c.graph;
  spec.n = c.n;
  spec.generators = c.generators;
  spec.involutive = c.involutive;
  spec.radius = c.radius;
  return spec;
}

bool is_file(const std::string& s) {
  return s.ends_with(".json") || std::filesystem::is_regular_file(s);
}

Problem load_problem(const Config& c) {
  if (!c.matrix.empty()) return problem_from_matrix(io::matrix_from_json(io::parse(slurp(c.matrix))));
  if (c.graph.empty()) throw UsageError("one of --graph or --matrix is required");
  if (is_file(c.graph)) {
    Problem p{std::nullopt, io::graph_from_json(io::parse(slurp(c.graph))), {}};
    p.chain = homogeneous_walk(p.graph);
    return p;
  }
  return problem_from_spec(spec_of(c));
}

std::string format_or(const Config& c, const char* fallback) {
  const std::string f = c.format.empty() ? fallback : c.format;
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  return f;
}

void require_json(const Config& c) {
  if (format_or(c, "json") != "json") throw UsageError(c.command + " only emits json");
}

Json error_json(const Error& e, Json witness = nullptr) {
  Json j{{"kind", to_string(e.kind())}, {"message", e.what()}};
  if (!witness.is_null()) j["witness"] = std::move(witness);
  return Json{{"error", j}};
}

Json arc_label(const ArcBasis& b, std::size_t a) {
  const auto [i, j] = b.arc(a);
  return Json::array({b.vertices()[i], b.vertices()[j]});
}

Output cmd_gen(const Config& c) {
  require_json(c);
  if (c.graph.empty()) throw UsageError("gen needs --graph <family>");
  return {io::dump(io::to_json(generate(spec_of(c))))};
}

Output cmd_lump(const Config& c) {
  require_json(c);
  const Problem problem = load_problem(c);
  if (c.partition.empty()) throw UsageError("lump needs --partition");
  const VertexPartition part = parse_partition(c.partition, problem);
  const LumpResult result = lump(problem.chain, part, c.tol_lump);
  if (const auto* w = std::get_if<NotLumpable>(&result)) {
    const Error e(ErrorKind::NotLumpable, "row sums differ inside a block");
    return {io::dump(error_json(e, Json{{"u", part.name(w->u)},
                                        {"v", part.name(w->v)},
                                        {"first", w->first},
                                        {"second", w->second},
                                        {"first_sum", w->first_sum},
                                        {"second_sum", w->second_sum}})),
            1};
  }
  Json out = io::to_json(std::get<StochasticMatrix>(result));
  out["partition"] = io::to_json(part);
  return {io::dump(out)};
}

StochasticMatrix chain_for_walk(const Config& c, const Problem& problem) {
  if (c.partition.empty()) return problem.chain;
  return lumped_or_throw(lump(problem.chain, parse_partition(c.partition, problem), c.tol_lump));
}

Output cmd_quantize(const Config& c) {
  require_json(c);
  const Problem problem = load_problem(c);
  const SzegedyOperator op(chain_for_walk(c, problem));
  const ArcBasis& basis = op.basis();
  Json arcs = Json::array();
  Json action = Json::array();
  for (std::size_t a = 0; a < basis.size(); ++a) {
    arcs.push_back(arc_label(basis, a));
    WalkerState s(op.basis_ptr());
    s.amplitudes()(static_cast<Eigen::Index>(a)) = 1.0;
    action.push_back({{"arc", arc_label(basis, a)},
                      {"image", io::to_json(op.apply_U(s))["amplitudes"]}});
  }
  return {io::dump(Json{{"vertices", basis.vertices()}, {"arcs", arcs}, {"action", action}})};
}

Output cmd_aggregate(const Config& c) {
  require_json(c);
  const Problem problem = load_problem(c);
  if (c.partition.empty()) throw UsageError("aggregate needs --partition");
  const VertexPartition part = parse_partition(c.partition, problem);
  const SzegedyOperator full(problem.chain);
  const StochasticMatrix lumped = lumped_or_throw(lump(problem.chain, part, c.tol_lump));
  const ConsistencyReport report = check_conditions(problem.chain, part, lumped, c.tol_consistency);
  Json out{{"lumped", io::to_json(lumped)}, {"consistency", io::to_json(report)}};
  try {
    const Aggregation agg = aggregate(full, part, c.tol_lump, c.tol_consistency);
    Json states = Json::array();
    for (std::size_t k = 0; k < agg.basis.size(); ++k) {
      const auto [u, v] = agg.basis.pairs[k];
      states.push_back({{"pair", {part.name(u), part.name(v)}},
                        {"amplitudes", io::to_json(agg.basis.states[k])["amplitudes"]}});
    }
    const auto res = verify_reduction(full, agg.basis, SzegedyOperator(agg.lumped));
    out["linking"] = io::to_json(agg.linking);
    out["basis"] = states;
    out["residuals"] = {{"projection", res.projection},
                        {"swap", res.swap},
                        {"intertwining", res.intertwining},
                        {"max", res.max()}};
  } catch (const Error& e) {
    out.update(error_json(e));
    return {io::dump(out), 1};
  }
  return {io::dump(out)};
}

struct Route {
  LinearMap u, u_inverse, swap, reflection;
  Eigen::VectorXd e0;
};

Output cmd_cmv(const Config& c) {
  const std::string format = format_or(c, "json");
  const Problem problem = load_problem(c);
  const VertexPartition part = c.partition.empty()
                                   ? VertexPartition::singletons(problem.chain.vertices())
                                   : parse_partition(c.partition, problem);
  const std::string block = block_for(part, c.initial.empty() ? default_root(problem) : c.initial);

  const SzegedyOperator full(problem.chain);
  std::optional<SzegedyOperator> lumped_op;
  std::optional<Aggregation> agg;
  const SzegedyOperator* op = nullptr;
  Eigen::VectorXd e0;
  if (c.route == "lumped") {
    lumped_op.emplace(lumped_or_throw(lump(problem.chain, part, c.tol_lump)));
    op = &*lumped_op;
    e0 = op->phi(block).amplitudes();
  } else if (c.route == "full") {
    agg.emplace(aggregate(full, part, c.tol_lump, c.tol_consistency));
    op = &full;
    e0 = lifted_phi(*agg, block);
  } else {
    throw UsageError("--route must be lumped or full");
  }

  if (format == "csv") {
    const auto result = cmv_orthonormalize(op->U_map(), op->U_inverse_map(), e0, c.tol_dep);
    return {io::matrix_csv(result.matrix)};
  }
  VerblunskySequence seq =
      verblunsky_via_recurrence(op->swap_map(), op->reflection_map(), e0, c.tol_dep).sequence;
  seq.trusted_up_to = trusted_bound(problem);
  Json out = io::to_json(seq);
  if (c.geronimus) out["geronimus"] = io::to_json(geronimus_pqr(seq));
  return {io::dump(out)};
}

Output cmd_simulate(const Config& c) {
  const std::string format = format_or(c, "csv");
  const Problem problem = load_problem(c);
  const SzegedyOperator op(chain_for_walk(c, problem));
  std::string initial = c.initial;
  if (initial.empty()) {
    initial = default_root(problem);
    if (!c.partition.empty()) {
      initial = block_for(parse_partition(c.partition, problem), initial);
    }
  }
  WalkerState s0(op.basis_ptr());
  if (const auto comma = initial.find(','); comma != std::string::npos) {
    s0 = WalkerState::arc(op.basis_ptr(), initial.substr(0, comma), initial.substr(comma + 1));
  } else {
    s0 = op.phi(initial);
  }
  if (c.steps < 0) throw UsageError("--steps must be nonnegative");
  const auto series = simulate_quantum(op, s0, static_cast<std::size_t>(c.steps));
  if (format == "csv") return {io::time_series_csv(series)};
  Json steps = Json::array();
  for (const auto& d : series) {
    Json p = Json::array();
    for (double x : d.p) p.push_back(x);
    steps.push_back(p);
  }
  return {io::dump(Json{{"vertices", op.chain().vertices()}, {"distributions", steps}})};
}

Output cmd_verify(const Config& c) {
  require_json(c);
  if (c.suite != "golden" && c.suite != "paper") throw UsageError("unknown suite '" + c.suite + "'");
  const Json report = golden::to_json(golden::run_suite());
  return {io::dump(report), report["passed"].get<bool>() ? 0 : 1};
}

Output dispatch(const Config& c) {
  if (c.tol_lump <= 0 || c.tol_consistency <= 0 || c.tol_dep <= 0) {
    throw UsageError("tolerances must be positive");
  }
  if (c.command == "gen") return cmd_gen(c);
  if (c.command == "lump") return cmd_lump(c);
  if (c.command == "quantize") return cmd_quantize(c);
  if (c.command == "aggregate") return cmd_aggregate(c);
  if (c.command == "cmv") return cmd_cmv(c);
  if (c.command == "simulate") return cmd_simulate(c);
  if (c.command == "verify") return cmd_verify(c);
  throw UsageError("unknown command '" + c.command + "'");
}

bool usage_kind(ErrorKind k) {
  return k == ErrorKind::ParseError || k == ErrorKind::InvalidParams;
}

}  // namespace

int run(const Config& config, std::ostream& out, std::ostream& err) {
  Output result;
  try {
    result = dispatch(config);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << e.what() << '\n';
    if (usage_kind(e.kind())) return 2;
    result = {io::dump(error_json(e)), 1};
  }
  if (config.out.empty()) {
    out << result.text;
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) {
      err << "usage error: cannot write '" << config.out << "'\n";
      return 2;
    }
    file << result.text;
  }
  return result.status;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Szegedy quantization, lumping and CMV tools", "szl"};
  app.require_subcommand(1);

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--graph", c.graph, "family name or graph JSON path");
    sub->add_option("--matrix", c.matrix, "stochastic matrix JSON path");
    sub->add_option("--partition", c.partition, "distance[:root] | file:<path> | singletons");
    sub->add_option("--n", c.n, "hypercube dimension / complete graph size");
    sub->add_option("--radius", c.radius, "free-group ball radius");
    sub->add_option("--generators", c.generators, "free-group generator count");
    sub->add_flag("--involutive", c.involutive, "generators are involutions");
    sub->add_option("--tol-lump", c.tol_lump);
    sub->add_option("--tol-consistency", c.tol_consistency);
    sub->add_option("--tol-dep", c.tol_dep);
    sub->add_option("--out", c.out, "output path (stdout by default)");
    sub->add_option("--format", c.format, "json or csv");
  };
  const std::pair<const char*, const char*> verbs[] = {
      {"gen", "emit a generated graph as JSON"},
      {"lump", "lump the walk over a partition"},
      {"quantize", "Szegedy operator action on the arc basis"},
      {"aggregate", "consistency checks, linking coefficients and aggregated states"},
      {"cmv", "Verblunsky coefficients or the CMV matrix"},
      {"simulate", "position distributions under the quantum walk"},
      {"verify", "run the built-in reference cases"},
  };
  for (const auto& [verb, description] : verbs) {
    auto* sub = app.add_subcommand(verb, description);
    common(sub);
    if (std::string(verb) == "cmv") {
      sub->add_option("--initial", c.initial, "vertex or block for e0");
      sub->add_option("--route", c.route, "lumped or full");
      sub->add_flag("--geronimus", c.geronimus, "also emit the birth-death chain");
    }
    if (std::string(verb) == "simulate") {
      sub->add_option("--initial", c.initial, "vertex (phi) or arc 'i,j'");
      sub->add_option("--steps", c.steps);
    }
    if (std::string(verb) == "verify") sub->add_option("--suite", c.suite);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

}  // namespace szl::cli
