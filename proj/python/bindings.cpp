#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pipeline.hpp"
#include "szl/aggregation.hpp"
#include "szl/analysis.hpp"
#include "szl/cmv.hpp"
#include "szl/errors.hpp"

namespace py = pybind11;
using namespace szl;

namespace {

VerblunskySequence sequence(std::vector<double> alphas) {
  VerblunskySequence v;
  v.alphas = std::move(alphas);
  return v;
}

WalkerState state(const SzegedyOperator& op, const Eigen::VectorXd& amplitudes) {
  if (static_cast<std::size_t>(amplitudes.size()) != op.basis().size()) {
    throw Error(ErrorKind::BasisMismatch, "state length does not match the arc basis");
  }
  return WalkerState(op.basis_ptr(), amplitudes);
}

py::dict check_dict(const ConsistencyReport::Check& c) {
  py::dict d;
  d["passed"] = c.passed;
  d["witness"] = c.witness;
  d["lhs"] = c.lhs;
  d["rhs"] = c.rhs;
  return d;
}

struct Aggregate {
  StochasticMatrix lumped;
  LinkingCoefficients linking;
  AggregatedBasis basis;
  ReductionResiduals residuals;
};

Aggregate aggregate(const SzegedyOperator& op, const VertexPartition& part, double tol_lump,
                    double tol_consistency) {
  auto lumped = lumped_or_throw(lump(op.chain(), part, tol_lump));
  LinkingOptions options;
  options.tol = tol_consistency;
  auto s = solve_linking(op.chain(), part, lumped, options);
  auto basis = aggregated_basis(op, part, lumped, s);
  const auto residuals = verify_reduction(op, basis, SzegedyOperator(lumped));
  return {std::move(lumped), std::move(s), std::move(basis), residuals};
}

}  // namespace

PYBIND11_MODULE(_szl, m) {
  m.doc() = "Szegedy walks, lumping, aggregation and CMV uniformization";

  static py::exception<Error> error(m, "SzlError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::tuple args = py::make_tuple(std::string(to_string(e.kind())), std::string(e.what()));
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  py::class_<DirectedGraph>(m, "Graph")
      .def(py::init([](std::vector<Vertex> vertices, const std::vector<std::pair<Vertex, Vertex>>& arcs) {
             return DirectedGraph(std::move(vertices), arcs);
           }),
           py::arg("vertices"), py::arg("arcs"))
      .def_property_readonly("vertices", &DirectedGraph::vertices)
      .def_property_readonly("arcs",
                             [](const DirectedGraph& g) {
                               std::vector<std::pair<Vertex, Vertex>> out;
                               for (const auto& [i, j] : g.arcs()) out.emplace_back(g.vertex(i), g.vertex(j));
                               return out;
                             })
      .def("__len__", &DirectedGraph::size);

  m.def(
      "generate",
      [](const std::string& family, int n, int generators, bool involutive, int radius) {
        return generate(GraphSpec{family, n, generators, involutive, radius});
      },
      py::arg("family"), py::arg("n") = 3, py::arg("generators") = 2, py::arg("involutive") = false,
      py::arg("radius") = 2);
  m.def(
      "canonical_root",
      [](const std::string& family, int n, int generators, bool involutive, int radius) {
        return canonical_root(GraphSpec{family, n, generators, involutive, radius});
      },
      py::arg("family"), py::arg("n") = 3, py::arg("generators") = 2, py::arg("involutive") = false,
      py::arg("radius") = 2);

  py::class_<VertexPartition>(m, "Partition")
      .def(py::init([](std::vector<std::vector<Vertex>> blocks, std::vector<std::string> names) {
             return VertexPartition(std::move(blocks), std::move(names));
           }),
           py::arg("blocks"), py::arg("names") = std::vector<std::string>{})
      .def_property_readonly("blocks", &VertexPartition::blocks)
      .def_property_readonly("names", &VertexPartition::names)
      .def("__len__", &VertexPartition::size);
  m.def("distance_partition", &distance_partition, py::arg("graph"), py::arg("root"));

  py::class_<StochasticMatrix>(m, "StochasticMatrix")
      .def(py::init([](std::vector<Vertex> vertices, const Eigen::MatrixXd& rows, double tol) {
             return StochasticMatrix::from_eigen(std::move(vertices), rows, tol);
           }),
           py::arg("vertices"), py::arg("rows"), py::arg("tol") = kStochasticTol)
      .def_property_readonly("vertices", &StochasticMatrix::vertices)
      .def("to_dense", &StochasticMatrix::to_dense)
      .def("__len__", &StochasticMatrix::size);
  m.def("homogeneous_walk", &homogeneous_walk, py::arg("graph"));
  m.def(
      "lump",
      [](const StochasticMatrix& p, const VertexPartition& part, double tol) {
        return lumped_or_throw(lump(p, part, tol));
      },
      py::arg("matrix"), py::arg("partition"), py::arg("tol") = kLumpTol);
  m.def(
      "birth_death_matrix",
      [](std::vector<double> p, std::vector<double> q, std::vector<double> r) {
        return birth_death_matrix(BirthDeathChain{std::move(p), std::move(q), std::move(r)});
      },
      py::arg("p"), py::arg("q"), py::arg("r"));

  py::class_<SzegedyOperator>(m, "SzegedyOperator")
      .def(py::init<StochasticMatrix>(), py::arg("matrix"))
      .def_property_readonly("chain", &SzegedyOperator::chain)
      .def_property_readonly("arcs",
                             [](const SzegedyOperator& op) {
                               const auto& b = op.basis();
                               std::vector<std::pair<Vertex, Vertex>> out;
                               for (std::size_t a = 0; a < b.size(); ++a) {
                                 const auto [i, j] = b.arc(a);
                                 out.emplace_back(b.vertices()[i], b.vertices()[j]);
                               }
                               return out;
                             })
      .def("phi", [](const SzegedyOperator& op, const std::string& v) { return op.phi(v).amplitudes(); })
      .def("apply_U",
           [](const SzegedyOperator& op, const Eigen::VectorXd& s) { return op.apply_U(state(op, s)).amplitudes(); })
      .def("apply_U_inverse",
           [](const SzegedyOperator& op, const Eigen::VectorXd& s) {
             return op.apply_U_inverse(state(op, s)).amplitudes();
           })
      .def("operator_matrix", &SzegedyOperator::operator_matrix, py::arg("cap") = kOperatorMatrixCap);

  m.def(
      "check_conditions",
      [](const StochasticMatrix& p, const VertexPartition& part, double tol_lump, double tol) {
        const auto lumped = lumped_or_throw(lump(p, part, tol_lump));
        const auto r = check_conditions(p, part, lumped, tol);
        py::dict d;
        d["weak_reversibility"] = check_dict(r.weak_reversibility);
        d["cycle_condition"] = check_dict(r.cycle_condition);
        d["triangle_condition"] = check_dict(r.triangle_condition);
        d["all_passed"] = r.all_passed();
        return d;
      },
      py::arg("matrix"), py::arg("partition"), py::arg("tol_lump") = kLumpTol,
      py::arg("tol") = kConsistencyTol);

  m.def(
      "aggregate",
      [](const SzegedyOperator& op, const VertexPartition& part, double tol_lump, double tol_consistency) {
        const auto a = aggregate(op, part, tol_lump, tol_consistency);
        py::dict linking;
        for (const auto& [key, s] : a.linking.values()) {
          linking[py::make_tuple(a.linking.vertices()[key.first], a.linking.blocks()[key.second])] = s;
        }
        py::list states;
        for (std::size_t k = 0; k < a.basis.size(); ++k) {
          const auto [u, v] = a.basis.pairs[k];
          states.append(py::make_tuple(py::make_tuple(part.name(u), part.name(v)),
                                       a.basis.states[k].amplitudes()));
        }
        py::dict residuals;
        residuals["projection"] = a.residuals.projection;
        residuals["swap"] = a.residuals.swap;
        residuals["intertwining"] = a.residuals.intertwining;
        py::dict out;
        out["lumped"] = a.lumped;
        out["linking"] = linking;
        out["states"] = states;
        out["residuals"] = residuals;
        out["warnings"] = a.linking.warnings();
        return out;
      },
      py::arg("operator"), py::arg("partition"), py::arg("tol_lump") = kLumpTol,
      py::arg("tol_consistency") = kConsistencyTol);

  m.def(
      "verblunsky",
      [](const SzegedyOperator& op, const std::string& root, double dep_tol) {
        return verblunsky_via_recurrence(op, root, dep_tol).sequence.alphas;
      },
      py::arg("operator"), py::arg("root"), py::arg("dep_tol") = kDependenceTol);
  m.def(
      "verblunsky_from_state",
      [](const SzegedyOperator& op, const Eigen::VectorXd& e0, double dep_tol) {
        return verblunsky_via_recurrence(op.swap_map(), op.reflection_map(), e0, dep_tol).sequence.alphas;
      },
      py::arg("operator"), py::arg("e0"), py::arg("dep_tol") = kDependenceTol);
  m.def(
      "cmv_orthonormalize",
      [](const SzegedyOperator& op, const Eigen::VectorXd& e0, double dep_tol) {
        const auto r = cmv_orthonormalize(op.U_map(), op.U_inverse_map(), e0, dep_tol);
        Eigen::MatrixXd basis(e0.size(), static_cast<Eigen::Index>(r.basis.size()));
        for (std::size_t k = 0; k < r.basis.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = r.basis[k];
        return py::make_tuple(basis, r.matrix);
      },
      py::arg("operator"), py::arg("e0"), py::arg("dep_tol") = kDependenceTol);
  m.def("build_cmv_matrix", [](std::vector<double> a) { return build_cmv_matrix(sequence(std::move(a))); },
        py::arg("alphas"));
  m.def("cmv_factors",
        [](std::vector<double> a) {
          const auto f = cmv_factors(sequence(std::move(a)));
          return py::make_tuple(f.L, f.M);
        },
        py::arg("alphas"));
  m.def("verblunsky_from_cmv_matrix",
        [](const Eigen::MatrixXd& c) { return verblunsky_from_cmv_matrix(c).alphas; }, py::arg("matrix"));
  m.def("geronimus_pqr",
        [](std::vector<double> a) {
          const auto c = geronimus_pqr(sequence(std::move(a)));
          return py::make_tuple(c.p, c.q, c.r);
        },
        py::arg("alphas"));
  m.def("verblunsky_from_pqr",
        [](std::vector<double> p, std::vector<double> q, std::vector<double> r) {
          return verblunsky_from_pqr(BirthDeathChain{std::move(p), std::move(q), std::move(r)}).alphas;
        },
        py::arg("p"), py::arg("q"), py::arg("r"));
  m.def("jacobi_from_verblunsky",
        [](std::vector<double> a) {
          const auto j = jacobi_from_verblunsky(sequence(std::move(a)));
          return py::make_tuple(j.r, j.s);
        },
        py::arg("alphas"));

  m.def(
      "reduce_density_coin",
      [](const SzegedyOperator& op, const Eigen::VectorXd& s) {
        const auto d = reduce_density_coin(state(op, s));
        return py::make_tuple(d.positions, d.rho);
      },
      py::arg("operator"), py::arg("state"));
  m.def(
      "von_neumann_entropy",
      [](const Eigen::MatrixXd& rho, bool bits) {
        const DensityMatrix d{std::vector<Vertex>(static_cast<std::size_t>(rho.rows())), rho};
        return bits ? von_neumann_entropy_bits(d) : von_neumann_entropy(d);
      },
      py::arg("rho"), py::arg("bits") = false);
  m.def(
      "simulate",
      [](const SzegedyOperator& op, const Eigen::VectorXd& s0, std::size_t steps) {
        const auto series = simulate_quantum(op, state(op, s0), steps);
        Eigen::MatrixXd out(static_cast<Eigen::Index>(series.size()), static_cast<Eigen::Index>(op.chain().size()));
        for (std::size_t t = 0; t < series.size(); ++t) {
          for (std::size_t i = 0; i < series[t].p.size(); ++i) {
            out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = series[t].p[i];
          }
        }
        return out;
      },
      py::arg("operator"), py::arg("state"), py::arg("steps"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int status = cli::run(args, out, err);
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"));
}
