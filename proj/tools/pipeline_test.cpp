#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pipeline.hpp"
#include "szl/io.hpp"

using namespace szl;
namespace io = szl::io;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "szl_pipeline_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("cmv on the hexahedron") {
  const std::vector<double> expected{0, -1.0 / 3, 0, 1.0 / 3, 0, 1};
  for (const char* route : {"lumped", "full"}) {
    const auto r = invoke({"cmv", "--graph", "hexahedron", "--partition", "distance:000", "--route", route});
    REQUIRE(r.status == 0);
    const auto alphas = io::parse(r.out).at("alphas").get<std::vector<double>>();
    REQUIRE(alphas.size() == expected.size());
    for (std::size_t k = 0; k < alphas.size(); ++k) CHECK(std::abs(alphas[k] - expected[k]) <= 1e-9);
  }
  const auto g = invoke({"cmv", "--graph", "hexahedron", "--partition", "distance", "--geronimus"});
  REQUIRE(g.status == 0);
  const auto chain = io::birth_death_from_json(io::parse(g.out).at("geronimus"));
  CHECK(chain.q.back() == doctest::Approx(1.0));

  const auto csv = invoke({"cmv", "--graph", "hexahedron", "--partition", "distance", "--format", "csv"});
  REQUIRE(csv.status == 0);
  CHECK(io::matrix_from_csv(csv.out).rows() == 6);
}

TEST_CASE("free-group balls report the trusted range") {
  const auto r = invoke({"cmv", "--graph", "free_ball", "--generators", "3", "--involutive", "--radius", "5"});
  REQUIRE(r.status == 0);
  CHECK(io::parse(r.out).at("boundary_trusted_up_to") == 6);
}

TEST_CASE("outputs are deterministic") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"gen", "--graph", "icosahedron"},
        {"aggregate", "--graph", "dodecahedron", "--partition", "distance"},
        {"quantize", "--graph", "tetrahedron"},
        {"simulate", "--graph", "hypercube", "--n", "4", "--steps", "5"}}) {
    const auto a = invoke(args);
    const auto b = invoke(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}

TEST_CASE("files written by one command feed the next") {
  const auto graph = scratch("q4.json");
  REQUIRE(invoke({"gen", "--graph", "hypercube", "--n", "4", "--out", graph.string()}).status == 0);
  const auto g = io::graph_from_json(io::parse([&] {
    std::ifstream in(graph);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }()));
  CHECK(g.size() == 16);

  const auto lumped = invoke({"lump", "--graph", graph.string(), "--partition", "distance:0000"});
  REQUIRE(lumped.status == 0);
  const auto matrix = scratch("lumped.json");
  write(matrix, lumped.out);
  const auto p = io::matrix_from_json(io::parse(lumped.out));
  CHECK(p.at(1, 2) == doctest::Approx(0.75));

  const auto from_matrix = invoke({"cmv", "--matrix", matrix.string(), "--initial", "0"});
  const auto from_graph = invoke({"cmv", "--graph", graph.string(), "--partition", "distance:0000"});
  REQUIRE(from_matrix.status == 0);
  CHECK(io::parse(from_matrix.out).at("alphas") == io::parse(from_graph.out).at("alphas"));
}

TEST_CASE("aggregate reports linking and residuals") {
  const auto r = invoke({"aggregate", "--graph", "hexahedron", "--partition", "distance"});
  REQUIRE(r.status == 0);
  const auto j = io::parse(r.out);
  CHECK(j.at("consistency").at("all_passed") == true);
  CHECK(j.at("basis").size() == 6);
  CHECK(j.at("residuals").at("max").get<double>() < 1e-10);
  const auto s = io::linking_from_json(j.at("linking"));
  // sqrt(d_u / (d_uv |u|)) with d_u = 3, d_uv = 2, |u| = 3
  CHECK(s.at("001", "2") == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("domain errors exit 1 with a JSON witness") {
  const auto part = scratch("klm.json");
  write(part, R"({"blocks": [["001", "010"], ["000", "011", "110", "101"], ["100", "111"]], "names": ["K", "L", "M"]})");
  const auto r = invoke({"lump", "--graph", "hexahedron", "--partition", "file:" + part.string()});
  CHECK(r.status == 1);
  const auto e = io::parse(r.out).at("error");
  CHECK(e.at("kind") == "NotLumpable");
  CHECK(e.at("witness").at("first_sum") != e.at("witness").at("second_sum"));

  const auto bad_root = invoke({"simulate", "--graph", "hexahedron", "--initial", "999"});
  CHECK(bad_root.status == 1);
  CHECK(io::parse(bad_root.out).at("error").at("kind") == "UnknownVertex");
}

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).status == 2);
  CHECK(invoke({"frobnicate"}).status == 2);
  CHECK(invoke({"gen"}).status == 2);
  CHECK(invoke({"gen", "--graph", "nonagon"}).status == 2);
  CHECK(invoke({"gen", "--graph", "hypercube", "--n", "0"}).status == 2);
  CHECK(invoke({"lump", "--graph", "hexahedron"}).status == 2);
  CHECK(invoke({"lump", "--graph", "hexahedron", "--partition", "sideways"}).status == 2);
  CHECK(invoke({"cmv", "--graph", "hexahedron", "--route", "diagonal"}).status == 2);
  CHECK(invoke({"cmv", "--graph", "hexahedron", "--tol-dep", "-1"}).status == 2);
  CHECK(invoke({"gen", "--graph", "hexahedron", "--format", "csv"}).status == 2);
  CHECK(invoke({"verify", "--suite", "other"}).status == 2);
  const auto missing = scratch("missing.json");
  std::filesystem::remove(missing);
  CHECK(invoke({"cmv", "--matrix", missing.string()}).status == 2);
  const auto broken = scratch("broken.json");
  write(broken, "{\"vertices\": [");
  CHECK(invoke({"gen", "--graph", broken.string()}).status == 2);
}

TEST_CASE("verify runs the reference suite") {
  const auto r = invoke({"verify"});
  CHECK(r.status == 0);
  const auto j = io::parse(r.out);
  CHECK(j.at("passed") == true);
  CHECK(j.at("cases").size() >= 12);
  CHECK(invoke({"verify", "--suite", "golden"}).out == r.out);
}
