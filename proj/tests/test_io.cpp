#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "submodstab/io.hpp"

using namespace submodstab;
using nlohmann::json;

TEST_CASE("function specs round-trip") {
  const std::vector<CubeFunction> fs{
      CubeFunction::graph_cut(3, {{0, 1, 1.5}, {1, 2, 0.5}}),
      CubeFunction::coverage(2, {1.0, 2.0, 4.0}, {{0, 1}, {1, 2}}),
      CubeFunction::budget_additive(3, {1.0, 2.0, 3.0}, 4.0),
      CubeFunction::uniform_matroid_rank(4, 2),
      CubeFunction::dense(2, {0.0, 1.0, 1.0, 1.5}),
  };
  for (const auto& f : fs) {
    const auto back = io::function_from_json(json::parse(io::function_to_json(f).dump()));
    CHECK(back.table() == f.table());
  }
  const auto cut = io::function_from_json(json::parse(R"({"n": 2, "kind": "cut", "edges": [[0, 1, 1.0]]})"));
  CHECK(cut.table() == std::vector<double>{0, 1, 1, 0});
}

TEST_CASE("malformed function specs") {
  for (const char* text : {R"([1, 2])", R"({"kind": "cut"})", R"({"n": 2, "kind": "mystery"})",
                           R"({"n": 2, "kind": "dense", "table": [1, 2]})",
                           R"({"n": 2, "kind": "cut", "edges": [[0, 1]]})",
                           R"({"n": 2, "kind": "uniform_matroid", "k": "two"})"}) {
    INFO(text);
    CHECK_THROWS_AS(io::function_from_json(json::parse(text)), io::FormatError);
  }
}

TEST_CASE("distribution specs") {
  CHECK(io::distribution_from_json(json::parse(R"({"uniform": 3})")).is_uniform());
  const auto d = io::distribution_from_json(json::parse(R"({"p": [0.2, 0.7]})"));
  CHECK(d.p() == std::vector<double>{0.2, 0.7});
  CHECK(io::distribution_from_json(io::distribution_to_json(d)) == d);
  CHECK_THROWS_AS(io::distribution_from_json(json::parse(R"({"p": [0.0]})")), io::FormatError);
  CHECK_THROWS_AS(io::distribution_from_json(json::parse(R"({"q": 1})")), io::FormatError);
}

TEST_CASE("database files") {
  const auto db = io::database_from_json(json::parse(R"({"d": 3, "items": [[1, 0, 0], [0, 1, 1]]})"));
  CHECK(db.items() == std::vector<Mask>{0b001, 0b110});
  CHECK(io::database_to_json(db) == json::parse(R"({"d": 3, "items": [[1, 0, 0], [0, 1, 1]]})"));
  CHECK_THROWS_AS(io::database_from_json(json::parse(R"({"d": 2, "items": [[1, 0, 0]]})")), io::FormatError);
  CHECK_THROWS_AS(io::database_from_json(json::parse(R"({"d": 2, "items": [[2, 0]]})")), io::FormatError);
  CHECK_THROWS_AS(io::database_from_json(json::parse(R"({"d": 2, "items": []})")), io::FormatError);
}

TEST_CASE("reading files") {
  CHECK_THROWS_AS(io::read_json_file("/nonexistent/spec.json"), io::FormatError);
  const std::string path = "submodstab_io_test.json";
  {
    std::ofstream out(path);
    out << "{\"n\": 2, ";
  }
  CHECK_THROWS_AS(io::read_json_file(path), io::FormatError);
  {
    std::ofstream out(path);
    out << R"({"uniform": 2})";
  }
  CHECK(io::read_json_file(path)["uniform"] == 2);
  std::remove(path.c_str());
}

TEST_CASE("csv output") {
  CHECK(io::subset_string(0) == "{}");
  CHECK(io::subset_string(0b1001) == "{0,3}");

  std::ostringstream out;
  const auto e = transform(CubeFunction::graph_cut(2, {{0, 1, 1.0}}), ProductDistribution::uniform(2));
  io::write_expansion_csv(out, e);
  CHECK(out.str() == "mask,subset,coefficient\n0,\"{}\",0.5\n1,\"{0}\",0\n2,\"{1}\",0\n3,\"{0,1}\",-0.5\n");

  std::ostringstream poly;
  io::write_polynomial_csv(poly, truncate(e, 1));
  CHECK(poly.str() == "mask,subset,coefficient\n0,\"{}\",0.5\n1,\"{0}\",0\n2,\"{1}\",0\n");
}
