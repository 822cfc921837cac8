#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hoss/serialize.hpp"
#include "oracles.hpp"

using namespace hoss;

TEST_SUITE("serialize") {

TEST_CASE("MultiPoly round trip and canonical order") {
  MultiPoly f(2);
  f.add_term({2, 0}, Complex(1, -2));
  f.add_term({0, 1}, 0.5);
  f.add_term({1, 3}, Complex(0, 3));
  const Json j = to_json(f);
  CHECK(j.at("n_vars") == 2);
  REQUIRE(j.at("terms").size() == 3);
  CHECK(j["terms"][0]["k"] == Json::array({0, 1}));
  CHECK(j["terms"][1]["k"] == Json::array({1, 3}));
  CHECK(j["terms"][2]["k"] == Json::array({2, 0}));
  CHECK(multipoly_from_json(j) == f);
  CHECK(multipoly_from_json(Json::parse(j.dump())) == f);
  CHECK_THROWS_AS(multipoly_from_json(Json::parse(R"({"n_vars": 2, "terms": [{"k": [1], "re": 1}]})")), StructuralError);
  CHECK_THROWS_AS(multipoly_from_json(Json::parse(R"({"terms": []})")), StructuralError);
}

TEST_CASE("MomentTable uses one-based term coordinates") {
  MomentTable t;
  t.term = parse_term("1^2,3^1");
  t.m = 3;
  t.tv_bound = 0.25;
  t.entries[{0, 0, 0}] = Complex(1, 2);
  t.entries[{1, 0, 2}] = -0.5;
  const Json j = to_json(t);
  CHECK(j.at("term") == Json::parse("[[1,2],[3,1]]"));
  CHECK(j.at("entries").size() == 2);
  const auto back = moment_table_from_json(j);
  CHECK(back.term == t.term);
  CHECK(back.entries == t.entries);
  CHECK(back.tv_bound == t.tv_bound);
}

TEST_CASE("EnsembleSpec") {
  EnsembleSpec s;
  s.kind = EnsembleKind::SelfAdjointDiagonal;
  s.n = 3;
  s.dim = 7;
  s.v_scale = 0.1;
  s.seed = 0xffffffffffffffffULL;
  const auto back = ensemble_spec_from_json(Json::parse(to_json(s).dump()));
  CHECK(back.kind == s.kind);
  CHECK(back.n == 3);
  CHECK(back.dim == 7);
  CHECK(back.v_scale == 0.1);
  CHECK(back.seed == s.seed);
  CHECK_THROWS_AS(ensemble_spec_from_json(Json::parse(R"({"kind": "nope"})")), StructuralError);
  CHECK_THROWS_AS(ensemble_spec_from_json(Json::parse(R"({"v_scale": -1})")), StructuralError);
  CHECK_THROWS_AS(ensemble_spec_from_json(Json::parse(R"({"dim": "four"})")), StructuralError);
}

TEST_CASE("sweep report schema") {
  SweepReport r;
  r.total = 3;
  r.passed_sound = 3;
  r.passed_strict = 2;
  r.max_ratio = 0.5;
  SweepCase c;
  c.seed = 17;
  c.term = "1^2";
  r.failures.push_back(c);
  const Json j = to_json(r);
  CHECK(j.at("schema") == 1);
  CHECK(j.at("failures")[0].at("seed") == 17);
  for (const char* key : {"total", "passed_sound", "passed_strict", "max_ratio", "failures", "out_of_hypothesis"})
    CHECK(j.contains(key));
}

TEST_CASE("atomic write") {
  const auto dir = std::filesystem::temp_directory_path() / "hoss_serialize_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "out.json";
  write_atomic(file, "{\"a\": 1}\n");
  write_atomic(file, "{\"a\": 2}\n");
  std::ifstream in(file);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(text == "{\"a\": 2}\n");
  CHECK_FALSE(std::filesystem::exists(dir / "out.json.tmp"));
  CHECK_THROWS(write_atomic(dir / "missing" / "x.json", "{}"));
  std::filesystem::remove_all(dir);
}

}
