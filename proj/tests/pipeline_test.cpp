#include "divfield/pipeline.hpp"

#include <gtest/gtest.h>

namespace divfield {
namespace {

JobSpec job(CurveMode mode, std::vector<long> roots, std::vector<std::string> checks) {
  JobSpec j;
  j.mode = mode;
  for (long r : roots) j.roots.emplace_back(r);
  j.checks = std::move(checks);
  return j;
}

TEST(JobSpec, FromJson) {
  const auto j = JobSpec::from_json(Json::parse(
      R"({"mode": "degree4", "roots": ["0", "1/2", -3, "7"], "checks": ["identities"], "output_path": "r.json"})"));
  EXPECT_EQ(j.mode, CurveMode::degree4);
  EXPECT_EQ(j.roots[1], Rational(1, 2));
  EXPECT_EQ(j.roots[2], -3);
  EXPECT_EQ(j.output_path, "r.json");
  EXPECT_NO_THROW(j.validate());
  EXPECT_EQ(JobSpec::from_json(Json::parse(R"({"roots": [0, 1, 10]})")).checks, all_checks());
  EXPECT_THROW(JobSpec::from_json(Json::parse(R"({"roots": ["1/0", 1, 2]})")), ParseError);
  EXPECT_THROW(JobSpec::from_json(Json::parse(R"({"roots": [0.5, 1, 2]})")), ParseError);
  EXPECT_THROW(JobSpec::from_json(Json::parse(R"([1, 2])")), ParseError);
  auto bad = job(CurveMode::degree3, {0, 1, 2}, {});
  EXPECT_THROW(bad.validate(), ParseError);
  bad.checks = {"everything"};
  EXPECT_THROW(bad.validate(), ParseError);
}

TEST(Run, RepeatedRootsFailAtParse) {
  try {
    run(job(CurveMode::degree3, {0, 1, 1}, {"identities"}));
    FAIL();
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage, "parse");
  }
}

TEST(Run, Degree4Identities) {
  const auto rep = run(job(CurveMode::degree4, {0, 1, 2, 5}, {"identities"}));
  EXPECT_TRUE(rep.pass);
  const Json j = rep.to_json();
  EXPECT_EQ(j["tower"]["gamma"], Json::array({"15", "12", "7"}));
  EXPECT_EQ(j["checks"]["identities"]["verdict"], "pass");
  EXPECT_EQ(j["checks"].size(), 1u);
}

TEST(Run, AllChecksOnSmallCurve) {
  const auto rep = run(job(CurveMode::degree3, {0, 1, 2}, all_checks()));
  EXPECT_TRUE(rep.pass);
  const Json j = rep.to_json();
  EXPECT_EQ(j["checks"]["galois_group"]["verdict"], "not_applicable");
  EXPECT_EQ(j["checks"]["theorem1a"]["closure_dimension"], 16);
  EXPECT_EQ(j["degeneracy"]["galois_generators_defined"], false);
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_NE(rep.to_text().find("verdict: pass"), std::string::npos);
}

TEST(Run, ByteIdenticalJson) {
  const auto spec = job(CurveMode::degree3, {0, 1, 2}, {"identities", "torsion", "theorem1a"});
  EXPECT_EQ(run(spec).to_json().dump(2), run(spec).to_json().dump(2));
  EXPECT_EQ(dump_torsion(spec).dump(), dump_torsion(spec).dump());
}

TEST(Dump, TorsionListsSixtyFourPoints) {
  const Json t = dump_torsion(job(CurveMode::degree3, {0, 1, 10}, all_checks()));
  ASSERT_EQ(t["points"].size(), 64u);
  EXPECT_EQ(t["census"], Json({{"1", 1}, {"2", 3}, {"4", 12}, {"8", 48}}));
  for (const auto& p : t["points"]) {
    const int o = p["order"];
    EXPECT_TRUE(o == 1 || o == 2 || o == 4 || o == 8);
  }
  EXPECT_TRUE(t["points"][0]["x"].is_null());
}

TEST(Dump, TowerLevelsInAdjunctionOrder) {
  const Json t = dump_tower(job(CurveMode::degree3, {0, 1, 10}, all_checks()));
  std::vector<std::string> labels;
  for (const auto& l : t["levels"]) labels.push_back(l["label"]);
  EXPECT_EQ(labels, (std::vector<std::string>{"zeta4", "A2", "zeta8", "B1", "B2", "B3"}));
  EXPECT_EQ(t["levels"][0]["radicand"], "-1");
  EXPECT_EQ(t["levels"][1]["radicand"], "10");
  EXPECT_EQ(t["generators"]["A1"], "3*zeta4");
}

TEST(GroupReport, SevenRelations) {
  bool ok = false;
  const Json g = group_report(&ok);
  EXPECT_TRUE(ok);
  ASSERT_EQ(g["presentation"]["relations"].size(), 7u);
  for (const auto& r : g["presentation"]["relations"]) EXPECT_TRUE(r["holds"].get<bool>());
  EXPECT_EQ(g["presentation"]["presented_order"], 32);
  EXPECT_EQ(g["verdict"], "pass");
}

}  // namespace
}  // namespace divfield
