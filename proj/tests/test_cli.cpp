#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "dgatk/catalog.hpp"
#include "dgatk/cli.hpp"
#include "dgatk/report.hpp"

using namespace dgatk;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run dga(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, HomologyOfCatalogEntry) {
  auto r = dga({"homology", "examples:C-p2", "--max-degree", "6", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  RunReport rep = parse_report(r.out);
  EXPECT_EQ(rep.schema_version, kSchemaVersion);
  const auto& g = rep.results["groups"];
  ASSERT_EQ(g.size(), 7u);
  for (int n = 0; n <= 6; ++n) {
    EXPECT_EQ(g[static_cast<std::size_t>(n)]["degree"], n);
    EXPECT_EQ(g[static_cast<std::size_t>(n)]["group"], n == 0 || n == 2 ? "Z/2" : "0");
    EXPECT_EQ(g[static_cast<std::size_t>(n)]["valid_through"], 6);
  }
}

TEST(Cli, DistinguishHeadlinePair) {
  auto r = dga({"distinguish", "examples:C-p2", "examples:D-p2", "--max-degree", "6", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  RunReport rep = parse_report(r.out);
  EXPECT_EQ(rep.results["verdict"], "not quasi-isomorphic");
  EXPECT_NE(rep.results["witness"].get<std::string>().find("degree-1 squaring"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  auto r = dga({"homology", "does-not-exist", "--max-degree", "3"});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("unknown input"), std::string::npos);
  EXPECT_EQ(dga({"homology", "examples:C-p2"}).code, kUsage);  // missing --max-degree
  EXPECT_EQ(dga({"frobnicate"}).code, kUsage);
  EXPECT_EQ(dga({"homology", "examples:C-p2", "--max-degree", "3", "--format", "xml"}).code, kUsage);
  EXPECT_EQ(dga({"homology", "examples:C-eh", "--max-degree", "12", "--monomial-cap", "3"}).code, kResource);
  // H_0 not generated by the unit
  std::string path = ::testing::TempDir() + "/h0.dga";
  std::ofstream(path) << R"(dga "X" over Z { gen x:0; })";
  EXPECT_EQ(dga({"homology", path, "--max-degree", "3"}).code, kUsage);
  std::ofstream(path) << R"(dga "X" over Z { gen x:2; gen y:2; })";
  EXPECT_EQ(dga({"resolve", path, "--max-degree", "4"}).code, kOk);
  EXPECT_EQ(dga({"kinv", path, "--n", "1"}).code, kHypothesis);
}

TEST(Cli, ParseErrorIsUsage) {
  std::string path = ::testing::TempDir() + "/bad.dga";
  std::ofstream(path) << "dga \"X\" over Z { gen e:1; rel f; }";
  auto r = dga({"validate", path});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_NE(r.err.find("parse error"), std::string::npos);
}

TEST(Cli, JsonIsDeterministicAndRoundTrips) {
  for (auto args : std::vector<std::vector<std::string>>{
           {"hh", "examples:F2", "--max-degree", "4", "--ring", "--format", "json"},
           {"kinv", "examples:C-p2", "--n", "1", "--format", "json"},
           {"thh-compare", "examples:C-p2", "examples:D-p2", "--n", "1", "--format", "json"},
           {"classify", "examples:C3-p3", "--n", "1", "--format", "json"},
           {"catalog", "--format", "json"}}) {
    auto a = dga(args), b = dga(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    RunReport r = parse_report(a.out);
    EXPECT_EQ(export_report(r, "json"), a.out);
    EXPECT_EQ(parse_report(export_report(r, "json")), r);
  }
}

TEST(Cli, TextListsDegreesAscending) {
  auto r = dga({"hh", "examples:F3", "--max-degree", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t last = 0;
  for (int n = 0; n <= 4; ++n) {
    auto at = r.out.find("degree=" + std::to_string(n) + " ");
    ASSERT_NE(at, std::string::npos);
    EXPECT_GT(at, last);
    last = at;
  }
}

TEST(Cli, SeedDoesNotChangeResults) {
  auto a = dga({"hh", "examples:F2", "--max-degree", "4", "--format", "json", "--seed", "1"});
  auto b = dga({"hh", "examples:F2", "--max-degree", "4", "--format", "json", "--seed", "2"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, OtherCommandsRun) {
  for (auto args : std::vector<std::vector<std::string>>{
           {"validate", "examples:C-eh"},
           {"resolve", "examples:F2", "--max-degree", "5"},
           {"postnikov", "examples:C-eh", "--n", "2", "--max-degree", "5"},
           {"tensor", "examples:F2", "examples:F2", "--max-degree", "5"},
           {"tensor", "examples:C-eh", "--prime", "2", "--max-degree", "6"},
           {"der", "examples:F3", "--max-degree", "4"},
           {"hh", "examples:F2", "--max-degree", "3", "--route", "kill-cycles"},
           {"hh", "examples:C-p2", "--ground", "Fp", "--prime", "2", "--max-degree", "2"}}) {
    auto r = dga(args);
    EXPECT_EQ(r.code, 0) << args[0] << ": " << r.err;
  }
  auto p = parse_report(dga({"postnikov", "examples:C-eh", "--n", "2", "--max-degree", "5", "--format", "json"}).out);
  for (const auto& row : p.results["section_homology"]) {
    const int n = row["degree"].get<int>();
    EXPECT_EQ(row["group"], n == 0 || n == 2 ? "Z/2" : "0") << n;
  }
}

TEST(Cli, CatalogContents) {
  EXPECT_NE(find_entry("C-p2"), nullptr);
  EXPECT_EQ(find_entry("C-p2")->text, R"(dga "C-p2" over Z { gen e:1; diff e = 2; rel e^4; })");
  EXPECT_NE(find_entry("C-eh"), nullptr);
  for (auto id : {"F2", "F3", "F5"}) EXPECT_NE(find_entry(id), nullptr);
  for (const auto& e : catalog()) {
    EXPECT_NO_THROW(e.presentation()) << e.id;
    for (const auto& c : e.checks) EXPECT_TRUE(c.source == "published" || c.source == "trivial" || c.source == "derived");
  }
}
