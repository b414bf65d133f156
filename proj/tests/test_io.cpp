// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sstream>

#include "bhw/io/config.hpp"
#include "bhw/io/table.hpp"

namespace bhw::io {
namespace {

TEST(Config, DefaultsCoverSchema) {
  RunConfig c;
  EXPECT_EQ(c.entries().size(), config_schema().size());
  EXPECT_EQ(c.get_int("L"), 6);
  EXPECT_EQ(c.get_string("units"), "angular");
  EXPECT_EQ(std::string(find_key("T")->unit), "mK");
  EXPECT_EQ(find_key("L_typo"), nullptr);
}

TEST(Config, RejectsUnknownAndMalformed) {
  RunConfig c;
  auto kind = [&](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Numerical;
  };
  EXPECT_EQ(kind([&] { c.set("nonsense", "1"); }), ErrorKind::Config);
  EXPECT_EQ(kind([&] { c.set("L", "6.5"); }), ErrorKind::Config);
  EXPECT_EQ(kind([&] { c.set("s", "abc"); }), ErrorKind::Config);
  EXPECT_EQ(kind([&] { c.set("calibrate", "maybe"); }), ErrorKind::Config);
  EXPECT_EQ(kind([&] { c.set_assignment("L"); }), ErrorKind::Config);
  EXPECT_EQ(kind([&] { c.set("s_values", "1,,2"); }), ErrorKind::Config);
}

TEST(Config, ListsAndRanges) {
  RunConfig c;
  c.set("s_values", "1:2:0.25");
  EXPECT_EQ(c.get_reals("s_values"), (std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0}));
  c.set("s_values", "0.1:0.3:0.1");
  EXPECT_EQ(c.get_reals("s_values").size(), 3u);
  c.set("L_values", "6, 8,10");
  EXPECT_EQ(c.get_ints("L_values"), (std::vector<int>{6, 8, 10}));
  c.set("L_values", "");
  EXPECT_THROW(c.get_ints("L_values"), Error);
  EXPECT_TRUE(c.get_ints("L_values", true).empty());
  EXPECT_THROW(c.set("s_values", "2:1:0.5"), Error);
}

TEST(Config, FileSyntax) {
  std::istringstream is("# comment\nL = 8   # trailing\n\nT=20\n");
  RunConfig c;
  c.load_stream(is, "test");
  EXPECT_EQ(c.get_int("L"), 8);
  EXPECT_EQ(c.get_real("T"), 20.0);
  std::istringstream bad("L = 8\nbogus = 1\n");
  try {
    c.load_stream(bad, "cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(std::string(e.what()).find("cfg:2"), std::string::npos);
  }
}

Document sample_doc(const RunConfig& c) {
  Document d;
  d.command = "spectrum";
  d.seed = 7;
  d.config = c.entries();
  auto& t = d.add_table("levels", {{"s", "GHz"}, {"n", "1"}, {"label", "1"}});
  t.add_row({0.1, std::int64_t{3}, std::string("a,b")});
  t.add_row({1.0 / 3.0, std::int64_t{-1}, std::string("plain")});
  auto& u = d.add_table("extra", {{"x", "mK"}});
  u.add_row({std::numeric_limits<double>::quiet_NaN()});
  d.report["note"] = "ok";
  return d;
}

TEST(Table, StructuralChecks) {
  EXPECT_THROW(ResultTable("t", {{"x", ""}}), Error);
  ResultTable t("t", {{"x", "1"}, {"y", "1"}});
  EXPECT_THROW(t.add_row({1.0}), Error);
  t.add_row({1.0, std::int64_t{2}});
  EXPECT_EQ(t.number(0, "y"), 2.0);
  EXPECT_THROW(t.column_index("z"), Error);
}

TEST(Table, CsvLayoutAndRoundTrip) {
  RunConfig c;
  c.set("L", "8");
  c.set("s_values", "0.5,1");
  const auto csv = to_csv(sample_doc(c));
  EXPECT_EQ(csv.rfind("# schema_version = 1\n", 0), 0u);
  EXPECT_NE(csv.find("# table: levels\n# units: GHz,1,1\ns,n,label\n0.1,3,\"a,b\"\n0.3333333333333333,-1,plain\n"),
            std::string::npos);
  EXPECT_NE(csv.find("\nnan\n"), std::string::npos);
  std::istringstream is(csv);
  RunConfig back;
  back.load_stream(is, "csv");
  EXPECT_EQ(back.entries(), c.entries());
}

TEST(Table, JsonRoundTrip) {
  RunConfig c;
  c.set("T_values", "10,30");
  const auto doc = sample_doc(c);
  const auto j = nlohmann::json::parse(to_json(doc));
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["tables"].size(), 2u);
  std::istringstream is(to_json(doc));
  RunConfig back;
  back.load_stream(is, "json");
  EXPECT_EQ(back.entries(), c.entries());
}

TEST(Table, ShortestRoundTripDoubles) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
}

}  // namespace
}  // namespace bhw::io
