#include <gtest/gtest.h>

#include "anosov/config.hpp"
#include "anosov/sampling.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace anosov;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Config, ParsesKeysValuesAndComments) {
  const auto c = Config::parse("# header\nradius = 0.05  # inline\n\n  variant=mane\nbase_matrix = 2,1;1,1\n");
  EXPECT_EQ(c.values().size(), 3u);
  EXPECT_EQ(c.get_string("variant", ""), "mane");
  EXPECT_DOUBLE_EQ(c.get_double("radius", 0, 0, 1), 0.05);
  EXPECT_EQ(c.get_matrix("base_matrix", "").dim(), 2);
}

TEST(Config, SyntaxErrors) {
  EXPECT_EQ(kind_of([] { Config::parse("no equals sign"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { Config::parse("= 3"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { Config::parse("a = 1\na = 2"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { Config::load("/nonexistent/file.cfg"); }), ErrorKind::ConfigError);
}

TEST(Config, TypedGettersCheckRanges) {
  const auto c = Config::parse("x = 2.5\nn = 7\nbad = 1.5q\nlist = 0.1, 0.2\nv = 1,2,3");
  EXPECT_EQ(c.get_double("missing", 4.0, 0, 10), 4.0);
  EXPECT_EQ(kind_of([&] { c.get_double("x", 0, 0, 1); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([&] { c.get_double("bad", 0, 0, 10); }), ErrorKind::ConfigError);
  EXPECT_EQ(c.get_int("n", 0, 0, 10), 7);
  EXPECT_EQ(kind_of([&] { c.get_int("n", 0, 0, 5); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([&] { c.get_int("x", 0, 0, 5); }), ErrorKind::ConfigError);
  EXPECT_EQ(c.get_doubles("list", {}, 0, 1), (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(c.get_vec("v", 3)->size(), 3);
  EXPECT_EQ(kind_of([&] { c.get_vec("v", 2); }), ErrorKind::ConfigError);
  EXPECT_FALSE(c.get_vec("none", 2).has_value());
}

TEST(Config, MatrixErrorsAreConfigErrors) {
  const auto c = Config::parse("a = 1,0;0,1\nb = 2,1;1,x\nc = 2,0;0,1\nd = 2,1;1,1");
  EXPECT_EQ(kind_of([&] { c.get_matrix("b", ""); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([&] { c.get_matrix("c", ""); }), ErrorKind::ConfigError);
  EXPECT_NO_THROW(c.get_matrix("d", ""));
}

TEST(Config, UnusedKeysReported) {
  const auto c = Config::parse("a = 1\nb = 2\nc = 3");
  c.get_string("b", "");
  EXPECT_EQ(c.unused(), (std::vector<std::string>{"a", "c"}));
}

TEST(Config, HashIgnoresOrderSpacingAndComments) {
  const auto a = Config::parse("x = 1\ny = 2\n");
  const auto b = Config::parse("# c\ny=2\n   x   =   1   # note\n");
  const auto c = Config::parse("x = 1\ny = 3\n");
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(a.hash().size(), 16u);
}

TEST(Config, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a(""), 14695981039346656037ull);
  EXPECT_EQ(hex64(fnv1a("a")), "af63dc4c8601ec8c");
}

TEST(Format, RoundTripsRandomDoubles) {
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.uniform(-60, 60)));
    EXPECT_EQ(std::stod(fmt(v)), v);
  }
}

TEST(Params, VariantsAndDefaults) {
  const auto c = Config::parse("variant = hopf\nradius = 0.04\nstrength = 0.5");
  const auto p = da_params(c, 3);
  EXPECT_EQ(p.variant, DAVariant::HOPF);
  EXPECT_EQ(p.radius, 0.04);
  EXPECT_EQ(p.center, Vec::Zero(3));
  EXPECT_EQ(kind_of([] { parse_variant("other"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { da_params(Config::parse("radius = 0.9"), 3); }), ErrorKind::ConfigError);
}

TEST(Csv, HeaderHashAndWidthCheck) {
  const auto path = (std::filesystem::temp_directory_path() / "anosov_csv_test.csv").string();
  {
    CsvWriter w(path, "00000000000000ff", {"a", "b"});
    w.write_row({"1", "2"});
    EXPECT_EQ(kind_of([&] { w.write_row({"1"}); }), ErrorKind::IoError);
  }
  std::ifstream in(path);
  std::string l1, l2, l3;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  EXPECT_EQ(l1, "# config_hash=00000000000000ff");
  EXPECT_EQ(l2, "a,b");
  EXPECT_EQ(l3, "1,2");
  std::remove(path.c_str());
}
