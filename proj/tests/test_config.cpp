#include "spotlab/config.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "spotlab/manifest.hpp"

using namespace spotlab;

TEST(Config, ParsesKeysCommentsAndBlanks) {
  const auto cfg = KeyValueConfig::parse_string(
      "# experiment\n"
      "type = tradeoff\n"
      "\n"
      "n = 10000   # servers\n"
      "seed = 42\n"
      "velocities = 0.01, 0.1\n");
  EXPECT_EQ(cfg.get_string("type"), "tradeoff");
  EXPECT_EQ(cfg.get_int("n"), 10000);
  EXPECT_EQ(cfg.get_uint64("seed"), 42u);
  const auto v = cfg.get_double_list("velocities");
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0], 0.01);
  EXPECT_EQ(v[1], 0.1);
  EXPECT_FALSE(cfg.has("missing"));
  EXPECT_EQ(cfg.get_int("missing", 7), 7);
}

TEST(Config, MalformedLineReportsLineNumber) {
  try {
    KeyValueConfig::parse_string("type = scenario\nnot a pair\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Config, DuplicateKeyRejected) {
  EXPECT_THROW(KeyValueConfig::parse_string("a = 1\na = 2\n"), ConfigError);
}

TEST(Config, BadNumberRejected) {
  const auto cfg = KeyValueConfig::parse_string("n = twelve\nxs = 1,two\n");
  EXPECT_THROW(cfg.get_int("n"), ConfigError);
  EXPECT_THROW(cfg.get_int_list("xs"), ConfigError);
}

TEST(Config, UnknownKeyDetection) {
  const auto cfg = KeyValueConfig::parse_string("type = sweep\nbogus = 1\n");
  EXPECT_THROW(cfg.require_known({"type", "n_values"}), ConfigError);
  EXPECT_NO_THROW(cfg.require_known({"type", "bogus"}));
}

TEST(Config, MissingRequiredKeyThrows) {
  const auto cfg = KeyValueConfig::parse_string("type = sweep\n");
  EXPECT_THROW(cfg.get_string("n_values"), ConfigError);
}

TEST(Manifest, WritesJsonWithOutputsAndConfig) {
  RunManifest m;
  m.command = "run tradeoff";
  m.seed = 42;
  m.timestamp = "2000-01-01T00:00:00Z";
  m.wall_time_seconds = 1.5;
  m.config_echo = {{"type", "tradeoff"}, {"n", "100"}};
  m.outputs = {"summary.csv", "trials.csv"};
  std::ostringstream os;
  write_manifest_json(os, m);
  const std::string text = os.str();
  EXPECT_NE(text.find("\"seed\": 42"), std::string::npos);
  EXPECT_NE(text.find("summary.csv"), std::string::npos);
  EXPECT_NE(text.find("\"type\": \"tradeoff\""), std::string::npos);
  EXPECT_NE(text.find("spotlab 0.1.0"), std::string::npos);
}
