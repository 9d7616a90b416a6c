#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cbdwr/config.hpp"

using namespace cbdwr;

namespace {

RunConfig parse(const std::string& text, const std::string& base = ".") {
  std::istringstream in(text);
  return parse_config(in, "test.cfg", base);
}

}  // namespace

TEST(Config, Defaults) {
  const RunConfig c = parse("");
  EXPECT_EQ(c.adapt.mode, RefinementMode::Adaptive);
  EXPECT_EQ(c.adapt.max_steps, 40);
  EXPECT_DOUBLE_EQ(c.adapt.theta, 0.5);
  EXPECT_EQ(c.model.source, 10.0);
  EXPECT_EQ(c.model.epsilon, 1e-10);
  EXPECT_EQ(c.reference, kReferenceValues);
  EXPECT_FALSE(c.dump_fields);
  EXPECT_EQ(c.layout, Layout::Published);
}

TEST(Config, AllKeys) {
  const RunConfig c = parse(
      "# comment line\n"
      "mode = uniform   # trailing comment\n"
      "max_dofs = 3e5\n"
      "max_steps=12\n"
      "theta = 0.3\n"
      "f = 5\n"
      "epsilon = 1e-8\n"
      "newton_abs_tol = 1e-12\n"
      "quad_order_omega2 = 10\n"
      "ref_J3 = 1.5\n"
      "output_dir = out dir\n"
      "dump_fields = true\n"
      "layout = stated\n");
  EXPECT_EQ(c.adapt.mode, RefinementMode::Uniform);
  EXPECT_EQ(c.adapt.max_dofs, 300000u);
  EXPECT_EQ(c.adapt.max_steps, 12);
  EXPECT_DOUBLE_EQ(c.adapt.theta, 0.3);
  EXPECT_EQ(c.model.source, 5.0);
  EXPECT_EQ(c.model.epsilon, 1e-8);
  EXPECT_EQ(c.adapt.newton.abs_tol, 1e-12);
  EXPECT_EQ(c.model.quadrature_order[1], 10);
  EXPECT_EQ(c.reference[2], 1.5);
  EXPECT_EQ(c.reference[0], kReferenceValues[0]);
  EXPECT_EQ(c.output_dir, "out dir");
  EXPECT_TRUE(c.dump_fields);
  EXPECT_EQ(c.layout, Layout::Stated);
  EXPECT_EQ(c.model.operators[2], LocalOperator::SaturatingDiffusion);
  EXPECT_EQ(c.adapt.qois[0].subdomain, Subdomain::Omega1);
}

TEST(Config, UnknownKeyNamesKeyAndPosition) {
  try {
    parse("mode = adaptive\n  thetaa = 0.5\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("thetaa"), std::string::npos);
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
}

TEST(Config, Rejections) {
  EXPECT_THROW(parse("epsilon = 0\n"), ConfigError);
  EXPECT_THROW(parse("theta = 1\n"), ConfigError);
  EXPECT_THROW(parse("theta = abc\n"), ConfigError);
  EXPECT_THROW(parse("max_steps = 2.5\n"), ConfigError);
  EXPECT_THROW(parse("mode = sideways\n"), ConfigError);
  EXPECT_THROW(parse("just some words\n"), ConfigError);
  EXPECT_THROW(parse("theta = 0.5\ntheta = 0.4\n"), ConfigError);
  EXPECT_THROW(parse("newton_abs_tol = 1e-6\n"), ConfigError);
  EXPECT_THROW(parse("ref_J1 = 0\n"), ConfigError);
  EXPECT_THROW(parse("max_steps =\n"), ConfigError);
}

TEST(Config, ReferenceFile) {
  const auto dir = std::filesystem::temp_directory_path() / "cbdwr_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "reference.txt");
    out << "# computed\nref_J1 = 0.5\nref_J5 = 2.5\n";
  }
  const RunConfig c = parse("reference_file = reference.txt\nref_J5 = 3\n", dir.string());
  EXPECT_EQ(c.reference[0], 0.5);
  EXPECT_EQ(c.reference[1], kReferenceValues[1]);
  EXPECT_EQ(c.reference[4], 3.0);
  EXPECT_THROW(parse("reference_file = missing.txt\n", dir.string()), ConfigError);
  std::filesystem::remove_all(dir);
}
