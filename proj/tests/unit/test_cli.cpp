#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("cbdwr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
  std::string read(const std::string& name) const {
    std::ifstream in(dir / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  int run(const std::string& args) const {
    const std::string cmd = "cd '" + dir.string() + "' && '" CBDWR_CLI_PATH "' " + args + " >out.txt 2>err.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n' ? 1 : 0;
  return n;
}

}  // namespace

TEST(Cli, UniformRunWritesOutputs) {
  Sandbox sb;
  sb.write("u.cfg", "mode = uniform\nmax_steps = 2\noutput_dir = res\n");
  ASSERT_EQ(sb.run("run u.cfg"), 0) << sb.read("err.txt");
  const std::string csv = sb.read("res/convergence.csv");
  EXPECT_EQ(count_lines(csv), 4);
  EXPECT_EQ(csv.rfind("step,dofs_primal,", 0), 0u);
  EXPECT_NE(sb.read("res/summary.txt").find("slope_abserr_Jc"), std::string::npos);
}

TEST(Cli, RerunsAreBitwiseIdentical) {
  Sandbox sb;
  sb.write("a.cfg", "max_steps = 6\n");
  ASSERT_EQ(sb.run("run a.cfg --output one"), 0);
  ASSERT_EQ(sb.run("run a.cfg --output two"), 0);
  EXPECT_EQ(sb.read("one/convergence.csv"), sb.read("two/convergence.csv"));
}

TEST(Cli, DumpFields) {
  Sandbox sb;
  sb.write("d.cfg", "max_steps = 1\n");
  ASSERT_EQ(sb.run("--dump-fields run d.cfg --output vtk"), 0) << sb.read("err.txt");
  const std::string vtk = sb.read("vtk/step_1.vtk");
  EXPECT_NE(vtk.find("POINT_DATA"), std::string::npos);
  EXPECT_NE(vtk.find("cell_indicator"), std::string::npos);
  EXPECT_NE(vtk.find("vertex_indicator"), std::string::npos);
}

TEST(Cli, UnknownKeyExitsWithTwo) {
  Sandbox sb;
  sb.write("bad.cfg", "thetaa = 0.5\n");
  EXPECT_EQ(sb.run("run bad.cfg"), 2);
  EXPECT_NE(sb.read("err.txt").find("thetaa"), std::string::npos);
  EXPECT_NE(sb.read("err.txt").find("bad.cfg:1:1"), std::string::npos);
}

TEST(Cli, ZeroEpsilonRejectedBeforeVerify) {
  Sandbox sb;
  sb.write("eps.cfg", "epsilon = 0\n");
  EXPECT_EQ(sb.run("verify eps.cfg"), 2);
  EXPECT_EQ(sb.read("out.txt").find("PASS"), std::string::npos);
}

TEST(Cli, MidpointRuleOnOmega2FailsVerify) {
  Sandbox sb;
  sb.write("q1.cfg", "quad_order_omega2 = 1\n");
  EXPECT_EQ(sb.run("verify q1.cfg"), 1);
  const std::string out = sb.read("out.txt");
  // Residual and Jacobian share the rule, so the FD comparison itself holds.
  EXPECT_NE(out.find("PASS jacobian_fd"), std::string::npos);
  EXPECT_NE(out.find("FAIL adaptive_properties"), std::string::npos);
  EXPECT_NE(out.find("singular"), std::string::npos);
}

TEST(Cli, MissingConfigAndBadUsage) {
  Sandbox sb;
  EXPECT_EQ(sb.run("run nothing.cfg"), 2);
  EXPECT_EQ(sb.run("frobnicate x.cfg"), 2);
}

TEST(Cli, VerifyDefaultConfigPasses) {
  Sandbox sb;
  sb.write("v.cfg", "");
  EXPECT_EQ(sb.run("verify v.cfg"), 0) << sb.read("out.txt");
  EXPECT_EQ(sb.read("out.txt").find("FAIL"), std::string::npos);
}

TEST(Cli, ReferenceIsDeterministicAndConsumable) {
  Sandbox sb;
  sb.write("r.cfg", "max_dofs = 1000\n");
  ASSERT_EQ(sb.run("reference r.cfg --output r1"), 0) << sb.read("err.txt");
  ASSERT_EQ(sb.run("reference r.cfg --output r2"), 0);
  const std::string ref = sb.read("r1/reference.txt");
  EXPECT_EQ(ref, sb.read("r2/reference.txt"));
  EXPECT_NE(ref.find("ref_J5 = "), std::string::npos);
  sb.write("use.cfg", "reference_file = r1/reference.txt\nmax_steps = 1\n");
  EXPECT_EQ(sb.run("run use.cfg --output used"), 0) << sb.read("err.txt");
}

TEST(Cli, ReferenceBudgetTooSmall) {
  Sandbox sb;
  sb.write("r.cfg", "max_dofs = 100\n");
  EXPECT_NE(sb.run("reference r.cfg --output r"), 0);
  EXPECT_NE(sb.read("err.txt").find("need 3"), std::string::npos);
}
