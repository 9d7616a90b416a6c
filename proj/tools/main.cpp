#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cbdwr/config.hpp"
#include "cbdwr/output.hpp"
#include "cbdwr/reference.hpp"
#include "cbdwr/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kConfigExit = 2;

int cmd_run(const cbdwr::RunConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  cbdwr::CsvWriter csv((dir / "convergence.csv").string());
  auto observer = [&](const cbdwr::StepState& s) {
    csv.write(s.record);
    if (cfg.dump_fields) {
      std::ostringstream name;
      name << "step_" << s.record.step << ".vtk";
      cbdwr::write_step_vtk((dir / name.str()).string(), s);
    }
  };
  const auto records = cbdwr::run(cfg.adapt, cfg.model, cfg.reference, observer, &std::cout);
  std::ofstream summary(dir / "summary.txt");
  cbdwr::write_summary(summary, records);
  std::cout << "wrote " << (dir / "convergence.csv").string() << " and " << (dir / "summary.txt").string() << '\n';
  return 0;
}

int cmd_verify(const cbdwr::RunConfig& cfg) {
  bool ok = true;
  for (const auto& r : cbdwr::verify_all(cfg)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << std::endl;
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

int cmd_reference(const cbdwr::RunConfig& cfg) {
  const auto result = cbdwr::compute_reference(cfg.model, cfg.adapt.qois, cfg.adapt.max_dofs, cfg.adapt.newton, &std::cout);
  fs::create_directories(cfg.output_dir);
  const fs::path path = fs::path(cfg.output_dir) / "reference.txt";
  std::ofstream out(path);
  cbdwr::write_reference(out, result);
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive multi-goal DWR solver for the checkerboard multi-model problem"};
  app.require_subcommand(1);
  bool dump_fields = false;
  std::string output;
  app.add_flag("--dump-fields", dump_fields, "Write per-step VTK files with fields and indicators");
  app.add_option("--output", output, "Output directory (overrides output_dir)");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Adaptive or uniform refinement run");
  auto* verify = app.add_subcommand("verify", "Property suites on small meshes");
  auto* reference = app.add_subcommand("reference", "Reference values by uniform Q2 refinement and extrapolation");
  for (auto* sub : {run, verify, reference}) {
    sub->add_option("config", config_path, "Config file (key = value lines)")->required();
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  cbdwr::RunConfig cfg;
  try {
    cfg = cbdwr::load_config(config_path);
  } catch (const cbdwr::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  }
  if (dump_fields) cfg.dump_fields = true;
  if (!output.empty()) cfg.output_dir = output;

  try {
    if (*run) return cmd_run(cfg);
    if (*verify) return cmd_verify(cfg);
    return cmd_reference(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
