#pragma once

#include <fstream>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbdwr/adapt.hpp"

namespace cbdwr {

/// 17 significant digits; NaN prints as "nan".
std::string format_real(double v);

/// Appends one row per step to convergence.csv and flushes it.
class CsvWriter {
public:
  explicit CsvWriter(const std::string& path);
  void write(const ConvergenceRecord& rec);

  static std::string header();
  static std::string row(const ConvergenceRecord& rec);

private:
  std::ofstream out_;
};

/// Least-squares slope of log(y) against log(x). Entries with y ≤ 0 are
/// skipped; empty when fewer than two remain.
std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y);

/// Log-log interpolation of y at x0 between bracketing samples (x sorted
/// ascending). Empty when x0 lies outside the sampled range.
std::optional<double> loglog_interpolate(std::span<const double> x, std::span<const double> y, double x0);

/// Final QoI values, effectivity and fitted slopes in key = value form.
void write_summary(std::ostream& os, std::span<const ConvergenceRecord> records);

/// Mesh, Q1/Q2 fields sampled at the vertices and the indicators of one step.
void write_step_vtk(const std::string& path, const StepState& state);

}  // namespace cbdwr
