#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "cbdwr/goals.hpp"
#include "cbdwr/solver.hpp"

namespace cbdwr {

struct ReferenceLevel {
  int level = 0;
  std::size_t dofs = 0;  ///< Q2 dofs
  std::vector<double> J;
};

struct ReferenceResult {
  std::vector<ReferenceLevel> levels;
  std::array<double, 5> extrapolated{};
};

/// Fits J_h = J + C/N through the given levels by least squares and returns J
/// for every functional.
std::array<double, 5> richardson(std::span<const ReferenceLevel> levels);

/// Q2 solutions on uniformly refined meshes while the Q2 dof count stays
/// within max_dofs, then extrapolation over the last three levels. Throws
/// Error when fewer than three levels fit the budget.
ReferenceResult compute_reference(const ModelParams& params, const QoiSet& qois, std::size_t max_dofs,
                                  const NewtonConfig& newton, std::ostream* log = nullptr);

/// ref_J1 = ... lines, readable by load_reference.
void write_reference(std::ostream& os, const ReferenceResult& result);

}  // namespace cbdwr
