#pragma once

#include <string>

#include "cbdwr/space.hpp"

namespace cbdwr {

struct LinearSolveStats {
  std::string method = "umfpack-lu";
  double residual_norm = 0.0;  ///< ‖A x - b‖_∞ (or ‖Aᵀx - b‖_∞)
  int iterations = 0;          ///< iterative-refinement steps
};

/// Direct sparse LU (UMFPACK) with solves against A or Aᵀ from one
/// factorization. The symbolic analysis is reused while the pattern stays
/// the same.
class SparseLu {
public:
  SparseLu();
  ~SparseLu();
  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;

  void analyze_pattern(const SparseMatrix& a);
  /// Numeric factorization; calls analyze_pattern first when needed.
  /// Throws Error on a singular matrix.
  void factorize(const SparseMatrix& a);

  Vector solve(const Vector& b, LinearSolveStats* stats = nullptr) const;
  Vector solve_transposed(const Vector& b, LinearSolveStats* stats = nullptr) const;

private:
  Vector solve_impl(const Vector& b, bool transposed, LinearSolveStats* stats) const;
  void release_numeric();
  void release_symbolic();

  SparseMatrix owned_;
  void* symbolic_ = nullptr;
  void* numeric_ = nullptr;
  Eigen::Index n_ = 0;
  Eigen::Index nnz_ = 0;
  double control_[20]{};
};

}  // namespace cbdwr
