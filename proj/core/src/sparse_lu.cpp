#include "cbdwr/sparse_lu.hpp"

#include <cstring>

#include <umfpack.h>

namespace cbdwr {

namespace {

bool same_pattern(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
  const auto n = static_cast<std::size_t>(a.cols() + 1);
  const auto nnz = static_cast<std::size_t>(a.nonZeros());
  return std::memcmp(a.outerIndexPtr(), b.outerIndexPtr(), n * sizeof(int)) == 0 &&
         std::memcmp(a.innerIndexPtr(), b.innerIndexPtr(), nnz * sizeof(int)) == 0;
}

std::string status_text(int status) {
  switch (status) {
    case UMFPACK_WARNING_singular_matrix: return "singular matrix";
    case UMFPACK_ERROR_out_of_memory: return "out of memory";
    case UMFPACK_ERROR_invalid_matrix: return "invalid matrix";
    default: return "status " + std::to_string(status);
  }
}

}  // namespace

SparseLu::SparseLu() {
  umfpack_di_defaults(control_);
  control_[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;
}

SparseLu::~SparseLu() {
  release_numeric();
  release_symbolic();
}

void SparseLu::release_numeric() {
  if (numeric_ != nullptr) umfpack_di_free_numeric(&numeric_);
  numeric_ = nullptr;
}

void SparseLu::release_symbolic() {
  if (symbolic_ != nullptr) umfpack_di_free_symbolic(&symbolic_);
  symbolic_ = nullptr;
}

void SparseLu::analyze_pattern(const SparseMatrix& a) {
  if (!a.isCompressed()) throw Error("SparseLu: matrix must be compressed");
  release_numeric();
  release_symbolic();
  double info[UMFPACK_INFO];
  int status = umfpack_di_symbolic(static_cast<int>(a.rows()), static_cast<int>(a.cols()), a.outerIndexPtr(),
                                   a.innerIndexPtr(), a.valuePtr(), &symbolic_, control_, info);
  if (status != UMFPACK_OK && control_[UMFPACK_ORDERING] != UMFPACK_ORDERING_AMD) {
    control_[UMFPACK_ORDERING] = UMFPACK_ORDERING_AMD;
    status = umfpack_di_symbolic(static_cast<int>(a.rows()), static_cast<int>(a.cols()), a.outerIndexPtr(),
                                 a.innerIndexPtr(), a.valuePtr(), &symbolic_, control_, info);
  }
  if (status != UMFPACK_OK) throw Error("SparseLu: symbolic analysis failed (" + status_text(status) + ")");
  n_ = a.rows();
  nnz_ = a.nonZeros();
}

void SparseLu::factorize(const SparseMatrix& a) {
  if (symbolic_ == nullptr || !same_pattern(a, owned_)) {
    owned_ = a;
    analyze_pattern(owned_);
  } else {
    owned_ = a;
  }
  release_numeric();
  double info[UMFPACK_INFO];
  const int status = umfpack_di_numeric(owned_.outerIndexPtr(), owned_.innerIndexPtr(), owned_.valuePtr(), symbolic_,
                                        &numeric_, control_, info);
  if (status != UMFPACK_OK) {
    release_numeric();
    throw Error("SparseLu: numeric factorization failed (" + status_text(status) + ")");
  }
}

Vector SparseLu::solve_impl(const Vector& b, bool transposed, LinearSolveStats* stats) const {
  if (numeric_ == nullptr) throw Error("SparseLu: solve before factorize");
  if (b.size() != n_) throw Error("SparseLu: right-hand side has wrong size");
  Vector x = Vector::Zero(n_);
  double info[UMFPACK_INFO];
  const int status = umfpack_di_solve(transposed ? UMFPACK_At : UMFPACK_A, owned_.outerIndexPtr(),
                                      owned_.innerIndexPtr(), owned_.valuePtr(), x.data(), b.data(), numeric_,
                                      control_, info);
  if (status != UMFPACK_OK) throw Error("SparseLu: solve failed (" + status_text(status) + ")");
  if (stats != nullptr) {
    const Vector r = transposed ? Vector(owned_.transpose() * x - b) : Vector(owned_ * x - b);
    stats->residual_norm = r.lpNorm<Eigen::Infinity>();
    stats->iterations = static_cast<int>(info[UMFPACK_IR_TAKEN]);
  }
  return x;
}

Vector SparseLu::solve(const Vector& b, LinearSolveStats* stats) const { return solve_impl(b, false, stats); }

Vector SparseLu::solve_transposed(const Vector& b, LinearSolveStats* stats) const {
  return solve_impl(b, true, stats);
}

}  // namespace cbdwr
