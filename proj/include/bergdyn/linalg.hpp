#pragma once

#include <stdexcept>
#include <vector>

#include "bergdyn/complex_util.hpp"

namespace bergdyn::linalg {

struct GramBreakdownError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense Hermitian matrix, row-major.
struct HermitianMatrix {
  int n = 0;
  std::vector<Complex> a;  // n*n

  explicit HermitianMatrix(int size)
      : n(size), a(static_cast<std::size_t>(size) * size) {}
  Complex& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  const Complex& at(int i, int j) const {
    return a[static_cast<std::size_t>(i) * n + j];
  }
};

struct EigenDecomposition {
  std::vector<double> values;           // ascending
  std::vector<std::vector<Complex>> vectors;  // vectors[k] is the k-th column
};

/// Cyclic Jacobi for Hermitian matrices. Adequate for the small, badly
/// conditioned Gram matrices of the spanning experiments.
EigenDecomposition hermitian_eigen(HermitianMatrix m);

struct TruncatedSolution {
  std::vector<Complex> x;
  int rank_kept = 0;
  double lambda_max = 0.0;
};

/// Solves G x = y by spectral truncation: eigenvalues below
/// cutoff_rel * lambda_max are dropped. Throws GramBreakdownError when
/// nothing survives the cutoff.
TruncatedSolution solve_truncated(const HermitianMatrix& g,
                                  const std::vector<Complex>& y,
                                  double cutoff_rel);

}  // namespace bergdyn::linalg
