#pragma once

#include <vector>

namespace fracbd {

/// Eigen-decomposition of a real symmetric tridiagonal matrix.
/// eigenvalues ascending; eigenvectors stored column-major, vectors[k * n + i]
/// is component i of eigenvector k, each of unit Euclidean norm.
struct SymTridiagEigen {
  std::vector<double> eigenvalues;
  std::vector<double> vectors;
  int iterations = 0;
};

/// Implicit-shift QL iteration. diag has n entries, off has n-1 (off[i]
/// couples i and i+1). Throws NumericalError when an eigenvalue needs more
/// than max_iter sweeps.
SymTridiagEigen sym_tridiag_eigen(const std::vector<double>& diag,
                                  const std::vector<double>& off,
                                  int max_iter = 60);

}  // namespace fracbd
