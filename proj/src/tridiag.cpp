#include "fracbd/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fracbd/errors.hpp"

namespace fracbd {

// QL with implicit Wilkinson shifts, accumulating rotations into the
// identity (the classical tql2 scheme).
SymTridiagEigen sym_tridiag_eigen(const std::vector<double>& diag,
                                  const std::vector<double>& off, int max_iter) {
  const std::size_t n = diag.size();
  if (n == 0) throw DomainError("sym_tridiag_eigen: empty matrix");
  if (off.size() + 1 != n) throw DomainError("sym_tridiag_eigen: off-diagonal size mismatch");

  std::vector<double> d = diag;
  std::vector<double> e(n, 0.0);
  std::copy(off.begin(), off.end(), e.begin());
  // z[i * n + k]: row i, column k.
  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;

  int total_iter = 0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > max_iter) {
          throw NumericalError("sym_tridiag_eigen: no convergence for eigenvalue " +
                               std::to_string(l) + " after " + std::to_string(max_iter) +
                               " iterations");
        }
        ++total_iter;
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        std::size_t i = m;
        bool underflow = false;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = z[k * n + i + 1];
            z[k * n + i + 1] = s * z[k * n + i] + c * f;
            z[k * n + i] = c * z[k * n + i] - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  SymTridiagEigen out;
  out.iterations = total_iter;
  out.eigenvalues.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = d[src];
    for (std::size_t i = 0; i < n; ++i) out.vectors[k * n + i] = z[i * n + src];
  }
  return out;
}

}  // namespace fracbd
