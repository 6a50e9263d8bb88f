#include "curvlab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "curvlab/errors.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

bool gram_schmidt_rows(std::span<double> rows, int k, int n, double eps) {
  // Two MGS passes; the second mops up the loss of orthogonality the first
  // leaves behind for inputs that are not already close to orthonormal.
  for (int pass = 0; pass < 2; ++pass) {
    for (int a = 0; a < k; ++a) {
      double* va = rows.data() + static_cast<std::size_t>(a) * n;
      for (int b = 0; b < a; ++b) {
        const double* vb = rows.data() + static_cast<std::size_t>(b) * n;
        double proj = 0.0;
        for (int i = 0; i < n; ++i) proj += va[i] * vb[i];
        for (int i = 0; i < n; ++i) va[i] -= proj * vb[i];
      }
      double nrm = 0.0;
      for (int i = 0; i < n; ++i) nrm += va[i] * va[i];
      nrm = std::sqrt(nrm);
      if (nrm < eps) return false;
      const double inv = 1.0 / nrm;
      for (int i = 0; i < n; ++i) va[i] *= inv;
    }
  }
  return true;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> m, int n) {
  auto at = [&](int i, int j) -> double& {
    return m[static_cast<std::size_t>(i) * n + j];
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = at(i, p);
          const double aiq = at(i, q);
          at(i, p) = c * aip - s * aiq;
          at(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = at(p, i);
          const double aqi = at(q, i);
          at(p, i) = c * api - s * aqi;
          at(q, i) = s * api + c * aqi;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::vector<double> random_orthogonal(int n, std::uint64_t seed) {
  if (n < 1) throw InvalidDimension("random_orthogonal: n must be >= 1");
  SplitMix64 rng(seed);
  std::vector<double> q(static_cast<std::size_t>(n) * n);
  do {
    for (auto& x : q) x = standard_normal(rng);
  } while (!gram_schmidt_rows(q, n, n));
  return q;
}

}  // namespace curvlab
