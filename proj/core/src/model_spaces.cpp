#include "curvlab/model_spaces.hpp"

#include <algorithm>
#include <cmath>

namespace curvlab {

namespace {

std::size_t idx4(int n, int i, int j, int k, int l) {
  return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
}

}  // namespace

ComplexStructure::ComplexStructure(int dim, std::vector<double> matrix)
    : dim_(dim), m_(std::move(matrix)) {
  if (dim_ < 2 || dim_ % 2 != 0)
    throw InvalidDimension("ComplexStructure: dimension must be even, >= 2");
  if (m_.size() != static_cast<std::size_t>(dim_) * dim_)
    throw InvalidInput("ComplexStructure: matrix must be dim x dim");
  constexpr double tol = 1e-12;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      double jj = 0.0;  // (J^2)_{ij}
      double jtj = 0.0;  // (J^T J)_{ij}
      for (int k = 0; k < dim_; ++k) {
        jj += entry(i, k) * entry(k, j);
        jtj += entry(k, i) * entry(k, j);
      }
      const double eye = (i == j) ? 1.0 : 0.0;
      if (std::abs(jj + eye) > tol)
        throw InvalidInput("ComplexStructure: J^2 != -I");
      if (std::abs(jtj - eye) > tol)
        throw InvalidInput("ComplexStructure: J is not orthogonal");
    }
}

ComplexStructure ComplexStructure::standard(int dim) {
  if (dim < 2 || dim % 2 != 0)
    throw InvalidDimension("ComplexStructure: dimension must be even, >= 2");
  std::vector<double> m(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int p = 0; p < dim / 2; ++p) {
    // J e_{2p} = e_{2p+1}, J e_{2p+1} = -e_{2p} (0-based columns).
    m[static_cast<std::size_t>(2 * p + 1) * dim + 2 * p] = 1.0;
    m[static_cast<std::size_t>(2 * p) * dim + 2 * p + 1] = -1.0;
  }
  return ComplexStructure(dim, std::move(m));
}

std::vector<double> ComplexStructure::apply(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim_))
    throw DimensionMismatch("ComplexStructure: vector has the wrong length");
  std::vector<double> out(dim_, 0.0);
  for (int r = 0; r < dim_; ++r) {
    double s = 0.0;
    for (int c = 0; c < dim_; ++c) s += entry(r, c) * x[c];
    out[r] = s;
  }
  return out;
}

CurvatureTensor constant_curvature(int n, double kappa) {
  if (n < 2) throw InvalidDimension("constant_curvature: n must be >= 2");
  if (!std::isfinite(kappa))
    throw InvalidInput("constant_curvature: kappa must be finite");
  std::vector<double> c(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double g = (i == k && j == l ? 1.0 : 0.0) -
                           (i == l && j == k ? 1.0 : 0.0);
          c[idx4(n, i, j, k, l)] = kappa * g;
        }
  return CurvatureTensor::from_components_checked(std::move(c), n);
}

CurvatureTensor flat(int n) {
  if (n < 1) throw InvalidDimension("flat: n must be >= 1");
  std::vector<double> c(static_cast<std::size_t>(n) * n * n * n, 0.0);
  return CurvatureTensor::from_components_checked(std::move(c), n);
}

FubiniStudy fubini_study(int m) {
  if (m < 2) throw InvalidDimension("fubini_study: m must be >= 2");
  const int n = 2 * m;
  ComplexStructure j = ComplexStructure::standard(n);
  // <e_r, J e_c> = j.entry(r, c); the metric terms below follow from the
  // closed form with X,Y,Z,W running over the standard basis.
  std::vector<double> c(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = (i == k && jj == l ? 1.0 : 0.0) -
                     (i == l && jj == k ? 1.0 : 0.0);
          v += j.entry(k, i) * j.entry(l, jj) - j.entry(l, i) * j.entry(k, jj);
          v += 2.0 * j.entry(jj, i) * j.entry(l, k);
          c[idx4(n, i, jj, k, l)] = v;
        }
  auto tensor = CurvatureTensor::from_components_checked(std::move(c), n);
  return FubiniStudy{std::move(tensor), std::move(j)};
}

CurvatureTensor sphere_cross_circle(int n) {
  if (n < 4) throw InvalidDimension("sphere_cross_circle: n must be >= 4");
  return direct_sum(constant_curvature(n - 1, 1.0), flat(1));
}

}  // namespace curvlab
