#pragma once

#include <span>
#include <vector>

#include "curvlab/curvature_tensor.hpp"

namespace curvlab {

// Orthogonal complex structure J on R^{2m}: J^2 = -I and J^T J = I,
// both to 1e-12.
class ComplexStructure {
public:
  ComplexStructure(int dim, std::vector<double> matrix);

  // J e_{2k-1} = e_{2k}, J e_{2k} = -e_{2k-1} (1-based pairing).
  static ComplexStructure standard(int dim);

  int dim() const { return dim_; }
  std::span<const double> matrix() const { return m_; }
  double entry(int row, int col) const {
    return m_[static_cast<std::size_t>(row) * dim_ + col];
  }
  std::vector<double> apply(std::span<const double> x) const;

private:
  int dim_;
  std::vector<double> m_;  // row-major; entry(r,c) = <e_r, J e_c>
};

// R(X,Y,Z,W) = kappa (<X,Z><Y,W> - <X,W><Y,Z>); every sectional curvature
// equals kappa.
CurvatureTensor constant_curvature(int n, double kappa);

// Zero tensor. n >= 1 (a 1-dimensional factor is used by products).
CurvatureTensor flat(int n);

struct FubiniStudy {
  CurvatureTensor tensor;
  ComplexStructure j;
};

// Complex projective space of complex dimension m >= 2, normalized to
// constant holomorphic sectional curvature 4:
//   R(X,Y,Z,W) = <X,Z><Y,W> - <X,W><Y,Z>
//                + <JX,Z><JY,W> - <JX,W><JY,Z> + 2 <JX,Y><JZ,W>.
// Sectional curvature of an orthonormal pair (X,Y) is 1 + 3 <JX,Y>^2.
FubiniStudy fubini_study(int m);

// Product of a unit round (n-1)-sphere with a circle. n >= 4.
CurvatureTensor sphere_cross_circle(int n);

}  // namespace curvlab
