#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "curvlab/errors.hpp"

namespace curvlab {

class Frame;

// Algebraic curvature tensor on R^n: a dense rank-4 component array with
// the pair antisymmetries
//     R(i,j,k,l) = -R(j,i,k,l) = -R(i,j,l,k) = R(k,l,i,j)
// and the first Bianchi identity
//     R(i,j,k,l) + R(i,k,l,j) + R(i,l,j,k) = 0.
//
// Components are 0-based and stored row-major in (i,j,k,l). Instances are
// immutable after construction; all operations on them are pure functions.
class CurvatureTensor {
public:
  // Orthogonal (Frobenius) projection of an arbitrary rank-4 array onto the
  // space of algebraic curvature tensors: antisymmetrize in (i,j) and (k,l),
  // symmetrize under pair exchange, then subtract the Bianchi component
  // (one third of the cyclic sum over the last three indices). Idempotent.
  static CurvatureTensor project(std::span<const double> raw, int n);

  // Adopts components unchanged after validating all four invariant
  // families to kValidationTol * (1 + max |entry|).
  static CurvatureTensor from_components_checked(std::vector<double> components,
                                                 int n);

  int dim() const { return n_; }

  double at(int i, int j, int k, int l) const { return c_[index(i, j, k, l)]; }

  std::span<const double> components() const { return c_; }

  double frobenius_norm() const;
  double max_abs() const;

  // Multilinear evaluation R(x,y,z,w) on arbitrary vectors of length dim().
  double evaluate(std::span<const double> x, std::span<const double> y,
                  std::span<const double> z, std::span<const double> w) const;

  // Worst absolute residual over the four invariant families.
  static double worst_invariant_residual(std::span<const double> components,
                                         int n, std::string* which = nullptr);

  static constexpr double kValidationTol = 1e-12;

private:
  CurvatureTensor(std::vector<double> c, int n) : n_(n), c_(std::move(c)) {}

  std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }

  int n_;
  std::vector<double> c_;
};

// Nearest algebraic curvature tensor to a raw n^4 array (row-major).
CurvatureTensor project_to_curvature_space(std::span<const double> raw, int n);

// Sectional curvature R(u,v,u,v) of the plane spanned by the orthonormal
// pair (u, v); pair checked to 1e-10.
double sectional(const CurvatureTensor& r, std::span<const double> u,
                 std::span<const double> v);

struct CurvatureScalars {
  int dim = 0;
  std::vector<double> ricci;  // n x n, row-major
  double scalar = 0.0;
  double normalized_scalar = 0.0;

  std::vector<double> ricci_eigenvalues() const;  // ascending
  double min_ricci_eigenvalue() const;
};

CurvatureScalars curvature_scalars(const CurvatureTensor& r);

// The two four-frame sums and the isotropic-curvature quantity. f must be a
// four-frame of r's dimension.
//   a_sum = R_1313 + R_1414 + R_2323 + R_2424
//   b_sum = R_1212 + R_3434
//   isotropic_quantity = a_sum - 2 R_1234
double a_sum(const CurvatureTensor& r, const Frame& f);
double b_sum(const CurvatureTensor& r, const Frame& f);
double isotropic_quantity(const CurvatureTensor& r, const Frame& f);

// Block curvature tensor of a Riemannian product: all-mixed components are
// exactly zero, block components equal the factors.
CurvatureTensor direct_sum(const CurvatureTensor& r1, const CurvatureTensor& r2);

CurvatureTensor scale(const CurvatureTensor& r, double c);

CurvatureTensor linear_combination(const CurvatureTensor& a, double ca,
                                   const CurvatureTensor& b, double cb);

// Entries i.i.d. uniform in [-magnitude, magnitude], then projected.
// Deterministic in (n, seed).
CurvatureTensor random_curvature_tensor(int n, std::uint64_t seed,
                                        double magnitude);

}  // namespace curvlab
