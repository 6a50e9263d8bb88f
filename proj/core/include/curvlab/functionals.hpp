#pragma once

#include <span>
#include <vector>

#include "curvlab/curvature_tensor.hpp"
#include "curvlab/frame.hpp"

namespace curvlab {

// Scalar functions of (tensor, frame).
//
//   ASum         R_1313 + R_1414 + R_2323 + R_2424           (four-frame)
//   BSum         R_1212 + R_3434                             (four-frame)
//   Condition    ASum - gamma * BSum                         (four-frame)
//   Isotropic    ASum - 2 R_1234                             (four-frame)
//   Sectional    R_1212                                      (two-frame)
//   FlagPinching K(span(v,w1)) - 1/4 K(span(v,w)),           (three-frame
//                w = w1 cos(theta) + w2 sin(theta)            + angle)
struct FrameFunctional {
  enum class Kind { ASum, BSum, Condition, Isotropic, Sectional, FlagPinching };

  Kind kind = Kind::Condition;
  double gamma = 0.5;  // Condition only

  static FrameFunctional a_sum() { return {Kind::ASum, 0.0}; }
  static FrameFunctional b_sum() { return {Kind::BSum, 0.0}; }
  static FrameFunctional condition(double gamma) {
    return {Kind::Condition, gamma};
  }
  static FrameFunctional isotropic() { return {Kind::Isotropic, 0.0}; }
  static FrameFunctional sectional() { return {Kind::Sectional, 0.0}; }
  static FrameFunctional flag_pinching() { return {Kind::FlagPinching, 0.0}; }

  int vector_count() const;  // Stiefel rows: 4, 2, or 3
  bool has_angle() const { return kind == Kind::FlagPinching; }
  int min_dim() const;
  const char* name() const;
};

// Scratch space reused across evaluations (sized on first use).
struct EvalWorkspace {
  std::vector<double> p;     // stage-1 contractions, n^3 each
  std::vector<double> q;     // stage-2 contractions, n^2 each
  std::vector<double> rows;  // composed rows (flag functional)
};

// Value of f at `rows` (vector_count() rows of length r.dim(), row-major).
// Rows need not be orthonormal; this is the polynomial extension.
double eval_rows(const CurvatureTensor& r, const FrameFunctional& f,
                 std::span<const double> rows, double theta, EvalWorkspace& ws);

// Value plus the Euclidean gradient with respect to the rows (and theta for
// the flag functional; grad_theta is set to 0 otherwise).
double eval_rows_gradient(const CurvatureTensor& r, const FrameFunctional& f,
                          std::span<const double> rows, double theta,
                          std::span<double> grad_rows, double& grad_theta,
                          EvalWorkspace& ws);

// All four-frame primitives at once (used when several four-frame
// functionals are evaluated over one sample stream).
struct FourFrameTerms {
  double a = 0.0;  // ASum
  double b = 0.0;  // BSum
  double t = 0.0;  // R(f1,f2,f3,f4)
};
FourFrameTerms four_frame_terms(const CurvatureTensor& r,
                                std::span<const double> rows,
                                EvalWorkspace& ws);
double functional_from_terms(const FrameFunctional& f, const FourFrameTerms& t);

// Evaluation on an orthonormal Frame; theta only read by FlagPinching.
double evaluate_functional(const CurvatureTensor& r, const FrameFunctional& f,
                           const Frame& frame, double theta = 0.0);

}  // namespace curvlab
