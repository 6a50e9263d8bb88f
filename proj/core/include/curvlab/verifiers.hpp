#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "curvlab/frame_search.hpp"

namespace curvlab {

// Pinching constants. gamma_n = n(n-1)/(n^2-n-6) except 20/17 at n=5;
// eta_n = n(n-1)/(n^2-n+12). Both require n >= 4.
double gamma_n(int n);
double eta_n(int n);
std::pair<long long, long long> gamma_n_fraction(int n);
std::pair<long long, long long> eta_n_fraction(int n);

enum class ConditionKind {
  MainCondition,      // min over four-frames of A - B/2 > 0
  MainConditionWeak,  // same quantity, weak reading
  Pic,                // min isotropic quantity > 0
  NonnegIsotropic,    // same quantity, weak reading
  QuarterSectional,   // K_min > K_max / 4
  QuarterFlag,        // flag-pinching minimum > 0
  YauLower,           // min A > 4 eta_n S0
  YauUpper,           // max B < 2 gamma_n S0
  Biorthogonal4d,     // max of (K(sigma)+K(sigma-perp))/2 < 2 S0, n = 4 only
};

enum class Verdict { HoldsStrict, HoldsWeak, Fails };

const char* to_string(ConditionKind k);
const char* to_string(Verdict v);

struct ConditionConstants {
  double gamma_n = 0.0;
  double eta_n = 0.0;
  double s0 = 0.0;
  bool has_gamma = false;
  bool has_eta = false;
};

struct ConditionReport {
  ConditionKind condition = ConditionKind::MainCondition;
  Verdict verdict = Verdict::Fails;
  double extremal_value = 0.0;  // the extremized quantity itself
  double threshold = 0.0;
  double margin = 0.0;  // signed; positive means the condition holds
  Frame extremal_frame;
  double theta = 0.0;
  ConditionConstants constants;
  bool s0_nonpositive = false;  // Yau-type threshold evaluated with S0 <= 0
  double strictness_tol = 0.0;
};

// HOLDS_STRICT when margin > 1e-6 (1 + |R|_F), HOLDS_WEAK within that band,
// FAILS below it.
double strictness_tolerance(const CurvatureTensor& r);

// gamma_override applies to the Main/MainWeak quantity (A - gamma B vs 0).
ConditionReport check_condition(const CurvatureTensor& r, ConditionKind kind,
                                const SearchConfig& cfg,
                                std::optional<double> gamma_override = {});

enum class IdentityKind {
  QuadrupleASum,    // distinct-quadruple A-sums = 8(n-3)(n-2) sum of sectionals
  QuadrupleBSum,    // distinct-quadruple B-sums = 4(n-3)(n-2) sum of sectionals
  FourDimTrace,     // n=4: 6 S0 = A + B on any four-frame
  ScalarGamma,      // 2(2-gamma)(n-3)(n-2) S = quadruple sums of A - gamma B
  RotatedFrameDecomposition,  // Q(F) + Q(F') + Q(F'') = 9 * isotropic(F)
  DimSpecificYauLower,
  DimSpecificYauUpper,
};

const char* to_string(IdentityKind k);

struct IdentityReport {
  IdentityKind identity = IdentityKind::QuadrupleASum;
  double residual = 0.0;  // |lhs - rhs| / (1 + |R|_F)
  double lhs = 0.0;
  double rhs = 0.0;
  std::uint64_t basis_seed = 0;  // 0 = standard basis
  double gamma = 0.0;            // ScalarGamma only
  int dim = 0;
};

// basis_seed != 0 evaluates the identity in a seeded random orthonormal
// basis (the identities are basis-independent).
IdentityReport check_quadruple_a_identity(const CurvatureTensor& r,
                                          std::uint64_t basis_seed = 0);
IdentityReport check_quadruple_b_identity(const CurvatureTensor& r,
                                          std::uint64_t basis_seed = 0);
IdentityReport check_four_dim_trace_identity(const CurvatureTensor& r,
                                             const Frame& f);
IdentityReport check_scalar_identity(const CurvatureTensor& r, double gamma,
                                     std::uint64_t basis_seed = 0);
IdentityReport check_rotated_frame_decomposition(const CurvatureTensor& r,
                                                 const Frame& f);

enum class YauSide { Lower, Upper };

// The six hard-coded standard-basis decompositions behind the Yau bounds in
// dimensions 5, 6 and 7 (side Lower bounds min A, side Upper bounds max B).
IdentityReport check_dim_specific_decomposition(const CurvatureTensor& r,
                                                int n, YauSide which);

// Tensor expressed in the basis given by the rows of q (n x n orthogonal).
CurvatureTensor rotate_tensor(const CurvatureTensor& r,
                              std::span<const double> q);

enum class HarnessFamily { LemmaQuarter, PropMain, PropYauLower, PropYauUpper };

const char* to_string(HarnessFamily f);

struct HarnessTrial {
  int index = 0;
  int dim = 0;
  bool cp_base = false;
  double mix = 0.0;
  double hypothesis_margin = 0.0;
  double conclusion_margin = 0.0;
  bool hypothesis_satisfied = false;
  bool violation = false;
};

struct HarnessSummary {
  HarnessFamily family = HarnessFamily::PropMain;
  int trials = 0;
  std::uint64_t seed = 0;
  int hypothesis_satisfied = 0;
  int violations = 0;
  std::vector<HarnessTrial> trial_records;
};

// Generates `trials` tensors as mixes (1-t) * model + t * random projected
// tensor, t in [0, 0.3], alternating round-sphere and complex-projective
// bases over dimensions 4..6. For every tensor whose hypothesis margin
// exceeds 10x the strictness tolerance, asserts the family's conclusion
// margin is positive (for PropMain also the quantitative bound
// conclusion >= 4/3 * hypothesis - 1e-6). Violations are counted, not thrown.
HarnessSummary implication_harness(HarnessFamily family, int trials,
                                   std::uint64_t seed, const SearchConfig& cfg);

}  // namespace curvlab
