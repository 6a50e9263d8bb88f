#include "curvlab/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/linalg.hpp"
#include "curvlab/model_spaces.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

void require_min_dim(int n, int min, const char* what) {
  if (n < min)
    throw InvalidDimension(std::string(what) + " needs dimension >= " +
                           std::to_string(min));
}

double relative_residual(double lhs, double rhs, const CurvatureTensor& r) {
  return std::abs(lhs - rhs) / (1.0 + r.frobenius_norm());
}

// Sum of sectional curvatures over unordered basis pairs: S / 2.
double basis_pair_sum(const CurvatureTensor& r) {
  double s = 0.0;
  for (int i = 0; i < r.dim(); ++i)
    for (int j = i + 1; j < r.dim(); ++j) s += r.at(i, j, i, j);
  return s;
}

CurvatureTensor maybe_rotate(const CurvatureTensor& r, std::uint64_t seed) {
  if (seed == 0) return CurvatureTensor::from_components_checked(
      std::vector<double>(r.components().begin(), r.components().end()),
      r.dim());
  return rotate_tensor(r, random_orthogonal(r.dim(), seed));
}

Verdict verdict_for_margin(double margin, double tol) {
  if (margin > tol) return Verdict::HoldsStrict;
  if (margin >= -tol) return Verdict::HoldsWeak;
  return Verdict::Fails;
}

}  // namespace

double gamma_n(int n) {
  auto [num, den] = gamma_n_fraction(n);
  return static_cast<double>(num) / static_cast<double>(den);
}

double eta_n(int n) {
  auto [num, den] = eta_n_fraction(n);
  return static_cast<double>(num) / static_cast<double>(den);
}

std::pair<long long, long long> gamma_n_fraction(int n) {
  require_min_dim(n, 4, "gamma_n");
  if (n == 5) return {20, 17};
  const long long nn = n;
  return {nn * (nn - 1), nn * nn - nn - 6};
}

std::pair<long long, long long> eta_n_fraction(int n) {
  require_min_dim(n, 4, "eta_n");
  const long long nn = n;
  return {nn * (nn - 1), nn * nn - nn + 12};
}

const char* to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::MainCondition:
      return "main";
    case ConditionKind::MainConditionWeak:
      return "main-weak";
    case ConditionKind::Pic:
      return "pic";
    case ConditionKind::NonnegIsotropic:
      return "nonneg-isotropic";
    case ConditionKind::QuarterSectional:
      return "quarter-sectional";
    case ConditionKind::QuarterFlag:
      return "quarter-flag";
    case ConditionKind::YauLower:
      return "yau-lower";
    case ConditionKind::YauUpper:
      return "yau-upper";
    case ConditionKind::Biorthogonal4d:
      return "biorthogonal-4d";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::HoldsStrict:
      return "holds-strict";
    case Verdict::HoldsWeak:
      return "holds-weak";
    case Verdict::Fails:
      return "fails";
  }
  return "?";
}

const char* to_string(IdentityKind k) {
  switch (k) {
    case IdentityKind::QuadrupleASum:
      return "quadruple-a-sum";
    case IdentityKind::QuadrupleBSum:
      return "quadruple-b-sum";
    case IdentityKind::FourDimTrace:
      return "four-dim-trace";
    case IdentityKind::ScalarGamma:
      return "scalar-gamma";
    case IdentityKind::RotatedFrameDecomposition:
      return "rotated-frame-decomposition";
    case IdentityKind::DimSpecificYauLower:
      return "dim-specific-yau-lower";
    case IdentityKind::DimSpecificYauUpper:
      return "dim-specific-yau-upper";
  }
  return "?";
}

const char* to_string(HarnessFamily f) {
  switch (f) {
    case HarnessFamily::LemmaQuarter:
      return "lemma-quarter";
    case HarnessFamily::PropMain:
      return "prop-main";
    case HarnessFamily::PropYauLower:
      return "prop-yau-lower";
    case HarnessFamily::PropYauUpper:
      return "prop-yau-upper";
  }
  return "?";
}

double strictness_tolerance(const CurvatureTensor& r) {
  return 1e-6 * (1.0 + r.frobenius_norm());
}

ConditionReport check_condition(const CurvatureTensor& r, ConditionKind kind,
                                const SearchConfig& cfg,
                                std::optional<double> gamma_override) {
  const int n = r.dim();
  const double tol = strictness_tolerance(r);
  const CurvatureScalars scal = curvature_scalars(r);
  const double s0 = scal.normalized_scalar;

  ConditionReport rep;
  rep.condition = kind;
  rep.strictness_tol = tol;
  rep.constants.s0 = s0;

  switch (kind) {
    case ConditionKind::MainCondition:
    case ConditionKind::MainConditionWeak: {
      const double gamma = gamma_override.value_or(0.5);
      auto res = minimize_over_four_frames(
          r, FrameFunctional::condition(gamma), cfg);
      rep.extremal_value = res.value;
      rep.threshold = 0.0;
      rep.margin = res.value;
      rep.extremal_frame = res.frame;
      break;
    }
    case ConditionKind::Pic:
    case ConditionKind::NonnegIsotropic: {
      auto res = minimize_over_four_frames(r, FrameFunctional::isotropic(), cfg);
      rep.extremal_value = res.value;
      rep.threshold = 0.0;
      rep.margin = res.value;
      rep.extremal_frame = res.frame;
      break;
    }
    case ConditionKind::QuarterSectional: {
      auto lo = minimize_sectional(r, false, cfg);
      auto hi = minimize_sectional(r, true, cfg);
      rep.extremal_value = lo.value - 0.25 * hi.value;
      rep.threshold = 0.0;
      rep.margin = rep.extremal_value;
      rep.extremal_frame = lo.frame;
      break;
    }
    case ConditionKind::QuarterFlag: {
      auto res = min_flag_pinching(r, cfg);
      rep.extremal_value = res.value;
      rep.threshold = 0.0;
      rep.margin = res.value;
      rep.extremal_frame = res.frame;
      rep.theta = res.theta;
      break;
    }
    case ConditionKind::YauLower: {
      const double eta = eta_n(n);
      rep.constants.eta_n = eta;
      rep.constants.has_eta = true;
      auto res = minimize_over_four_frames(r, FrameFunctional::a_sum(), cfg);
      rep.extremal_value = res.value;
      rep.threshold = 4.0 * eta * s0;
      rep.margin = res.value - rep.threshold;
      rep.extremal_frame = res.frame;
      break;
    }
    case ConditionKind::YauUpper: {
      const double gam = gamma_n(n);
      rep.constants.gamma_n = gam;
      rep.constants.has_gamma = true;
      auto res = extremize_over_four_frames(r, FrameFunctional::b_sum(), cfg,
                                            /*maximize=*/true);
      rep.extremal_value = res.value;
      rep.threshold = 2.0 * gam * s0;
      rep.margin = rep.threshold - res.value;
      rep.extremal_frame = res.frame;
      break;
    }
    case ConditionKind::Biorthogonal4d: {
      if (n != 4)
        throw InvalidDimension("biorthogonal curvature is defined here for n = 4");
      // In dimension 4 a four-frame splits R^4 into a plane and its
      // orthogonal complement, so the biorthogonal maximum is half the
      // maximum of the B sum.
      auto res = extremize_over_four_frames(r, FrameFunctional::b_sum(), cfg,
                                            /*maximize=*/true);
      rep.extremal_value = 0.5 * res.value;
      rep.threshold = 2.0 * s0;
      rep.margin = rep.threshold - rep.extremal_value;
      rep.extremal_frame = res.frame;
      break;
    }
  }

  rep.verdict = verdict_for_margin(rep.margin, tol);

  // Yau-type thresholds compare against positive multiples of S0; with
  // S0 <= 0 the comparison loses its meaning and is reported as a flagged
  // failure instead of a sign-flipped verdict.
  if ((kind == ConditionKind::YauLower || kind == ConditionKind::YauUpper ||
       kind == ConditionKind::Biorthogonal4d) &&
      s0 <= 0.0) {
    rep.s0_nonpositive = true;
    rep.verdict = Verdict::Fails;
  }
  return rep;
}

IdentityReport check_quadruple_a_identity(const CurvatureTensor& r,
                                          std::uint64_t basis_seed) {
  const int n = r.dim();
  require_min_dim(n, 4, "quadruple-a identity");
  const CurvatureTensor t = maybe_rotate(r, basis_seed);
  double lhs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        for (int l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          lhs += t.at(i, k, i, k) + t.at(i, l, i, l) + t.at(j, k, j, k) +
                 t.at(j, l, j, l);
        }
      }
    }
  const double rhs = 8.0 * (n - 3) * (n - 2) * basis_pair_sum(t);
  IdentityReport rep;
  rep.identity = IdentityKind::QuadrupleASum;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = relative_residual(lhs, rhs, r);
  rep.basis_seed = basis_seed;
  rep.dim = n;
  return rep;
}

IdentityReport check_quadruple_b_identity(const CurvatureTensor& r,
                                          std::uint64_t basis_seed) {
  const int n = r.dim();
  require_min_dim(n, 4, "quadruple-b identity");
  const CurvatureTensor t = maybe_rotate(r, basis_seed);
  double lhs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        for (int l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          lhs += t.at(i, j, i, j) + t.at(k, l, k, l);
        }
      }
    }
  const double rhs = 4.0 * (n - 3) * (n - 2) * basis_pair_sum(t);
  IdentityReport rep;
  rep.identity = IdentityKind::QuadrupleBSum;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = relative_residual(lhs, rhs, r);
  rep.basis_seed = basis_seed;
  rep.dim = n;
  return rep;
}

IdentityReport check_four_dim_trace_identity(const CurvatureTensor& r,
                                             const Frame& f) {
  if (r.dim() != 4)
    throw InvalidDimension("the trace identity requires dimension 4");
  const double s0 = curvature_scalars(r).normalized_scalar;
  const double lhs = 6.0 * s0;
  const double rhs = a_sum(r, f) + b_sum(r, f);
  IdentityReport rep;
  rep.identity = IdentityKind::FourDimTrace;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = relative_residual(lhs, rhs, r);
  rep.dim = 4;
  return rep;
}

IdentityReport check_scalar_identity(const CurvatureTensor& r, double gamma,
                                     std::uint64_t basis_seed) {
  const int n = r.dim();
  require_min_dim(n, 4, "scalar identity");
  const CurvatureTensor t = maybe_rotate(r, basis_seed);
  double rhs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        for (int l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          rhs += t.at(i, k, i, k) + t.at(i, l, i, l) + t.at(j, k, j, k) +
                 t.at(j, l, j, l) -
                 gamma * (t.at(i, j, i, j) + t.at(k, l, k, l));
        }
      }
    }
  const double s = 2.0 * basis_pair_sum(t);
  const double lhs = 2.0 * (2.0 - gamma) * (n - 3) * (n - 2) * s;
  IdentityReport rep;
  rep.identity = IdentityKind::ScalarGamma;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = relative_residual(lhs, rhs, r);
  rep.basis_seed = basis_seed;
  rep.gamma = gamma;
  rep.dim = n;
  return rep;
}

IdentityReport check_rotated_frame_decomposition(const CurvatureTensor& r,
                                                 const Frame& f) {
  require_min_dim(r.dim(), 4, "rotated-frame decomposition");
  auto q_of = [&](const Frame& frame) {
    return 4.0 * a_sum(r, frame) - 2.0 * b_sum(r, frame);
  };
  const double lhs = q_of(f) + q_of(rotate_frame_prime(f)) +
                     q_of(rotate_frame_double_prime(f));
  const double rhs = 9.0 * isotropic_quantity(r, f);
  IdentityReport rep;
  rep.identity = IdentityKind::RotatedFrameDecomposition;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = relative_residual(lhs, rhs, r);
  rep.dim = r.dim();
  return rep;
}

namespace {

// One weighted bracket of basis sectional curvatures; pairs are 1-based.
struct Bracket {
  double coeff;
  std::vector<std::pair<int, int>> pairs;
};

double eval_brackets(const CurvatureTensor& r,
                     const std::vector<Bracket>& brackets) {
  double s = 0.0;
  for (const auto& br : brackets) {
    double inner = 0.0;
    for (auto [i, j] : br.pairs)
      inner += r.at(i - 1, j - 1, i - 1, j - 1);
    s += br.coeff * inner;
  }
  return s;
}

double sec1(const CurvatureTensor& r, int i, int j) {
  return r.at(i - 1, j - 1, i - 1, j - 1);
}

}  // namespace

IdentityReport check_dim_specific_decomposition(const CurvatureTensor& r,
                                                int n, YauSide which) {
  if (n < 5 || n > 7)
    throw InvalidDimension("decompositions are transcribed for n in {5, 6, 7}");
  if (r.dim() != n)
    throw InvalidDimension("tensor dimension does not match the requested case");
  const double s0 = curvature_scalars(r).normalized_scalar;

  double lhs = 0.0;
  std::vector<Bracket> rhs_brackets;
  double rhs_base = 0.0;

  if (which == YauSide::Lower) {
    // Each bracket is an A-type four-frame sum on basis vectors; summed with
    // the weights below they reproduce the pair-sum combination on the left.
    switch (n) {
      case 5:
        lhs = 20.0 * s0 - 2.0 * (sec1(r, 1, 2) + sec1(r, 3, 4));
        rhs_brackets = {
            {1.0, {{1, 3}, {1, 4}, {5, 3}, {5, 4}}},
            {1.0, {{2, 3}, {2, 4}, {5, 3}, {5, 4}}},
            {1.0, {{1, 3}, {1, 5}, {2, 3}, {2, 5}}},
            {1.0, {{1, 4}, {1, 5}, {2, 4}, {2, 5}}},
        };
        break;
      case 6:
        lhs = 15.0 * s0 - (sec1(r, 1, 2) + sec1(r, 3, 4));
        rhs_brackets = {
            {0.75, {{1, 3}, {2, 4}, {1, 4}, {2, 3}}},
            {0.75, {{1, 5}, {1, 6}, {2, 5}, {2, 6}}},
            {0.75, {{3, 5}, {3, 6}, {4, 5}, {4, 6}}},
            {0.125, {{1, 3}, {1, 6}, {5, 3}, {5, 6}}},
            {0.125, {{1, 4}, {1, 6}, {5, 4}, {5, 6}}},
            {0.125, {{2, 3}, {2, 6}, {5, 3}, {5, 6}}},
            {0.125, {{2, 4}, {2, 6}, {5, 4}, {5, 6}}},
            {0.125, {{3, 1}, {3, 6}, {5, 1}, {5, 6}}},
            {0.125, {{4, 1}, {4, 6}, {5, 1}, {5, 6}}},
            {0.125, {{3, 2}, {3, 6}, {5, 2}, {5, 6}}},
            {0.125, {{4, 2}, {4, 6}, {5, 2}, {5, 6}}},
        };
        break;
      case 7: {
        lhs = 21.0 * s0 - (sec1(r, 1, 2) + sec1(r, 3, 4));
        rhs_brackets.push_back({0.25, {{1, 3}, {2, 4}, {1, 4}, {2, 3}}});
        for (int p = 5; p <= 7; ++p)
          for (int q = p + 1; q <= 7; ++q) {
            rhs_brackets.push_back({0.25, {{1, p}, {1, q}, {2, p}, {2, q}}});
            rhs_brackets.push_back({0.25, {{3, p}, {3, q}, {4, p}, {4, q}}});
          }
        // Ordered pairs (i, j) from the first four indices, skipping the
        // two blocks {1,2} and {3,4} in either order.
        for (int i = 1; i <= 4; ++i)
          for (int j = 1; j <= 4; ++j) {
            if (i == j) continue;
            const int lo = std::min(i, j);
            const int hi = std::max(i, j);
            if ((lo == 1 && hi == 2) || (lo == 3 && hi == 4)) continue;
            for (int p = 5; p <= 7; ++p)
              for (int q = p + 1; q <= 7; ++q)
                rhs_brackets.push_back(
                    {0.125, {{i, j}, {i, q}, {p, j}, {p, q}}});
          }
        break;
      }
    }
  } else {
    // Upper side: the A combination on the left equals the scalar multiple
    // of S0 minus weighted two-term brackets of disjoint basis planes.
    switch (n) {
      case 5:
        lhs = sec1(r, 1, 3) + sec1(r, 1, 4) + sec1(r, 2, 3) + sec1(r, 2, 4);
        rhs_base = 20.0 * s0;
        rhs_brackets = {
            {1.0, {{1, 2}, {3, 5}}}, {1.0, {{1, 2}, {4, 5}}},
            {1.0, {{3, 4}, {1, 5}}}, {1.0, {{3, 4}, {2, 5}}},
            {1.0, {{1, 3}, {2, 5}}}, {1.0, {{1, 4}, {3, 5}}},
            {1.0, {{2, 3}, {4, 5}}}, {1.0, {{2, 4}, {1, 5}}},
        };
        break;
      case 6:
        lhs = sec1(r, 1, 3) + sec1(r, 1, 4) + sec1(r, 2, 3) + sec1(r, 2, 4) -
              0.5 * (sec1(r, 1, 2) + sec1(r, 3, 4));
        rhs_base = 15.0 * s0;
        rhs_brackets = {
            {1.0, {{1, 2}, {3, 4}}}, {1.0, {{1, 5}, {2, 6}}},
            {1.0, {{1, 6}, {2, 5}}}, {1.0, {{3, 5}, {4, 6}}},
            {1.0, {{3, 6}, {4, 5}}}, {0.5, {{1, 2}, {5, 6}}},
            {0.5, {{3, 4}, {5, 6}}},
        };
        break;
      case 7:
        lhs = sec1(r, 1, 3) + sec1(r, 1, 4) + sec1(r, 2, 3) + sec1(r, 2, 4) -
              0.5 * (sec1(r, 1, 2) + sec1(r, 3, 4));
        rhs_base = 21.0 * s0;
        rhs_brackets = {
            {1.0, {{1, 2}, {5, 6}}}, {1.0, {{3, 4}, {5, 7}}},
            {1.0, {{1, 5}, {2, 6}}}, {1.0, {{4, 7}, {2, 5}}},
            {1.0, {{3, 5}, {4, 6}}}, {1.0, {{1, 7}, {4, 5}}},
            {1.0, {{1, 6}, {3, 7}}}, {1.0, {{3, 6}, {2, 7}}},
            {0.5, {{1, 2}, {6, 7}}}, {0.5, {{3, 4}, {6, 7}}},
        };
        break;
    }
  }

  const double rhs = (which == YauSide::Lower)
                         ? eval_brackets(r, rhs_brackets)
                         : rhs_base - eval_brackets(r, rhs_brackets);
  IdentityReport rep;
  rep.identity = which == YauSide::Lower ? IdentityKind::DimSpecificYauLower
                                         : IdentityKind::DimSpecificYauUpper;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = relative_residual(lhs, rhs, r);
  rep.dim = n;
  return rep;
}

CurvatureTensor rotate_tensor(const CurvatureTensor& r,
                              std::span<const double> q) {
  const int n = r.dim();
  if (q.size() != static_cast<std::size_t>(n) * n)
    throw DimensionMismatch("rotate_tensor: basis matrix must be n x n");
  const std::size_t n2 = static_cast<std::size_t>(n) * n;
  const std::size_t n3 = n2 * n;
  const std::size_t n4 = n3 * n;
  std::vector<double> cur(r.components().begin(), r.components().end());
  std::vector<double> nxt(n4);
  // Contract one slot per pass; after four passes every slot is rotated.
  for (int pass = 0; pass < 4; ++pass) {
    for (std::size_t rest = 0; rest < n3; ++rest) {
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          s += q[static_cast<std::size_t>(a) * n + i] * cur[rest * n + i];
        // cycle the contracted slot to the front
        nxt[static_cast<std::size_t>(a) * n3 + rest] = s;
      }
    }
    cur.swap(nxt);
  }
  return CurvatureTensor::from_components_checked(std::move(cur), n);
}

HarnessSummary implication_harness(HarnessFamily family, int trials,
                                   std::uint64_t seed,
                                   const SearchConfig& cfg) {
  if (trials < 1) throw InvalidInput("implication_harness: trials must be >= 1");
  HarnessSummary summary;
  summary.family = family;
  summary.trials = trials;
  summary.seed = seed;
  summary.trial_records.reserve(trials);

  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t cs = child_seed(seed, static_cast<std::uint64_t>(trial));
    SplitMix64 gen(cs);
    const int n = 4 + (trial % 3);
    const bool cp = (n % 2 == 0) && (trial % 2 == 1);
    CurvatureTensor base =
        cp ? fubini_study(n / 2).tensor : constant_curvature(n, 1.0);
    const double t = 0.3 * gen.uniform01();
    CurvatureTensor noise = random_curvature_tensor(n, gen.next(), 1.0);
    CurvatureTensor tensor = linear_combination(base, 1.0 - t, noise, t);

    const double tol = strictness_tolerance(tensor);
    SearchConfig c1 = cfg;
    c1.seed = child_seed(cs, 1);
    SearchConfig c2 = cfg;
    c2.seed = child_seed(cs, 2);
    SearchConfig c3 = cfg;
    c3.seed = child_seed(cs, 3);

    double hypothesis = 0.0;
    double conclusion = 0.0;
    bool quantitative_ok = true;
    switch (family) {
      case HarnessFamily::LemmaQuarter: {
        const double kmin = minimize_sectional(tensor, false, c1).value;
        const double kmax = minimize_sectional(tensor, true, c2).value;
        hypothesis = kmin - 0.25 * kmax;
        conclusion =
            minimize_over_four_frames(tensor, FrameFunctional::condition(0.5), c3)
                .value;
        break;
      }
      case HarnessFamily::PropMain: {
        hypothesis =
            minimize_over_four_frames(tensor, FrameFunctional::condition(0.5), c1)
                .value;
        conclusion =
            minimize_over_four_frames(tensor, FrameFunctional::isotropic(), c2)
                .value;
        quantitative_ok = conclusion >= (4.0 / 3.0) * hypothesis - 1e-6;
        break;
      }
      case HarnessFamily::PropYauLower: {
        const double s0 = curvature_scalars(tensor).normalized_scalar;
        const double min_a =
            minimize_over_four_frames(tensor, FrameFunctional::a_sum(), c1)
                .value;
        hypothesis = (s0 > 0.0)
                         ? min_a - 4.0 * eta_n(n) * s0
                         : -std::numeric_limits<double>::infinity();
        conclusion =
            minimize_over_four_frames(tensor, FrameFunctional::condition(0.5), c2)
                .value;
        break;
      }
      case HarnessFamily::PropYauUpper: {
        const double s0 = curvature_scalars(tensor).normalized_scalar;
        const double max_b =
            extremize_over_four_frames(tensor, FrameFunctional::b_sum(), c1,
                                       true)
                .value;
        hypothesis = (s0 > 0.0)
                         ? 2.0 * gamma_n(n) * s0 - max_b
                         : -std::numeric_limits<double>::infinity();
        conclusion =
            minimize_over_four_frames(tensor, FrameFunctional::condition(0.5), c2)
                .value;
        break;
      }
    }

    HarnessTrial rec;
    rec.index = trial;
    rec.dim = n;
    rec.cp_base = cp;
    rec.mix = t;
    rec.hypothesis_margin = hypothesis;
    rec.conclusion_margin = conclusion;
    rec.hypothesis_satisfied = hypothesis > 10.0 * tol;
    rec.violation =
        rec.hypothesis_satisfied && (conclusion <= 0.0 || !quantitative_ok);
    if (rec.hypothesis_satisfied) ++summary.hypothesis_satisfied;
    if (rec.violation) ++summary.violations;
    summary.trial_records.push_back(rec);
  }
  return summary;
}

}  // namespace curvlab
