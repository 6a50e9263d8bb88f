#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "curvlab/functionals.hpp"

namespace curvlab {

struct SearchConfig {
  int restarts = 64;
  int max_iterations = 2000;
  double step_size = 0.05;
  double gradient_tolerance = 1e-9;
  std::uint64_t seed = 1;
};

struct MinimizationResult {
  double value = 0.0;
  Frame frame;         // 4 rows for four-frame functionals, 2 for sectional,
                       // 3 for the flag configuration (plus theta below)
  double theta = 0.0;  // flag angle; 0 for everything else
  int iterations = 0;  // iterations used by the winning restart
  int restarts_used = 0;
  bool converged = false;  // winning restart met the gradient tolerance
  double gradient_norm = 0.0;
};

// Worker threads for restarts and oracle sampling. 0 = auto. Results are
// bitwise independent of this setting.
void set_search_threads(unsigned n);
unsigned search_threads();

// Projected gradient descent over orthonormal four-frames with seeded random
// restarts: Euclidean gradient, tangent projection (subtract the symmetric
// part of G F^T applied to the frame), step with backtracking halving (up to
// 30 halvings), Gram-Schmidt retraction. Deterministic in cfg.seed and
// independent of restart scheduling; ties merge to the lowest restart index.
MinimizationResult minimize_over_four_frames(const CurvatureTensor& r,
                                             const FrameFunctional& f,
                                             const SearchConfig& cfg);

// Same, with maximize = run the descent on -f and report the max.
MinimizationResult extremize_over_four_frames(const CurvatureTensor& r,
                                              const FrameFunctional& f,
                                              const SearchConfig& cfg,
                                              bool maximize);

// Same contract with caller-provided frames appended as extra deterministic
// restarts after the cfg.restarts random ones.
MinimizationResult minimize_over_four_frames_with_starts(
    const CurvatureTensor& r, const FrameFunctional& f, const SearchConfig& cfg,
    std::span<const Frame> warm_starts);

// Min (or max) of sectional curvature over orthonormal two-frames.
MinimizationResult minimize_sectional(const CurvatureTensor& r, bool maximize,
                                      const SearchConfig& cfg);

// Minimizes K(sigma_1) - 1/4 K(sigma_2) over configurations of two planes
// sharing the line through v: sigma_1 = span(v, w1), sigma_2 = span(v, w)
// with w = w1 cos(theta) + w2 sin(theta) over orthonormal triples (v,w1,w2)
// and the free angle theta. A positive result certifies quarter-pinched
// flag curvature.
MinimizationResult min_flag_pinching(const CurvatureTensor& r,
                                     const SearchConfig& cfg);

// Best value of f over `samples` frames drawn by orthonormalizing i.i.d.
// standard normal rows (plus a uniform angle for the flag functional).
// Deterministic in seed; the independent oracle for optimizer results.
double brute_force_extremum(const CurvatureTensor& r, const FrameFunctional& f,
                            std::int64_t samples, std::uint64_t seed,
                            bool minimize);

// One sampling pass shared by several four-frame functionals.
std::vector<double> brute_force_extrema(const CurvatureTensor& r,
                                        std::span<const FrameFunctional> fs,
                                        std::int64_t samples,
                                        std::uint64_t seed, bool minimize);

// The rotated companion frames of the isotropic-curvature decomposition:
//   prime:        ((e1+e4)/s2, (e2-e3)/s2, (e1-e4)/s2, (e2+e3)/s2)
//   double prime: the prime map applied to (e1, e2, -e4, e3)
Frame rotate_frame_prime(const Frame& f);
Frame rotate_frame_double_prime(const Frame& f);

}  // namespace curvlab
