#include "curvlab/frame_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "curvlab/linalg.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

std::atomic<unsigned> g_threads{0};

unsigned effective_threads() {
  const unsigned configured = g_threads.load();
  if (configured != 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : std::min(hw, 8u);
}

// Static chunked parallel loop. Work item i only ever runs with the same
// inputs regardless of the partition, and results are merged by index, so
// outputs do not depend on the thread count.
void parallel_for_index(std::int64_t count,
                        const std::function<void(std::int64_t)>& fn) {
  const unsigned threads =
      static_cast<unsigned>(std::min<std::int64_t>(effective_threads(), count));
  if (threads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    constexpr std::int64_t kChunk = 16;
    for (;;) {
      const std::int64_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::int64_t end = std::min(begin + kChunk, count);
      for (std::int64_t i = begin; i < end; ++i) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Tangent projection for row-orthonormal F: G -= sym(G F^T) F.
void tangent_project(std::span<double> grad, std::span<const double> rows,
                     int k, int n) {
  double m[16];  // k x k, k <= 4
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double s = 0.0;
      const double* ga = grad.data() + static_cast<std::size_t>(a) * n;
      const double* fb = rows.data() + static_cast<std::size_t>(b) * n;
      for (int i = 0; i < n; ++i) s += ga[i] * fb[i];
      m[a * 4 + b] = s;
    }
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const double sym = 0.5 * (m[a * 4 + b] + m[b * 4 + a]);
      double* ga = grad.data() + static_cast<std::size_t>(a) * n;
      const double* fb = rows.data() + static_cast<std::size_t>(b) * n;
      for (int i = 0; i < n; ++i) ga[i] -= sym * fb[i];
    }
}

struct RestartOutcome {
  double value = 0.0;
  std::vector<double> rows;
  double theta = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

struct Problem {
  const CurvatureTensor* r;
  FrameFunctional f;
  bool maximize = false;
  int k = 4;
  bool angle = false;

  double signed_value(std::span<const double> rows, double theta,
                      EvalWorkspace& ws) const {
    const double v = eval_rows(*r, f, rows, theta, ws);
    return maximize ? -v : v;
  }
  double signed_gradient(std::span<const double> rows, double theta,
                         std::span<double> grad, double& gtheta,
                         EvalWorkspace& ws) const {
    double v = eval_rows_gradient(*r, f, rows, theta, grad, gtheta, ws);
    if (maximize) {
      v = -v;
      for (auto& g : grad) g = -g;
      gtheta = -gtheta;
    }
    return v;
  }
};

RestartOutcome run_descent(const Problem& prob, std::vector<double> rows,
                           double theta, const SearchConfig& cfg,
                           EvalWorkspace& ws) {
  const int n = prob.r->dim();
  const int k = prob.k;
  std::vector<double> grad(rows.size());
  std::vector<double> trial(rows.size());

  RestartOutcome out;
  double gtheta = 0.0;
  double value = prob.signed_gradient(rows, theta, grad, gtheta, ws);
  int iter = 0;
  bool converged = false;
  double gnorm = 0.0;
  for (; iter < cfg.max_iterations; ++iter) {
    tangent_project(grad, rows, k, n);
    double g2 = gtheta * gtheta;
    for (double g : grad) g2 += g * g;
    gnorm = std::sqrt(g2);
    if (gnorm <= cfg.gradient_tolerance) {
      converged = true;
      break;
    }
    double step = cfg.step_size;
    bool accepted = false;
    double trial_theta = theta;
    for (int halving = 0; halving < 30; ++halving) {
      for (std::size_t i = 0; i < rows.size(); ++i)
        trial[i] = rows[i] - step * grad[i];
      trial_theta = theta - step * gtheta;
      if (gram_schmidt_rows(trial, k, n)) {
        const double trial_value = prob.signed_value(trial, trial_theta, ws);
        if (trial_value < value) {
          rows.swap(trial);
          theta = trial_theta;
          value = trial_value;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled at the numerical floor
    value = prob.signed_gradient(rows, theta, grad, gtheta, ws);
  }
  if (!converged) {
    // Refresh the projected gradient norm at the final point for reporting.
    prob.signed_gradient(rows, theta, grad, gtheta, ws);
    tangent_project(grad, rows, k, n);
    double g2 = gtheta * gtheta;
    for (double g : grad) g2 += g * g;
    gnorm = std::sqrt(g2);
    converged = gnorm <= cfg.gradient_tolerance;
  }
  out.value = value;
  out.rows = std::move(rows);
  out.theta = theta;
  out.iterations = iter;
  out.converged = converged;
  out.gradient_norm = gnorm;
  return out;
}

std::vector<double> random_rows(SplitMix64& rng, int k, int n) {
  std::vector<double> rows(static_cast<std::size_t>(k) * n);
  do {
    for (auto& x : rows) x = standard_normal(rng);
  } while (!gram_schmidt_rows(rows, k, n));
  return rows;
}

MinimizationResult run_search(const CurvatureTensor& r,
                              const FrameFunctional& f, const SearchConfig& cfg,
                              bool maximize,
                              std::span<const Frame> warm_starts) {
  if (r.dim() < f.min_dim())
    throw InvalidDimension(std::string(f.name()) + " needs dimension >= " +
                           std::to_string(f.min_dim()));
  if (cfg.restarts < 1 || cfg.max_iterations < 1 || cfg.step_size <= 0.0 ||
      cfg.gradient_tolerance <= 0.0)
    throw InvalidInput("SearchConfig fields must be positive");
  for (const Frame& w : warm_starts) {
    if (w.dim() != r.dim())
      throw DimensionMismatch("warm start frame has the wrong dimension");
    if (w.count() != f.vector_count())
      throw InvalidFrame("warm start frame has the wrong vector count");
  }

  Problem prob{&r, f, maximize, f.vector_count(), f.has_angle()};
  const int n = r.dim();
  const std::int64_t total =
      cfg.restarts + static_cast<std::int64_t>(warm_starts.size());
  std::vector<RestartOutcome> outcomes(total);
  parallel_for_index(total, [&](std::int64_t idx) {
    EvalWorkspace ws;
    std::vector<double> rows;
    double theta = 0.0;
    SplitMix64 rng(child_seed(cfg.seed, static_cast<std::uint64_t>(idx)));
    if (idx < cfg.restarts) {
      rows = random_rows(rng, prob.k, n);
      if (prob.angle)
        theta = rng.uniform(0.0, 6.28318530717958647692528676655900577);
    } else {
      auto src = warm_starts[idx - cfg.restarts].rows();
      rows.assign(src.begin(), src.end());
      if (prob.angle) theta = rng.uniform(0.0, 6.28318530717958647692528676655900577);
    }
    outcomes[idx] = run_descent(prob, std::move(rows), theta, cfg, ws);
  });

  // Merge by value, ties to the lower restart index.
  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i)
    if (outcomes[i].value < outcomes[best].value) best = i;

  const RestartOutcome& win = outcomes[best];
  MinimizationResult res{
      maximize ? -win.value : win.value,
      Frame(n, prob.k, win.rows),
      win.theta,
      win.iterations,
      static_cast<int>(total),
      win.converged,
      win.gradient_norm,
  };
  return res;
}

}  // namespace

void set_search_threads(unsigned n) { g_threads.store(n); }

unsigned search_threads() { return effective_threads(); }

MinimizationResult minimize_over_four_frames(const CurvatureTensor& r,
                                             const FrameFunctional& f,
                                             const SearchConfig& cfg) {
  return extremize_over_four_frames(r, f, cfg, false);
}

MinimizationResult extremize_over_four_frames(const CurvatureTensor& r,
                                              const FrameFunctional& f,
                                              const SearchConfig& cfg,
                                              bool maximize) {
  if (f.vector_count() != 4)
    throw InvalidInput("extremize_over_four_frames needs a four-frame functional");
  return run_search(r, f, cfg, maximize, {});
}

MinimizationResult minimize_over_four_frames_with_starts(
    const CurvatureTensor& r, const FrameFunctional& f, const SearchConfig& cfg,
    std::span<const Frame> warm_starts) {
  if (f.vector_count() != 4)
    throw InvalidInput("minimize_over_four_frames needs a four-frame functional");
  return run_search(r, f, cfg, false, warm_starts);
}

MinimizationResult minimize_sectional(const CurvatureTensor& r, bool maximize,
                                      const SearchConfig& cfg) {
  return run_search(r, FrameFunctional::sectional(), cfg, maximize, {});
}

MinimizationResult min_flag_pinching(const CurvatureTensor& r,
                                     const SearchConfig& cfg) {
  return run_search(r, FrameFunctional::flag_pinching(), cfg, false, {});
}

double brute_force_extremum(const CurvatureTensor& r, const FrameFunctional& f,
                            std::int64_t samples, std::uint64_t seed,
                            bool minimize) {
  std::vector<FrameFunctional> fs{f};
  return brute_force_extrema(r, fs, samples, seed, minimize)[0];
}

std::vector<double> brute_force_extrema(const CurvatureTensor& r,
                                        std::span<const FrameFunctional> fs,
                                        std::int64_t samples,
                                        std::uint64_t seed, bool minimize) {
  if (fs.empty()) return {};
  if (samples < 1) throw InvalidInput("samples must be >= 1");
  const int k = fs[0].vector_count();
  const bool angle = fs[0].has_angle();
  for (const auto& f : fs)
    if (f.vector_count() != k || f.has_angle() != angle)
      throw InvalidInput("batched functionals must share the frame shape");
  if (r.dim() < fs[0].min_dim())
    throw InvalidDimension("tensor dimension too small for the functional");

  const int n = r.dim();
  const bool four_frame = (k == 4 && !angle);
  const double init = minimize ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();

  const unsigned threads = effective_threads();
  const std::int64_t slices = std::min<std::int64_t>(samples, threads * 4);
  std::vector<std::vector<double>> partial(
      slices, std::vector<double>(fs.size(), init));

  parallel_for_index(slices, [&](std::int64_t slice) {
    EvalWorkspace ws;
    std::vector<double> rows(static_cast<std::size_t>(k) * n);
    auto& best = partial[slice];
    const std::int64_t begin = slice * samples / slices;
    const std::int64_t end = (slice + 1) * samples / slices;
    for (std::int64_t s = begin; s < end; ++s) {
      SplitMix64 rng(child_seed(seed, static_cast<std::uint64_t>(s)));
      do {
        for (auto& x : rows) x = standard_normal(rng);
      } while (!gram_schmidt_rows(rows, k, n));
      const double theta =
          angle ? rng.uniform(0.0, 6.28318530717958647692528676655900577)
                : 0.0;
      if (four_frame) {
        const FourFrameTerms terms = four_frame_terms(r, rows, ws);
        for (std::size_t fi = 0; fi < fs.size(); ++fi) {
          const double v = functional_from_terms(fs[fi], terms);
          best[fi] = minimize ? std::min(best[fi], v) : std::max(best[fi], v);
        }
      } else {
        for (std::size_t fi = 0; fi < fs.size(); ++fi) {
          const double v = eval_rows(r, fs[fi], rows, theta, ws);
          best[fi] = minimize ? std::min(best[fi], v) : std::max(best[fi], v);
        }
      }
    }
  });

  std::vector<double> out(fs.size(), init);
  for (const auto& best : partial)
    for (std::size_t fi = 0; fi < fs.size(); ++fi)
      out[fi] = minimize ? std::min(out[fi], best[fi])
                         : std::max(out[fi], best[fi]);
  return out;
}

Frame rotate_frame_prime(const Frame& f) {
  if (f.count() != 4) throw InvalidFrame("rotate_frame_prime needs a four-frame");
  const int n = f.dim();
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<double> rows(static_cast<std::size_t>(4) * n);
  auto e1 = f.vec(0);
  auto e2 = f.vec(1);
  auto e3 = f.vec(2);
  auto e4 = f.vec(3);
  for (int i = 0; i < n; ++i) {
    rows[i] = s * (e1[i] + e4[i]);
    rows[static_cast<std::size_t>(n) + i] = s * (e2[i] - e3[i]);
    rows[2 * static_cast<std::size_t>(n) + i] = s * (e1[i] - e4[i]);
    rows[3 * static_cast<std::size_t>(n) + i] = s * (e2[i] + e3[i]);
  }
  return Frame(n, 4, std::move(rows));
}

Frame rotate_frame_double_prime(const Frame& f) {
  if (f.count() != 4)
    throw InvalidFrame("rotate_frame_double_prime needs a four-frame");
  const int n = f.dim();
  // Relabel (e1, e2, e3, e4) -> (e1, e2, -e4, e3), then apply the prime map.
  std::vector<double> rows(static_cast<std::size_t>(4) * n);
  auto e1 = f.vec(0);
  auto e2 = f.vec(1);
  auto e3 = f.vec(2);
  auto e4 = f.vec(3);
  for (int i = 0; i < n; ++i) {
    rows[i] = e1[i];
    rows[static_cast<std::size_t>(n) + i] = e2[i];
    rows[2 * static_cast<std::size_t>(n) + i] = -e4[i];
    rows[3 * static_cast<std::size_t>(n) + i] = e3[i];
  }
  return rotate_frame_prime(Frame(n, 4, std::move(rows)));
}

}  // namespace curvlab
