#include "curvlab/curvature_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "curvlab/frame.hpp"
#include "curvlab/functionals.hpp"
#include "curvlab/linalg.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

std::size_t idx4(int n, int i, int j, int k, int l) {
  return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
}

void require_same_dim(const CurvatureTensor& r, const Frame& f) {
  if (r.dim() != f.dim())
    throw DimensionMismatch("tensor dimension " + std::to_string(r.dim()) +
                            " does not match frame dimension " +
                            std::to_string(f.dim()));
}

const Frame& require_four(const Frame& f) {
  if (f.count() != 4) throw InvalidFrame("a four-frame is required");
  return f;
}

// Rebuilds the array from its canonical representatives (i < j, k < l,
// (i,j) <= (k,l)), making the pair symmetries hold bit-exactly. The input
// already satisfies them to rounding, so values move by at most one ulp.
std::vector<double> canonicalize_orbits(const std::vector<double>& in, int n) {
  std::vector<double> out(in.size(), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = i; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          if (k == i && l < j) continue;
          const double v = in[idx4(n, i, j, k, l)];
          out[idx4(n, i, j, k, l)] = v;
          out[idx4(n, j, i, k, l)] = -v;
          out[idx4(n, i, j, l, k)] = -v;
          out[idx4(n, j, i, l, k)] = v;
          out[idx4(n, k, l, i, j)] = v;
          out[idx4(n, l, k, i, j)] = -v;
          out[idx4(n, k, l, j, i)] = -v;
          out[idx4(n, l, k, j, i)] = v;
        }
  return out;
}

}  // namespace

CurvatureTensor CurvatureTensor::project(std::span<const double> raw, int n) {
  if (n < 2) throw InvalidDimension("projection needs dimension >= 2");
  const std::size_t total = static_cast<std::size_t>(n) * n * n * n;
  if (raw.size() != total)
    throw InvalidInput("raw component array must have n^4 entries");
  for (double x : raw)
    if (!std::isfinite(x)) throw InvalidInput("raw components must be finite");

  // Antisymmetrize within both index pairs, then symmetrize under pair
  // exchange. Both are group averages, hence orthogonal projections.
  std::vector<double> a(total);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          a[idx4(n, i, j, k, l)] =
              0.25 * (raw[idx4(n, i, j, k, l)] - raw[idx4(n, j, i, k, l)] -
                      raw[idx4(n, i, j, l, k)] + raw[idx4(n, j, i, l, k)]);

  std::vector<double> b(total);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          b[idx4(n, i, j, k, l)] =
              0.5 * (a[idx4(n, i, j, k, l)] + a[idx4(n, k, l, i, j)]);

  // Subtract the Bianchi component: one third of the cyclic sum over the
  // last three indices is the projection onto the fully antisymmetric part.
  std::vector<double> out(total);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double cyc = b[idx4(n, i, j, k, l)] + b[idx4(n, i, k, l, j)] +
                             b[idx4(n, i, l, j, k)];
          out[idx4(n, i, j, k, l)] = b[idx4(n, i, j, k, l)] - cyc / 3.0;
        }

  // The averages above hold only to rounding across an orbit; snap the pair
  // symmetries to be bit-exact so canonical storage is lossless.
  return CurvatureTensor(canonicalize_orbits(out, n), n);
}

double CurvatureTensor::worst_invariant_residual(
    std::span<const double> c, int n, std::string* which) {
  double worst = 0.0;
  const char* name = "none";
  auto consider = [&](double r, const char* w) {
    if (r > worst) {
      worst = r;
      name = w;
    }
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = c[idx4(n, i, j, k, l)];
          consider(std::abs(v + c[idx4(n, j, i, k, l)]),
                   "antisymmetry in the first pair");
          consider(std::abs(v + c[idx4(n, i, j, l, k)]),
                   "antisymmetry in the second pair");
          consider(std::abs(v - c[idx4(n, k, l, i, j)]), "pair symmetry");
          consider(std::abs(v + c[idx4(n, i, k, l, j)] +
                            c[idx4(n, i, l, j, k)]),
                   "first Bianchi identity");
        }
  if (which) *which = name;
  return worst;
}

CurvatureTensor CurvatureTensor::from_components_checked(
    std::vector<double> components, int n) {
  if (n < 1) throw InvalidDimension("dimension must be >= 1");
  const std::size_t total = static_cast<std::size_t>(n) * n * n * n;
  if (components.size() != total)
    throw InvalidInput("component array must have n^4 entries");
  double maxabs = 0.0;
  for (double x : components) {
    if (!std::isfinite(x)) throw InvalidInput("components must be finite");
    maxabs = std::max(maxabs, std::abs(x));
  }
  std::string which;
  const double worst = worst_invariant_residual(components, n, &which);
  const double tol = kValidationTol * (1.0 + maxabs);
  if (worst > tol) {
    std::ostringstream msg;
    msg << "components violate the curvature symmetries: worst residual "
        << worst << " (" << which << ") exceeds " << tol;
    throw InvalidInput(msg.str());
  }
  return CurvatureTensor(std::move(components), n);
}

double CurvatureTensor::frobenius_norm() const {
  double s = 0.0;
  for (double x : c_) s += x * x;
  return std::sqrt(s);
}

double CurvatureTensor::max_abs() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

double CurvatureTensor::evaluate(std::span<const double> x,
                                 std::span<const double> y,
                                 std::span<const double> z,
                                 std::span<const double> w) const {
  const int n = n_;
  if (x.size() != static_cast<std::size_t>(n) || x.size() != y.size() ||
      x.size() != z.size() || x.size() != w.size())
    throw DimensionMismatch("evaluate: vectors must have length dim()");
  // Successive contraction, innermost index first.
  std::vector<double> p(static_cast<std::size_t>(n) * n * n);
  const double* c = c_.data();
  for (std::size_t ijk = 0; ijk < p.size(); ++ijk) {
    double s = 0.0;
    const double* row = c + ijk * n;
    for (int l = 0; l < n; ++l) s += row[l] * w[l];
    p[ijk] = s;
  }
  std::vector<double> q(static_cast<std::size_t>(n) * n);
  for (std::size_t ij = 0; ij < q.size(); ++ij) {
    double s = 0.0;
    const double* row = p.data() + ij * n;
    for (int k = 0; k < n; ++k) s += row[k] * z[k];
    q[ij] = s;
  }
  double out = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    const double* row = q.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) s += row[j] * y[j];
    out += x[i] * s;
  }
  return out;
}

CurvatureTensor project_to_curvature_space(std::span<const double> raw, int n) {
  return CurvatureTensor::project(raw, n);
}

double sectional(const CurvatureTensor& r, std::span<const double> u,
                 std::span<const double> v) {
  if (u.size() != static_cast<std::size_t>(r.dim()) || u.size() != v.size())
    throw DimensionMismatch("sectional: vectors must have length dim()");
  const double uu = dot(u, u);
  const double vv = dot(v, v);
  const double uv = dot(u, v);
  constexpr double tol = 1e-10;
  if (std::abs(uu - 1.0) > tol || std::abs(vv - 1.0) > tol ||
      std::abs(uv) > tol)
    throw InvalidFrame("sectional: (u, v) must be orthonormal within 1e-10");
  return r.evaluate(u, v, u, v);
}

CurvatureScalars curvature_scalars(const CurvatureTensor& r) {
  const int n = r.dim();
  CurvatureScalars s;
  s.dim = n;
  s.ricci.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += r.at(i, k, j, k);
      s.ricci[static_cast<std::size_t>(i) * n + j] = acc;
    }
  double trace = 0.0;
  for (int i = 0; i < n; ++i)
    trace += s.ricci[static_cast<std::size_t>(i) * n + i];
  s.scalar = trace;
  s.normalized_scalar = (n >= 2) ? trace / (static_cast<double>(n) * (n - 1))
                                 : 0.0;
  return s;
}

std::vector<double> CurvatureScalars::ricci_eigenvalues() const {
  return symmetric_eigenvalues(ricci, dim);
}

double CurvatureScalars::min_ricci_eigenvalue() const {
  return ricci_eigenvalues().front();
}

double a_sum(const CurvatureTensor& r, const Frame& f) {
  require_same_dim(r, require_four(f));
  EvalWorkspace ws;
  return eval_rows(r, FrameFunctional::a_sum(), f.rows(), 0.0, ws);
}

double b_sum(const CurvatureTensor& r, const Frame& f) {
  require_same_dim(r, require_four(f));
  EvalWorkspace ws;
  return eval_rows(r, FrameFunctional::b_sum(), f.rows(), 0.0, ws);
}

double isotropic_quantity(const CurvatureTensor& r, const Frame& f) {
  require_same_dim(r, require_four(f));
  EvalWorkspace ws;
  return eval_rows(r, FrameFunctional::isotropic(), f.rows(), 0.0, ws);
}

CurvatureTensor direct_sum(const CurvatureTensor& r1,
                           const CurvatureTensor& r2) {
  const int n1 = r1.dim();
  const int n2 = r2.dim();
  const int n = n1 + n2;
  std::vector<double> c(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const bool b1 = i < n1 && j < n1 && k < n1 && l < n1;
          const bool b2 = i >= n1 && j >= n1 && k >= n1 && l >= n1;
          if (b1)
            c[idx4(n, i, j, k, l)] = r1.at(i, j, k, l);
          else if (b2)
            c[idx4(n, i, j, k, l)] = r2.at(i - n1, j - n1, k - n1, l - n1);
        }
  return CurvatureTensor::from_components_checked(std::move(c), n);
}

CurvatureTensor scale(const CurvatureTensor& r, double c) {
  if (!std::isfinite(c)) throw InvalidInput("scale: factor must be finite");
  std::vector<double> out(r.components().begin(), r.components().end());
  for (auto& x : out) x *= c;
  return CurvatureTensor::from_components_checked(std::move(out), r.dim());
}

CurvatureTensor linear_combination(const CurvatureTensor& a, double ca,
                                   const CurvatureTensor& b, double cb) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("linear_combination: dimensions differ");
  if (!std::isfinite(ca) || !std::isfinite(cb))
    throw InvalidInput("linear_combination: coefficients must be finite");
  std::vector<double> out(a.components().size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = ca * a.components()[i] + cb * b.components()[i];
  return CurvatureTensor::from_components_checked(std::move(out), a.dim());
}

CurvatureTensor random_curvature_tensor(int n, std::uint64_t seed,
                                        double magnitude) {
  if (n < 2) throw InvalidDimension("random tensor needs dimension >= 2");
  if (!std::isfinite(magnitude) || magnitude < 0.0)
    throw InvalidInput("magnitude must be finite and nonnegative");
  SplitMix64 rng(seed);
  std::vector<double> raw(static_cast<std::size_t>(n) * n * n * n);
  for (auto& x : raw) x = magnitude * (2.0 * rng.uniform01() - 1.0);
  return CurvatureTensor::project(raw, n);
}

}  // namespace curvlab
