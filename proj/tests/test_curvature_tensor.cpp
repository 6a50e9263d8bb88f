#include <doctest.h>

#include <cmath>
#include <vector>

#include "curvlab/curvature_tensor.hpp"
#include "curvlab/frame.hpp"
#include "curvlab/model_spaces.hpp"
#include "curvlab/rng.hpp"

using namespace curvlab;

namespace {

std::size_t idx4(int n, int i, int j, int k, int l) {
  return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
}

// Independent re-implementation of the projection, step by step, used as
// the oracle for CurvatureTensor::project.
std::vector<double> reference_projection(const std::vector<double>& raw, int n) {
  std::vector<double> a(raw.size()), b(raw.size()), out(raw.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          a[idx4(n, i, j, k, l)] =
              (raw[idx4(n, i, j, k, l)] - raw[idx4(n, j, i, k, l)] -
               raw[idx4(n, i, j, l, k)] + raw[idx4(n, j, i, l, k)]) /
              4.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          b[idx4(n, i, j, k, l)] =
              (a[idx4(n, i, j, k, l)] + a[idx4(n, k, l, i, j)]) / 2.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out[idx4(n, i, j, k, l)] =
              b[idx4(n, i, j, k, l)] -
              (b[idx4(n, i, j, k, l)] + b[idx4(n, i, k, l, j)] +
               b[idx4(n, i, l, j, k)]) /
                  3.0;
  return out;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("projection: zero input gives the zero tensor") {
  std::vector<double> raw(256, 0.0);
  auto r = project_to_curvature_space(raw, 4);
  CHECK(r.max_abs() == 0.0);
}

TEST_CASE("projection: idempotent on a valid constant-curvature tensor") {
  auto r = constant_curvature(4, 1.0);
  auto p = project_to_curvature_space(r.components(), 4);
  CHECK(max_abs_diff(r.components(), p.components()) < 1e-12);
}

TEST_CASE("projection matches the step-by-step symmetrization oracle") {
  // Valid tensor plus a spike that violates the symmetries.
  auto base = constant_curvature(4, 1.0);
  std::vector<double> raw(base.components().begin(), base.components().end());
  raw[idx4(4, 0, 0, 1, 2)] += 1.0;

  auto projected = project_to_curvature_space(raw, 4);
  auto expected = reference_projection(raw, 4);
  CHECK(max_abs_diff(projected.components(), expected) < 1e-14);

  // The (0,0,.,.) spike is annihilated by the antisymmetrization.
  CHECK(max_abs_diff(projected.components(), base.components()) < 1e-12);

  // Re-projection is a fixed point.
  auto twice = project_to_curvature_space(projected.components(), 4);
  CHECK(max_abs_diff(projected.components(), twice.components()) < 1e-12);
}

TEST_CASE("projection: random raw arrays land on valid tensors") {
  for (int n = 4; n <= 7; ++n) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      SplitMix64 rng(child_seed(900 + n, seed));
      std::vector<double> raw(static_cast<std::size_t>(n) * n * n * n);
      for (auto& x : raw) x = rng.uniform(-1.0, 1.0);
      auto r = project_to_curvature_space(raw, n);
      CHECK(CurvatureTensor::worst_invariant_residual(r.components(), n) <
            1e-12);
      auto twice = project_to_curvature_space(r.components(), n);
      CHECK(max_abs_diff(r.components(), twice.components()) < 1e-12);
    }
  }
}

TEST_CASE("projection errors") {
  std::vector<double> raw(16, 0.0);
  CHECK_THROWS_AS(project_to_curvature_space(raw, 1), InvalidDimension);
  std::vector<double> nan_raw(256, 0.0);
  nan_raw[3] = std::nan("");
  CHECK_THROWS_AS(project_to_curvature_space(nan_raw, 4), InvalidInput);
  std::vector<double> short_raw(255, 0.0);
  CHECK_THROWS_AS(project_to_curvature_space(short_raw, 4), InvalidInput);
}

TEST_CASE("sectional curvature of model tensors") {
  auto r = constant_curvature(4, 2.5);
  auto f = Frame::random(4, 2, 7);
  CHECK(sectional(r, f.vec(0), f.vec(1)) == doctest::Approx(2.5).epsilon(1e-12));

  auto [cp2, j] = fubini_study(2);
  const Frame std4 = Frame::standard(4, 4);
  // holomorphic plane (e1, J e1)
  CHECK(sectional(cp2, std4.vec(0), std4.vec(1)) == doctest::Approx(4.0));
  // J-orthogonal plane (e1, e3)
  CHECK(sectional(cp2, std4.vec(0), std4.vec(2)) == doctest::Approx(1.0));
}

TEST_CASE("sectional rejects non-orthonormal pairs") {
  auto r = constant_curvature(4, 1.0);
  std::vector<double> u = {1.0, 0.0, 0.0, 0.0};
  std::vector<double> v = {0.9, 0.1, 0.0, 0.0};
  CHECK_THROWS_AS(sectional(r, u, v), InvalidFrame);
}

TEST_CASE("sectional is invariant under plane rotations") {
  auto r = random_curvature_tensor(5, 42, 1.0);
  SplitMix64 rng(43);
  for (int rep = 0; rep < 20; ++rep) {
    auto f = Frame::random(5, 2, child_seed(44, rep));
    const double base = sectional(r, f.vec(0), f.vec(1));
    const double th = rng.uniform(0.0, 6.28);
    std::vector<double> u(5), v(5);
    for (int i = 0; i < 5; ++i) {
      u[i] = std::cos(th) * f.vec(0)[i] + std::sin(th) * f.vec(1)[i];
      v[i] = -std::sin(th) * f.vec(0)[i] + std::cos(th) * f.vec(1)[i];
    }
    CHECK(sectional(r, u, v) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("curvature scalars of the round sphere and the sphere-circle product") {
  auto s4 = constant_curvature(4, 1.0);
  auto scal = curvature_scalars(s4);
  CHECK(scal.scalar == doctest::Approx(12.0).epsilon(1e-14));
  CHECK(scal.normalized_scalar == doctest::Approx(1.0).epsilon(1e-14));

  auto prod = sphere_cross_circle(4);
  auto pscal = curvature_scalars(prod);
  // The circle direction is Ricci-flat, exactly.
  CHECK(pscal.min_ricci_eigenvalue() == 0.0);
  CHECK(pscal.ricci[3 * 4 + 3] == 0.0);
}

TEST_CASE("scalar curvature equals twice the sum of basis sectionals") {
  for (int n = 4; n <= 6; ++n) {
    auto r = random_curvature_tensor(n, 100 + n, 1.0);
    auto scal = curvature_scalars(r);
    double acc = 0.0;
    const Frame basis = Frame::standard(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        acc += sectional(r, basis.vec(i), basis.vec(j));
    CHECK(scal.scalar == doctest::Approx(2.0 * acc).epsilon(1e-10));
  }
}

TEST_CASE("CP^2 normalized scalar curvature is 2") {
  auto [cp2, j] = fubini_study(2);
  // Independent route: S = 2 * sum of basis sectionals.
  double acc = 0.0;
  const Frame basis = Frame::standard(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int jj = i + 1; jj < 4; ++jj)
      acc += sectional(cp2, basis.vec(i), basis.vec(jj));
  CHECK(2.0 * acc == doctest::Approx(24.0).epsilon(1e-12));
  CHECK(curvature_scalars(cp2).normalized_scalar ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("a_sum, b_sum, isotropic on model frames") {
  const Frame std4 = Frame::standard(4, 4);

  auto sphere = constant_curvature(4, 1.0);
  CHECK(a_sum(sphere, std4) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(b_sum(sphere, std4) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(isotropic_quantity(sphere, std4) == doctest::Approx(4.0).epsilon(1e-14));

  auto [cp2, j] = fubini_study(2);
  // {e1, Je1, e3, Je3} is the standard frame under the fixed J convention.
  CHECK(a_sum(cp2, std4) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(b_sum(cp2, std4) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(cp2.at(0, 1, 2, 3) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(isotropic_quantity(cp2, std4) == doctest::Approx(0.0).epsilon(1e-14));

  auto prod = sphere_cross_circle(4);
  CHECK(a_sum(prod, std4) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(b_sum(prod, std4) == doctest::Approx(1.0).epsilon(1e-14));

  auto zero = flat(4);
  CHECK(b_sum(zero, std4) == 0.0);
}

TEST_CASE("isotropic quantity under the e3/e4 swap") {
  auto r = random_curvature_tensor(5, 77, 1.0);
  auto f = Frame::random(5, 4, 78);
  std::vector<double> swapped(f.rows().begin(), f.rows().end());
  for (int i = 0; i < 5; ++i)
    std::swap(swapped[2 * 5 + i], swapped[3 * 5 + i]);
  Frame g(5, 4, swapped);
  const double a = a_sum(r, f);
  const double t = (a - isotropic_quantity(r, f)) / 2.0;  // R_1234 on f
  CHECK(isotropic_quantity(r, g) == doctest::Approx(a + 2.0 * t).epsilon(1e-10));
}

TEST_CASE("frame functionals are invariant under their symmetry group") {
  auto r = random_curvature_tensor(6, 5, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    auto f = Frame::random(6, 4, child_seed(6, rep));
    const double a0 = a_sum(r, f);
    const double b0 = b_sum(r, f);

    auto swap_rows = [&](int x, int y) {
      std::vector<double> rows(f.rows().begin(), f.rows().end());
      for (int i = 0; i < 6; ++i) std::swap(rows[x * 6 + i], rows[y * 6 + i]);
      return Frame(6, 4, rows);
    };
    // e1 <-> e2
    Frame f12 = swap_rows(0, 1);
    CHECK(a_sum(r, f12) == doctest::Approx(a0).epsilon(1e-10));
    CHECK(b_sum(r, f12) == doctest::Approx(b0).epsilon(1e-10));
    // e3 <-> e4
    Frame f34 = swap_rows(2, 3);
    CHECK(a_sum(r, f34) == doctest::Approx(a0).epsilon(1e-10));
    CHECK(b_sum(r, f34) == doctest::Approx(b0).epsilon(1e-10));
    // {e1,e2} <-> {e3,e4}
    std::vector<double> rows(f.rows().begin(), f.rows().end());
    for (int i = 0; i < 6; ++i) {
      std::swap(rows[0 * 6 + i], rows[2 * 6 + i]);
      std::swap(rows[1 * 6 + i], rows[3 * 6 + i]);
    }
    Frame fp(6, 4, rows);
    CHECK(a_sum(r, fp) == doctest::Approx(a0).epsilon(1e-10));
    CHECK(b_sum(r, fp) == doctest::Approx(b0).epsilon(1e-10));
  }
}

TEST_CASE("direct_sum block structure") {
  auto s3 = constant_curvature(3, 1.0);
  auto line = flat(1);
  auto prod = direct_sum(s3, line);
  CHECK(prod.dim() == 4);
  // Any component touching the circle block vanishes exactly.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        CHECK(prod.at(i, j, k, 3) == 0.0);
        CHECK(prod.at(i, 3, j, k) == 0.0);
      }
  // Sphere block reproduces the factor exactly.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          CHECK(prod.at(i, j, k, l) == s3.at(i, j, k, l));

  auto flat4 = direct_sum(flat(2), flat(2));
  CHECK(flat4.max_abs() == 0.0);

  // S^2 x S^2 on the block-split frame: mixed planes are flat.
  auto twospheres = direct_sum(constant_curvature(2, 1.0),
                               constant_curvature(2, 1.0));
  const Frame std4 = Frame::standard(4, 4);
  CHECK(a_sum(twospheres, std4) == 0.0);
  CHECK(b_sum(twospheres, std4) == 2.0);
}

TEST_CASE("scale is componentwise and functionals are linear in it") {
  auto r = random_curvature_tensor(4, 11, 1.0);
  auto r4 = scale(r, 4.0);
  for (std::size_t i = 0; i < r.components().size(); ++i)
    CHECK(r4.components()[i] == 4.0 * r.components()[i]);
  CHECK(scale(r, 0.0).max_abs() == 0.0);

  auto f = Frame::random(4, 4, 12);
  CHECK(a_sum(scale(r, -1.0), f) == doctest::Approx(-a_sum(r, f)).epsilon(1e-12));

  auto s4 = scale(constant_curvature(4, 1.0), 4.0);
  auto expected = constant_curvature(4, 4.0);
  CHECK(max_abs_diff(s4.components(), expected.components()) == 0.0);
}

TEST_CASE("random_curvature_tensor is deterministic and valid") {
  auto a = random_curvature_tensor(4, 123, 1.0);
  auto b = random_curvature_tensor(4, 123, 1.0);
  CHECK(max_abs_diff(a.components(), b.components()) == 0.0);
  auto c = random_curvature_tensor(4, 124, 1.0);
  CHECK(max_abs_diff(a.components(), c.components()) > 0.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto r = random_curvature_tensor(5, s, 2.0);
    CHECK(CurvatureTensor::worst_invariant_residual(r.components(), 5) < 1e-12);
  }
  CHECK_THROWS_AS(random_curvature_tensor(1, 0, 1.0), InvalidDimension);
}

TEST_CASE("random tensors have scalar curvature centered at zero") {
  // The projection is linear and the entry distribution is symmetric, so
  // the scalar curvature has mean zero; check to three standard errors.
  const int trials = 1000;
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto r = random_curvature_tensor(4, 5000 + t, 1.0);
    const double s = curvature_scalars(r).scalar;
    sum += s;
    sumsq += s * s;
  }
  const double mean = sum / trials;
  const double var = (sumsq - trials * mean * mean) / (trials - 1);
  const double se = std::sqrt(var / trials);
  CHECK(std::abs(mean) <= 3.0 * se);
}

TEST_CASE("frame construction repairs drift and rejects garbage") {
  // Slightly perturbed orthonormal rows are repaired...
  auto f = Frame::random(5, 4, 9);
  std::vector<double> rows(f.rows().begin(), f.rows().end());
  rows[3] += 5e-7;
  Frame repaired(5, 4, rows);
  CHECK(repaired.max_orthonormality_defect() < 1e-10);
  // ...but a 1e-3 defect is user error.
  rows[3] += 1e-3;
  CHECK_THROWS_AS(Frame(5, 4, rows), InvalidFrame);
}

TEST_CASE("dimension mismatches are reported") {
  auto r = random_curvature_tensor(5, 3, 1.0);
  auto f = Frame::random(6, 4, 4);
  CHECK_THROWS_AS(a_sum(r, f), DimensionMismatch);
  auto two = Frame::random(5, 2, 5);
  CHECK_THROWS_AS(a_sum(r, two), InvalidFrame);
}
