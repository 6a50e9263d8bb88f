#include "curvlab/frame.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "curvlab/linalg.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

double orthonormality_defect(std::span<const double> rows, int count, int dim) {
  double worst = 0.0;
  for (int a = 0; a < count; ++a) {
    const double* va = rows.data() + static_cast<std::size_t>(a) * dim;
    for (int b = a; b < count; ++b) {
      const double* vb = rows.data() + static_cast<std::size_t>(b) * dim;
      double g = 0.0;
      for (int i = 0; i < dim; ++i) g += va[i] * vb[i];
      const double target = (a == b) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g - target));
    }
  }
  return worst;
}

}  // namespace

Frame::Frame(int dim, int count, std::vector<double> rows)
    : dim_(dim), count_(count), rows_(std::move(rows)) {
  if (dim_ < 1) throw InvalidDimension("Frame: dimension must be >= 1");
  if (count_ < 1 || count_ > dim_)
    throw InvalidFrame("Frame: need 1 <= count <= dim orthonormal vectors");
  if (rows_.size() != static_cast<std::size_t>(dim_) * count_)
    throw InvalidInput("Frame: row storage has the wrong size");
  for (double x : rows_)
    if (!std::isfinite(x)) throw InvalidInput("Frame: non-finite entry");

  const double defect = orthonormality_defect(rows_, count_, dim_);
  if (defect > kAcceptTol) {
    std::ostringstream msg;
    msg << "Frame: vectors are not orthonormal (worst Gram defect " << defect
        << " > " << kAcceptTol << ")";
    throw InvalidFrame(msg.str());
  }
  if (!gram_schmidt_rows(rows_, count_, dim_))
    throw InvalidFrame("Frame: vectors are numerically dependent");
}

Frame Frame::standard(int dim, int count) {
  std::vector<double> rows(static_cast<std::size_t>(dim) * count, 0.0);
  for (int a = 0; a < count && a < dim; ++a)
    rows[static_cast<std::size_t>(a) * dim + a] = 1.0;
  return Frame(dim, count, std::move(rows));
}

Frame Frame::random(int dim, int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> rows(static_cast<std::size_t>(dim) * count);
  do {
    for (auto& x : rows) x = standard_normal(rng);
  } while (!gram_schmidt_rows(rows, count, dim));
  return Frame(dim, count, std::move(rows));
}

double Frame::max_orthonormality_defect() const {
  return orthonormality_defect(rows_, count_, dim_);
}

}  // namespace curvlab
