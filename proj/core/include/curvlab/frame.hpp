#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "curvlab/errors.hpp"

namespace curvlab {

// Orthonormal k-frame in R^n, stored as k rows of length n.
//
// Construction re-orthonormalizes (Gram-Schmidt) inputs that are within
// kAcceptTol of orthonormal and rejects anything farther off: optimizer
// drift is repaired, user error is not.
class Frame {
public:
  // Empty sentinel used in result structs before a frame is assigned.
  Frame() : dim_(0), count_(0) {}
  bool empty() const { return count_ == 0; }

  Frame(int dim, int count, std::vector<double> rows);

  // First `count` standard basis vectors.
  static Frame standard(int dim, int count);

  // Orthonormalized i.i.d. standard normal rows, deterministic in seed.
  static Frame random(int dim, int count, std::uint64_t seed);

  int dim() const { return dim_; }
  int count() const { return count_; }
  std::span<const double> vec(int a) const {
    return {rows_.data() + static_cast<std::size_t>(a) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  std::span<const double> rows() const { return rows_; }

  // max_{a<=b} |<v_a, v_b> - delta_ab|
  double max_orthonormality_defect() const;

  static constexpr double kAcceptTol = 1e-6;

private:
  int dim_;
  int count_;
  std::vector<double> rows_;
};

// A Frame with count() == 4; enforced at the operations that consume it.
using Frame4 = Frame;

}  // namespace curvlab
