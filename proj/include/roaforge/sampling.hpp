#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "roaforge/polyalg.hpp"

namespace roaforge::sampling {

/// Deterministic low-discrepancy sequence (Halton, prime bases per axis).
class Halton {
 public:
  explicit Halton(int dim, std::uint64_t start_index = 1);

  Eigen::VectorXd next();                             // point in [0,1)^dim
  Eigen::VectorXd next_in(const polyalg::BoxDomain& box);

 private:
  int dim_;
  std::uint64_t index_;
};

}  // namespace roaforge::sampling
