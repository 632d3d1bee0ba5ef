#include "roaforge/sampling.hpp"

#include <stdexcept>

namespace roaforge::sampling {

namespace {
constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                           31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}
}  // namespace

Halton::Halton(int dim, std::uint64_t start_index) : dim_(dim), index_(start_index) {
  if (dim < 1 || dim > 20) throw std::invalid_argument("Halton: dimension out of range");
}

Eigen::VectorXd Halton::next() {
  Eigen::VectorXd p(dim_);
  for (int d = 0; d < dim_; ++d) p[d] = radical_inverse(index_, kPrimes[d]);
  ++index_;
  return p;
}

Eigen::VectorXd Halton::next_in(const polyalg::BoxDomain& box) {
  Eigen::VectorXd u = next();
  return box.lower.array() + u.array() * (box.upper - box.lower).array();
}

}  // namespace roaforge::sampling
