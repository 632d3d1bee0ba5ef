#include "roaforge/tsmodel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "roaforge/sampling.hpp"

namespace roaforge::tsmodel {

namespace {

constexpr double kResidualTol = 1e-9;
constexpr double kMinSectorWidth = 1e-12;
constexpr int kGridPerAxis = 64;

struct Interval {
  double lo, hi;
};

Interval pow_interval(double lo, double hi, int e) {
  if (e == 0) return {1.0, 1.0};
  double a = std::pow(lo, e), b = std::pow(hi, e);
  Interval r{std::min(a, b), std::max(a, b)};
  if (lo < 0.0 && hi > 0.0) {
    // x=0 is an interior extreme of x^e.
    r.lo = std::min(r.lo, 0.0);
    r.hi = std::max(r.hi, 0.0);
  }
  return r;
}

Interval mul(Interval a, Interval b) {
  double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]})};
}

Interval monomial_interval(const polyalg::Monomial& m, const Eigen::VectorXd& lo,
                           const Eigen::VectorXd& hi) {
  Interval r{m.coeff, m.coeff};
  for (int i = 0; i < lo.size(); ++i)
    if (m.powers[i] > 0) r = mul(r, pow_interval(lo[i], hi[i], m.powers[i]));
  return r;
}

// Interval bound of the polynomial over one cell.
Interval poly_interval(const polyalg::Poly& z, const Eigen::VectorXd& lo,
                       const Eigen::VectorXd& hi) {
  Interval acc{0.0, 0.0};
  for (const auto& m : z.terms()) {
    Interval t = monomial_interval(m, lo, hi);
    acc.lo += t.lo;
    acc.hi += t.hi;
  }
  return acc;
}

void grid_bounds_rec(const polyalg::Poly& z, const polyalg::BoxDomain& box, int axis,
                     Eigen::VectorXd& lo, Eigen::VectorXd& hi, Interval& out) {
  if (axis == box.dim()) {
    Interval t = poly_interval(z, lo, hi);
    out.lo = std::min(out.lo, t.lo);
    out.hi = std::max(out.hi, t.hi);
    return;
  }
  double step = (box.upper[axis] - box.lower[axis]) / kGridPerAxis;
  for (int i = 0; i < kGridPerAxis; ++i) {
    lo[axis] = box.lower[axis] + i * step;
    hi[axis] = box.lower[axis] + (i + 1) * step;
    grid_bounds_rec(z, box, axis + 1, lo, hi, out);
  }
}

}  // namespace

Eigen::MatrixXd Factorization::eval(const Eigen::VectorXd& z) const {
  Eigen::MatrixXd A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = entries[i][j].eval(z);
  return A;
}

Eigen::VectorXd TSModel::premise_values(const Eigen::VectorXd& x) const {
  Eigen::VectorXd z(p());
  for (int k = 0; k < p(); ++k) z[k] = premises[k].definition.eval(x);
  return z;
}

PremiseBounds bound_premise(const polyalg::Poly& z, const polyalg::BoxDomain& box) {
  if (z.dim() != box.dim()) throw std::invalid_argument("bound_premise dimension mismatch");
  PremiseBounds out{};
  if (z.terms().size() == 1) {
    // Single monomial: per-axis extreme enumeration is exact.
    Interval r = monomial_interval(z.terms()[0], box.lower, box.upper);
    out = {r.lo, r.hi, true};
  } else {
    Interval acc{std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity()};
    Eigen::VectorXd lo = box.lower, hi = box.upper;
    grid_bounds_rec(z, box, 0, lo, hi, acc);
    out = {acc.lo, acc.hi, false};
  }
  if (out.z_max - out.z_min <= kMinSectorWidth)
    throw std::invalid_argument("bound_premise: constant premise (zero sector width)");
  return out;
}

TSModel build_ts(const polyalg::PolyMap& f, const std::vector<polyalg::Poly>& premise_defs,
                 const Factorization& fact, const polyalg::BoxDomain& box) {
  const int n = f.dim;
  const int p = static_cast<int>(premise_defs.size());
  if (fact.dim != n || static_cast<int>(fact.entries.size()) != n)
    throw std::invalid_argument("build_ts: factorization shape mismatch");
  for (const auto& row : fact.entries) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("build_ts: factorization shape mismatch");
    for (const auto& e : row)
      if (e.coeffs.size() != p)
        throw std::invalid_argument("build_ts: affine entry premise count mismatch");
  }

  TSModel model{.premises = {}, .vertices = {}, .factorization = fact, .box = box};
  model.premises.reserve(p);
  for (const auto& def : premise_defs) {
    PremiseBounds b = bound_premise(def, box);
    model.premises.push_back(PremiseVar{def, b.z_min, b.z_max});
  }

  // Residual check of the rewrite f(x) = A(z(x)) x before trusting it.
  sampling::Halton seq(n);
  double worst = 0.0;
  Eigen::VectorXd worst_x;
  for (int s = 0; s < 1000; ++s) {
    Eigen::VectorXd x = seq.next_in(box);
    Eigen::VectorXd z(p);
    for (int k = 0; k < p; ++k) z[k] = premise_defs[k].eval(x);
    Eigen::VectorXd fx = f.eval(x);
    double res = (fact.eval(z) * x - fx).norm() / (1.0 + fx.norm());
    if (res > worst) {
      worst = res;
      worst_x = x;
    }
  }
  if (worst > kResidualTol) {
    std::ostringstream os;
    os << "build_ts: factorization residual " << worst << " exceeds tolerance at x = [";
    for (int i = 0; i < worst_x.size(); ++i) os << (i ? ", " : "") << worst_x[i];
    os << "]";
    throw std::invalid_argument(os.str());
  }

  const size_t count = size_t{1} << p;
  model.vertices.reserve(count);
  for (size_t v = 0; v < count; ++v) {
    Eigen::VectorXd z(p);
    for (int k = 0; k < p; ++k) {
      bool upper = (v >> (p - 1 - k)) & 1;
      z[k] = upper ? model.premises[k].z_max : model.premises[k].z_min;
    }
    model.vertices.push_back(fact.eval(z));
  }
  return model;
}

WeightResult weights(const TSModel& model, const Eigen::VectorXd& x) {
  const int p = model.p();
  WeightResult out;
  out.in_box = model.box.contains(x);
  Eigen::VectorXd z = model.premise_values(x);
  // Pair weights per premise; index 0 = z_min corner.
  std::vector<std::array<double, 2>> pair(p);
  for (int k = 0; k < p; ++k) {
    const auto& pr = model.premises[k];
    double w_min = (pr.z_max - z[k]) / pr.width();
    pair[k] = {w_min, 1.0 - w_min};
  }
  const size_t count = size_t{1} << p;
  out.w.resize(static_cast<int>(count));
  for (size_t v = 0; v < count; ++v) {
    double w = 1.0;
    for (int k = 0; k < p; ++k) w *= pair[k][(v >> (p - 1 - k)) & 1];
    out.w[static_cast<int>(v)] = w;
  }
  return out;
}

double reconstruct_residual(const TSModel& model, const polyalg::PolyMap& f, int samples) {
  sampling::Halton seq(model.dim());
  double worst = 0.0;
  const int n = model.dim();
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x = seq.next_in(model.box);
    WeightResult wr = weights(model, x);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < wr.w.size(); ++i) acc += wr.w[i] * (model.vertices[i] * x);
    Eigen::VectorXd fx = f.eval(x);
    worst = std::max(worst, (acc - fx).norm() / (1.0 + fx.norm()));
  }
  return worst;
}

}  // namespace roaforge::tsmodel
