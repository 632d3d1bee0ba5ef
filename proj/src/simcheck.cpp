#include "roaforge/simcheck.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "roaforge/sampling.hpp"

namespace roaforge::simcheck {

namespace {

int worker_count() {
  if (const char* env = std::getenv("ROA_FORGE_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

class Rk4Stepper {
 public:
  Rk4Stepper(const polyalg::PolyMap& f, double dt)
      : f_(f), dt_(dt), n_(f.dim), k1_(n_), k2_(n_), k3_(n_), k4_(n_), tmp_(n_) {}

  void step(std::vector<double>& x) {
    std::span<const double> xs(x.data(), n_);
    f_.eval_into(xs, k1_);
    axpy(x, k1_, 0.5 * dt_);
    f_.eval_into(tmp_span(), k2_);
    axpy(x, k2_, 0.5 * dt_);
    f_.eval_into(tmp_span(), k3_);
    axpy(x, k3_, dt_);
    f_.eval_into(tmp_span(), k4_);
    for (int i = 0; i < n_; ++i)
      x[i] += dt_ / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

 private:
  void axpy(const std::vector<double>& x, const std::vector<double>& k, double a) {
    for (int i = 0; i < n_; ++i) tmp_[i] = x[i] + a * k[i];
  }
  std::span<const double> tmp_span() const { return {tmp_.data(), static_cast<size_t>(n_)}; }

  const polyalg::PolyMap& f_;
  double dt_;
  int n_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

bool finite(const std::vector<double>& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

Trajectory integrate(const polyalg::PolyMap& f, const Eigen::VectorXd& x0,
                     const IntegrateOptions& opts) {
  if (!(opts.dt > 0.0) || !(opts.horizon > opts.dt))
    throw std::invalid_argument("integrate: need dt > 0 and horizon > dt");
  if (x0.size() != f.dim) throw std::invalid_argument("integrate: dimension mismatch");

  Trajectory traj;
  std::vector<double> x(x0.data(), x0.data() + x0.size());
  Rk4Stepper stepper(f, opts.dt);
  const long nsteps = static_cast<long>(std::ceil(opts.horizon / opts.dt));

  auto record = [&](long step) {
    traj.times.push_back(step * opts.dt);
    traj.states.push_back(Eigen::Map<const Eigen::VectorXd>(x.data(), f.dim));
  };
  record(0);

  traj.exit_reason = ExitReason::horizon;
  for (long s = 1; s <= nsteps; ++s) {
    stepper.step(x);
    if (!finite(x) || norm2(x) >= opts.escape_radius) {
      traj.exit_reason = ExitReason::diverged;
      record(s);
      return traj;
    }
    if (s % opts.record_stride == 0) record(s);
    if (norm2(x) <= opts.conv_radius) {
      traj.converged = true;
      traj.exit_reason = ExitReason::converged;
      if (s % opts.record_stride != 0) record(s);
      return traj;
    }
    if (opts.domain != nullptr &&
        !opts.domain->contains(Eigen::Map<const Eigen::VectorXd>(x.data(), f.dim))) {
      traj.exit_reason = ExitReason::left_domain;
      if (s % opts.record_stride != 0) record(s);
      return traj;
    }
  }
  if (traj.times.back() < nsteps * opts.dt) record(nsteps);
  return traj;
}

ValidationReport validate_region(const std::function<bool(const Eigen::VectorXd&)>& member,
                                 const polyalg::BoxDomain& sample_box,
                                 const polyalg::PolyMap& f, int n_samples, std::uint64_t seed,
                                 const IntegrateOptions& opts) {
  // Quasi-random rejection sampling; the seed offsets the Halton index so
  // different seeds draw different deterministic point sets.
  sampling::Halton seq(sample_box.dim(), 1 + seed * 1000003);
  std::vector<Eigen::VectorXd> points;
  points.reserve(n_samples);
  long attempts = 0;
  const long max_attempts = 10000L * std::max(1, n_samples);
  while (static_cast<int>(points.size()) < n_samples && attempts < max_attempts) {
    ++attempts;
    Eigen::VectorXd x = seq.next_in(sample_box);
    if (member(x)) points.push_back(std::move(x));
  }

  ValidationReport rep;
  rep.tested = static_cast<int>(points.size());
  std::vector<uint8_t> ok(points.size(), 0);

  IntegrateOptions lopts = opts;
  lopts.record_stride = 1 << 30;  // classification only, keep memory flat
  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
      ok[i] = integrate(f, points[i], lopts).converged ? 1 : 0;
  };

  const int threads = std::min<int>(worker_count(), std::max<size_t>(points.size(), 1));
  if (threads <= 1 || points.size() < 2) {
    work(0, points.size());
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (points.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      size_t b = t * chunk, e = std::min(points.size(), b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }

  for (size_t i = 0; i < points.size(); ++i) {
    if (ok[i]) {
      ++rep.converged;
    } else if (rep.worst_point.size() == 0) {
      rep.worst_point = points[i];
    }
  }
  return rep;
}

double lyapunov_decrease_check(const levelset::RoaEstimate& roa, const polyalg::PolyMap& f,
                               int n_samples, std::uint64_t seed,
                               const IntegrateOptions& opts) {
  polyalg::BoxDomain sample_box =
      polyalg::map_box_bounding(roa.box, polyalg::Transform(roa.transform.inverse()));
  sampling::Halton seq(sample_box.dim(), 1 + seed * 1000003);

  double max_delta = -std::numeric_limits<double>::infinity();
  int found = 0;
  long attempts = 0;
  Rk4Stepper stepper(f, opts.dt);
  const long nsteps = static_cast<long>(std::ceil(opts.horizon / opts.dt));

  while (found < n_samples && attempts < 10000L * n_samples) {
    ++attempts;
    Eigen::VectorXd x0 = seq.next_in(sample_box);
    if (!levelset::contains(roa, x0)) continue;
    ++found;
    std::vector<double> x(x0.data(), x0.data() + x0.size());
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), f.dim);
    double v_prev = levelset::v_eval(roa.P_list, roa.transform.matrix() * xv);
    for (long s = 0; s < nsteps; ++s) {
      stepper.step(x);
      if (!finite(x)) break;
      if (!levelset::contains(roa, xv)) break;
      double v = levelset::v_eval(roa.P_list, roa.transform.matrix() * xv);
      max_delta = std::max(max_delta, v - v_prev);
      v_prev = v;
      if (norm2(x) <= opts.conv_radius) break;
    }
  }
  return found == 0 ? 0.0 : max_delta;
}

}  // namespace roaforge::simcheck
