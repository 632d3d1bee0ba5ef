#include "roaforge/levelset.hpp"

#include <cmath>
#include <stdexcept>

#include "roaforge/lmikit.hpp"
#include "roaforge/sampling.hpp"

namespace roaforge::levelset {

namespace {

// Scalar quadratic q(t) = a t^2 + b t + c, the restriction of x'Px to a
// facet parametrization x(t) = base + t * dir.
struct FacetQuad {
  double a, b, c;
  double eval(double t) const { return (a * t + b) * t + c; }
};

double max_over_pieces(const std::vector<FacetQuad>& qs, double t) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& q : qs) m = std::max(m, q.eval(t));
  return m;
}

double facet_min_of_max(const std::vector<FacetQuad>& qs, double t0, double t1) {
  std::vector<double> cands = {t0, t1};
  for (const auto& q : qs) {
    // Interior unconstrained minimizer, only meaningful for convex pieces.
    if (q.a > 0.0) {
      double tm = -q.b / (2.0 * q.a);
      if (t0 < tm && tm < t1) cands.push_back(tm);
    }
  }
  for (size_t i = 0; i < qs.size(); ++i) {
    for (size_t j = i + 1; j < qs.size(); ++j) {
      double a = qs[i].a - qs[j].a, b = qs[i].b - qs[j].b, c = qs[i].c - qs[j].c;
      if (std::abs(a) < 1e-14) {
        if (std::abs(b) > 1e-14) {
          double tm = -c / b;
          if (t0 < tm && tm < t1) cands.push_back(tm);
        }
      } else {
        double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
          double s = std::sqrt(disc);
          for (double tm : {(-b + s) / (2.0 * a), (-b - s) / (2.0 * a)})
            if (t0 < tm && tm < t1) cands.push_back(tm);
        }
      }
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (double t : cands) best = std::min(best, max_over_pieces(qs, t));
  return best;
}

double exact_level_2d(const std::vector<Eigen::MatrixXd>& P_list,
                      const polyalg::BoxDomain& box) {
  struct Facet {
    Eigen::Vector2d base, dir;
    double t0, t1;
  };
  const double xl = box.lower[0], xu = box.upper[0];
  const double yl = box.lower[1], yu = box.upper[1];
  const std::vector<Facet> facets = {
      {{xu, 0.0}, {0.0, 1.0}, yl, yu},
      {{xl, 0.0}, {0.0, 1.0}, yl, yu},
      {{0.0, yu}, {1.0, 0.0}, xl, xu},
      {{0.0, yl}, {1.0, 0.0}, xl, xu},
  };
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : facets) {
    std::vector<FacetQuad> qs;
    qs.reserve(P_list.size());
    for (const auto& P : P_list)
      qs.push_back({f.dir.dot(P * f.dir), 2.0 * f.base.dot(P * f.dir), f.base.dot(P * f.base)});
    best = std::min(best, facet_min_of_max(qs, f.t0, f.t1));
  }
  return best;
}

double sampled_level(const std::vector<Eigen::MatrixXd>& P_list,
                     const polyalg::BoxDomain& box, int samples) {
  const int n = box.dim();
  // Quasi-random points on the boundary: sample the box, then push one
  // coordinate (cycled per sample) to a face.
  sampling::Halton seq(n);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x = seq.next_in(box);
    int axis = s % n;
    x[axis] = (s / n) % 2 == 0 ? box.upper[axis] : box.lower[axis];
    best = std::min(best, v_eval(P_list, x));
  }
  return best;
}

}  // namespace

double v_eval(const std::vector<Eigen::MatrixXd>& P_list, const Eigen::VectorXd& x) {
  if (P_list.empty()) throw std::invalid_argument("v_eval: empty P_list");
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& P : P_list) {
    if (P.rows() != x.size()) throw std::invalid_argument("v_eval: shape mismatch");
    m = std::max(m, x.dot(P * x));
  }
  return m;
}

LevelResult max_level(const std::vector<Eigen::MatrixXd>& P_list,
                      const polyalg::BoxDomain& box, int fallback_samples) {
  if (P_list.empty()) throw std::invalid_argument("max_level: empty P_list");
  for (const auto& P : P_list) {
    lmikit::require_symmetric(P, "max_level P");
    if (P.rows() != box.dim()) throw std::invalid_argument("max_level: shape mismatch");
  }
  // BoxDomain already guarantees the origin is strictly inside.
  if (box.dim() == 2) return {exact_level_2d(P_list, box), true};
  return {sampled_level(P_list, box, fallback_samples), false};
}

bool contains(const RoaEstimate& roa, const Eigen::VectorXd& x) {
  Eigen::VectorXd xb = roa.transform.matrix() * x;
  return roa.box.contains(xb) && v_eval(roa.P_list, xb) <= roa.k;
}

std::vector<Eigen::Vector2d> boundary_polyline(const RoaEstimate& roa, int samples) {
  if (roa.box.dim() != 2)
    throw std::invalid_argument("boundary_polyline: only n=2 supported");
  std::vector<Eigen::Vector2d> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double ang = 2.0 * M_PI * i / samples;
    Eigen::Vector2d u(std::cos(ang), std::sin(ang));
    // V(T(s*u)) is increasing in s for positive definite pieces; bracket the
    // crossing by doubling, then bisect to 1e-10 in the ray parameter.
    auto val = [&](double s) { return v_eval(roa.P_list, roa.transform.matrix() * (s * u)); };
    double hi = 1.0;
    while (val(hi) < roa.k && hi < 1e12) hi *= 2.0;
    double lo = 0.0;
    while (hi - lo > 1e-10) {
      double mid = 0.5 * (lo + hi);
      (val(mid) < roa.k ? lo : hi) = mid;
    }
    out.emplace_back(0.5 * (lo + hi) * u);
  }
  return out;
}

}  // namespace roaforge::levelset
