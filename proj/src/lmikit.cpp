#include "roaforge/lmikit.hpp"

#include <cmath>
#include <stdexcept>

namespace roaforge::lmikit {

namespace {

double min_eig(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd herm(const Eigen::MatrixXd& M) { return M + M.transpose(); }

// Symmetric basis matrix for upper-triangular entry index j of an n x n
// unknown (unit diagonal entries, symmetrized off-diagonal entries).
struct SymBasis {
  int n;
  std::vector<std::pair<int, int>> idx;

  explicit SymBasis(int n_) : n(n_) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) idx.emplace_back(i, j);
  }
  int count() const { return static_cast<int>(idx.size()); }
  Eigen::MatrixXd matrix(int j) const {
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
    auto [a, b] = idx[j];
    E(a, b) = 1.0;
    E(b, a) = 1.0;
    return E;
  }
  Eigen::MatrixXd assemble(const Eigen::VectorXd& y, int offset = 0) const {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < count(); ++j) {
      auto [a, b] = idx[j];
      P(a, b) = y[offset + j];
      P(b, a) = y[offset + j];
    }
    return P;
  }
  // Coefficient vector of trace(P) over the y entries.
  Eigen::VectorXd trace_coeffs() const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(count());
    for (int j = 0; j < count(); ++j)
      if (idx[j].first == idx[j].second) c[j] = 1.0;
    return c;
  }
};

double min_constraint_margin(const std::vector<LmiConstraint>& cons, const Eigen::VectorXd& y) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : cons) {
    Eigen::MatrixXd G = c.F0;
    for (size_t j = 0; j < c.Fj.size(); ++j) G += y[static_cast<int>(j)] * c.Fj[j];
    m = std::min(m, min_eig(G));
  }
  return m;
}

// Smoothed softmin of all constraint eigenvalues and its gradient:
// phi_mu(y) = -mu * log sum_{k,i} exp(-lambda_i(G_k(y)) / mu).
double phi_and_grad(const std::vector<LmiConstraint>& cons, const Eigen::VectorXd& y,
                    double mu, Eigen::VectorXd* grad) {
  const int d = static_cast<int>(y.size());
  struct Eig {
    Eigen::VectorXd vals;
    Eigen::MatrixXd vecs;
  };
  std::vector<Eig> eigs;
  eigs.reserve(cons.size());
  double smax = -std::numeric_limits<double>::infinity();
  for (const auto& c : cons) {
    Eigen::MatrixXd G = c.F0;
    for (int j = 0; j < d; ++j) G += y[j] * c.Fj[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    eigs.push_back({es.eigenvalues(), es.eigenvectors()});
    smax = std::max(smax, (-es.eigenvalues().array() / mu).maxCoeff());
  }
  double Z = 0.0;
  for (const auto& e : eigs) Z += ((-e.vals.array() / mu) - smax).exp().sum();
  double phi = -mu * (smax + std::log(Z));
  if (grad) {
    grad->setZero(d);
    for (size_t k = 0; k < cons.size(); ++k) {
      const auto& e = eigs[k];
      for (int i = 0; i < e.vals.size(); ++i) {
        double w = std::exp(-e.vals[i] / mu - smax) / Z;
        if (w < 1e-300) continue;
        Eigen::VectorXd v = e.vecs.col(i);
        for (int j = 0; j < d; ++j) (*grad)[j] += w * v.dot(cons[k].Fj[j] * v);
      }
    }
  }
  return phi;
}

const std::vector<double> kDefaultLambdaGrid = {0, 0.01, 0.1, 0.5, 1, 2, 5, 10, 50, 100};

// Compiles the N=2 piecewise feasibility program for fixed (lambda1, lambda2).
// Decision vector: upper triangles of P1 then P2.
std::vector<LmiConstraint> compile_pwq(const LdiSystem& sys, double l1, double l2) {
  const int n = sys.dim();
  SymBasis basis(n);
  const int dn = basis.count();
  const int d = 2 * dn;
  Eigen::MatrixXd Zn = Eigen::MatrixXd::Zero(n, n);

  auto empty_con = [&] {
    LmiConstraint c;
    c.F0 = Zn;
    c.Fj.assign(d, Zn);
    return c;
  };

  std::vector<LmiConstraint> cons;
  // P1 >= tI, P2 >= tI.
  LmiConstraint c1 = empty_con(), c2 = empty_con();
  for (int j = 0; j < dn; ++j) {
    c1.Fj[j] = basis.matrix(j);
    c2.Fj[dn + j] = basis.matrix(j);
  }
  cons.push_back(std::move(c1));
  cons.push_back(std::move(c2));

  for (const auto& A : sys.vertices) {
    // l1 (P2 - P1) - (P1 A + A' P1) >= tI
    LmiConstraint ca = empty_con();
    for (int j = 0; j < dn; ++j) {
      Eigen::MatrixXd B = basis.matrix(j);
      ca.Fj[j] = -l1 * B - herm(B * A);
      ca.Fj[dn + j] = l1 * B;
    }
    cons.push_back(std::move(ca));
    // l2 (P1 - P2) - (P2 A + A' P2) >= tI
    LmiConstraint cb = empty_con();
    for (int j = 0; j < dn; ++j) {
      Eigen::MatrixXd B = basis.matrix(j);
      cb.Fj[j] = l2 * B;
      cb.Fj[dn + j] = -l2 * B - herm(B * A);
    }
    cons.push_back(std::move(cb));
  }
  return cons;
}

}  // namespace

void require_symmetric(const Eigen::MatrixXd& M, const char* what) {
  if (M.rows() != M.cols())
    throw std::invalid_argument(std::string(what) + ": matrix not square");
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument(std::string(what) + ": matrix not symmetric");
}

LdiSystem::LdiSystem(std::vector<Eigen::MatrixXd> verts) : vertices(std::move(verts)) {
  if (vertices.empty()) throw std::invalid_argument("LdiSystem needs at least one vertex");
  const auto n = vertices[0].rows();
  for (const auto& A : vertices)
    if (A.rows() != n || A.cols() != n)
      throw std::invalid_argument("LdiSystem vertices must be square and same size");
}

FeasibilityResult feasibility_core(const std::vector<LmiConstraint>& cons,
                                   const Eigen::VectorXd& eq_coeffs, double eq_rhs,
                                   const CoreOptions& opts) {
  FeasibilityResult out;
  if (cons.empty()) throw std::invalid_argument("feasibility_core: no constraints");
  const int d = static_cast<int>(cons[0].Fj.size());
  for (const auto& c : cons)
    if (static_cast<int>(c.Fj.size()) != d)
      throw std::invalid_argument("feasibility_core: inconsistent decision dimension");

  // Start on the normalization hyperplane; ascend the projected gradient of
  // the smoothed margin, tightening the smoothing parameter geometrically.
  Eigen::VectorXd y = eq_rhs * eq_coeffs / eq_coeffs.squaredNorm();
  const Eigen::VectorXd cn = eq_coeffs / eq_coeffs.norm();

  double scale = 1.0 + std::max(1.0, std::abs(min_constraint_margin(cons, y)));
  int total_it = 0;
  Eigen::VectorXd grad(d), gp(d);
  for (double mu_rel : {0.5, 0.1, 0.02, 0.004, 8e-4, 1.6e-4}) {
    const double mu = scale * mu_rel;
    double step = 1.0;
    double phi = phi_and_grad(cons, y, mu, &grad);
    for (int it = 0; it < opts.max_iterations / 6 && total_it < opts.max_iterations; ++it) {
      ++total_it;
      gp = grad - cn * cn.dot(grad);
      double gn2 = gp.squaredNorm();
      if (gn2 < 1e-24) break;
      bool moved = false;
      while (step > 1e-14) {
        Eigen::VectorXd y2 = y + step * gp;
        double phi2 = phi_and_grad(cons, y2, mu, nullptr);
        if (phi2 > phi + 1e-4 * step * gn2) {
          y = std::move(y2);
          phi = phi_and_grad(cons, y, mu, &grad);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      step *= 2.0;
    }
  }

  out.y = y;
  out.margin = min_constraint_margin(cons, y);
  out.iterations = total_it;
  out.found = out.margin > opts.accept_margin;
  if (!out.found) {
    out.diagnostics = total_it >= opts.max_iterations
                          ? "iteration cap exceeded before reaching acceptance margin"
                          : "no certificate found (best margin " + std::to_string(out.margin) + ")";
  }
  return out;
}

std::optional<Eigen::MatrixXd> solve_quadratic_lti(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("solve_quadratic_lti: non-square A");
  return solve_quadratic_ldi(LdiSystem({A}));
}

std::optional<Eigen::MatrixXd> solve_quadratic_ldi(const LdiSystem& sys) {
  const int n = sys.dim();
  SymBasis basis(n);
  const int dn = basis.count();
  Eigen::MatrixXd Zn = Eigen::MatrixXd::Zero(n, n);

  std::vector<LmiConstraint> cons;
  LmiConstraint cp;
  cp.F0 = Zn;
  cp.Fj.reserve(dn);
  for (int j = 0; j < dn; ++j) cp.Fj.push_back(basis.matrix(j));
  cons.push_back(std::move(cp));
  for (const auto& A : sys.vertices) {
    LmiConstraint c;
    c.F0 = Zn;
    c.Fj.reserve(dn);
    for (int j = 0; j < dn; ++j) c.Fj.push_back(-herm(basis.matrix(j) * A));
    cons.push_back(std::move(c));
  }

  FeasibilityResult r = feasibility_core(cons, basis.trace_coeffs(), static_cast<double>(n));
  if (!r.found) return std::nullopt;
  Eigen::MatrixXd P = basis.assemble(r.y);

  // Solver output is never trusted directly.
  PwqCertificate cert{{P}, 0.0, 0.0, 0.0};
  MarginReport rep = verify_certificate(cert, sys, 1e-9);
  if (!rep.accepted) return std::nullopt;
  return P;
}

std::optional<PwqCertificate> solve_pwq(const LdiSystem& sys,
                                        const std::vector<double>& lambda_grid) {
  const std::vector<double>& grid = lambda_grid.empty() ? kDefaultLambdaGrid : lambda_grid;
  for (double l : grid)
    if (l < 0.0) throw std::invalid_argument("solve_pwq: negative lambda in grid");
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());

  const int n = sys.dim();
  SymBasis basis(n);
  const int dn = basis.count();
  Eigen::VectorXd eq = Eigen::VectorXd::Zero(2 * dn);
  eq.head(dn) = basis.trace_coeffs();

  for (double l1 : sorted) {
    for (double l2 : sorted) {
      auto cons = compile_pwq(sys, l1, l2);
      FeasibilityResult r = feasibility_core(cons, eq, static_cast<double>(n));
      if (!r.found) continue;
      PwqCertificate cert;
      cert.P_list = {basis.assemble(r.y, 0), basis.assemble(r.y, dn)};
      cert.lambda1 = l1;
      cert.lambda2 = l2;
      MarginReport rep = verify_certificate(cert, sys, 1e-9);
      if (!rep.accepted) continue;
      cert.margin = rep.margin;
      return cert;
    }
  }
  return std::nullopt;  // infeasible at this grid, not proven infeasible
}

MarginReport verify_certificate(const PwqCertificate& cert, const LdiSystem& sys, double tol) {
  MarginReport rep;
  if (cert.P_list.empty() || cert.P_list.size() > 2)
    throw std::invalid_argument("verify_certificate: P_list must hold 1 or 2 matrices");
  for (const auto& P : cert.P_list) {
    require_symmetric(P, "verify_certificate P");
    if (P.rows() != sys.dim())
      throw std::invalid_argument("verify_certificate: shape mismatch with system");
    rep.constraint_margins.push_back(min_eig(P));
  }
  const Eigen::MatrixXd& P1 = cert.P_list.front();
  const Eigen::MatrixXd& P2 = cert.P_list.back();
  for (const auto& A : sys.vertices) {
    rep.constraint_margins.push_back(
        min_eig(cert.lambda1 * (P2 - P1) - herm(P1 * A)));
    if (cert.P_list.size() == 2)
      rep.constraint_margins.push_back(
          min_eig(cert.lambda2 * (P1 - P2) - herm(P2 * A)));
  }
  rep.margin = *std::min_element(rep.constraint_margins.begin(), rep.constraint_margins.end());
  rep.accepted = rep.margin >= tol;
  return rep;
}

LambdaSearchResult best_lambda_margin(const Eigen::MatrixXd& P1, const Eigen::MatrixXd& P2,
                                      const LdiSystem& sys, double lambda_max) {
  // Each family's margin is a min of concave (in lambda) functions, hence
  // concave; coarse grid seeds a golden-section refinement.
  auto family_margin = [&](bool first, double l) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& A : sys.vertices) {
      Eigen::MatrixXd G = first ? (l * (P2 - P1) - herm(P1 * A)).eval()
                                : (l * (P1 - P2) - herm(P2 * A)).eval();
      m = std::min(m, min_eig(G));
    }
    return m;
  };
  auto maximize = [&](bool first) {
    double best_l = 0.0, best_m = family_margin(first, 0.0);
    for (double l = 1e-3; l <= lambda_max; l *= 2.0) {
      double m = family_margin(first, l);
      if (m > best_m) {
        best_m = m;
        best_l = l;
      }
    }
    double a = best_l / 2.0, b = std::min(lambda_max, std::max(best_l * 2.0, 1e-3));
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int it = 0; it < 120; ++it) {
      if (family_margin(first, c) > family_margin(first, d))
        b = d;
      else
        a = c;
      c = b - g * (b - a);
      d = a + g * (b - a);
    }
    double l = 0.5 * (a + b);
    double m = family_margin(first, l);
    if (best_m > m) return std::pair{best_l, best_m};
    return std::pair{l, m};
  };
  auto [l1, m1] = maximize(true);
  auto [l2, m2] = maximize(false);
  double mP = std::min(min_eig(P1), min_eig(P2));
  return {l1, l2, std::min({m1, m2, mP})};
}

}  // namespace roaforge::lmikit
