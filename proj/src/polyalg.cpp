#include "roaforge/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace roaforge::polyalg {

namespace {

constexpr double kMergeTol = 1e-12;
constexpr int kDegreeCap = 8;

// Graded lexicographic: lower total degree first, then lex on exponents.
bool graded_lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  int da = std::accumulate(a.begin(), a.end(), 0);
  int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da < db;
  return a < b;
}

double pow_int(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

int Monomial::degree() const {
  return std::accumulate(powers.begin(), powers.end(), 0);
}

Poly::Poly(int dim, std::vector<Monomial> terms) : dim_(dim) {
  for (const auto& m : terms) {
    if (static_cast<int>(m.powers.size()) != dim)
      throw std::invalid_argument("Monomial powers length does not match dimension");
    for (int e : m.powers)
      if (e < 0) throw std::invalid_argument("Negative exponent in monomial");
  }
  std::sort(terms.begin(), terms.end(), [](const Monomial& a, const Monomial& b) {
    return graded_lex_less(a.powers, b.powers);
  });
  for (auto& m : terms) {
    if (!terms_.empty() && terms_.back().powers == m.powers)
      terms_.back().coeff += m.coeff;
    else
      terms_.push_back(std::move(m));
  }
  std::erase_if(terms_, [](const Monomial& m) { return std::abs(m.coeff) <= kMergeTol; });
}

Poly Poly::zero(int dim) { return Poly(dim, {}); }

Poly Poly::constant(int dim, double c) {
  return Poly(dim, {Monomial{c, std::vector<int>(dim, 0)}});
}

Poly Poly::variable(int dim, int index) {
  if (index < 0 || index >= dim) throw std::invalid_argument("variable index out of range");
  std::vector<int> p(dim, 0);
  p[index] = 1;
  return Poly(dim, {Monomial{1.0, std::move(p)}});
}

int Poly::degree() const {
  return terms_.empty() ? 0 : terms_.back().degree();
}

double Poly::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("Poly::eval dimension mismatch");
  double acc = 0.0;
  for (const auto& m : terms_) {
    double t = m.coeff;
    for (int i = 0; i < dim_; ++i) t *= pow_int(x[i], m.powers[i]);
    acc += t;
  }
  return acc;
}

double Poly::eval(const Eigen::VectorXd& x) const {
  return eval(std::span<const double>(x.data(), x.size()));
}

Poly Poly::operator+(const Poly& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("Poly dimension mismatch");
  std::vector<Monomial> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return Poly(dim_, std::move(all));
}

Poly Poly::operator-(const Poly& other) const { return *this + other * -1.0; }

Poly Poly::operator*(double s) const {
  std::vector<Monomial> all = terms_;
  for (auto& m : all) m.coeff *= s;
  return Poly(dim_, std::move(all));
}

Poly Poly::operator*(const Poly& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("Poly dimension mismatch");
  std::vector<Monomial> prod;
  prod.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) {
      Monomial m;
      m.coeff = a.coeff * b.coeff;
      m.powers.resize(dim_);
      for (int i = 0; i < dim_; ++i) m.powers[i] = a.powers[i] + b.powers[i];
      prod.push_back(std::move(m));
    }
  return Poly(dim_, std::move(prod));
}

bool Poly::same_canonical_form(const Poly& other, double tol) const {
  if (dim_ != other.dim_ || terms_.size() != other.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].powers != other.terms_[i].powers) return false;
    if (std::abs(terms_[i].coeff - other.terms_[i].coeff) > tol) return false;
  }
  return true;
}

PolyMap::PolyMap(int d, std::vector<Poly> comps) : dim(d), components(std::move(comps)) {
  if (static_cast<int>(components.size()) != dim)
    throw std::invalid_argument("PolyMap needs one polynomial per coordinate");
  for (const auto& p : components)
    if (p.dim() != dim) throw std::invalid_argument("PolyMap component dimension mismatch");
}

Eigen::VectorXd PolyMap::eval(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(dim);
  eval_into(std::span<const double>(x.data(), x.size()),
            std::span<double>(out.data(), out.size()));
  return out;
}

void PolyMap::eval_into(std::span<const double> x, std::span<double> out) const {
  for (int i = 0; i < dim; ++i) out[i] = components[i].eval(x);
}

BoxDomain::BoxDomain(Eigen::VectorXd lo, Eigen::VectorXd hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw std::invalid_argument("BoxDomain bounds size mismatch");
  for (int i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) throw std::invalid_argument("BoxDomain requires lower < upper");
    if (!(lower[i] < 0.0 && upper[i] > 0.0))
      throw std::invalid_argument("BoxDomain must contain the origin strictly");
  }
}

bool BoxDomain::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != lower.size()) return false;
  for (int i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
  return true;
}

double BoxDomain::volume() const {
  double v = 1.0;
  for (int i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
  return v;
}

std::vector<Eigen::VectorXd> BoxDomain::corners() const {
  const int n = dim();
  std::vector<Eigen::VectorXd> out;
  out.reserve(size_t{1} << n);
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c[i] = (mask >> i) & 1 ? upper[i] : lower[i];
    out.push_back(std::move(c));
  }
  return out;
}

Transform::Transform(const Eigen::MatrixXd& T) : T_(T) {
  if (T.rows() != T.cols() || T.rows() == 0)
    throw std::invalid_argument("Transform matrix must be square");
  double det = T.determinant();
  if (std::abs(det) <= 1e-9) throw std::invalid_argument("Transform matrix is singular");
  T_inv_ = T.inverse();
  check();
}

Transform::Transform(const Eigen::MatrixXd& T, const Eigen::MatrixXd& T_inv)
    : T_(T), T_inv_(T_inv) {
  if (T.rows() != T.cols() || T.rows() == 0 || T_inv.rows() != T.rows() ||
      T_inv.cols() != T.cols())
    throw std::invalid_argument("Transform matrices must be square and matching");
  if (std::abs(T.determinant()) <= 1e-9)
    throw std::invalid_argument("Transform matrix is singular");
  check();
}

void Transform::check() const {
  Eigen::MatrixXd prod = T_ * T_inv_;
  double err = (prod - Eigen::MatrixXd::Identity(T_.rows(), T_.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-12 * std::max(1.0, T_.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("Transform inverse check failed: T*T_inv != I");
}

Transform Transform::identity(int n) {
  return Transform(Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(n, n));
}

bool Transform::is_identity(double tol) const {
  return (T_ - Eigen::MatrixXd::Identity(T_.rows(), T_.cols())).cwiseAbs().maxCoeff() <= tol;
}

Eigen::VectorXd eval_field(const PolyMap& f, const Eigen::VectorXd& x) {
  if (x.size() != f.dim) throw std::invalid_argument("eval_field dimension mismatch");
  if (!x.allFinite()) throw std::invalid_argument("eval_field: non-finite input");
  return f.eval(x);
}

PolyMap compose_linear(const PolyMap& f, const Transform& T) {
  const int n = f.dim;
  if (T.dim() != n) throw std::invalid_argument("compose_linear dimension mismatch");
  const Eigen::MatrixXd& Tinv = T.inverse();

  // Linear forms x_i = sum_j Tinv(i,j) * xbar_j.
  std::vector<Poly> subs;
  subs.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<Monomial> terms;
    for (int j = 0; j < n; ++j) {
      std::vector<int> p(n, 0);
      p[j] = 1;
      terms.push_back(Monomial{Tinv(i, j), std::move(p)});
    }
    subs.emplace_back(n, std::move(terms));
  }

  // f_i(Tinv xbar), expanded.
  std::vector<Poly> fsub;
  fsub.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (f.components[i].degree() > kDegreeCap)
      throw std::invalid_argument("compose_linear: degree cap (8) exceeded");
    Poly acc = Poly::zero(n);
    for (const auto& m : f.components[i].terms()) {
      Poly term = Poly::constant(n, m.coeff);
      for (int v = 0; v < n; ++v)
        for (int e = 0; e < m.powers[v]; ++e) term = term * subs[v];
      acc = acc + term;
    }
    fsub.push_back(std::move(acc));
  }

  const Eigen::MatrixXd& M = T.matrix();
  std::vector<Poly> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    Poly acc = Poly::zero(n);
    for (int i = 0; i < n; ++i) acc = acc + fsub[i] * M(k, i);
    out.push_back(std::move(acc));
  }
  return PolyMap(n, std::move(out));
}

std::vector<Eigen::VectorXd> map_box(const BoxDomain& box, const Transform& T) {
  if (T.dim() != box.dim()) throw std::invalid_argument("map_box dimension mismatch");
  std::vector<Eigen::VectorXd> out;
  for (const auto& c : box.corners()) out.push_back(T.matrix() * c);
  return out;
}

BoxDomain map_box_bounding(const BoxDomain& box, const Transform& T) {
  auto verts = map_box(box, T);
  Eigen::VectorXd lo = verts.front(), hi = verts.front();
  for (const auto& v : verts) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return BoxDomain(lo, hi);
}

}  // namespace roaforge::polyalg
