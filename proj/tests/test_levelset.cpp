#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "paper_systems.hpp"
#include "roaforge/levelset.hpp"

using namespace roaforge;
using namespace roaforge::levelset;
using fixtures::m2;
using polyalg::BoxDomain;
using polyalg::Transform;

namespace {

// Dense boundary sampling oracle, deliberately independent of the facet
// candidate enumeration in max_level.
double sampled_boundary_min(const std::vector<Eigen::MatrixXd>& Ps, const BoxDomain& box,
                            int total_points) {
  const int per_facet = total_points / 4;
  double best = std::numeric_limits<double>::infinity();
  auto scan = [&](Eigen::Vector2d a, Eigen::Vector2d b) {
    for (int i = 0; i <= per_facet; ++i) {
      double t = static_cast<double>(i) / per_facet;
      Eigen::Vector2d x = (1.0 - t) * a + t * b;
      best = std::min(best, v_eval(Ps, x));
    }
  };
  const double xl = box.lower[0], xu = box.upper[0], yl = box.lower[1], yu = box.upper[1];
  scan({xl, yl}, {xl, yu});
  scan({xu, yl}, {xu, yu});
  scan({xl, yl}, {xu, yl});
  scan({xl, yu}, {xu, yu});
  return best;
}

Eigen::MatrixXd random_pd(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Matrix2d B;
  B << u(rng), u(rng), u(rng), u(rng);
  return B.transpose() * B + 0.05 * Eigen::Matrix2d::Identity();
}

}  // namespace

TEST_CASE("v_eval") {
  std::vector<Eigen::MatrixXd> I = {Eigen::Matrix2d::Identity()};
  CHECK(v_eval(I, Eigen::Vector2d(3, 4)) == doctest::Approx(25.0));

  std::vector<Eigen::MatrixXd> two = {Eigen::Matrix2d::Identity(),
                                      2.0 * Eigen::Matrix2d::Identity()};
  Eigen::Vector2d x(0.3, -0.7);
  CHECK(v_eval(two, x) == doctest::Approx(2.0 * x.squaredNorm()));
  for (const auto& P : two) CHECK(v_eval(two, x) >= x.dot(P * x) - 1e-15);

  std::vector<Eigen::MatrixXd> paper = {fixtures::cubic_P1(), fixtures::cubic_P2()};
  CHECK(v_eval(paper, Eigen::Vector2d(1, 0)) == doctest::Approx(0.1071));

  CHECK_THROWS_AS(v_eval({}, x), std::invalid_argument);
}

TEST_CASE("max_level: unit ball in the unit box") {
  BoxDomain box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1));
  auto r = max_level({Eigen::Matrix2d::Identity()}, box);
  CHECK(r.exact);
  CHECK(r.k == doctest::Approx(1.0));
}

TEST_CASE("max_level reproduces the published level values") {
  auto r3 = max_level({fixtures::cubic_P1(), fixtures::cubic_P2()}, fixtures::cubic_box());
  CHECK(r3.exact);
  CHECK(r3.k >= 0.0513);
  CHECK(r3.k <= 0.0567);

  auto r4 = max_level({fixtures::shear_P1(), fixtures::shear_P2()}, fixtures::shear_box());
  CHECK(r4.exact);
  CHECK(r4.k >= 1.463);
  CHECK(r4.k <= 1.617);
}

TEST_CASE("max_level equals the dense sampling oracle on random instances") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Eigen::MatrixXd> Ps = {random_pd(rng), random_pd(rng)};
    BoxDomain box(Eigen::Vector2d(-u(rng), -u(rng)), Eigen::Vector2d(u(rng), u(rng)));
    double exact = max_level(Ps, box).k;
    double sampled = sampled_boundary_min(Ps, box, 1000000);
    CHECK(exact <= sampled + 1e-12);  // sampling can only over-estimate
    CHECK(std::abs(exact - sampled) <= 1e-3 * std::abs(sampled));
  }
}

TEST_CASE("max_level scale covariance") {
  std::vector<Eigen::MatrixXd> Ps = {fixtures::cubic_P1(), fixtures::cubic_P2()};
  BoxDomain box = fixtures::cubic_box();
  double k1 = max_level(Ps, box).k;
  for (double c : {0.5, 2.0, 10.0}) {
    std::vector<Eigen::MatrixXd> scaled = Ps;
    for (auto& P : scaled) P *= c;
    CHECK(max_level(scaled, box).k == doctest::Approx(c * k1).epsilon(1e-12));
  }
}

TEST_CASE("max_level containment soundness and tightness witness") {
  std::vector<Eigen::MatrixXd> Ps = {fixtures::cubic_P1(), fixtures::cubic_P2()};
  BoxDomain box = fixtures::cubic_box();
  double k = max_level(Ps, box).k;

  RoaEstimate roa{Ps, k, Transform::identity(2), box, false};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(box.lower[0], box.upper[0]);
  std::uniform_real_distribution<double> uy(box.lower[1], box.upper[1]);
  int inside = 0;
  for (int i = 0; i < 10000; ++i) {
    Eigen::Vector2d x(ux(rng), uy(rng));
    if (v_eval(Ps, x) <= k * (1.0 - 1e-9)) {
      CHECK(box.contains(x));
      ++inside;
    }
  }
  CHECK(inside > 0);

  // Some boundary point attains the level.
  double boundary_min = sampled_boundary_min(Ps, box, 4000000);
  CHECK(std::abs(boundary_min - k) <= 1e-6 * (1.0 + k));
}

TEST_CASE("max_level n>=3 sampling fallback is flagged approximate") {
  BoxDomain box(Eigen::Vector3d(-1, -1, -1), Eigen::Vector3d(1, 1, 1));
  auto r = max_level({Eigen::Matrix3d::Identity()}, box, 50000);
  CHECK_FALSE(r.exact);
  CHECK(r.k == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.k >= 1.0);  // one-sided: sampling over-estimates the true level
}

TEST_CASE("contains") {
  std::vector<Eigen::MatrixXd> Ps = {fixtures::cubic_P1(), fixtures::cubic_P2()};
  double k = max_level(Ps, fixtures::cubic_box()).k;
  RoaEstimate roa{Ps, k, Transform::identity(2), fixtures::cubic_box(), false};

  CHECK(contains(roa, Eigen::Vector2d(0, 0)));
  CHECK_FALSE(contains(roa, Eigen::Vector2d(1, 0)));  // V = 0.1071 > k

  // Closure convention: V = k*(1-1e-9) is inside.
  Eigen::Vector2d dir(0.3, 0.2);
  double s = std::sqrt(k * (1.0 - 1e-9) / v_eval(Ps, dir));
  CHECK(contains(roa, (s * dir).eval()));

  // (cP, ck) leaves membership unchanged.
  for (double c : {0.5, 4.0}) {
    std::vector<Eigen::MatrixXd> scaled = Ps;
    for (auto& P : scaled) P *= c;
    RoaEstimate sroa{scaled, c * k, Transform::identity(2), fixtures::cubic_box(), false};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
      Eigen::Vector2d x(u(rng), 0.5 * u(rng));
      CHECK(contains(roa, x) == contains(sroa, x));
    }
  }
}

TEST_CASE("boundary_polyline") {
  SUBCASE("unit circle") {
    RoaEstimate roa{{Eigen::Matrix2d::Identity()}, 1.0, Transform::identity(2),
                    BoxDomain(Eigen::Vector2d(-2, -2), Eigen::Vector2d(2, 2)), false};
    auto pts = boundary_polyline(roa, 256);
    REQUIRE(pts.size() == 256);
    for (const auto& p : pts) CHECK(std::abs(p.norm() - 1.0) <= 1e-8);
  }
  SUBCASE("published cubic estimate stays inside the box") {
    std::vector<Eigen::MatrixXd> Ps = {fixtures::cubic_P1(), fixtures::cubic_P2()};
    double k = max_level(Ps, fixtures::cubic_box()).k;
    RoaEstimate roa{Ps, k, Transform::identity(2), fixtures::cubic_box(), false};
    for (const auto& p : boundary_polyline(roa, 512))
      CHECK(fixtures::cubic_box().contains(p, 1e-9));
  }
  SUBCASE("mapped shear estimate leaves the cubic estimate in some directions") {
    std::vector<Eigen::MatrixXd> Ps3 = {fixtures::cubic_P1(), fixtures::cubic_P2()};
    double k3 = max_level(Ps3, fixtures::cubic_box()).k;
    RoaEstimate roa3{Ps3, k3, Transform::identity(2), fixtures::cubic_box(), false};

    std::vector<Eigen::MatrixXd> Ps4 = {fixtures::shear_P1(), fixtures::shear_P2()};
    double k4 = max_level(Ps4, fixtures::shear_box()).k;
    RoaEstimate roa4{Ps4, k4, fixtures::shear_transform(), fixtures::shear_box(), false};

    int outside = 0;
    for (const auto& p : boundary_polyline(roa4, 512)) {
      Eigen::Vector2d shrunk = 0.999 * p;  // just inside the mapped region
      if (contains(roa4, shrunk) && !contains(roa3, shrunk)) ++outside;
    }
    CHECK(outside > 0);
  }
}
