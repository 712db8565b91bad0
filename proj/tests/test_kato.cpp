#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mhdstab/kato.hpp"

using namespace mhdstab;

namespace {

// Scalar convected heat equation model: A = [[0, 1], [lambda, eta]].  The
// Kato-continued stable eigenvector, initialized at lambda0 = 1, is
//   ((eta^2/4 + 1)/(eta^2/4 + lambda))^{1/4} (1, eta/2 - sqrt(eta^2/4 + lambda)).
Eigen::MatrixXcd model_a(double eta, Cplx lam) {
  Eigen::MatrixXcd a(2, 2);
  a << 0.0, 1.0, lam, eta;
  return a;
}

Eigen::VectorXcd model_exact(double eta, Cplx lam) {
  const Cplx s = std::sqrt(Cplx(eta * eta / 4.0, 0.0) + lam);
  const Cplx pre = std::pow((eta * eta / 4.0 + 1.0) /
                                (Cplx(eta * eta / 4.0, 0.0) + lam),
                            0.25);
  Eigen::VectorXcd v(2);
  v << pre, pre * (eta / 2.0 - s);
  return v;
}

double model_path_error(double eta, int steps) {
  kato_detail::Continuation c([eta](Cplx l) { return model_a(eta, l); }, 1,
                              true, Cplx(1.0, 0.0));
  Eigen::VectorXcd r0 = model_exact(eta, Cplx(1.0, 0.0));
  c.set_basis(r0);
  for (int j = 1; j <= steps; ++j) {
    const double lam = 1.0 + (0.25 - 1.0) * j / steps;
    c.advance(Cplx(lam, 0.0));
  }
  const Eigen::VectorXcd want = model_exact(eta, Cplx(0.25, 0.0));
  return (c.basis().col(0) - want).norm() / want.norm();
}

PhysicalParams std_params() {
  return PhysicalParams::make(5.0 / 3.0, 0.5, 1.5, 1.0, 1.0);
}

}  // namespace

TEST_CASE("model oracle: closed form of the continued eigenvector") {
  for (double eta : {-1.0, -0.1, 0.0, 0.1, 1.0}) {
    CHECK(model_path_error(eta, 100) < 1e-6);
  }
}

TEST_CASE("model oracle: halving the step improves at least second order") {
  for (double eta : {-1.0, 0.0, 1.0}) {
    const double e1 = model_path_error(eta, 100);
    const double e2 = model_path_error(eta, 200);
    CHECK(e1 / e2 > 3.5);
  }
}

TEST_CASE("kato_init satisfies the projection property and rank") {
  const PhysicalParams p = std_params();
  for (Side s : {Side::plus, Side::minus}) {
    const KatoFrame f = kato_init(s, Cplx(10.0, 0.0), p);
    KatoContinuation c(p, s, Cplx(10.0, 0.0));
    CHECK((c.projector() * f.basis - f.basis).norm() < 1e-12);
    // rank 2
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f.basis);
    CHECK(svd.singularValues()(1) > 1e-6 * svd.singularValues()(0));
  }
}

TEST_CASE("zero-length step leaves the frame unchanged") {
  const PhysicalParams p = std_params();
  const KatoFrame f = kato_init(Side::plus, Cplx(2.0, 0.0), p);
  const KatoFrame g = kato_step(f, f.lambda, p);
  CHECK((g.basis - f.basis).norm() < 1e-14);
}

TEST_CASE("closed loop around a regular region returns to the start") {
  const PhysicalParams p = std_params();
  for (Side s : {Side::plus, Side::minus}) {
    KatoContinuation c(p, s, Cplx(2.0, 0.0));
    const Mat42 start = c.frame().basis;
    const int n = 60;
    for (int j = 1; j <= n; ++j) {
      const double th = 2.0 * std::numbers::pi * j / n;
      c.advance(Cplx(2.0, 0.0) + 0.8 * Cplx(std::cos(th) - 1.0, std::sin(th)));
    }
    CHECK((c.frame().basis - start).norm() < 1e-6);
  }
}

TEST_CASE("contour continuation matches conjugated continuation") {
  const PhysicalParams p = std_params();
  std::vector<Cplx> upper = {Cplx(3.0, 0.0), Cplx(2.5, 1.0), Cplx(1.0, 2.0),
                             Cplx(0.2, 2.4)};
  std::vector<Cplx> lower;
  for (const Cplx& l : upper) lower.push_back(std::conj(l));
  for (Side s : {Side::plus, Side::minus}) {
    const auto fu = kato_along_contour(s, upper, p);
    const auto fl = kato_along_contour(s, lower, p);
    for (size_t i = 0; i < fu.size(); ++i)
      CHECK((fu[i].basis.conjugate() - fl[i].basis).norm() < 1e-8);
  }
}

TEST_CASE("single kato_step on one point and StepTooLarge signalling") {
  const PhysicalParams p = std_params();
  const auto frames = kato_along_contour(
      Side::minus, std::vector<Cplx>{Cplx(1.0, 0.0)}, p);
  CHECK(frames.size() == 1);

  // a long hop across the origin region must be refused by the raw step
  const KatoFrame f = kato_init(Side::minus, Cplx(4.0, 0.0), p);
  KatoOptions strict;
  strict.proj_jump_max = 1e-4;
  CHECK_THROWS_AS(kato_step(f, Cplx(3.0, 0.0), p, strict), StepTooLarge);
}

TEST_CASE("semicircle continuation stays within moderate sub-stepping") {
  const PhysicalParams p = std_params();
  std::vector<Cplx> pts;
  const double r = 10.0;
  for (int j = 0; j <= 120; ++j) {
    const double th = std::numbers::pi * (0.5 - j / 120.0);
    pts.push_back(r * Cplx(std::cos(th), std::sin(th)));
  }
  for (Side s : {Side::plus, Side::minus})
    CHECK_NOTHROW(kato_along_contour(s, pts, p));
}

TEST_CASE("regularized product: prefactor is one at lambda = 1") {
  const PhysicalParams p = std_params();
  const KatoFrame f = kato_init(Side::plus, Cplx(1.0, 0.0), p);
  const auto rp = regularized_product(f, p);
  CHECK((rp.regularized - rp.wedge).norm() < 1e-12);
  CHECK(rp.wedge.norm() > 0.0);
}

TEST_CASE("regularized product bounded at a characteristic point") {
  // B1 = sqrt(mu0 v+): the raw wedge blows up like |lambda|^{-1/4} as
  // lambda -> 0 while the regularized product stays of order one
  const double mu0 = 1.0, vp = 0.25;
  const PhysicalParams p =
      PhysicalParams::make(5.0 / 3.0, vp, std::sqrt(mu0 * vp), mu0, 1.0);

  KatoContinuation c(p, Side::plus, Cplx(1.0, 0.0));
  std::vector<double> lams = {1e-4, 1e-5, 1e-6};
  std::vector<double> wedge_norm, reg_norm;
  for (double target : lams) {
    KatoContinuation cc(p, Side::plus, Cplx(1.0, 0.0));
    // approach the origin along the real axis
    for (double l = 0.5; l > target; l *= 0.5) cc.advance(Cplx(l, 0.0));
    cc.advance(Cplx(target, 0.0));
    const auto rp = regularized_product(cc.frame(), p);
    wedge_norm.push_back(rp.wedge.norm());
    reg_norm.push_back(rp.regularized.norm());
  }
  // |wedge| grows like lambda^{-1/4}: one decade in lambda is 10^{1/4}
  const double growth = wedge_norm[2] / wedge_norm[0];
  CHECK(growth ==
        doctest::Approx(std::pow(100.0, 0.25)).epsilon(0.2));
  for (double rn : reg_norm) {
    CHECK(rn > 0.2);
    CHECK(rn < 5.0);
  }
}

TEST_CASE("both products bounded away from the characteristic point") {
  const PhysicalParams p = std_params();  // B1 = 1.5, sqrt(mu0 v+) = 0.707
  KatoContinuation cc(p, Side::plus, Cplx(1.0, 0.0));
  for (double l = 0.5; l > 1e-6; l *= 0.5) cc.advance(Cplx(l, 0.0));
  const auto rp = regularized_product(cc.frame(), p);
  CHECK(rp.wedge.norm() < 10.0);
  CHECK(rp.regularized.norm() < 10.0);
  CHECK(rp.wedge.norm() > 0.1);
}

TEST_CASE("projection residual along an acceptance-style contour") {
  const PhysicalParams p = std_params();
  std::vector<Cplx> pts;
  for (int j = 0; j <= 40; ++j) {
    const double th = (std::numbers::pi / 2.0) * j / 40.0;
    pts.push_back(4.5 * Cplx(std::cos(th), std::sin(th)));
  }
  for (Side s : {Side::plus, Side::minus}) {
    KatoContinuation c(p, s, pts.front());
    for (size_t i = 1; i < pts.size(); ++i) {
      c.advance(pts[i]);
      const Mat42 b = c.frame().basis;
      CHECK((c.projector() * b - b).norm() / b.norm() < 1e-6);
      // rank preservation
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
      CHECK(svd.singularValues()(1) / svd.singularValues()(0) > 1e-6);
    }
  }
}
